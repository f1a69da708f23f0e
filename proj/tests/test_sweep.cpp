#include "gibbs_control/sweep.hpp"

#include <doctest.h>

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace gibbs_control;

namespace {

SweepConfig smoke_config() {
  SweepConfig config;
  config.dims = {1, 2};
  config.particles = {100};
  config.runs = 10;
  config.algorithms = {Algorithm::MppiSelf, Algorithm::MppiOracle,
                       Algorithm::IpsEmpirical, Algorithm::IpsMeanField};
  config.seed = 123;
  config.workers = 1;
  return config;
}

std::string records_as_csv(const std::vector<MseReport>& records) {
  std::ostringstream out;
  write_csv(records, out);
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::stringstream ss(text);
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

int run_cli(const std::string& args) {
  const std::string command = std::string(CLI_BINARY_PATH) + " " + args;
  const int status = std::system(command.c_str());
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("validate_config rejects unusable grids") {
  SweepConfig config = smoke_config();
  CHECK_NOTHROW(validate_config(config));

  config.dims.clear();
  CHECK_THROWS_AS(validate_config(config), std::invalid_argument);

  config = smoke_config();
  config.dims = {3, 1};
  CHECK_THROWS_AS(validate_config(config), std::invalid_argument);

  config = smoke_config();
  config.runs = 1;
  CHECK_THROWS_AS(validate_config(config), std::invalid_argument);

  config = smoke_config();
  config.x0_mode = X0Mode::Custom;
  config.x0_custom = Vector::Ones(3);  // mismatches dims {1,2}
  CHECK_THROWS_AS(validate_config(config), std::invalid_argument);
}

TEST_CASE("execute_sweep is deterministic and worker-count invariant") {
  SweepConfig config = smoke_config();
  const std::string a = records_as_csv(execute_sweep(config, nullptr));
  const std::string b = records_as_csv(execute_sweep(config, nullptr));
  config.workers = 3;
  const std::string c = records_as_csv(execute_sweep(config, nullptr));
  CHECK(a == b);
  CHECK(a == c);
}

TEST_CASE("csv schema is stable") {
  const auto records = execute_sweep(smoke_config(), nullptr);
  const std::string csv = records_as_csv(records);
  const auto lines = split(csv, '\n');
  REQUIRE(lines.size() >= 2);
  CHECK(lines[0] == std::string(kCsvHeader) + "\r");
  CHECK(records.size() == 8);  // 4 algorithms x 2 dims x 1 N
  for (size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    CHECK(split(lines[i], ',').size() == 10);
  }
  // MPPI rows carry a closed form and no bound; IPS rows the reverse.
  for (const auto& r : records) {
    if (is_mppi(r.algorithm)) {
      CHECK(r.mse_closed_form.has_value());
      CHECK(!r.bound.has_value());
    } else {
      CHECK(!r.mse_closed_form.has_value());
      CHECK(r.bound.has_value());
    }
  }
}

TEST_CASE("json output mirrors the records") {
  SweepConfig config = smoke_config();
  const auto records = execute_sweep(config, nullptr);
  std::ostringstream out;
  write_json(config, records, out);
  const auto root = nlohmann::json::parse(out.str());
  REQUIRE(root.contains("metadata"));
  REQUIRE(root.contains("records"));
  CHECK(root["metadata"]["seed"] == 123);
  CHECK(root["records"].size() == records.size());
  CHECK(root["records"][0]["algorithm"] == "mppi-self");
  CHECK(root["records"][0]["mse_mc"].get<double>() ==
        doctest::Approx(records[0].mse_mc));
}

TEST_CASE("cli golden smoke grid") {
  const std::string out_path = "/tmp/gibbs_control_smoke.csv";
  const std::string args =
      "sweep --dims 1,2 --particles 100 --runs 10 "
      "--algo mppi-self,mppi-oracle,ips,ips-meanfield --seed 123 "
      "--workers 1 --out " +
      out_path + " > /dev/null";
  REQUIRE(run_cli(args) == 0);
  const std::string produced = read_file(out_path);
  const std::string golden = read_file(GOLDEN_CSV_PATH);

  const auto produced_lines = split(produced, '\n');
  const auto golden_lines = split(golden, '\n');
  REQUIRE(produced_lines.size() == golden_lines.size());
  CHECK(produced_lines[0] == golden_lines[0]);
  for (size_t i = 1; i < golden_lines.size(); ++i) {
    if (golden_lines[i].empty()) continue;
    const auto got = split(produced_lines[i], ',');
    const auto want = split(golden_lines[i], ',');
    REQUIRE(got.size() == want.size());
    for (size_t j = 0; j < want.size(); ++j) {
      if (want[j].empty() || want[j] == "\r") {
        CHECK(got[j] == want[j]);
        continue;
      }
      char* end = nullptr;
      const double want_value = std::strtod(want[j].c_str(), &end);
      if (end == want[j].c_str()) {
        CHECK(got[j] == want[j]);  // non-numeric field: exact
      } else {
        const double got_value = std::strtod(got[j].c_str(), nullptr);
        CHECK(got_value ==
              doctest::Approx(want_value).epsilon(1e-12));
      }
    }
  }

  // Re-running the identical command reproduces the file byte for byte.
  const std::string rerun_path = "/tmp/gibbs_control_smoke2.csv";
  const std::string rerun_args =
      "sweep --dims 1,2 --particles 100 --runs 10 "
      "--algo mppi-self,mppi-oracle,ips,ips-meanfield --seed 123 "
      "--workers 3 --out " +
      rerun_path + " > /dev/null";
  REQUIRE(run_cli(rerun_args) == 0);
  CHECK(read_file(rerun_path) == produced);
}

TEST_CASE("cli exit codes") {
  CHECK(run_cli("sweep --dims 2,1 --particles 10 --runs 5 --out /tmp/x.csv "
                "2> /dev/null") == 2);
  CHECK(run_cli("sweep --format bogus 2> /dev/null") == 2);
  CHECK(run_cli("bogus-subcommand 2> /dev/null") == 2);
  CHECK(run_cli("verify > /dev/null") == 0);
  CHECK(run_cli("verify --mutate-gain 1.1 > /dev/null") == 1);
  CHECK(run_cli("duality --x0 1,1 --particles 1000 > /dev/null") == 0);
  CHECK(run_cli("single --algo ips --x0 0.5,0.5 --particles 1000 "
                "> /dev/null") == 0);
}

TEST_CASE("environment seed override") {
  const std::string out_a = "/tmp/gibbs_control_env_a.csv";
  REQUIRE(run_cli("sweep --dims 1 --particles 50 --runs 5 --algo ips "
                  "--workers 1 --out " +
                  out_a + " > /dev/null") == 0);
  const std::string out_b = "/tmp/gibbs_control_env_b.csv";
  const std::string command = std::string("GIBBS_CONTROL_SEED=777 ") +
                              CLI_BINARY_PATH +
                              " sweep --dims 1 --particles 50 --runs 5 "
                              "--algo ips --workers 1 --out " +
                              out_b + " > /dev/null";
  REQUIRE(WEXITSTATUS(std::system(command.c_str())) == 0);
  const auto row_a = split(split(read_file(out_a), '\n')[1], ',');
  const auto row_b = split(split(read_file(out_b), '\n')[1], ',');
  CHECK(row_a[9] == "42\r");
  CHECK(row_b[9] == "777\r");
}
