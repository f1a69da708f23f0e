// Command-line front end: `sweep` runs the MSE-vs-dimension experiment grid,
// `verify` runs the closed-form identity suite, `duality` demonstrates the
// control/filtering correspondence, `single` runs one controller invocation.

#include "gibbs_control/error_analysis.hpp"
#include "gibbs_control/gibbs_core.hpp"
#include "gibbs_control/ips.hpp"
#include "gibbs_control/linalg_stats.hpp"
#include "gibbs_control/mppi.hpp"
#include "gibbs_control/sweep.hpp"
#include "gibbs_control/verify.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace {

using namespace gibbs_control;

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> values;
  const auto range_pos = text.find("..");
  if (range_pos != std::string::npos) {
    int step = 1;
    std::string tail = text.substr(range_pos + 2);
    const auto step_pos = tail.find(':');
    if (step_pos != std::string::npos) {
      step = std::stoi(tail.substr(step_pos + 1));
      tail = tail.substr(0, step_pos);
    }
    const int lo = std::stoi(text.substr(0, range_pos));
    const int hi = std::stoi(tail);
    if (step < 1) throw std::invalid_argument("range step must be >= 1");
    for (int v = lo; v <= hi; v += step) values.push_back(v);
    return values;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) values.push_back(std::stoi(item));
  }
  return values;
}

Vector parse_vector(const std::string& text) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) values.push_back(std::stod(item));
  }
  Vector v(values.size());
  for (size_t i = 0; i < values.size(); ++i) v[i] = values[i];
  return v;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("GIBBS_CONTROL_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 42;
}

int default_workers() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<Algorithm> parse_algorithms(const std::string& text) {
  std::vector<Algorithm> algorithms;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto parsed = parse_algorithm(item);
    if (!parsed) throw std::invalid_argument("unknown algorithm: " + item);
    algorithms.push_back(*parsed);
  }
  if (algorithms.empty()) throw std::invalid_argument("no algorithms given");
  return algorithms;
}

void print_gaussian(const std::string& label, const GaussianSpec& g,
                    std::ostream& out) {
  out << label << " mean: " << g.mean.transpose() << "\n";
  out << label << " cov diag: " << g.cov.diagonal().transpose() << "\n";
}

int run_duality(const Vector& x0, int n_particles, std::uint64_t seed,
                std::ostream& out) {
  const SocpInstance instance = make_instance(x0);
  const GaussianSpec gibbs = exact_gibbs_measure(instance);
  const GaussianSpec posterior =
      dual_filter_posterior(instance, Vector::Zero(instance.d));
  print_gaussian("gibbs", gibbs, out);
  print_gaussian("posterior(z=0)", posterior, out);

  IpsConfig config{n_particles, GainMode::Empirical};
  const IpsResult ips = run_ips(instance, config, RngStream{seed, 1});
  auto [ips_mean, ips_cov] = empirical_moments(ips.ensemble_after);
  print_gaussian("ips-empirical", GaussianSpec{ips_mean, ips_cov}, out);

  out << "control exact:          " << exact_optimal_control(instance).transpose()
      << "\n";
  out << "control via posterior:  " << (posterior.mean - x0).transpose()
      << "\n";
  out << "control via ips:        " << ips.control_estimate.transpose()
      << "\n";
  return 0;
}

int run_single(Algorithm algorithm, const Vector& x0, const Vector& ubar,
               int n_particles, std::uint64_t seed, std::ostream& out) {
  const SocpInstance instance = make_instance(x0);
  out << "algorithm: " << algorithm_name(algorithm) << "\n";
  out << "d: " << instance.d << "  N: " << n_particles << "  seed: " << seed
      << "\n";
  const RngStream stream{seed, 0};
  Vector estimate;
  if (is_mppi(algorithm)) {
    MppiConfig config;
    config.n_particles = n_particles;
    config.ubar = ubar.size() ? ubar : Vector::Zero(instance.d);
    config.normalization = algorithm == Algorithm::MppiSelf
                               ? Normalization::SelfNormalized
                               : Normalization::OracleNormalized;
    const MppiResult result = run_mppi(instance, config, stream);
    estimate = result.control_estimate;
    out << "ess: " << result.ess
        << "  max weight share: " << result.max_weight_share << "\n";
    if (weights_degenerate(result.ensemble)) {
      out << "warning: weight degeneracy (ess < 0.01 N)\n";
    }
    out << "closed-form mse: "
        << mse_mppi_closed_form(instance, config.ubar, n_particles) << "\n";
  } else {
    IpsConfig config;
    config.n_particles = n_particles;
    config.gain_mode = algorithm == Algorithm::IpsEmpirical
                           ? GainMode::Empirical
                           : GainMode::MeanField;
    const IpsResult result = run_ips(instance, config, stream);
    estimate = result.control_estimate;
    out << "gain trace: " << result.gain.trace()
        << (result.gain_fallback ? "  (clamped eigensolve fallback)" : "")
        << "\n";
    out << "mse bound: " << mse_ips_bound(instance, n_particles) << "\n";
  }
  out << "control estimate: " << estimate.transpose() << "\n";
  out << "exact control:    " << exact_optimal_control(instance).transpose()
      << "\n";
  out << "error |estimate - exact|: "
      << (estimate - exact_optimal_control(instance)).norm() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sampling approximations of a single-stage stochastic optimal "
               "control problem and their error scaling"};
  app.require_subcommand(1);

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "run the MSE experiment grid");
  std::string dims_text = "1..30";
  std::string particles_text = "4000,6000,10000,15000,20000";
  std::string x0_text = "zero";
  std::string ubar_text;
  std::string algo_text = "mppi-self,ips";
  std::string out_path;
  std::string format_text = "csv";
  int runs = 1000;
  std::uint64_t seed = default_seed();
  int workers = default_workers();
  sweep_cmd->add_option("--dims", dims_text, "dimensions, a..b[:step] or list");
  sweep_cmd->add_option("--particles", particles_text, "sample counts");
  sweep_cmd->add_option("--runs", runs, "Monte Carlo runs per cell");
  sweep_cmd->add_option("--seed", seed, "master seed");
  sweep_cmd->add_option("--x0", x0_text, "zero|ones|v1,v2,...");
  sweep_cmd->add_option("--ubar", ubar_text, "nominal control v1,v2,...");
  sweep_cmd->add_option("--algo", algo_text,
                        "mppi-self,mppi-oracle,ips,ips-meanfield subset");
  sweep_cmd->add_option("--out", out_path, "output file path");
  sweep_cmd->add_option("--format", format_text, "csv|json");
  sweep_cmd->add_option("--workers", workers, "worker threads");

  // verify
  auto* verify_cmd =
      app.add_subcommand("verify", "run the closed-form property suite");
  double gain_scale = 1.0;
  verify_cmd->add_option("--mutate-gain", gain_scale,
                         "scale the gain (sensitivity check; !=1 must fail)");

  // duality
  auto* duality_cmd = app.add_subcommand(
      "duality", "demonstrate the control/filtering correspondence");
  std::string duality_x0 = "1,1";
  int duality_particles = 100000;
  std::uint64_t duality_seed = default_seed();
  duality_cmd->add_option("--x0", duality_x0, "initial state v1,v2,...");
  duality_cmd->add_option("--particles", duality_particles, "IPS ensemble");
  duality_cmd->add_option("--seed", duality_seed, "seed");

  // single
  auto* single_cmd =
      app.add_subcommand("single", "one controller invocation");
  std::string single_algo = "mppi-self";
  std::string single_x0 = "1,1";
  std::string single_ubar;
  std::string normalization_text;
  int single_particles = 10000;
  std::uint64_t single_seed = default_seed();
  single_cmd->add_option("--algo", single_algo, "algorithm");
  single_cmd->add_option("--x0", single_x0, "initial state v1,v2,...");
  single_cmd->add_option("--ubar", single_ubar, "nominal control");
  single_cmd->add_option("--particles", single_particles, "sample count");
  single_cmd->add_option("--seed", single_seed, "seed");
  single_cmd->add_option("--normalization", normalization_text,
                         "self|oracle (mppi only)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return 2;
  }

  try {
    if (sweep_cmd->parsed()) {
      SweepConfig config;
      config.dims = parse_int_list(dims_text);
      config.particles = parse_int_list(particles_text);
      config.runs = runs;
      config.seed = seed;
      config.workers = workers;
      if (x0_text == "zero") {
        config.x0_mode = X0Mode::Zero;
      } else if (x0_text == "ones") {
        config.x0_mode = X0Mode::Ones;
      } else {
        config.x0_mode = X0Mode::Custom;
        config.x0_custom = parse_vector(x0_text);
      }
      if (!ubar_text.empty()) config.ubar = parse_vector(ubar_text);
      config.algorithms = parse_algorithms(algo_text);
      config.output_path = out_path;
      if (format_text == "csv") {
        config.format = OutputFormat::Csv;
      } else if (format_text == "json") {
        config.format = OutputFormat::Json;
      } else {
        std::cerr << "error: unknown format " << format_text << "\n";
        return 2;
      }
      return cmd_sweep(config, std::cout, std::cerr);
    }

    if (verify_cmd->parsed()) {
      const auto results = run_verification(VerifyOptions{gain_scale});
      bool all_passed = true;
      for (const auto& r : results) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << " ("
                  << r.detail << ")\n";
        all_passed = all_passed && r.passed;
      }
      return all_passed ? 0 : 1;
    }

    if (duality_cmd->parsed()) {
      return run_duality(parse_vector(duality_x0), duality_particles,
                         duality_seed, std::cout);
    }

    if (single_cmd->parsed()) {
      if (!normalization_text.empty()) {
        if (normalization_text == "self") {
          single_algo = "mppi-self";
        } else if (normalization_text == "oracle") {
          single_algo = "mppi-oracle";
        } else {
          std::cerr << "error: unknown normalization " << normalization_text
                    << "\n";
          return 2;
        }
      }
      const auto algorithm = parse_algorithm(single_algo);
      if (!algorithm) {
        std::cerr << "error: unknown algorithm " << single_algo << "\n";
        return 2;
      }
      Vector ubar =
          single_ubar.empty() ? Vector() : parse_vector(single_ubar);
      return run_single(*algorithm, parse_vector(single_x0), ubar,
                        single_particles, single_seed, std::cout);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
