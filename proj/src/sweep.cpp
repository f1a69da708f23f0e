#include "gibbs_control/sweep.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace gibbs_control {

namespace {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

SweepConfig default_sweep_config() {
  SweepConfig config;
  for (int d = 1; d <= 30; ++d) config.dims.push_back(d);
  config.particles = {4000, 6000, 10000, 15000, 20000};
  config.runs = 1000;
  config.algorithms = {Algorithm::MppiSelf, Algorithm::IpsEmpirical};
  return config;
}

void validate_config(const SweepConfig& config) {
  if (config.dims.empty()) {
    throw std::invalid_argument("sweep: dims must be nonempty");
  }
  if (!std::is_sorted(config.dims.begin(), config.dims.end()) ||
      config.dims.front() < 1) {
    throw std::invalid_argument("sweep: dims must be ascending and >= 1");
  }
  if (config.particles.empty()) {
    throw std::invalid_argument("sweep: particles must be nonempty");
  }
  for (int n : config.particles) {
    if (n < 1) throw std::invalid_argument("sweep: particles must be >= 1");
  }
  if (config.runs < 2) {
    throw std::invalid_argument("sweep: runs must be >= 2");
  }
  if (config.x0_mode == X0Mode::Custom) {
    for (int d : config.dims) {
      if (config.x0_custom.size() != d) {
        throw std::invalid_argument(
            "sweep: custom x0 length must match every swept dimension");
      }
    }
  }
  if (config.ubar.size() != 0) {
    for (int d : config.dims) {
      if (config.ubar.size() != d) {
        throw std::invalid_argument(
            "sweep: ubar length must match every swept dimension");
      }
    }
  }
}

Vector x0_for_dimension(const SweepConfig& config, int d) {
  switch (config.x0_mode) {
    case X0Mode::Zero: return Vector::Zero(d);
    case X0Mode::Ones: return Vector::Ones(d);
    case X0Mode::Custom: return config.x0_custom;
  }
  return Vector::Zero(d);
}

const char* const kCsvHeader =
    "algorithm,d,n_particles,runs,failures,mse_mc,mse_stderr,"
    "mse_closed_form,mse_bound,seed";

std::string format_csv_record(const MseReport& r) {
  std::ostringstream row;
  row << algorithm_name(r.algorithm) << ',' << r.d << ',' << r.n_particles
      << ',' << r.runs << ',' << r.failures << ',' << format_double(r.mse_mc)
      << ',' << format_double(r.mse_stderr) << ','
      << (r.mse_closed_form ? format_double(*r.mse_closed_form) : "") << ','
      << (r.bound ? format_double(*r.bound) : "") << ',' << r.seed;
  return row.str();
}

std::vector<MseReport> execute_sweep(const SweepConfig& config,
                                     std::ostream* progress) {
  std::vector<MseReport> records;
  records.reserve(config.algorithms.size() * config.dims.size() *
                  config.particles.size());
  for (Algorithm algorithm : config.algorithms) {
    for (int d : config.dims) {
      const SocpInstance instance = make_instance(x0_for_dimension(config, d));
      for (int n : config.particles) {
        McConfig mc;
        mc.n_particles = n;
        mc.ubar = config.ubar.size() ? config.ubar : Vector::Zero(d);
        mc.workers = config.workers;
        MseReport report;
        try {
          report = mse_monte_carlo(algorithm, instance, mc, config.runs,
                                   config.seed);
        } catch (const std::runtime_error&) {
          report.algorithm = algorithm;
          report.d = d;
          report.n_particles = n;
          report.runs = config.runs;
          report.failures = config.runs;
          report.mse_mc = std::numeric_limits<double>::quiet_NaN();
          report.mse_stderr = std::numeric_limits<double>::quiet_NaN();
          report.seed = config.seed;
        }
        if (progress) {
          *progress << format_csv_record(report) << '\n';
        }
        records.push_back(std::move(report));
      }
    }
  }
  return records;
}

void write_csv(const std::vector<MseReport>& records, std::ostream& out) {
  out << kCsvHeader << "\r\n";
  for (const auto& r : records) out << format_csv_record(r) << "\r\n";
}

void write_json(const SweepConfig& config,
                const std::vector<MseReport>& records, std::ostream& out) {
  nlohmann::ordered_json root;
  nlohmann::ordered_json meta;
  meta["tool"] = "gibbs-control";
  meta["dims"] = config.dims;
  meta["particles"] = config.particles;
  meta["runs"] = config.runs;
  meta["seed"] = config.seed;
  meta["x0_mode"] = config.x0_mode == X0Mode::Zero
                        ? "zero"
                        : (config.x0_mode == X0Mode::Ones ? "ones" : "custom");
  std::vector<std::string> names;
  for (Algorithm a : config.algorithms) names.push_back(algorithm_name(a));
  meta["algorithms"] = names;
  root["metadata"] = meta;

  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json row;
    row["algorithm"] = algorithm_name(r.algorithm);
    row["d"] = r.d;
    row["n_particles"] = r.n_particles;
    row["runs"] = r.runs;
    row["failures"] = r.failures;
    row["mse_mc"] = r.mse_mc;
    row["mse_stderr"] = r.mse_stderr;
    if (r.mse_closed_form) {
      row["mse_closed_form"] = *r.mse_closed_form;
    } else {
      row["mse_closed_form"] = nullptr;
    }
    if (r.bound) {
      row["mse_bound"] = *r.bound;
    } else {
      row["mse_bound"] = nullptr;
    }
    row["seed"] = r.seed;
    rows.push_back(std::move(row));
  }
  root["records"] = std::move(rows);
  out << root.dump(2) << '\n';
}

void print_summary(const SweepConfig& config,
                   const std::vector<MseReport>& records, std::ostream& out) {
  out << "cells: " << records.size() << "\n";
  std::map<std::pair<std::string, int>, std::vector<MseReport>> groups;
  for (const auto& r : records) {
    if (r.failures == r.runs) continue;
    groups[{algorithm_name(r.algorithm), r.n_particles}].push_back(r);
  }
  for (const auto& [key, group] : groups) {
    if (group.size() < 3) continue;
    const FitModel model =
        is_mppi(group.front().algorithm) ? FitModel::LogLinear
                                         : FitModel::Affine;
    try {
      const ScalingFit fit = fit_scaling(group, model);
      out << key.first << " N=" << key.second
          << (model == FitModel::LogLinear ? " log-linear" : " affine")
          << " fit: slope=" << format_double(fit.slope)
          << " intercept=" << format_double(fit.intercept)
          << " r2=" << format_double(fit.r_squared) << "\n";
    } catch (const std::invalid_argument&) {
      out << key.first << " N=" << key.second << " fit skipped\n";
    }
  }
}

int cmd_sweep(const SweepConfig& config, std::ostream& out,
              std::ostream& err) {
  try {
    validate_config(config);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  std::vector<MseReport> records = execute_sweep(config, &out);
  const bool all_failed =
      std::all_of(records.begin(), records.end(),
                  [](const MseReport& r) { return r.failures == r.runs; });
  if (all_failed) {
    err << "error: all grid cells failed\n";
    return 1;
  }
  if (!config.output_path.empty()) {
    std::ofstream file(config.output_path, std::ios::binary);
    if (!file) {
      err << "error: cannot write " << config.output_path << "\n";
      return 2;
    }
    if (config.format == OutputFormat::Csv) {
      write_csv(records, file);
    } else {
      write_json(config, records, file);
    }
  }
  print_summary(config, records, out);
  return 0;
}

}  // namespace gibbs_control
