#pragma once

#include "gibbs_control/error_analysis.hpp"
#include "gibbs_control/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace gibbs_control {

enum class X0Mode { Zero, Ones, Custom };
enum class OutputFormat { Csv, Json };

struct SweepConfig {
  std::vector<int> dims;
  std::vector<int> particles;
  int runs = 1000;
  X0Mode x0_mode = X0Mode::Zero;
  Vector x0_custom;
  Vector ubar;  // empty means zero nominal control
  std::vector<Algorithm> algorithms;
  std::uint64_t seed = 42;
  std::string output_path;
  OutputFormat format = OutputFormat::Csv;
  int workers = 1;
};

/// Scaling-law protocol: x0 = 0, ubar = 0, d = 1..30,
/// N in {4000, 6000, 10000, 15000, 20000}, 1000 runs.
SweepConfig default_sweep_config();

/// Throws std::invalid_argument when the grid is unusable.
void validate_config(const SweepConfig& config);

Vector x0_for_dimension(const SweepConfig& config, int d);

extern const char* const kCsvHeader;
std::string format_csv_record(const MseReport& report);

/// Executes the full grid in algorithm-major, then d, then N order.
/// Cells whose every run degenerates are kept with failures == runs and
/// NaN statistics.
std::vector<MseReport> execute_sweep(const SweepConfig& config,
                                     std::ostream* progress);

void write_csv(const std::vector<MseReport>& records, std::ostream& out);
void write_json(const SweepConfig& config,
                const std::vector<MseReport>& records, std::ostream& out);

/// Prints per-(algorithm, N) scaling fits for grids with >= 3 dimensions.
void print_summary(const SweepConfig& config,
                   const std::vector<MseReport>& records, std::ostream& out);

/// Full sweep command: validate, execute, persist, summarize.
/// Returns 0 on success, 1 when every cell failed, 2 on usage errors.
int cmd_sweep(const SweepConfig& config, std::ostream& out,
              std::ostream& err);

}  // namespace gibbs_control
