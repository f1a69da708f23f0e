#pragma once

#include <string>
#include <vector>

namespace gibbs_control {

struct VerifyOptions {
  // Multiplies the Kalman-type gain in the gain-dependent checks; anything
  // other than 1.0 is a deliberate mutation used to test sensitivity.
  double gain_scale = 1.0;
};

struct PropertyResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Closed-form identity and property suite (no large Monte Carlo).
std::vector<PropertyResult> run_verification(const VerifyOptions& options);

}  // namespace gibbs_control
