#include "gibbs_control/rng.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace gibbs_control::detail {

namespace {
constexpr double kR = 3.6541528853610088;  // base layer edge for 256 layers
constexpr double kHalfPi = 1.5707963267948966;
}  // namespace

ZigguratTables::ZigguratTables() {
  const double fr = std::exp(-0.5 * kR * kR);
  // Equal-area layers: v = r*f(r) + integral_r^inf exp(-t^2/2) dt.
  const double tail = std::sqrt(kHalfPi) * std::erfc(kR / std::sqrt(2.0));
  const double v = kR * fr + tail;
  base_width = v / fr;
  x[0] = kR;
  f[0] = fr;
  for (int i = 1; i < kLayers; ++i) {
    f[i] = f[i - 1] + v / x[i - 1];
    x[i] = (f[i] < 1.0) ? std::sqrt(-2.0 * std::log(f[i])) : 0.0;
  }
  // The top layer must reach the density peak, else the cover has a hole.
  if (f[kLayers - 1] < 1.0) {
    throw std::logic_error("ziggurat tables failed to close");
  }
}

const ZigguratTables& ziggurat_tables() {
  static const ZigguratTables tables;
  return tables;
}

double ziggurat_slow_path(CounterRng& rng, int layer, double x, bool negative) {
  const ZigguratTables& t = ziggurat_tables();
  if (layer == 0) {
    // Tail sample beyond r (Marsaglia).
    for (;;) {
      const double xt = -std::log(rng.unit_pos()) / kR;
      const double y = -std::log(rng.unit_pos());
      if (y + y > xt * xt) {
        const double z = kR + xt;
        return negative ? -z : z;
      }
    }
  }
  // Wedge: uniform height within the layer, exact density test.
  const double y = t.f[layer - 1] + rng.unit() * (t.f[layer] - t.f[layer - 1]);
  if (y < std::exp(-0.5 * x * x)) return negative ? -x : x;
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace gibbs_control::detail
