#pragma once

#include "gibbs_control/types.hpp"

#include <cstdint>

namespace gibbs_control {

/// Identifies one reproducible random stream. Identical (seed, stream_id)
/// pairs yield identical sample sequences; distinct stream_ids give
/// statistically independent streams. A stream is owned by one worker at
/// a time.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

inline std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// 64-bit hash combine used to derive per-cell / per-run stream ids.
inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  return splitmix64_mix(h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

/// Counter-based generator: draw t is a bijective mix of (base + t*gamma),
/// so the state is just a counter and any draw is addressable.
class CounterRng {
 public:
  explicit CounterRng(RngStream s)
      : base_(splitmix64_mix(
            s.seed ^ splitmix64_mix(s.stream_id + 0xd1b54a32d192ed03ULL))) {}

  std::uint64_t operator()() {
    return splitmix64_mix(base_ + (++count_) * 0x9e3779b97f4a7c15ULL);
  }

  /// Uniform on [0, 1).
  double unit() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1].
  double unit_pos() {
    return static_cast<double>(((*this)() >> 11) + 1) * 0x1.0p-53;
  }

 private:
  std::uint64_t base_;
  std::uint64_t count_ = 0;
};

namespace detail {
struct ZigguratTables {
  static constexpr int kLayers = 256;
  double x[kLayers];  // layer right edges, x[0] = r, x[255] = 0
  double f[kLayers];  // f[i] = exp(-x[i]^2 / 2)
  double base_width;  // v / f(r)
  ZigguratTables();
};
const ZigguratTables& ziggurat_tables();
double ziggurat_slow_path(CounterRng& rng, int layer, double x, bool negative);
}  // namespace detail

/// Standard normal sampler (ziggurat over CounterRng).
class NormalSampler {
 public:
  explicit NormalSampler(RngStream s) : rng_(s) {}

  double operator()() {
    const auto& t = detail::ziggurat_tables();
    for (;;) {
      const std::uint64_t u = rng_();
      const int i = static_cast<int>(u & 255u);
      const bool negative = (u >> 8) & 1u;
      const double u01 = static_cast<double>(u >> 9) * 0x1.0p-55;
      const double width = (i == 0) ? t.base_width : t.x[i - 1];
      const double x = u01 * width;
      if (x < t.x[i]) return negative ? -x : x;
      const double z = detail::ziggurat_slow_path(rng_, i, x, negative);
      if (z == z) return z;  // NaN signals rejection, retry
    }
  }

  Vector vector(int d) {
    Vector v(d);
    for (int i = 0; i < d; ++i) v[i] = (*this)();
    return v;
  }

  /// rows x cols matrix of i.i.d. standard normals, filled column-major.
  Matrix matrix(int rows, int cols) {
    Matrix m(rows, cols);
    double* p = m.data();
    for (Eigen::Index i = 0; i < m.size(); ++i) p[i] = (*this)();
    return m;
  }

  CounterRng& raw() { return rng_; }

 private:
  CounterRng rng_;
};

}  // namespace gibbs_control
