#pragma once

// Seeded randomness with bit-reproducible mappings. std::mt19937_64 has a
// specified bitstream; the distributions below are written out explicitly so
// runs are identical across standard libraries.

#include <cmath>
#include <random>

#include "sphectra/unitvec.hpp"

namespace sphectra {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double log_uniform(double lo, double hi) {
    return lo * std::exp(uniform() * std::log(hi / lo));
  }

  /// Standard normal via Box-Muller (explicit, not std::normal_distribution).
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  template <int N>
  UnitVec<N> unit_vec() {
    Vec<N> raw;
    double len2 = 0.0;
    do {
      len2 = 0.0;
      for (int i = 0; i <= N; ++i) {
        raw[i] = normal();
        len2 += raw[i] * raw[i];
      }
    } while (len2 < 1e-12);
    return UnitVec<N>(raw);
  }

  /// Uniform rotation of R^3 from a uniform unit quaternion.
  Rot3 rotation() {
    double q[4];
    double len2;
    do {
      len2 = 0.0;
      for (double& qi : q) {
        qi = normal();
        len2 += qi * qi;
      }
    } while (len2 < 1e-12);
    const double s = 1.0 / std::sqrt(len2);
    const double w = q[0] * s, x = q[1] * s, y = q[2] * s, z = q[3] * s;
    Rot3 r;
    r.row[0] = {1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)};
    r.row[1] = {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)};
    r.row[2] = {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)};
    return r;
  }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace sphectra
