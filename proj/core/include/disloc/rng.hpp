#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace disloc {

/// Seeded generator with explicit draw algorithms, so that runs are
/// reproducible independent of standard-library distribution internals.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() {
    return std::ldexp(static_cast<double>(eng_() >> 11), -53);
  }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  std::int64_t uniform_int(std::int64_t a, std::int64_t b) {
    const auto span = static_cast<std::uint64_t>(b - a + 1);
    return a + static_cast<std::int64_t>(eng_() % span);
  }
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform(), u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * 3.14159265358979323846 * u2;
    spare_ = r * std::sin(theta);
    have_spare_ = true;
    return r * std::cos(theta);
  }

private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

} // namespace disloc
