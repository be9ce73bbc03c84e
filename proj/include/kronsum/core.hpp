#ifndef KRONSUM_CORE_HPP
#define KRONSUM_CORE_HPP

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace kronsum {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// 64-bit mix finalizer (SplitMix64 output function). Used both as the
// generator's output stage and to derive independent seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based generator: state advances by a fixed increment, output is a
// bijective mix of the state. Every downstream draw (uniforms, normals,
// integers) is pinned arithmetic on the raw bits, so identical seeds give
// bitwise-identical streams on any conforming platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  // uniform on [0,1), 53-bit resolution
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // standard normal via Box-Muller; second member of each pair is cached
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    // u1 in (0,1] so the log is finite
    double u1 = static_cast<double>((next() >> 11) + 1) * 0x1.0p-53;
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * M_PI * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

  // unbiased integer in [0, bound) by rejection
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("SplitMix64::below: bound must be positive");
    std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return x % bound;
  }

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

inline double max_abs(const Matrix& a) { return a.cwiseAbs().maxCoeff(); }

inline bool is_symmetric(const Matrix& a, double tol = 1e-12) {
  if (a.rows() != a.cols()) return false;
  return (a - a.transpose()).cwiseAbs().maxCoeff() <= tol;
}

inline Matrix symmetrized(const Matrix& a) { return 0.5 * (a + a.transpose()); }

// compensated (Neumaier) summation, for weight-normalization contracts
inline double stable_sum(const Vector& v) {
  double s = 0.0, c = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    double t = s + v[i];
    if (std::abs(s) >= std::abs(v[i]))
      c += (s - t) + v[i];
    else
      c += (v[i] - t) + s;
    s = t;
  }
  return s + c;
}

}  // namespace kronsum

#endif  // KRONSUM_CORE_HPP
