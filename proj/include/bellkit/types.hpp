#ifndef BELLKIT_TYPES_HPP
#define BELLKIT_TYPES_HPP

#include <Eigen/Dense>

#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace bellkit {

using Complex = std::complex<double>;
using Matrix2 = Eigen::Matrix2cd;
using Matrix4 = Eigen::Matrix4cd;
using Vector2 = Eigen::Vector2cd;
using Vector4 = Eigen::Vector4cd;

// Real 4-vectors indexed by the input pair (x,y) in the order 00, 01, 10, 11.
using Correlators = Eigen::Vector4d;
using Coefficients = Eigen::Vector4d;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

// Tolerance for exact algebraic identities (Kronecker products, involutions,
// SOS residuals) and for formula-vs-formula comparisons, respectively.
inline constexpr double kAlgebraTol = 1e-12;
inline constexpr double kFormulaTol = 1e-9;

struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct domain_error : error {
  using error::error;
};

// Parameters outside the regime where a construction exists (e.g. sin(theta)
// vanishing for the SOS weights, or a certificate weight collapsing to zero).
struct degenerate_error : error {
  using error::error;
};

// A rate or entropy value was requested without the gate (condition on the
// cosine product, or the arcsin self-test criterion) that certifies it.
struct not_certified_error : error {
  using error::error;
};

struct not_on_boundary_error : error {
  using error::error;
};

// Requested target lies outside the achievable interval; carries the
// numerically achievable endpoints.
struct range_error : error {
  range_error(const std::string& msg, double lo, double hi)
      : error(msg), achievable_lo(lo), achievable_hi(hi) {}
  double achievable_lo;
  double achievable_hi;
};

struct insufficient_statistics_error : error {
  using error::error;
};

struct parse_error : error {
  using error::error;
};

/// Normalize an angle to (-pi, pi].
inline double normalize_angle(double a) {
  double r = std::remainder(a, kTwoPi);
  if (r <= -kPi) r += kTwoPi;
  return r;
}

/// Distance between two angles modulo 2*pi.
inline double angle_distance(double a, double b) {
  double d = std::fabs(std::remainder(a - b, kTwoPi));
  return d;
}

// SplitMix64; used to derive independent child seeds from (master, index).
inline std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

using Rng = std::mt19937_64;

/// Uniform double in [0, 1) from the top 53 bits; identical on every platform.
inline double uniform_unit(Rng& g) {
  return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

/// Uniform angle in (-pi, pi].
inline double uniform_angle(Rng& g) {
  return normalize_angle(kPi * (2.0 * uniform_unit(g) - 1.0));
}

/// Run fn(i) for i in [0, n) across hardware threads; fn must only touch
/// per-index state. Results land in deterministic order because each index
/// owns its output slot.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  unsigned hw = std::thread::hardware_concurrency();
  std::size_t workers = std::min<std::size_t>(hw == 0 ? 1 : hw, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::atomic<std::size_t> next{0};
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        fn(i);
      }
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace bellkit

#endif  // BELLKIT_TYPES_HPP
