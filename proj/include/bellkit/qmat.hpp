#ifndef BELLKIT_QMAT_HPP
#define BELLKIT_QMAT_HPP

#include "bellkit/types.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <array>

namespace bellkit {

inline const Matrix2& pauli_x() {
  static const Matrix2 m = (Matrix2() << 0, 1, 1, 0).finished();
  return m;
}

inline const Matrix2& pauli_y() {
  static const Matrix2 m =
      (Matrix2() << 0, Complex(0, -1), Complex(0, 1), 0).finished();
  return m;
}

inline const Matrix2& pauli_z() {
  static const Matrix2 m = (Matrix2() << 1, 0, 0, -1).finished();
  return m;
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double tol = kAlgebraTol) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

template <typename Derived>
bool is_involution(const Eigen::MatrixBase<Derived>& m, double tol = kAlgebraTol) {
  using Plain = typename Derived::PlainObject;
  Plain sq = m * m;
  Plain id = Plain::Identity(m.rows(), m.cols());
  return (sq - id).cwiseAbs().maxCoeff() <= tol;
}

template <typename Derived>
bool is_normalized(const Eigen::MatrixBase<Derived>& v, double tol = kAlgebraTol) {
  return std::fabs(v.norm() - 1.0) <= tol;
}

/// Kronecker product of two single-qubit operators, Alice factor first.
inline Matrix4 tensor_product(const Matrix2& a, const Matrix2& b) {
  return Eigen::kroneckerProduct(a, b);
}

enum class Plane { XY, ZX };

/// cos(angle) * P1 + sin(angle) * P2 for the plane's ordered Pauli pair
/// (X,Y) or (Z,X); always a traceless involution.
inline Matrix2 planar_observable(Plane plane, double angle) {
  double c = std::cos(angle);
  double s = std::sin(angle);
  return plane == Plane::XY ? Matrix2(c * pauli_x() + s * pauli_y())
                            : Matrix2(c * pauli_z() + s * pauli_x());
}

/// <state| obsA (x) obsB |state>; inputs must be Hermitian.
inline double born_correlator(const Vector4& state, const Matrix2& obs_a,
                              const Matrix2& obs_b) {
  if (!is_hermitian(obs_a) || !is_hermitian(obs_b))
    throw domain_error("born_correlator: observables must be Hermitian");
  Complex v = state.adjoint() * tensor_product(obs_a, obs_b) * state;
  return v.real();
}

/// (|00> + i|11>)/sqrt(2), the state appearing in the target strategy.
inline Vector4 target_state() {
  Vector4 v;
  v << Complex(1, 0), 0, 0, Complex(0, 1);
  return v / std::sqrt(2.0);
}

/// Bell basis states Phi_0..Phi_3.
inline Vector4 bell_state(int alpha) {
  const double r = 1.0 / std::sqrt(2.0);
  Vector4 v = Vector4::Zero();
  switch (alpha) {
    case 0: v(0) = r; v(3) = r; break;
    case 1: v(0) = r; v(3) = -r; break;
    case 2: v(1) = r; v(2) = r; break;
    case 3: v(1) = r; v(2) = -r; break;
    default: throw domain_error("bell_state: index must be 0..3");
  }
  return v;
}

inline double min_eigenvalue(const Matrix4& m) {
  Eigen::SelfAdjointEigenSolver<Matrix4> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

/// Binary entropy in bits, with 0 log 0 := 0.
inline double binary_entropy(double p) {
  if (p < -kAlgebraTol || p > 1.0 + kAlgebraTol)
    throw domain_error("binary_entropy: p outside [0,1]");
  p = std::min(1.0, std::max(0.0, p));
  double h = 0.0;
  if (p > 0.0) h -= p * std::log2(p);
  if (p < 1.0) h -= (1.0 - p) * std::log2(1.0 - p);
  return h;
}

/// Distribution over a two-bit outcome pair (a,b); entries p(a,b).
struct JointDistribution {
  Eigen::Matrix2d p;

  explicit JointDistribution(const Eigen::Matrix2d& probs) : p(probs) {
    if (p.minCoeff() < -kAlgebraTol)
      throw domain_error("JointDistribution: negative probability");
    if (std::fabs(p.sum() - 1.0) > kAlgebraTol)
      throw domain_error("JointDistribution: probabilities must sum to 1");
  }

  double operator()(int a, int b) const { return p(a, b); }

  double marginal_a(int a) const { return p(a, 0) + p(a, 1); }
  double marginal_b(int b) const { return p(0, b) + p(1, b); }

  /// Sum_ab (-1)^(a+b) p(a,b).
  double correlator() const { return p(0, 0) - p(0, 1) - p(1, 0) + p(1, 1); }
};

namespace detail {
inline double plogp(double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; }
}  // namespace detail

/// H(AB) in bits.
inline double joint_entropy(const JointDistribution& j) {
  double h = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) h += detail::plogp(j(a, b));
  return h;
}

/// H(A|B) = H(AB) - H(B) in bits.
inline double conditional_entropy(const JointDistribution& j) {
  double hb = detail::plogp(j.marginal_b(0)) + detail::plogp(j.marginal_b(1));
  return joint_entropy(j) - hb;
}

}  // namespace bellkit

#endif  // BELLKIT_QMAT_HPP
