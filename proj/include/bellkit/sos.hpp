#ifndef BELLKIT_SOS_HPP
#define BELLKIT_SOS_HPP

#include "bellkit/strategy.hpp"

namespace bellkit {

/// Rank-2 sum-of-squares certificate for the shifted Bell operator
///   etaQ * I - B  =  c0 R0'R0 + c1 R1'R1,
/// with R0 = sin(t) B0 + cos(t+f) A0 - cos(f) A1 and
///      R1 = sin(t) B1 + cos(t+w) A0 - cos(w) A1.
/// The identity holds for any four involutions; it certifies the quantum
/// bound whenever c0 and c1 share a sign.
struct SosCertificate {
  BellParameters params;
  double c0 = 0.0;
  double c1 = 0.0;
  // (coefficient of B_mu, of A0, of A1) for R_mu
  Eigen::Vector3d r0_spec = Eigen::Vector3d::Zero();
  Eigen::Vector3d r1_spec = Eigen::Vector3d::Zero();
};

inline SosCertificate build_certificate(const BellParameters& p) {
  double st = std::sin(p.theta);
  if (std::fabs(st) < kAlgebraTol)
    throw degenerate_error(
        "build_certificate: sin(theta) = 0, quantum bound degenerates and no "
        "certificate exists");
  SosCertificate cert;
  cert.params = p;
  cert.c0 = -std::cos(p.omega) * std::cos(p.theta + p.omega) / (2 * st);
  cert.c1 = std::cos(p.phi) * std::cos(p.theta + p.phi) / (2 * st);
  if (std::fabs(cert.c0) < kAlgebraTol || std::fabs(cert.c1) < kAlgebraTol)
    throw degenerate_error(
        "build_certificate: an SOS weight vanishes (condition on the cosine "
        "product fails); certificate refused for self-test use");
  cert.r0_spec << st, std::cos(p.theta + p.phi), -std::cos(p.phi);
  cert.r1_spec << st, std::cos(p.theta + p.omega), -std::cos(p.omega);
  return cert;
}

namespace detail {

/// R_mu as a 4x4 operator for given single-qubit observables.
inline Matrix4 sos_polynomial(const Eigen::Vector3d& r, const Matrix2& a0,
                              const Matrix2& a1, const Matrix2& b) {
  const Matrix2 id = Matrix2::Identity();
  return r(0) * tensor_product(id, b) + r(1) * tensor_product(a0, id) +
         r(2) * tensor_product(a1, id);
}

/// Bell operator sum c_xy A_x (x) B_y.
inline Matrix4 bell_operator(const Coefficients& c, const Matrix2& a0,
                             const Matrix2& a1, const Matrix2& b0,
                             const Matrix2& b1) {
  return c(0) * tensor_product(a0, b0) + c(1) * tensor_product(a0, b1) +
         c(2) * tensor_product(a1, b0) + c(3) * tensor_product(a1, b1);
}

}  // namespace detail

/// Max entrywise residual of the operator identity over `trials` draws of
/// random planar involutions for A0, A1, B0, B1. The identity is algebraic
/// in the involutions, so the residual stays at rounding level regardless of
/// the drawn angles. All certificate quantities are re-derived from the
/// parameters in extended precision; otherwise the 1/sin(theta) weights would
/// dominate the reported residual with double rounding noise.
inline double verify_operator_identity(const SosCertificate& cert, int trials,
                                       Rng& rng) {
  using LMatrix2 = Eigen::Matrix<long double, 2, 2>;
  using LMatrix4 = Eigen::Matrix<long double, 4, 4>;

  const long double t = cert.params.theta;
  const long double f = cert.params.phi;
  const long double w = cert.params.omega;
  const long double st = std::sin(t);
  const long double ctf = std::cos(t + f), cf = std::cos(f);
  const long double ctw = std::cos(t + w), cw = std::cos(w);
  const long double eta = st * std::sin(w - f) * std::sin(t + w + f);
  const long double coeff[4] = {ctf * ctw * cw, -ctf * ctw * cf, -cf * cw * ctw,
                                cf * cw * ctf};
  const long double c0 = -cw * ctw / (2 * st);
  const long double c1 = cf * ctf / (2 * st);
  const long double r0c[3] = {st, ctf, -cf};
  const long double r1c[3] = {st, ctw, -cw};

  auto planar = [](long double ang) {
    LMatrix2 m;
    m << std::cos(ang), std::sin(ang), std::sin(ang), -std::cos(ang);
    return m;  // cos * Z + sin * X
  };
  auto kron = [](const LMatrix2& a, const LMatrix2& b) {
    LMatrix4 out;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
  };

  double worst = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    LMatrix2 a0 = planar(uniform_angle(rng));
    LMatrix2 a1 = planar(uniform_angle(rng));
    LMatrix2 b0 = planar(uniform_angle(rng));
    LMatrix2 b1 = planar(uniform_angle(rng));
    const LMatrix2 id = LMatrix2::Identity();

    LMatrix4 bell = coeff[0] * kron(a0, b0) + coeff[1] * kron(a0, b1) +
                    coeff[2] * kron(a1, b0) + coeff[3] * kron(a1, b1);

    auto rmat = [&](const long double* r, const LMatrix2& b) {
      LMatrix4 m = r[0] * kron(id, b);
      m += r[1] * kron(a0, id);
      m += r[2] * kron(a1, id);
      return m;
    };
    LMatrix4 r0 = rmat(r0c, b0);
    LMatrix4 r1 = rmat(r1c, b1);

    LMatrix4 lhs = eta * LMatrix4::Identity() - bell;
    LMatrix4 rhs = c0 * (r0.transpose() * r0) + c1 * (r1.transpose() * r1);
    long double res = (lhs - rhs).cwiseAbs().maxCoeff();
    worst = std::max(worst, static_cast<double>(res));
  }
  return worst;
}

/// Euclidean norms of R0|psi> and R1|psi> with the strategy's own observables.
/// Both vanish exactly when the strategy matches the certificate parameters.
inline std::pair<double, double> residuals_at_strategy(const SosCertificate& cert,
                                                       const TargetStrategy& s) {
  Matrix2 a0 = s.alice_observable(0);
  Matrix2 a1 = s.alice_observable(1);
  Matrix4 r0 = detail::sos_polynomial(cert.r0_spec, a0, a1, s.bob_observable(0));
  Matrix4 r1 = detail::sos_polynomial(cert.r1_spec, a0, a1, s.bob_observable(1));
  return {(r0 * s.state).norm(), (r1 * s.state).norm()};
}

/// eta_Q * I - B for the sign-canonicalized functional (coefficients flipped
/// so the quantum bound is +|eta_Q|), with the given observables.
inline Matrix4 shifted_bell_operator(const BellParameters& p, const Matrix2& a0,
                                     const Matrix2& a1, const Matrix2& b0,
                                     const Matrix2& b1) {
  double eta = quantum_bound(p);
  double sgn = eta < 0 ? -1.0 : 1.0;
  Coefficients c = sgn * make_functional(p).coeffs;
  return sgn * eta * Matrix4::Identity() - detail::bell_operator(c, a0, a1, b0, b1);
}

}  // namespace bellkit

#endif  // BELLKIT_SOS_HPP
