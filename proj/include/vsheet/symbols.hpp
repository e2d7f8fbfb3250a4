#pragma once

// Per-side frequency symbols of the frozen-coefficient problem: the scalars
// k1, k2, mu, m, omega, alpha, the decaying eigenvector E, the 2x2 interior
// ODE symbol, the 2x4 boundary symbol, and the 9-component front symbol with
// its ellipticity ratio.
//
// omega is the square root of
//   omega^2 = (phi3^2 / (c^2 L^4)) { L^2 [(k1)^2 + k2] + c^2 D },
//   D = (eta phi2 - eta_t phi1)^2 + eta^2 + eta_t^2,  L = <d_tan Phi>,
// with the branch Re omega < 0 for gamma > 0, extended to gamma = 0 by
// continuity (evaluation at gamma = EPS_BRANCH * Lambda fixes the sign).
// The identity omega^2 = mu^2 - m^2 is recomputed on every call as a
// transcription oracle; the tolerance carries a floating-point conditioning
// term because mu, m grow like 1/(k1^2+k2) near poles while omega^2 stays
// bounded.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <limits>

#include "vsheet/core_state.hpp"
#include "vsheet/errors.hpp"

namespace vsheet {

using Complex = std::complex<double>;
using Vec2c = Eigen::Vector2cd;
using Mat2c = Eigen::Matrix2cd;
using Mat24c = Eigen::Matrix<Complex, 2, 4>;
using Vec9c = Eigen::Matrix<Complex, 9, 1>;

inline constexpr double POLE_GUARD = 1e-10;       // versus Lambda^3
inline constexpr double EPS_BRANCH = 1e-9;        // gamma offset, versus Lambda
inline constexpr double EIGVEC_DEGENERATE = 1e-8; // primary-formula threshold

// k1 = tau + i eta v1 + i eta_t v2
inline Complex k1(const Frequency& f, const FrozenCoefficients& s) {
  return Complex(f.gamma, f.delta + f.eta * s.v1 + f.eta_t * s.v2);
}

// k2 = sum_j (eta F1j + eta_t F2j)^2  >= 0
inline double k2(const Frequency& f, const FrozenCoefficients& s) {
  double acc = 0.0;
  for (int j = 0; j < 3; ++j) {
    const double t = f.eta * s.F(0, j) + f.eta_t * s.F(1, j);
    acc += t * t;
  }
  return acc;
}

// |k1| * |k1^2 + k2|, the product eq-pole marks as the reducibility guard.
inline double pole_factor(const Frequency& f, const FrozenCoefficients& s) {
  const Complex K1 = k1(f, s);
  return std::abs(K1) * std::abs(K1 * K1 + k2(f, s));
}

inline void ensure_not_pole(const Frequency& f, const FrozenCoefficients& s) {
  const double lam = f.lambda();
  const double guard = POLE_GUARD * lam * lam * lam;
  const double p = pole_factor(f, s);
  if (p < guard)
    throw PoleProximity("frequency within pole guard: |k1||k1^2+k2| too small", p, guard);
}

namespace detail {
// D = (eta phi2 - eta_t phi1)^2 + eta^2 + eta_t^2
inline double transverse_weight(const Frequency& f, const FrozenCoefficients& s) {
  const double w = f.eta * s.phi2 - f.eta_t * s.phi1;
  return w * w + f.eta * f.eta + f.eta_t * f.eta_t;
}
}  // namespace detail

struct MuM {
  Complex mu;
  Complex m;
};

inline MuM mu_m(const Frequency& f, const FrozenCoefficients& s) {
  ensure_not_pole(f, s);
  const Complex K1 = k1(f, s);
  const double K2 = k2(f, s);
  const double L = s.tangent_norm();
  const double D = detail::transverse_weight(f, s);
  const double p3 = s.phi3;
  const double c = s.c;
  const Complex denom = K1 * K1 + K2;
  MuM r;
  r.mu = -p3 * K1 / (c * L) - p3 * K2 / (2.0 * L * c * K1)
         - p3 * c * K1 * D / (2.0 * L * L * L * denom);
  r.m = -p3 * K2 / (2.0 * L * c * K1) + p3 * c * K1 * D / (2.0 * L * L * L * denom);
  return r;
}

// omega^2 from the factored display. Globally defined (no pole guard): the
// expression involves no division by k1 or k1^2+k2.
inline Complex omega_sq(const Frequency& f, const FrozenCoefficients& s) {
  const Complex K1 = k1(f, s);
  const double K2 = k2(f, s);
  const double L = s.tangent_norm();
  const double L2 = L * L;
  const double D = detail::transverse_weight(f, s);
  const double p3 = s.phi3;
  const double c = s.c;
  return (p3 * p3 / (c * c * L2 * L2)) * (L2 * (K1 * K1 + K2) + c * c * D);
}

namespace detail {
// Branch selection: Re omega < 0 for gamma > 0; at gamma = 0 a purely
// imaginary root is disambiguated by evaluating at gamma = EPS_BRANCH*Lambda.
inline Complex omega_branch(Complex w2, const Frequency& f, const FrozenCoefficients& s) {
  const Complex root = std::sqrt(w2);
  if (std::abs(root.real()) > 1e-14 * std::abs(root))
    return root.real() > 0.0 ? -root : root;
  Frequency fe = f;
  fe.gamma += EPS_BRANCH * f.lambda();
  Complex re = std::sqrt(omega_sq(fe, s));
  if (re.real() > 0.0) re = -re;
  return (root.imag() * re.imag() >= 0.0) ? root : -root;
}
}  // namespace detail

// omega without the pole guard, for use where only (k1, k2)-level data is
// needed (bracket factor, frequency-set scans).
inline Complex omega_unguarded(const Frequency& f, const FrozenCoefficients& s) {
  return detail::omega_branch(omega_sq(f, s), f, s);
}

inline Complex omega(const Frequency& f, const FrozenCoefficients& s) {
  const MuM mm = mu_m(f, s);  // also applies the pole guard
  const Complex w2 = omega_sq(f, s);
  const Complex w2_alt = mm.mu * mm.mu - mm.m * mm.m;
  const double cond = std::norm(mm.mu) + std::norm(mm.m);
  const double tol = std::max(1e-12 * std::abs(w2),
                              32.0 * std::numeric_limits<double>::epsilon() * cond);
  if (std::abs(w2 - w2_alt) > tol)
    throw Error("omega: omega^2 != mu^2 - m^2 beyond tolerance (transcription bug?)");
  return detail::omega_branch(w2, f, s);
}

// i (phi1 phi3 eta + phi2 phi3 eta_t) / L^2, the imaginary diagonal shift of
// the interior symbol; the full eigenvalue is omega + eig_shift.
inline Complex eig_shift(const Frequency& f, const FrozenCoefficients& s) {
  const double L2 = 1.0 + s.phi1 * s.phi1 + s.phi2 * s.phi2;
  return Complex(0.0, (f.eta * s.phi1 + f.eta_t * s.phi2) * s.phi3 / L2);
}

// [[mu, -m], [m, -mu]] + eig_shift * I
inline Mat2c interior_symbol_A(const Frequency& f, const FrozenCoefficients& s) {
  const MuM mm = mu_m(f, s);
  const Complex sh = eig_shift(f, s);
  Mat2c A;
  A << mm.mu + sh, -mm.m, mm.m, -mm.mu + sh;
  return A;
}

struct Eigvec {
  Vec2c E;
  bool used_fallback;
};

// Decaying-mode eigenvector E = (-alpha (mu + omega), -alpha m) with
// alpha = k1 (k1^2 + k2). The printed formula vanishes identically on
// {m = 0, mu + omega = 0}; the fallback is the other adjugate column
// (-alpha m, -alpha (mu - omega)), spanning the same eigenspace.
inline Eigvec eigvec_E(const Frequency& f, const FrozenCoefficients& s) {
  const MuM mm = mu_m(f, s);
  const Complex w = detail::omega_branch(omega_sq(f, s), f, s);
  const Complex alpha = k1(f, s) * (k1(f, s) * k1(f, s) + k2(f, s));
  const double floor =
      EIGVEC_DEGENERATE * std::abs(alpha) * (std::abs(mm.mu) + std::abs(w) + std::abs(mm.m) + 1.0);
  Eigvec r;
  r.E << -alpha * (mm.mu + w), -alpha * mm.m;
  r.used_fallback = false;
  if (r.E.norm() < floor) {
    r.E << -alpha * mm.m, -alpha * (mm.mu - w);
    r.used_fallback = true;
    if (r.E.norm() < floor)
      throw PoleProximity("eigvec_E: both eigenvector formulas degenerate (alpha ~ 0)",
                          std::abs(alpha), floor);
  }
  return r;
}

// Everything the determinant assembly needs from one side, in one pass.
struct SymbolBundle {
  Complex k1;
  double k2;
  Complex mu;
  Complex m;
  Complex omega;
  Complex alpha;
  Complex eig_shift;
  bool degenerate;  // primary eigenvector formula below tolerance
};

inline SymbolBundle make_bundle(const Frequency& f, const FrozenCoefficients& s) {
  SymbolBundle b;
  b.k1 = k1(f, s);
  b.k2 = k2(f, s);
  const MuM mm = mu_m(f, s);
  b.mu = mm.mu;
  b.m = mm.m;
  b.omega = omega(f, s);
  b.alpha = b.k1 * (b.k1 * b.k1 + b.k2);
  b.eig_shift = eig_shift(f, s);
  const double floor = EIGVEC_DEGENERATE * std::abs(b.alpha) *
                       (std::abs(b.mu) + std::abs(b.omega) + std::abs(b.m) + 1.0);
  b.degenerate = Vec2c(-b.alpha * (b.mu + b.omega), -b.alpha * b.m).norm() < floor;
  return b;
}

namespace detail {
inline void require_shared_slopes(const FrozenCoefficients& left,
                                  const FrozenCoefficients& right) {
  const double tol = 1e-12 * (1.0 + std::abs(left.phi1) + std::abs(left.phi2) +
                              std::abs(right.phi1) + std::abs(right.phi2));
  if (std::abs(left.phi1 - right.phi1) > tol || std::abs(left.phi2 - right.phi2) > tol)
    throw InconsistentTrace("boundary tangential slopes disagree between the two sides");
}
}  // namespace detail

// Boundary symbol, 2x4, acting on (W3, W4, W16, W17):
//   [ k, k, -k, -k ]
//   [ -(c_r/rho_r) k^2 k1_l,  +(c_r/rho_r) k^2 k1_l,
//     +(c_l/rho_l) k^2 k1_r,  -(c_l/rho_l) k^2 k1_r ]
// with k = <d_tan psi> from the shared interface slopes.
inline Mat24c boundary_symbol_beta(const Frequency& f, const FrozenCoefficients& left,
                                   const FrozenCoefficients& right) {
  detail::require_shared_slopes(left, right);
  const double k = right.tangent_norm();
  const Complex k1r = k1(f, right);
  const Complex k1l = k1(f, left);
  const double mr = right.c / right.rho;
  const double ml = left.c / left.rho;
  Mat24c beta;
  beta(0, 0) = k;
  beta(0, 1) = k;
  beta(0, 2) = -k;
  beta(0, 3) = -k;
  beta(1, 0) = -mr * k * k * k1l;
  beta(1, 1) = mr * k * k * k1l;
  beta(1, 2) = ml * k * k * k1r;
  beta(1, 3) = -ml * k * k * k1r;
  return beta;
}

struct FrontSymbol {
  Vec9c b;
  double ratio;  // |b|^2 / Lambda^2
};

// Front symbol b = tau b0 + i eta b1 + i eta_t b2, assembled from boundary
// traces; ratio > 0 uniformly on the hemisphere is the ellipticity the
// non-parallel rows buy.
inline FrontSymbol front_symbol_b(const Frequency& f, const FrozenCoefficients& left,
                                  const FrozenCoefficients& right) {
  const Complex tau(f.gamma, f.delta);
  const Complex ie(0.0, f.eta);
  const Complex iet(0.0, f.eta_t);
  FrontSymbol out;
  out.b(0) = ie * (right.v1 - left.v1) + iet * (right.v2 - left.v2);
  out.b(1) = tau + ie * right.v1 + iet * right.v2;
  out.b(2) = Complex(0.0, 0.0);
  for (int j = 0; j < 3; ++j) {
    out.b(3 + 2 * j) = ie * (right.F(0, j) - left.F(0, j)) + iet * (right.F(1, j) - left.F(1, j));
    out.b(4 + 2 * j) = ie * right.F(0, j) + iet * right.F(1, j);
  }
  const double lam2 = f.lambda() * f.lambda();
  out.ratio = out.b.squaredNorm() / lam2;
  return out;
}

}  // namespace vsheet
