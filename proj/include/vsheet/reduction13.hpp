#pragma once

// Full 13x13 coefficient matrices of the first-order system, the variable
// transformation T that diagonalizes the boundary matrix, and a Schur
// complement oracle that rederives the 2x2 interior symbol from the 13x13
// frequency symbol with no reference to the closed-form mu, m.
//
// State ordering: (rho, v1, v2, v3, F11, F21, F31, F12, F22, F32, F13, F23, F33).
// The F-equation blocks follow the pattern
//   row v_i,   column F_{ij}:  -F_{lj}   (for A_l)
//   row F_{ij}, column v_i:    -F_{lj}
// The zero-order terms are dropped: with frozen coefficients they are
// formally lower order and do not enter the principal symbol.

#include <Eigen/Dense>
#include <complex>

#include "vsheet/core_state.hpp"
#include "vsheet/errors.hpp"
#include "vsheet/symbols.hpp"

namespace vsheet {

using State13 = Eigen::Matrix<double, 13, 1>;
using Mat13 = Eigen::Matrix<double, 13, 13>;
using Mat13c = Eigen::Matrix<Complex, 13, 13>;

namespace state_index {
inline constexpr int rho = 0;
inline constexpr int v1 = 1;
inline constexpr int v2 = 2;
inline constexpr int v3 = 3;
// 1-based row i, column j of the deformation gradient
inline constexpr int F(int i, int j) { return 4 + 3 * (j - 1) + (i - 1); }
}  // namespace state_index

inline State13 state_from_frozen(const FrozenCoefficients& s, double v3 = 0.0) {
  State13 u = State13::Zero();
  u[state_index::rho] = s.rho;
  u[state_index::v1] = s.v1;
  u[state_index::v2] = s.v2;
  u[state_index::v3] = v3;
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) u[state_index::F(i, j)] = s.F(i - 1, j - 1);
  return u;
}

// A_l(U), l = 1, 2, 3.
inline Mat13 assemble_A(int l, const State13& u, const PressureLaw& law) {
  if (l < 1 || l > 3) throw DomainError("assemble_A: axis index must be 1, 2, or 3");
  const double rho = u[state_index::rho];
  if (!(rho > 0.0)) throw DomainError("assemble_A: nonpositive density");
  const double c = sound_speed(law, rho);
  const double vl = u[state_index::v1 + (l - 1)];

  Mat13 A = Mat13::Identity() * vl;
  A(state_index::rho, state_index::v1 + (l - 1)) = rho;
  A(state_index::v1 + (l - 1), state_index::rho) = c * c / rho;  // p'/rho
  for (int i = 1; i <= 3; ++i) {
    for (int j = 1; j <= 3; ++j) {
      const double Flj = u[state_index::F(l, j)];
      A(state_index::v1 + (i - 1), state_index::F(i, j)) = -Flj;
      A(state_index::F(i, j), state_index::v1 + (i - 1)) = -Flj;
    }
  }
  return A;
}

// A3_tilde = (A3 - dtPhi I - phi1 A1 - phi2 A2) / phi3, with dtPhi eliminated
// through the eikonal relation dtPhi = v3 - v1 phi1 - v2 phi2.
inline Mat13 assemble_A3_tilde(const State13& u, const FrozenCoefficients& s,
                               const PressureLaw& law) {
  if (std::abs(s.phi3) < 1e-12)
    throw DomainError("assemble_A3_tilde: degenerate lift, |phi3| below floor");
  const double dtPhi =
      u[state_index::v3] - u[state_index::v1] * s.phi1 - u[state_index::v2] * s.phi2;
  Mat13 M = assemble_A(3, u, law);
  M -= dtPhi * Mat13::Identity();
  M -= s.phi1 * assemble_A(1, u, law);
  M -= s.phi2 * assemble_A(2, u, law);
  return M / s.phi3;
}

// The transformation T(U, grad Phi). Columns 3 and 4 carry the acoustic
// modes; the F-blocks rotate each column of F into (tangential, normal)
// components.
inline Mat13 assemble_T(const State13& u, const FrozenCoefficients& s, const PressureLaw& law) {
  const double rho = u[state_index::rho];
  const double c = sound_speed(law, rho);
  const double L = s.tangent_norm();
  const double cr = c / rho;
  const double p1 = s.phi1, p2 = s.phi2;

  Mat13 T = Mat13::Zero();
  T(0, 2) = L;
  T(0, 3) = L;
  T(1, 0) = 1.0;
  T(1, 2) = -cr * p1;
  T(1, 3) = cr * p1;
  T(2, 1) = 1.0;
  T(2, 2) = -cr * p2;
  T(2, 3) = cr * p2;
  T(3, 0) = p1;
  T(3, 1) = p2;
  T(3, 2) = cr;
  T(3, 3) = -cr;
  for (int b = 0; b < 3; ++b) {
    const int r0 = 4 + 3 * b;
    T(r0 + 0, r0 + 0) = 1.0;
    T(r0 + 0, r0 + 2) = -p1;
    T(r0 + 1, r0 + 1) = 1.0;
    T(r0 + 1, r0 + 2) = -p2;
    T(r0 + 2, r0 + 0) = p1;
    T(r0 + 2, r0 + 1) = p2;
    T(r0 + 2, r0 + 2) = 1.0;
  }

  Eigen::PartialPivLU<Mat13> lu(T);
  const double rc = lu.rcond();
  if (rc < 1e-14)
    throw DegenerateTransformation("assemble_T: transformation numerically singular", rc);
  return T;
}

// A0 = diag{1, 1, phi3/(c L), -phi3/(c L), 1 x 9}
inline Mat13 assemble_A0(const FrozenCoefficients& s, const PressureLaw& law) {
  const double c = sound_speed(law, s.rho);
  const double L = s.tangent_norm();
  Mat13 A0 = Mat13::Identity();
  A0(2, 2) = s.phi3 / (c * L);
  A0(3, 3) = -s.phi3 / (c * L);
  return A0;
}

// Max-norm residual of A0 T^{-1} A3_tilde T - I2, where
// I2 = diag{0,0,1,1,0,...,0}. Small residual certifies the transcription of
// A1, A2, A3, T and A0 simultaneously.
inline double verify_diagonalization(const State13& u, const FrozenCoefficients& s,
                                     const PressureLaw& law) {
  const Mat13 T = assemble_T(u, s, law);
  const Mat13 At3 = assemble_A3_tilde(u, s, law);
  const Mat13 A0 = assemble_A0(s, law);
  Mat13 R = A0 * T.partialPivLu().solve(At3 * T);
  R(2, 2) -= 1.0;
  R(3, 3) -= 1.0;
  return R.cwiseAbs().maxCoeff();
}

// Brute-force realization of the interior symbol: build
// M = tau A0 + i eta A1_t + i eta_t A2_t with A_j_t = A0 T^{-1} A_j T,
// eliminate the algebraic components {1,2,5..13} and return the 2x2 Schur
// complement -(M_cc - M_ca M_aa^{-1} M_ac) acting on (W3, W4).
inline Mat2c reduced_ode_oracle(const Frequency& f, const FrozenCoefficients& s,
                                const PressureLaw& law) {
  ensure_not_pole(f, s);
  const State13 u = state_from_frozen(s);
  const Mat13 T = assemble_T(u, s, law);
  const Mat13 A0 = assemble_A0(s, law);
  const auto luT = T.partialPivLu();
  const Mat13 A1t = A0 * luT.solve(assemble_A(1, u, law) * T);
  const Mat13 A2t = A0 * luT.solve(assemble_A(2, u, law) * T);

  const Complex tau(f.gamma, f.delta);
  const Complex ie(0.0, f.eta), iet(0.0, f.eta_t);
  Mat13c M = tau * A0.cast<Complex>() + ie * A1t.cast<Complex>() + iet * A2t.cast<Complex>();

  constexpr int na = 11;
  int ai[na];
  int n = 0;
  for (int i = 0; i < 13; ++i)
    if (i != 2 && i != 3) ai[n++] = i;

  Eigen::Matrix<Complex, 2, 2> Mcc;
  Eigen::Matrix<Complex, 2, na> Mca;
  Eigen::Matrix<Complex, na, 2> Mac;
  Eigen::Matrix<Complex, na, na> Maa;
  for (int r = 0; r < 2; ++r)
    for (int q = 0; q < 2; ++q) Mcc(r, q) = M(2 + r, 2 + q);
  for (int r = 0; r < 2; ++r)
    for (int q = 0; q < na; ++q) Mca(r, q) = M(2 + r, ai[q]);
  for (int r = 0; r < na; ++r)
    for (int q = 0; q < 2; ++q) Mac(r, q) = M(ai[r], 2 + q);
  for (int r = 0; r < na; ++r)
    for (int q = 0; q < na; ++q) Maa(r, q) = M(ai[r], ai[q]);

  Eigen::PartialPivLU<Eigen::Matrix<Complex, na, na>> lu(Maa);
  const double rc = lu.rcond();
  if (rc < 1e-12)
    throw PoleProximity("reduced_ode_oracle: algebraic block ill-conditioned", rc, 1e-12);
  return -(Mcc - Mca * lu.solve(Mac));
}

}  // namespace vsheet
