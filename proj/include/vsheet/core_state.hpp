#pragma once

// Background and frozen-coefficient states for the planar elastic vortex
// sheet, plus the small vector geometry the stability conditions are built
// from (projections, cross products, the involution constraint) and
// frequency-space normalization.
//
// Conventions:
//   * The planar background carries half the tangential velocity jump vbar,
//     so v = (+vbar,0,0) on the right side and (-vbar,0,0) on the left.
//   * F1, F2 are the first two rows of the deformation gradient; the third
//     row vanishes on the planar background and the two sides carry +F and
//     -F respectively.
//   * A frozen state is a pointwise snapshot (rho, v1, v2, F, interface
//     slopes phi1, phi2, phi3) at which the frequency symbols are evaluated;
//     phi3 > 0 on the right side, phi3 < 0 on the left.

#include <Eigen/Dense>
#include <cmath>
#include <utility>

#include "vsheet/errors.hpp"

namespace vsheet {

using Vec3 = Eigen::Vector3d;

// ---------------------------------------------------------------------------
// Pressure law

// p(rho) restricted to the two configurable families: p = A rho^g (g > 1)
// and a constant sound speed.
struct PressureLaw {
  enum class Kind { GammaLaw, FixedSoundSpeed };

  Kind kind = Kind::FixedSoundSpeed;
  double coeff = 1.0;     // A for GammaLaw, c for FixedSoundSpeed
  double exponent = 2.0;  // gamma_p for GammaLaw, unused otherwise

  static PressureLaw gamma_law(double A, double gamma_p) {
    if (!(A > 0.0)) throw DomainError("gamma_law: A must be positive");
    if (!(gamma_p > 1.0)) throw DomainError("gamma_law: exponent must exceed 1");
    return PressureLaw{Kind::GammaLaw, A, gamma_p};
  }
  static PressureLaw fixed_sound_speed(double c) {
    if (!(c > 0.0)) throw DomainError("fixed_sound_speed: c must be positive");
    return PressureLaw{Kind::FixedSoundSpeed, c, 0.0};
  }
};

// c(rho) = sqrt(p'(rho)).
inline double sound_speed(const PressureLaw& law, double rho) {
  if (!(rho > 0.0)) throw DomainError("sound_speed: rho must be positive");
  if (law.kind == PressureLaw::Kind::FixedSoundSpeed) return law.coeff;
  return std::sqrt(law.coeff * law.exponent * std::pow(rho, law.exponent - 1.0));
}

// ---------------------------------------------------------------------------
// Vector geometry

struct Projection {
  Vec3 par;   // component of b along a
  Vec3 perp;  // b - par, orthogonal to a
};

inline Projection projections(const Vec3& a, const Vec3& b) {
  const double a2 = a.squaredNorm();
  if (a2 == 0.0) throw DomainError("projections: degenerate axis |a| = 0");
  Projection p;
  p.par = (a.dot(b) / a2) * a;
  p.perp = b - p.par;
  return p;
}

struct NonParallelCheck {
  bool ok;
  double cross_norm;  // |F1 x F2|
};

inline NonParallelCheck check_nonparallel(const Vec3& F1, const Vec3& F2, double tol) {
  if (!(tol >= 0.0)) throw DomainError("check_nonparallel: tol must be nonnegative");
  const double n = F1.cross(F2).norm();
  return {n > tol, n};
}

// Default tolerance is relative: the paper only gives a strict inequality.
inline NonParallelCheck check_nonparallel(const Vec3& F1, const Vec3& F2) {
  return check_nonparallel(F1, F2, 1e-10 * F1.norm() * F2.norm());
}

// ---------------------------------------------------------------------------
// States

enum class Side { Right, Left };

struct FrozenCoefficients {
  Side side = Side::Right;
  double rho = 1.0;
  double v1 = 0.0;
  double v2 = 0.0;
  Eigen::Matrix3d F = Eigen::Matrix3d::Zero();  // F(i,j) = F_{i+1, j+1}
  double phi1 = 0.0;  // d1 Phi
  double phi2 = 0.0;  // d2 Phi
  double phi3 = 1.0;  // d3 Phi, sign-constrained by side
  double c = 1.0;     // sound speed at rho, cached from the pressure law

  // <d_tan Phi> = sqrt(1 + phi1^2 + phi2^2) >= 1
  double tangent_norm() const { return std::sqrt(1.0 + phi1 * phi1 + phi2 * phi2); }

  void validate() const {
    if (!(rho > 0.0)) throw DomainError("FrozenCoefficients: rho must be positive");
    if (!(c > 0.0)) throw DomainError("FrozenCoefficients: c must be positive");
    if (side == Side::Right && !(phi3 > 0.0))
      throw DomainError("FrozenCoefficients: right side requires phi3 > 0");
    if (side == Side::Left && !(phi3 < 0.0))
      throw DomainError("FrozenCoefficients: left side requires phi3 < 0");
  }
};

// Involution residuals r_j = F_{1j} phi1 + F_{2j} phi2 - F_{3j}. Pure report;
// the caller decides what residual it tolerates.
inline Vec3 check_involution(const FrozenCoefficients& s) {
  Vec3 r;
  for (int j = 0; j < 3; ++j)
    r[j] = s.F(0, j) * s.phi1 + s.F(1, j) * s.phi2 - s.F(2, j);
  return r;
}

struct PlanarBackground {
  double rho = 1.0;
  double vbar = 0.0;  // half the tangential velocity jump
  Vec3 F1 = Vec3::Zero();
  Vec3 F2 = Vec3::Zero();
  PressureLaw law = PressureLaw::fixed_sound_speed(1.0);

  double sound_speed() const { return vsheet::sound_speed(law, rho); }

  void validate() const {
    if (!(rho > 0.0)) throw DomainError("PlanarBackground: rho must be positive");
    if (!(vbar >= 0.0)) throw DomainError("PlanarBackground: vbar must be nonnegative");
  }
};

struct FrozenPair {
  FrozenCoefficients right;
  FrozenCoefficients left;
};

// Embed a planar background as two frozen states with a flat interface
// (phi1 = phi2 = 0, phi3 = +-1, third F row zero). Satisfies the involution
// exactly by construction.
inline FrozenPair frozen_from_background(const PlanarBackground& bg) {
  bg.validate();
  const double c = bg.sound_speed();
  FrozenCoefficients r;
  r.side = Side::Right;
  r.rho = bg.rho;
  r.v1 = bg.vbar;
  r.v2 = 0.0;
  r.F.setZero();
  r.F.row(0) = bg.F1.transpose();
  r.F.row(1) = bg.F2.transpose();
  r.phi1 = 0.0;
  r.phi2 = 0.0;
  r.phi3 = 1.0;
  r.c = c;

  FrozenCoefficients l = r;
  l.side = Side::Left;
  l.v1 = -bg.vbar;
  l.F = -r.F;
  l.phi3 = -1.0;
  return {r, l};
}

// ---------------------------------------------------------------------------
// Frequency space

// A point (gamma, delta, eta, eta_t) of the frequency space, tau = gamma + i delta.
struct Frequency {
  double gamma = 0.0;
  double delta = 0.0;
  double eta = 0.0;
  double eta_t = 0.0;

  // Lambda = sqrt(gamma^2 + delta^2 + eta^2 + eta_t^2) > 0
  double lambda() const {
    return std::sqrt(gamma * gamma + delta * delta + eta * eta + eta_t * eta_t);
  }
  bool on_hemisphere(double tol = 1e-12) const {
    return gamma >= 0.0 && std::abs(lambda() - 1.0) <= tol;
  }
  Frequency scaled(double s) const { return {s * gamma, s * delta, s * eta, s * eta_t}; }
};

// Scale a frequency onto the unit hemisphere.
inline Frequency hemisphere_point(double gamma, double delta, double eta, double eta_t) {
  if (!(gamma >= 0.0)) throw DomainError("hemisphere_point: gamma must be nonnegative");
  Frequency f{gamma, delta, eta, eta_t};
  const double lam = f.lambda();
  if (lam == 0.0) throw DomainError("hemisphere_point: zero frequency");
  return f.scaled(1.0 / lam);
}

}  // namespace vsheet
