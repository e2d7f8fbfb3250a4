#pragma once

// The Lopatinskii matrix L = beta diag(E^r, E^l), its determinant evaluated
// two independent ways (directly from L, and through the factored product of
// six explicit factors), the neutral roots V1 <= V2 of the bracket factor on
// gamma = 0, and the h-factor of the double-root factorization
// det L = k1^r k1^l h near the pole/root collision set.
//
// The factored product used here is the exact identity
//   det L = -(c^4 k^2 / rho) * k1r k1l
//           * [ k^4/(i3r i3l) wr wl + (eta i2 - eta_t i1)^2 + eta^2 + eta_t^2 ]
//           * ( wr/i3r - wl/i3l )
//           * [ (i3r/(k c)) (k1r^2 + k2r) - k1r wr ]
//           * [ (i3l/(k c)) (k1l^2 + k2l) - k1l wl ],
// valid whenever both sides use the primary eigenvector formula. The last
// three factors stay away from zero on stable backgrounds and provide the
// normalization `scale`; |det|/scale = |k1r k1l bracket| / Lambda^4 is
// homogeneous of degree zero and vanishes exactly where the determinant
// has a root (or a k1-type pole collision).

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "vsheet/core_state.hpp"
#include "vsheet/errors.hpp"
#include "vsheet/symbols.hpp"

namespace vsheet {

// Columns are beta[:,0:2] E^r and beta[:,2:4] E^l.
inline Mat2c lopatinskii_matrix(const Frequency& f, const FrozenCoefficients& left,
                                const FrozenCoefficients& right) {
  const Mat24c beta = boundary_symbol_beta(f, left, right);
  const Eigvec Er = eigvec_E(f, right);
  const Eigvec El = eigvec_E(f, left);
  Mat2c L;
  L.col(0) = beta.block<2, 2>(0, 0) * Er.E;
  L.col(1) = beta.block<2, 2>(0, 2) * El.E;
  return L;
}

struct FactoredDet {
  Complex value;       // full six-factor product
  Complex k1r, k1l;    // vanish on Upsilon^(1)
  Complex bracket;     // vanishes at the neutral roots V1, V2
  Complex omega_diff;  // wr/i3r - wl/i3l
  Complex factor_r;    // (i3r/(kc))(k1r^2+k2r) - k1r wr, nonzero on stable states
  Complex factor_l;    // (i3l/(kc))(k1l^2+k2l) - k1l wl, nonzero on stable states
  double prefactor;    // c^4 k^2 / rho
  double scale;        // degree-9 normalizer; |value|/scale is degree 0
};

namespace detail {
inline void require_matched_pair(const FrozenCoefficients& left,
                                 const FrozenCoefficients& right) {
  require_shared_slopes(left, right);
  if (std::abs(left.rho - right.rho) > 1e-12 * (left.rho + right.rho))
    throw InconsistentTrace("boundary density differs between sides (rho_r != rho_l)");
  if (std::abs(left.c - right.c) > 1e-12 * (left.c + right.c))
    throw InconsistentTrace("boundary sound speed differs between sides (c_r != c_l)");
}

// Factor assembly from (k1, k2, omega)-level data only; globally defined.
inline FactoredDet factored_pieces(const Frequency& f, const FrozenCoefficients& left,
                                   const FrozenCoefficients& right) {
  require_matched_pair(left, right);
  const double c = right.c;
  const double rho = right.rho;
  const double k = right.tangent_norm();
  const double i1 = right.phi1, i2 = right.phi2;
  const double i3r = right.phi3, i3l = left.phi3;

  FactoredDet d;
  d.k1r = k1(f, right);
  d.k1l = k1(f, left);
  const double k2r = k2(f, right);
  const double k2l = k2(f, left);
  const Complex wr = omega_unguarded(f, right);
  const Complex wl = omega_unguarded(f, left);

  const double w = f.eta * i2 - f.eta_t * i1;
  const double k4 = k * k * k * k;
  d.bracket = (k4 / (i3r * i3l)) * wr * wl + w * w + f.eta * f.eta + f.eta_t * f.eta_t;
  d.omega_diff = wr / i3r - wl / i3l;
  d.factor_r = (i3r / (k * c)) * (d.k1r * d.k1r + k2r) - d.k1r * wr;
  d.factor_l = (i3l / (k * c)) * (d.k1l * d.k1l + k2l) - d.k1l * wl;
  d.prefactor = c * c * c * c * k * k / rho;
  d.value = -d.prefactor * d.k1r * d.k1l * d.bracket * d.omega_diff * d.factor_r * d.factor_l;

  const double lam = f.lambda();
  const double lam4 = lam * lam * lam * lam;
  const double clip = 1e-30;
  d.scale = d.prefactor * lam4 * std::max(std::abs(d.omega_diff), clip) *
            std::max(std::abs(d.factor_r), clip) * std::max(std::abs(d.factor_l), clip);
  return d;
}
}  // namespace detail

// Requires a matched boundary pair (rho, c equal across the sheet, shared
// tangential slopes). Throws FactoredFormUnavailable when the primary
// eigenvector formula is degenerate on either side and a comparison against
// the direct determinant would be normalization-inconsistent; at pole points
// (where eigenvectors cannot be evaluated at all) the product itself is still
// well defined and is returned.
inline FactoredDet lopatinskii_det_factored(const Frequency& f, const FrozenCoefficients& left,
                                            const FrozenCoefficients& right) {
  FactoredDet d = detail::factored_pieces(f, left, right);
  try {
    if (eigvec_E(f, right).used_fallback || eigvec_E(f, left).used_fallback)
      throw FactoredFormUnavailable(
          "lopatinskii_det_factored: eigenvector fallback fired; factored form presumes the "
          "primary normalization");
  } catch (const PoleProximity&) {
    // On the pole set the factors are finite and the product (typically 0
    // through the k1 factors) is still the right value.
  }
  return d;
}

struct LopatinskiiSample {
  Frequency freq;
  Mat2c L;
  Complex det_direct;
  std::optional<Complex> det_factored;  // absent when an eigenvector fallback fired
  double scale;
  double normalized;  // |det_direct| / scale (factored value when fallback fired)
};

inline LopatinskiiSample evaluate_sample(const Frequency& f, const FrozenCoefficients& left,
                                         const FrozenCoefficients& right) {
  LopatinskiiSample out;
  out.freq = f;
  const FactoredDet d = detail::factored_pieces(f, left, right);
  out.scale = d.scale;
  const Eigvec Er = eigvec_E(f, right);  // may throw PoleProximity
  const Eigvec El = eigvec_E(f, left);
  const Mat24c beta = boundary_symbol_beta(f, left, right);
  out.L.col(0) = beta.block<2, 2>(0, 0) * Er.E;
  out.L.col(1) = beta.block<2, 2>(0, 2) * El.E;
  out.det_direct = out.L(0, 0) * out.L(1, 1) - out.L(0, 1) * out.L(1, 0);
  if (!Er.used_fallback && !El.used_fallback) {
    out.det_factored = d.value;
    out.normalized = std::abs(out.det_direct) / out.scale;
  } else {
    out.det_factored.reset();
    out.normalized = std::abs(d.value) / out.scale;
  }
  return out;
}

// h = det L / (k1^r k1^l); bounded away from zero near the Upsilon^(1)
// collision set, where it isolates the genuinely vanishing part.
inline Complex double_root_h(const Frequency& f, const FrozenCoefficients& left,
                             const FrozenCoefficients& right) {
  const Complex prod = k1(f, right) * k1(f, left);
  const double lam2 = f.lambda() * f.lambda();
  if (std::abs(prod) < 1e-300 * lam2)
    throw DomainError("double_root_h: k1r k1l vanishes, evaluate near (not on) the set");
  const Mat2c L = lopatinskii_matrix(f, left, right);
  return (L(0, 0) * L(1, 1) - L(0, 1) * L(1, 0)) / prod;
}

// ---------------------------------------------------------------------------
// Neutral roots of the bracket factor

struct RootsV {
  double V1;
  double V2;
};

struct RootFindOptions {
  int scan_points = 2000;
  double refine_tol = 1e-12;
};

namespace detail {
// Real bracket on gamma = 0 for a planar background: both omega^2 are
// nonnegative inside the window, omega = -sqrt(omega^2), and
// bracket = E - wr wl with E = eta^2 + eta_t^2.
struct RealBracket {
  double ve;   // vbar * eta (v2 = 0 on planar backgrounds)
  double k2v;  // k2 = E g(theta)
  double E;
  double c;

  double omega_real(double delta_hat) const {
    const double w2 = (-delta_hat * delta_hat + k2v) / (c * c) + E;
    return -std::sqrt(std::max(w2, 0.0));
  }
  double operator()(double delta) const {
    return E - omega_real(delta + ve) * omega_real(delta - ve);
  }
};
}  // namespace detail

// Locate the two zeros V1 <= V2 of the bracket factor along gamma = 0 at the
// unit tangential direction (eta, eta_t) = (cos theta, sin theta). The search
// window is the interval where both omega^2 > 0, on which the bracket is
// real; sign changes are refined by bisection.
inline RootsV find_roots_V(double theta, const PlanarBackground& bg,
                           const RootFindOptions& opts = {}) {
  bg.validate();
  const double eta = std::cos(theta), eta_t = std::sin(theta);
  const double c = bg.sound_speed();
  double k2v = 0.0;
  for (int j = 0; j < 3; ++j) {
    const double t = eta * bg.F1[j] + eta_t * bg.F2[j];
    k2v += t * t;
  }
  detail::RealBracket br{bg.vbar * eta, k2v, 1.0, c};

  const double half = std::sqrt(k2v + c * c);
  const double lo = std::abs(br.ve) - half;
  const double hi = -std::abs(br.ve) + half;
  if (!(lo < hi))
    throw RootCountAnomaly("find_roots_V: empty real-bracket window (|vbar eta| >= sqrt(g+c^2))",
                           0, {lo, hi});

  const int n = std::max(opts.scan_points, 16);
  const double pad = 1e-12 * (hi - lo);
  std::vector<double> roots;
  double xprev = lo + pad, fprev = br(xprev);
  for (int i = 1; i < n; ++i) {
    const double x = lo + pad + (hi - lo - 2.0 * pad) * i / (n - 1.0);
    const double fx = br(x);
    if (fprev == 0.0) {
      roots.push_back(xprev);
    } else if (fprev * fx < 0.0) {
      double a = xprev, b = x, fa = fprev;
      while (b - a > opts.refine_tol) {
        const double m = 0.5 * (a + b);
        const double fm = br(m);
        if (fa * fm <= 0.0) {
          b = m;
        } else {
          a = m;
          fa = fm;
        }
      }
      roots.push_back(0.5 * (a + b));
    }
    xprev = x;
    fprev = fx;
  }
  if (roots.size() != 2) {
    std::vector<double> trace;
    trace.reserve(roots.size() + 2);
    trace.push_back(lo);
    trace.push_back(hi);
    for (double r : roots) trace.push_back(r);
    throw RootCountAnomaly("find_roots_V: expected exactly two bracket sign changes",
                           static_cast<int>(roots.size()), std::move(trace));
  }
  return {std::min(roots[0], roots[1]), std::max(roots[0], roots[1])};
}

}  // namespace vsheet
