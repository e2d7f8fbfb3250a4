#pragma once

// Geometric stability conditions and the gamma = 0 frequency-set catalog.
//
// The two conditions gate the theorem's stable regime:
//   (1) vbar^2 < |perp projection of F1 off F2|^2 / 4, equivalently
//       vbar^2 < (1/4) inf_theta g(theta)/cos^2 theta, and
//   (2) vbar^2 < G(F1, F2) with
//       G = (1/4) inf_theta (sqrt(g+c^2) - sqrt(g))^2 / cos^2 theta,
// where g(theta) = sum_j (cos theta F1j + sin theta F2j)^2. Both infima are
// computed numerically (dense scan plus golden-section refinement) and the
// projection route is kept as the independent second evaluation of (1).
//
// On gamma = 0 at a unit tangential direction the named branches are
//   Upsilon^(1):   delta = -(v1 eta + v2 eta_t)            per side
//   pole2:         (delta + v.eta)^2 = E g(theta)          per side, +-
//   omega-set:     (delta + v.eta)^2 = E (g(theta) + c^2)  per side, +-
//   roots:         delta = V1, V2 from the bracket factor.
// Default theta grids are cell-centered on [0, pi): at cos theta = 0 the
// bracket roots merge into the pole2 branches (a normalization artifact of
// the printed eigenvector), so endpoint grids would report a spurious zero
// gap there.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "vsheet/core_state.hpp"
#include "vsheet/lopatinskii.hpp"
#include "vsheet/optimize.hpp"

namespace vsheet {

// g(theta) = sum_j (cos theta F1j + sin theta F2j)^2
inline double g_theta(double theta, const Vec3& F1, const Vec3& F2) {
  const double ct = std::cos(theta), st = std::sin(theta);
  double acc = 0.0;
  for (int j = 0; j < 3; ++j) {
    const double t = ct * F1[j] + st * F2[j];
    acc += t * t;
  }
  return acc;
}

// |F1 - proj_{F2}(F1)|^2 / 4, with the zero-projector convention when
// F2 = 0 (threshold |F1|^2/4, consistent with the theta-infimum route).
inline double h1_threshold(const Vec3& F1, const Vec3& F2) {
  if (F2.squaredNorm() == 0.0) return F1.squaredNorm() / 4.0;
  return projections(F2, F1).perp.squaredNorm() / 4.0;
}

struct ThetaMin {
  double value;
  double theta_star;
};

// Second route to the same threshold: (1/4) inf over cos theta != 0 of
// g(theta)/cos^2 theta, by golden-section (the function is a quadratic in
// tan theta, hence unimodal on (-pi/2, pi/2)).
inline ThetaMin h1_threshold_scan(const Vec3& F1, const Vec3& F2) {
  constexpr double pi = std::numbers::pi;
  auto f = [&](double th) {
    const double ct = std::cos(th);
    return g_theta(th, F1, F2) / (ct * ct);
  };
  const auto r = golden_minimize(f, -pi / 2 + 1e-9, pi / 2 - 1e-9, 1e-13);
  return {r.value / 4.0, r.x};
}

struct BigGOptions {
  int scan_points = 4096;
};

struct BigGResult {
  double value;
  double theta_star;
  double g_at_minimizer;
  double analytic_lower_bound;
};

// G(F1, F2) over theta in (-pi/2, pi/2), dense scan + golden refinement of
// the best cell. Checks the analytic chain: G is at least
// h1_threshold * c^4 / ((|F1|^2+|F2|^2)(sqrt(|F1|^2+|F2|^2+c^2)+sqrt(|F1|^2+|F2|^2))^2)
// and g at the minimizer is at most |F1|^2 + |F2|^2.
inline BigGResult big_G(const Vec3& F1, const Vec3& F2, double c, const BigGOptions& opts = {}) {
  if (!(c > 0.0)) throw DomainError("big_G: c must be positive");
  constexpr double pi = std::numbers::pi;
  auto f = [&](double th) {
    const double g = g_theta(th, F1, F2);
    const double d = std::sqrt(g + c * c) - std::sqrt(g);
    const double ct = std::cos(th);
    return d * d / (4.0 * ct * ct);
  };
  const int n = std::max(opts.scan_points, 64);
  double best = std::numeric_limits<double>::infinity();
  int ibest = 0;
  for (int i = 0; i < n; ++i) {
    const double th = -pi / 2 + (i + 0.5) * pi / n;
    const double v = f(th);
    if (v < best) {
      best = v;
      ibest = i;
    }
  }
  const double lo = -pi / 2 + std::max(0.5, ibest - 1.0) * pi / n;
  const double hi = -pi / 2 + std::min(n - 0.5, ibest + 2.0) * pi / n;
  const auto r = golden_minimize(f, lo, hi, 1e-14);

  BigGResult out;
  out.value = std::min(best, r.value);
  out.theta_star = r.value <= best ? r.x : -pi / 2 + (ibest + 0.5) * pi / n;
  out.g_at_minimizer = g_theta(out.theta_star, F1, F2);

  const double s = F1.squaredNorm() + F2.squaredNorm();
  const double root = std::sqrt(s + c * c) + std::sqrt(s);
  out.analytic_lower_bound = s > 0.0 ? h1_threshold(F1, F2) * c * c * c * c / (s * root * root)
                                     : 0.0;
  if (out.value < out.analytic_lower_bound * (1.0 - 1e-9))
    throw Error("big_G: computed infimum violates the analytic lower bound");
  if (out.g_at_minimizer > s + 1e-9 * (1.0 + s))
    throw Error("big_G: g at the minimizer exceeds |F1|^2 + |F2|^2");
  return out;
}

// ---------------------------------------------------------------------------
// Verdict

enum class Verdict { StableConditionsHold, H1Violated, GViolated, BothViolated, ParallelRows };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::StableConditionsHold: return "stable_conditions_hold";
    case Verdict::H1Violated: return "h1_violated";
    case Verdict::GViolated: return "g_violated";
    case Verdict::BothViolated: return "both_violated";
    case Verdict::ParallelRows: return "parallel_rows";
  }
  return "?";
}

struct StabilityVerdict {
  bool nonparallel_ok;
  double h1_threshold;  // |perp_{F2}(F1)|^2 / 4
  double g_threshold;   // G(F1, F2)
  double vbar_sq;
  double h1_margin;  // h1_threshold - vbar^2
  double g_margin;   // g_threshold - vbar^2
  Verdict verdict;
};

inline StabilityVerdict stability_report(const PlanarBackground& bg) {
  bg.validate();
  StabilityVerdict v;
  v.nonparallel_ok = check_nonparallel(bg.F1, bg.F2).ok;
  v.h1_threshold = h1_threshold(bg.F1, bg.F2);
  v.g_threshold = big_G(bg.F1, bg.F2, bg.sound_speed()).value;
  v.vbar_sq = bg.vbar * bg.vbar;
  v.h1_margin = v.h1_threshold - v.vbar_sq;
  v.g_margin = v.g_threshold - v.vbar_sq;
  if (!v.nonparallel_ok) {
    v.verdict = Verdict::ParallelRows;
  } else if (v.h1_margin > 0.0 && v.g_margin > 0.0) {
    v.verdict = Verdict::StableConditionsHold;
  } else if (v.h1_margin <= 0.0 && v.g_margin <= 0.0) {
    v.verdict = Verdict::BothViolated;
  } else if (v.h1_margin <= 0.0) {
    v.verdict = Verdict::H1Violated;
  } else {
    v.verdict = Verdict::GViolated;
  }
  return v;
}

// ---------------------------------------------------------------------------
// Frequency-set slice

struct FrequencySetSlice {
  double theta;
  double ups1_r, ups1_l;                  // delta = -(v1 eta + v2 eta_t)
  std::array<double, 2> pole2_r, pole2_l; // -v.eta -+ sqrt(E g)
  std::array<double, 2> omega_r, omega_l; // -v.eta -+ sqrt(E (g + c^2))
  std::optional<RootsV> roots;            // absent when find_roots_V anomalous
};

inline FrequencySetSlice frequency_sets(double theta, const PlanarBackground& bg) {
  bg.validate();
  const double eta = std::cos(theta);
  const double c = bg.sound_speed();
  const double g = g_theta(theta, bg.F1, bg.F2);
  FrequencySetSlice s;
  s.theta = theta;
  const double vr = bg.vbar * eta;  // v2 = 0 on planar backgrounds
  s.ups1_r = -vr;
  s.ups1_l = vr;
  const double sg = std::sqrt(g);
  const double sgc = std::sqrt(g + c * c);
  s.pole2_r = {-vr - sg, -vr + sg};
  s.pole2_l = {vr - sg, vr + sg};
  s.omega_r = {-vr - sgc, -vr + sgc};
  s.omega_l = {vr - sgc, vr + sgc};
  try {
    s.roots = find_roots_V(theta, bg);
  } catch (const RootCountAnomaly&) {
    s.roots.reset();
  }
  return s;
}

// Weight symbol on gamma = 0 (boundary value): the product of the four
// vanishing factors over (delta^2 + E)^{3/2}.
inline double sigma_weight(const Frequency& f, const PlanarBackground& bg, const RootsV& roots) {
  const double E = f.eta * f.eta + f.eta_t * f.eta_t;
  const double q = f.delta * f.delta + E;
  if (!(q > 0.0)) throw DomainError("sigma_weight: delta^2 + eta^2 + eta_t^2 must be positive");
  const double sqE = std::sqrt(E);
  const double fr = f.delta + bg.vbar * f.eta;
  const double fl = f.delta - bg.vbar * f.eta;
  return fr * fl * (f.delta - roots.V1 * sqE) * (f.delta - roots.V2 * sqE) / std::pow(q, 1.5);
}

// ---------------------------------------------------------------------------
// Pairwise separation of the gamma = 0 sets

enum class SetPair {
  Ups1Pole2,
  Ups1Omega,
  Ups1Roots,
  Pole2Omega,
  Pole2Roots,
  RootsOmega,
};

inline const char* to_string(SetPair p) {
  switch (p) {
    case SetPair::Ups1Pole2: return "ups1_vs_pole2";
    case SetPair::Ups1Omega: return "ups1_vs_omega";
    case SetPair::Ups1Roots: return "ups1_vs_roots";
    case SetPair::Pole2Omega: return "pole2_vs_omega";
    case SetPair::Pole2Roots: return "pole2_vs_roots";
    case SetPair::RootsOmega: return "roots_vs_omega";
  }
  return "?";
}

struct SeparationReport {
  struct PairGap {
    SetPair pair;
    double min_gap;
    double argmin_theta;
  };
  std::array<PairGap, 6> pairs;
  double min_gap;            // over all six pairs
  bool roots_available;      // find_roots_V succeeded at every grid theta
  bool gap_criterion_ok;     // 4 vbar^2 cos^2 theta < (sqrt(g+c^2)-sqrt(g))^2 on the grid
};

// Cell-centered theta grid on [0, pi).
inline std::vector<double> default_theta_grid(int n = 720) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = (i + 0.5) * std::numbers::pi / n;
  return g;
}

inline SeparationReport separation_margins(const PlanarBackground& bg,
                                           const std::vector<double>& theta_grid) {
  if (theta_grid.size() < 2) throw DomainError("separation_margins: grid must have >= 2 points");
  SeparationReport rep;
  for (int i = 0; i < 6; ++i)
    rep.pairs[i] = {static_cast<SetPair>(i), std::numeric_limits<double>::infinity(), 0.0};
  rep.roots_available = true;
  rep.gap_criterion_ok = true;
  const double c = bg.sound_speed();

  auto update = [&](SetPair p, double gap, double theta) {
    auto& e = rep.pairs[static_cast<int>(p)];
    if (gap < e.min_gap) {
      e.min_gap = gap;
      e.argmin_theta = theta;
    }
  };
  auto min_abs_gap = [](const std::vector<double>& A, const std::vector<double>& B) {
    double m = std::numeric_limits<double>::infinity();
    for (double a : A)
      for (double b : B) m = std::min(m, std::abs(a - b));
    return m;
  };

  for (double theta : theta_grid) {
    const FrequencySetSlice s = frequency_sets(theta, bg);
    const std::vector<double> ups = {s.ups1_r, s.ups1_l};
    const std::vector<double> p2 = {s.pole2_r[0], s.pole2_r[1], s.pole2_l[0], s.pole2_l[1]};
    const std::vector<double> om = {s.omega_r[0], s.omega_r[1], s.omega_l[0], s.omega_l[1]};
    update(SetPair::Ups1Pole2, min_abs_gap(ups, p2), theta);
    update(SetPair::Ups1Omega, min_abs_gap(ups, om), theta);
    update(SetPair::Pole2Omega, min_abs_gap(p2, om), theta);
    if (s.roots) {
      const std::vector<double> rt = {s.roots->V1, s.roots->V2};
      update(SetPair::Ups1Roots, min_abs_gap(ups, rt), theta);
      update(SetPair::Pole2Roots, min_abs_gap(p2, rt), theta);
      update(SetPair::RootsOmega, min_abs_gap(rt, om), theta);
    } else {
      rep.roots_available = false;
    }
    const double g = g_theta(theta, bg.F1, bg.F2);
    const double d = std::sqrt(g + c * c) - std::sqrt(g);
    const double w = 2.0 * bg.vbar * std::cos(theta);
    if (!(w * w < d * d)) rep.gap_criterion_ok = false;
  }
  rep.min_gap = std::numeric_limits<double>::infinity();
  for (const auto& e : rep.pairs) rep.min_gap = std::min(rep.min_gap, e.min_gap);
  return rep;
}

// Minimum over the grid of the cross-side pole2-vs-omega gap closure margin
// (sqrt(g + c^2) - sqrt(g)) - 2 vbar |cos theta|; the first v-bar at which
// this reaches zero is sqrt(G). Cheap enough to bisect on.
inline double pole2_omega_closure_margin(const PlanarBackground& bg,
                                         const std::vector<double>& theta_grid) {
  const double c = bg.sound_speed();
  double m = std::numeric_limits<double>::infinity();
  for (double theta : theta_grid) {
    const double g = g_theta(theta, bg.F1, bg.F2);
    const double d = std::sqrt(g + c * c) - std::sqrt(g);
    m = std::min(m, d - 2.0 * bg.vbar * std::abs(std::cos(theta)));
  }
  return m;
}

}  // namespace vsheet
