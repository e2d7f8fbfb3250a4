#pragma once

// Batch front-end command implementations. Each command is a pure function
// of the RunConfig writing to a stream and returning the process exit code:
// 0 for pass/stable, 1 for an analytic negative, 2 for config/usage errors
// (the CLI maps ConfigError to 2 before these run).

#include <Eigen/Eigenvalues>
#include <cstdio>
#include <iostream>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "vsheet/classifier.hpp"
#include "vsheet/config.hpp"
#include "vsheet/lopatinskii.hpp"
#include "vsheet/reduction13.hpp"
#include "vsheet/sampling.hpp"
#include "vsheet/scan.hpp"

namespace vsheet {

namespace detail {
// Fixed 17-significant-digit formatting keeps CSV output byte-stable.
inline std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}
}  // namespace detail

inline int cmd_check(const RunConfig& cfg, std::ostream& out) {
  const StabilityVerdict v = stability_report(cfg.background);
  Json j;
  j["nonparallel"] = v.nonparallel_ok;
  j["h1_threshold"] = v.h1_threshold;
  j["g_threshold"] = v.g_threshold;
  j["vbar_sq"] = v.vbar_sq;
  j["margins"] = {v.h1_margin, v.g_margin};
  j["verdict"] = to_string(v.verdict);
  out << j.dump(2) << "\n";
  return v.verdict == Verdict::StableConditionsHold ? 0 : 1;
}

inline int cmd_scan(const RunConfig& cfg, std::ostream& out) {
  ScanOptions opts;
  opts.det_zero = cfg.tolerances.det_zero;
  opts.gamma_min = cfg.gamma_min;
  opts.threads = cfg.threads;
  const ScanReport rep = scan_hemisphere(cfg.background, cfg.grid, opts);
  out << "theta,gamma,delta,abs_det_norm,flag\n";
  for (const ScanCell& c : rep.cells) {
    out << detail::fmt(c.theta) << ',' << detail::fmt(c.gamma) << ',' << detail::fmt(c.delta)
        << ',' << detail::fmt(c.abs_det_norm) << ',' << to_string(c.flag) << '\n';
  }
  return 0;
}

inline int cmd_roots(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  out << "theta,V1,V2,ups1_r,ups1_l,pole2_r_m,pole2_r_p,pole2_l_m,pole2_l_p,"
         "om_r_m,om_r_p,om_l_m,om_l_p,min_gap\n";
  const auto grid = default_theta_grid(cfg.grid.theta_points);
  int anomalies = 0;
  for (double theta : grid) {
    const FrequencySetSlice s = frequency_sets(theta, cfg.background);
    std::string v1s, v2s, gap_s;
    if (s.roots) {
      v1s = detail::fmt(s.roots->V1);
      v2s = detail::fmt(s.roots->V2);
    } else {
      ++anomalies;
      err << "warning: root count anomaly at theta=" << detail::fmt(theta) << "\n";
    }
    // per-theta minimum over the six pairwise set gaps
    const std::vector<double> ups = {s.ups1_r, s.ups1_l};
    const std::vector<double> p2 = {s.pole2_r[0], s.pole2_r[1], s.pole2_l[0], s.pole2_l[1]};
    const std::vector<double> om = {s.omega_r[0], s.omega_r[1], s.omega_l[0], s.omega_l[1]};
    auto mg = [](const std::vector<double>& A, const std::vector<double>& B) {
      double m = std::numeric_limits<double>::infinity();
      for (double a : A)
        for (double b : B) m = std::min(m, std::abs(a - b));
      return m;
    };
    double gap = std::min({mg(ups, p2), mg(ups, om), mg(p2, om)});
    if (s.roots) {
      const std::vector<double> rt = {s.roots->V1, s.roots->V2};
      gap = std::min({gap, mg(ups, rt), mg(p2, rt), mg(rt, om)});
    }
    out << detail::fmt(theta) << ',' << v1s << ',' << v2s << ',' << detail::fmt(s.ups1_r) << ','
        << detail::fmt(s.ups1_l) << ',' << detail::fmt(s.pole2_r[0]) << ','
        << detail::fmt(s.pole2_r[1]) << ',' << detail::fmt(s.pole2_l[0]) << ','
        << detail::fmt(s.pole2_l[1]) << ',' << detail::fmt(s.omega_r[0]) << ','
        << detail::fmt(s.omega_r[1]) << ',' << detail::fmt(s.omega_l[0]) << ','
        << detail::fmt(s.omega_l[1]) << ',' << detail::fmt(gap) << '\n';
  }
  return anomalies == 0 ? 0 : 1;
}

inline int cmd_map(const RunConfig& cfg, std::ostream& out) {
  if (!cfg.sweep) throw ConfigError("map requires a sweep block", "sweep");
  const Sweep& sw = *cfg.sweep;
  out << "param_value,h1_margin,g_margin,verdict,min_gap\n";
  const auto grid = default_theta_grid(cfg.grid.theta_points);
  for (int i = 0; i < sw.steps; ++i) {
    const double p = sw.from + (sw.to - sw.from) * i / (sw.steps - 1.0);
    PlanarBackground bg = cfg.background;
    switch (sw.parameter) {
      case Sweep::Param::Vbar: bg.vbar = p; break;
      case Sweep::Param::FScale:
        bg.F1 = cfg.background.F1 * p;
        bg.F2 = cfg.background.F2 * p;
        break;
      case Sweep::Param::C: bg.law = PressureLaw::fixed_sound_speed(p); break;
    }
    const StabilityVerdict v = stability_report(bg);
    const SeparationReport sep = separation_margins(bg, grid);
    double gap = std::numeric_limits<double>::infinity();
    for (const auto& e : sep.pairs)
      if (std::isfinite(e.min_gap)) gap = std::min(gap, e.min_gap);
    out << detail::fmt(p) << ',' << detail::fmt(v.h1_margin) << ',' << detail::fmt(v.g_margin)
        << ',' << to_string(v.verdict) << ',' << detail::fmt(gap) << '\n';
  }
  return 0;
}

inline int cmd_oracle(const RunConfig& cfg, std::ostream& out) {
  Rng rng(cfg.seed);
  const PressureLaw law = cfg.background.law;
  Json j;

  {  // diagonalization identity over random involution-satisfying states
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      FrozenCoefficients s =
          random_frozen_state(rng, i % 2 == 0 ? Side::Right : Side::Left, law);
      if (cfg.oracle_violate_involution) s.F(2, 0) += 0.5;
      const State13 u = state_from_frozen(s, rng.uniform(-0.5, 0.5));
      worst = std::max(worst, verify_diagonalization(u, s, law));
    }
    j["diagonalization"] = {{"samples", 100},
                            {"max_residual", worst},
                            {"tolerance", cfg.tolerances.diag_residual},
                            {"pass", worst <= cfg.tolerances.diag_residual}};
  }

  {  // constraint necessity: a violating state must break the identity
    FrozenCoefficients s = random_frozen_state(rng, Side::Right, law);
    s.F(2, 1) += 0.7;
    const double r = verify_diagonalization(state_from_frozen(s), s, law);
    j["involution_necessity"] = {{"residual", r}, {"pass", r > 1e-3}};
  }

  {  // Schur oracle vs closed-form interior symbol, plus eigenvalue pairing
    double worst = 0.0, worst_eig = 0.0;
    for (int i = 0; i < 200; ++i) {
      const FrozenCoefficients s =
          random_frozen_state(rng, i % 2 == 0 ? Side::Right : Side::Left, law);
      const Frequency f = random_nonpole_frequency(rng, s);
      const double lam = f.lambda();
      const Mat2c oracle = reduced_ode_oracle(f, s, law);
      const Mat2c closed = interior_symbol_A(f, s);
      worst = std::max(worst, ((oracle - closed).cwiseAbs().maxCoeff()) / lam);
      Eigen::ComplexEigenSolver<Mat2c> es(oracle, false);
      const Complex sh = eig_shift(f, s);
      const Complex w = omega(f, s);
      const Complex a = es.eigenvalues()(0), b = es.eigenvalues()(1);
      const double direct = std::max(std::abs(a - (w + sh)), std::abs(b - (-w + sh)));
      const double swapped = std::max(std::abs(b - (w + sh)), std::abs(a - (-w + sh)));
      worst_eig = std::max(worst_eig, std::min(direct, swapped) / lam);
    }
    j["schur"] = {{"samples", 200},
                  {"max_residual", worst},
                  {"max_eig_residual", worst_eig},
                  {"tolerance", 1e-8},
                  {"pass", worst <= 1e-8 && worst_eig <= 1e-8}};
  }

  {  // factored vs direct determinant at random planar backgrounds
    double worst = 0.0;
    double min_factor = std::numeric_limits<double>::infinity();
    int used = 0, guard = 0;
    while (used < 500 && guard < 20000) {
      ++guard;
      PlanarBackground bg;
      bg.rho = rng.uniform(0.5, 2.0);
      bg.vbar = rng.uniform(0.0, 0.5);
      for (int k = 0; k < 3; ++k) {
        bg.F1[k] = rng.uniform(-1.0, 1.0);
        bg.F2[k] = rng.uniform(-1.0, 1.0);
      }
      bg.law = PressureLaw::fixed_sound_speed(rng.uniform(0.5, 2.0));
      const FrozenPair fp = frozen_from_background(bg);
      const Frequency f = random_nonpole_frequency(rng, fp.right);
      if (pole_factor(f, fp.left) < 1e-3 * std::pow(f.lambda(), 3)) continue;
      if (eigvec_E(f, fp.right).used_fallback || eigvec_E(f, fp.left).used_fallback) continue;
      const LopatinskiiSample smp = evaluate_sample(f, fp.left, fp.right);
      const FactoredDet fd = lopatinskii_det_factored(f, fp.left, fp.right);
      const double rel = std::abs(smp.det_direct - fd.value) /
                         std::max(std::abs(fd.value), 1e-300);
      worst = std::max(worst, rel);
      const double lam2 = f.lambda() * f.lambda();
      min_factor = std::min({min_factor, std::abs(fd.factor_r) / lam2,
                             std::abs(fd.factor_l) / lam2});
      ++used;
    }
    j["factored_det"] = {{"samples", used},
                         {"max_rel_error", worst},
                         {"min_nonvanishing_factor", min_factor},
                         {"tolerance", 1e-8},
                         {"pass", used == 500 && worst <= 1e-8 && min_factor > 0.0}};
  }

  {  // dual evaluation of the first stability threshold
    double worst = 0.0, worst_min = 0.0;
    for (int i = 0; i < 200; ++i) {
      Vec3 F1, F2;
      for (int k = 0; k < 3; ++k) {
        F1[k] = rng.uniform(-1.0, 1.0);
        F2[k] = rng.uniform(-1.0, 1.0);
      }
      if (F2.norm() < 1e-3) continue;
      const double a = h1_threshold(F1, F2);
      const ThetaMin b = h1_threshold_scan(F1, F2);
      worst = std::max(worst, std::abs(a - b.value) / std::max(1.0, a));
      const double tan_expected = -F1.dot(F2) / F2.squaredNorm();
      if (std::abs(tan_expected) < 1e3)
        worst_min = std::max(worst_min, std::abs(std::tan(b.theta_star) - tan_expected));
    }
    j["h1_dual"] = {{"samples", 200},
                    {"max_rel_error", worst},
                    {"max_minimizer_error", worst_min},
                    {"tolerance", 1e-8},
                    {"pass", worst <= 1e-8 && worst_min <= 1e-6}};
  }

  bool all = true;
  for (const char* key :
       {"diagonalization", "involution_necessity", "schur", "factored_det", "h1_dual"})
    all = all && j[key]["pass"].get<bool>();
  j["pass"] = all;
  out << j.dump(2) << "\n";
  return all ? 0 : 1;
}

}  // namespace vsheet
