#pragma once

// Hemisphere scan for unstable modes and neutral roots of the Lopatinskii
// determinant. Works on rays: at each tangential direction
// (eta, eta_t) = (cos theta, sin theta) the normalized determinant
// |det|/scale (degree zero) is sampled over a (gamma-level, delta) grid.
//
// Zero candidates (local minima of a slice) are refined by coordinate
// descent: golden-section in delta, then in log gamma over
// [gamma_min, gamma_cap]. A refined zero is classified as a pole collision
// when |k1r k1l|/Lambda^2 is small there (the determinant vanishes through
// its k1 factors on Upsilon^(1), which are simultaneously poles), otherwise
// as a genuine root. Genuine zeros pinned to the gamma_min floor are
// re-tested at 10x the floor and on the gamma = 0 line to separate neutral
// roots from unstable modes.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "vsheet/core_state.hpp"
#include "vsheet/lopatinskii.hpp"
#include "vsheet/optimize.hpp"

namespace vsheet {

struct ScanGrid {
  int theta_points = 72;
  int delta_points = 800;
  std::vector<double> gamma_levels = {1e-2, 1e-3, 1e-4};
};

struct ScanOptions {
  double det_zero = 1e-6;   // |det|/scale below this is a zero
  double gamma_min = 1e-4;  // unstable-mode floor
  int threads = 1;
};

enum class CellFlag { Ok, Root, Pole, Excluded };

inline const char* to_string(CellFlag f) {
  switch (f) {
    case CellFlag::Ok: return "ok";
    case CellFlag::Root: return "root";
    case CellFlag::Pole: return "pole";
    case CellFlag::Excluded: return "excluded";
  }
  return "?";
}

struct ScanCell {
  double theta, gamma, delta;
  double abs_det_norm;
  CellFlag flag;
};

struct ScanZero {
  double theta, gamma, delta;
  double value;          // |det|/scale at the refined point
  bool pole_collision;   // vanishes through the k1 factors
};

enum class ScanVerdict { Clean, NeutralRoots, UnstableModeFound };

inline const char* to_string(ScanVerdict v) {
  switch (v) {
    case ScanVerdict::Clean: return "clean";
    case ScanVerdict::NeutralRoots: return "neutral_roots";
    case ScanVerdict::UnstableModeFound: return "unstable_mode_found";
  }
  return "?";
}

struct SliceMin {
  double theta, gamma;
  double min_norm;
  double argmin_delta;
};

struct ScanReport {
  std::vector<ScanCell> cells;  // theta-major, then gamma level, then delta
  std::vector<SliceMin> slice_minima;
  std::vector<ScanZero> unstable_zeros;
  std::vector<ScanZero> neutral_roots;    // genuine gamma = 0 roots
  std::vector<ScanZero> pole_collisions;  // gamma = 0 zeros explained by k1
  std::size_t excluded_points = 0;
  ScanVerdict verdict = ScanVerdict::Clean;
};

namespace detail {

struct RayEvaluator {
  FrozenCoefficients left, right;
  double eta, eta_t;

  // |det|/scale; +inf marks pole-guarded points so minimizers skirt them.
  double norm_det(double gamma, double delta, bool* excluded = nullptr) const {
    Frequency f{gamma, delta, eta, eta_t};
    try {
      return evaluate_sample(f, left, right).normalized;
    } catch (const PoleProximity&) {
      if (excluded) *excluded = true;
      const FactoredDet d = factored_pieces(f, left, right);
      return std::abs(d.value) / d.scale;
    }
  }
  double k1_product_norm(double gamma, double delta) const {
    Frequency f{gamma, delta, eta, eta_t};
    const double lam2 = f.lambda() * f.lambda();
    return std::abs(k1(f, right) * k1(f, left)) / lam2;
  }
};

struct RefinedZero {
  double gamma, delta, value;
  bool converged;
};

// Coordinate descent: golden in delta, then in log gamma within
// [gamma_lo, gamma_cap]; a handful of rounds is plenty for these smooth
// one-zero basins.
inline RefinedZero refine_zero(const RayEvaluator& ev, double gamma0, double delta0,
                               double delta_halfwidth, double gamma_lo, double gamma_cap,
                               double det_zero) {
  double g = std::clamp(gamma0, gamma_lo, gamma_cap);
  double d = delta0;
  double v = ev.norm_det(g, d);
  for (int round = 0; round < 8; ++round) {
    auto gd = golden_minimize([&](double x) { return ev.norm_det(g, x); }, d - delta_halfwidth,
                              d + delta_halfwidth, 1e-13);
    d = gd.x;
    auto gg = golden_minimize([&](double lg) { return ev.norm_det(std::exp(lg), d); },
                              std::log(gamma_lo), std::log(gamma_cap), 1e-13);
    g = std::exp(gg.x);
    v = gg.value;
    delta_halfwidth = std::max(delta_halfwidth * 0.25, 1e-9);
    if (v < 1e-3 * det_zero) break;
  }
  return {g, d, v, v < det_zero};
}

}  // namespace detail

inline ScanReport scan_hemisphere(const PlanarBackground& bg, const ScanGrid& grid,
                                  const ScanOptions& opts = {}) {
  if (grid.theta_points < 2 || grid.delta_points < 2 || grid.gamma_levels.size() < 1)
    throw DomainError("scan_hemisphere: grid sizes must be >= 2 with nonempty gamma_levels");
  bg.validate();
  const FrozenPair fp = frozen_from_background(bg);
  const double c = bg.sound_speed();
  const double gmax = bg.F1.squaredNorm() + bg.F2.squaredNorm();
  const double delta_max = bg.vbar + std::sqrt(gmax + c * c) + 0.5;
  const double gamma_cap = bg.vbar + c + std::sqrt(gmax) + 1.0;

  const int nt = grid.theta_points;
  const int nd = grid.delta_points;
  std::vector<double> levels = grid.gamma_levels;
  std::sort(levels.begin(), levels.end(), std::greater<double>());
  const double gamma_floor = std::min(opts.gamma_min, levels.back());

  ScanReport rep;
  const std::size_t cells_per_theta = levels.size() * static_cast<std::size_t>(nd);
  rep.cells.resize(static_cast<std::size_t>(nt) * cells_per_theta);
  rep.slice_minima.resize(static_cast<std::size_t>(nt) * levels.size());

  struct ThetaResult {
    std::vector<ScanZero> unstable, neutral, poles;
    std::size_t excluded = 0;
  };
  std::vector<ThetaResult> results(nt);

  auto run_theta = [&](int it) {
    const double theta = (it + 0.5) * std::numbers::pi / nt;
    detail::RayEvaluator ev{fp.left, fp.right, std::cos(theta), std::sin(theta)};
    ThetaResult& tr = results[it];
    const double step = 2.0 * delta_max / (nd - 1);

    struct Seed {
      double gamma, delta;
      std::size_t cell;
    };
    std::vector<Seed> seeds;

    for (std::size_t il = 0; il < levels.size(); ++il) {
      const double gamma = levels[il];
      std::vector<double> nds(nd);
      double best = std::numeric_limits<double>::infinity();
      double best_delta = 0.0;
      for (int id = 0; id < nd; ++id) {
        const double delta = -delta_max + step * id;
        bool excluded = false;
        const double v = ev.norm_det(gamma, delta, &excluded);
        nds[id] = v;
        if (excluded) ++tr.excluded;
        CellFlag flag = excluded ? CellFlag::Excluded
                                 : (v < opts.det_zero ? CellFlag::Root : CellFlag::Ok);
        rep.cells[it * cells_per_theta + il * nd + id] =
            ScanCell{theta, gamma, delta, v, flag};
        if (v < best) {
          best = v;
          best_delta = delta;
        }
      }
      rep.slice_minima[it * levels.size() + il] = SliceMin{theta, gamma, best, best_delta};
      for (int id = 1; id + 1 < nd; ++id) {
        if (nds[id] <= nds[id - 1] && nds[id] <= nds[id + 1] && nds[id] < 1e-1)
          seeds.push_back(Seed{gamma, -delta_max + step * id,
                               it * cells_per_theta + il * nd + static_cast<std::size_t>(id)});
      }
    }

    // Refine each candidate basin once; keep distinct zeros.
    std::vector<std::pair<double, double>> seen;
    for (const Seed& sd : seeds) {
      const double step_w = 2.0 * step;
      detail::RefinedZero rz = detail::refine_zero(ev, sd.gamma, sd.delta, step_w, gamma_floor,
                                                   gamma_cap, opts.det_zero);
      if (!rz.converged) continue;
      bool dup = false;
      for (auto& [zg, zd] : seen)
        if (std::abs(zg - rz.gamma) < 1e-6 * (1.0 + zg) && std::abs(zd - rz.delta) < 1e-6)
          dup = true;
      if (dup) continue;
      seen.emplace_back(rz.gamma, rz.delta);
      rep.cells[sd.cell].flag = CellFlag::Root;

      const bool pole_like = ev.k1_product_norm(rz.gamma, rz.delta) < 1e-4;
      // Zeros pinned to the gamma floor are neutral if lifting gamma by 10x
      // removes them (roots on the imaginary axis), unstable otherwise.
      bool neutral = false;
      if (rz.gamma <= 1.5 * gamma_floor) {
        auto lifted = golden_minimize(
            [&](double x) { return ev.norm_det(10.0 * gamma_floor, x); }, rz.delta - 0.05,
            rz.delta + 0.05, 1e-13);
        neutral = lifted.value >= opts.det_zero;
      }
      if (neutral || pole_like) {
        auto flat = golden_minimize([&](double x) { return ev.norm_det(0.0, x); },
                                    rz.delta - 0.01, rz.delta + 0.01, 1e-14);
        ScanZero z{theta, 0.0, flat.x, flat.value, pole_like};
        if (pole_like)
          tr.poles.push_back(z);
        else
          tr.neutral.push_back(z);
      } else {
        tr.unstable.push_back(ScanZero{theta, rz.gamma, rz.delta, rz.value, false});
      }
    }

    // gamma = 0 sweep: catalog neutral zeros directly (these cells are not
    // part of the CSV grid, only of the verdict machinery).
    {
      std::vector<double> nds(nd);
      for (int id = 0; id < nd; ++id) {
        bool excluded = false;
        nds[id] = ev.norm_det(0.0, -delta_max + step * id, &excluded);
      }
      for (int id = 1; id + 1 < nd; ++id) {
        if (!(nds[id] <= nds[id - 1] && nds[id] <= nds[id + 1] && nds[id] < 1e-1)) continue;
        const double d0 = -delta_max + step * id;
        auto g0 = golden_minimize([&](double x) { return ev.norm_det(0.0, x); }, d0 - step,
                                  d0 + step, 1e-14);
        if (g0.value >= opts.det_zero) continue;
        const bool pole_like = ev.k1_product_norm(0.0, g0.x) < 1e-4;
        bool dup = false;
        auto& bucket = pole_like ? tr.poles : tr.neutral;
        for (const ScanZero& z : bucket)
          if (std::abs(z.delta - g0.x) < 1e-6) dup = true;
        if (!dup) bucket.push_back(ScanZero{theta, 0.0, g0.x, g0.value, pole_like});
      }
    }
  };

  if (opts.threads > 1) {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    const int nw = std::min(opts.threads, nt);
    for (int w = 0; w < nw; ++w)
      pool.emplace_back([&]() {
        for (int it = next.fetch_add(1); it < nt; it = next.fetch_add(1)) run_theta(it);
      });
    for (auto& t : pool) t.join();
  } else {
    for (int it = 0; it < nt; ++it) run_theta(it);
  }

  for (int it = 0; it < nt; ++it) {
    auto& tr = results[it];
    rep.excluded_points += tr.excluded;
    rep.unstable_zeros.insert(rep.unstable_zeros.end(), tr.unstable.begin(), tr.unstable.end());
    rep.neutral_roots.insert(rep.neutral_roots.end(), tr.neutral.begin(), tr.neutral.end());
    rep.pole_collisions.insert(rep.pole_collisions.end(), tr.poles.begin(), tr.poles.end());
  }
  if (!rep.unstable_zeros.empty())
    rep.verdict = ScanVerdict::UnstableModeFound;
  else if (!rep.neutral_roots.empty())
    rep.verdict = ScanVerdict::NeutralRoots;
  else
    rep.verdict = ScanVerdict::Clean;
  return rep;
}

}  // namespace vsheet
