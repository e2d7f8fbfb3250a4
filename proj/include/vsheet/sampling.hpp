#pragma once

// Deterministic sample generators for the cross-module oracles: random
// involution-satisfying frozen states and random non-pole frequencies.

#include "vsheet/core_state.hpp"
#include "vsheet/optimize.hpp"
#include "vsheet/symbols.hpp"

namespace vsheet {

inline FrozenCoefficients random_frozen_state(Rng& rng, Side side, const PressureLaw& law) {
  FrozenCoefficients s;
  s.side = side;
  s.rho = rng.uniform(0.5, 2.0);
  s.v1 = rng.uniform(-0.5, 0.5);
  s.v2 = rng.uniform(-0.5, 0.5);
  s.phi1 = rng.uniform(-0.5, 0.5);
  s.phi2 = rng.uniform(-0.5, 0.5);
  s.phi3 = rng.uniform(0.8, 1.5) * (side == Side::Right ? 1.0 : -1.0);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) s.F(i, j) = rng.uniform(-1.0, 1.0);
  for (int j = 0; j < 3; ++j) s.F(2, j) = s.F(0, j) * s.phi1 + s.F(1, j) * s.phi2;
  s.c = sound_speed(law, s.rho);
  return s;
}

// Rejection-samples until comfortably outside the pole guard.
inline Frequency random_nonpole_frequency(Rng& rng, const FrozenCoefficients& s,
                                          double margin = 1e-3) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    Frequency f{rng.uniform(0.05, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0),
                rng.uniform(-1.0, 1.0)};
    const double lam = f.lambda();
    if (pole_factor(f, s) > margin * lam * lam * lam) return f;
  }
  throw Error("random_nonpole_frequency: rejection sampling failed");
}

}  // namespace vsheet
