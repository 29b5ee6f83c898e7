#pragma once

// Self-consistency checks of the Green matrix shared by the test suites and the
// `verify` subcommand.

#include "dshell/green.hpp"

#include <cstdint>
#include <vector>

namespace dshell {

struct GreenTuple {
  OscillatorParams osc;
  double E = 0.0;
  double R = 1.0;
};

// Pseudo-random admissible tuples: kappa in {-2, -1, 1, 2}, m = omega = 1,
// R in [0.3, 3], E in [-4, 4], every Gamma argument at least 0.05 away from a pole
// so the entries are O(1).
std::vector<GreenTuple> green_check_tuples(std::uint64_t seed, int count);

// max|[G(R+, R) - G(R-, R)] - i sigma_y| / max(1, |G(R+, R)|_max).
double jump_error(const GreenTuple &t);

// Residual of [-i sigma_y d/dr + sigma_x gamma + sigma_z m - E] G(r, R) with a 5-point
// difference of step h_rel * r, max-norm divided by max(1, |G(r, R)|_max).
double ode_residual(const GreenTuple &t, double r, double h_rel = 1e-4);

} // namespace dshell
