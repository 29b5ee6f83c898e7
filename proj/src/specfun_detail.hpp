#pragma once

// Individual evaluation schemes behind kummer_m / kummer_u. Exposed so the
// tests can cross-check one scheme against another where their domains overlap.

#include "dshell/specfun.hpp"

namespace dshell::specfun::detail {

// Result of one scheme. `cond` is sum|terms| / |sum|, an upper bound on the
// digits lost to cancellation; `ok` is false when the scheme did not converge
// or cancelled too much to be trusted.
struct Attempt {
  ScaledPair pair;
  double cond = 1.0;
  bool ok = false;
};

// Largest cancellation factor a scheme may show and still be accepted.
inline constexpr double kMaxCancellation = 1e3;

// Power series of M(a, b, z) and its derivative.
Attempt series_m(double a, double b, double z);

// Large-z expansion of U(a, b, z) ~ z^{-a} sum (a)_s (a-b+1)_s / s! (-z)^{-s}.
Attempt asymptotic_u(double a, double b, double z);

// U from the two regular solutions M(a,b,z) and z^{1-b} M(a-b+1, 2-b, z).
// Not ok when b is (numerically) an integer.
Attempt connection_u(double a, double b, double z);

// Carry a solution (w, w') of Kummer's equation z w'' + (b - z) w' - a w = 0
// from z_from to z_to with local Taylor expansions.
ScaledPair continue_kummer(double a, double b, double z_from, ScaledPair start, double z_to);

} // namespace dshell::specfun::detail
