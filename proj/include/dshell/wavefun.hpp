#pragma once

// Perturbed radial spinors phi = (f, g) of the radial equation
//
//   f' = gamma f + (E - m) g,   g' = -(E + m) f - gamma g,
//
// reconstructed from the Green matrix. The Green matrix solves the same problem for
// K phi with K = i sigma_y = [[0, 1], [-1, 0]], so in the (f, g) frame
//
//   phi(r) = -K G(r, R; E) Delta,   Delta = phi(R+) - phi(R-) = (I - Rot(lambda)) phi(R+),
//
// where Rot(lambda) = [[cos, sin], [-sin, cos]] maps phi(R+) back to phi(R-). Across the
// shell phi(R+) = Rot(-lambda) phi(R-).

#include "dshell/levels.hpp"
#include "dshell/mat2.hpp"

#include <vector>

namespace dshell {

struct RadialSpinor {
  double f = 0.0;
  double g = 0.0;

  Vec2 vec() const { return {f, g}; }
  double density() const { return f * f + g * g; }
};

// Channel solution of the radial equation in the (f, g) frame: regular at the origin (from
// M) or decaying at infinity (from W); arbitrary normalization.
Vec2 channel_spinor(const OscillatorParams &osc, double E, double r, bool regular);

// Real form of exp(i sigma_y lambda) acting on (f, g).
inline Mat2 rot(double lambda) { return exp_i_sigma_y(lambda); }

struct BoundarySpinor {
  RadialSpinor phi_above; // unit norm, f >= 0 (g > 0 when f = 0)
  RadialSpinor jump;      // phi(R+) - phi(R-)
  // Singular values of the level matrix at E; next to a level, of the matrix of unit
  // outer and rotated inner boundary values.
  double sv_small = 0.0;
  double sv_large = 0.0;
  // |-K G(R+, R) jump - phi_above|; next to a level, |Rot(-lambda) phi(R-) - phi(R+)|
  double consistency = 0.0;
};

// One perturbed eigenstate. Within 1e-5 m of an unperturbed level E0 the Green matrix is
// dominated by its pole; there the state is matched directly from the regular and decaying
// channel solutions expanded to first order about E0, with the offset solved exactly.
class PerturbedState {
public:
  // Throws InvalidInput when lambda is a multiple of pi, NumericalError when the null
  // space of the level matrix is degenerate.
  PerturbedState(const OscillatorParams &osc, const ShellParams &shell, double E);

  const BoundarySpinor &boundary() const { return boundary_; }
  RadialSpinor at(double r, Side side = Side::Above) const;
  bool uses_pole_expansion() const { return near_pole_; }
  // Energy of the reconstructed state; next to a level E0 + delta with delta resolved
  // below the spacing of doubles at E0.
  double energy() const;
  double offset_from_level() const { return delta_; }

private:
  struct Tangent {
    Vec2 value, slope; // at E0 and d/dE
  };
  void null_vector();
  void match_near_pole();
  Tangent tangent(double r, bool regular) const;

  OscillatorParams osc_;
  ShellParams shell_;
  double E_;
  bool near_pole_ = false;
  double E_pole_ = 0.0;
  double delta_ = 0.0;
  double in_scale_ = 1.0, out_scale_ = 1.0;
  BoundarySpinor boundary_;
};

BoundarySpinor boundary_spinor(const OscillatorParams &osc, const ShellParams &shell, double E);
RadialSpinor radial_spinor(const OscillatorParams &osc, const ShellParams &shell, double E, double r);

// Unperturbed eigenspinor of the level E0 (the lambda -> 0 limit of a perturbed branch),
// arbitrary normalization.
RadialSpinor unperturbed_spinor(const OscillatorParams &osc, double E0, double r);

struct DensityProfile {
  std::vector<double> grid;    // r, with r = R listed twice
  std::vector<double> density; // f^2 + g^2
  std::vector<int> side;       // -1 at (R-), +1 at (R+), 0 elsewhere
  double energy = 0.0;
  double normalization = 0.0;  // trapezoid integral before rescaling
};

double default_r_max(const OscillatorParams &osc, double R, double E);

// Uniform grid of n_points on [0, r_max] plus both one-sided values at R, normalized to
// unit trapezoid integral.
DensityProfile density_profile(const OscillatorParams &osc, const ShellParams &shell, double E,
                               double r_max, int n_points);
// Same grid, unperturbed level E0.
DensityProfile unperturbed_density_profile(const OscillatorParams &osc, double R, double E0,
                                           double r_max, int n_points);

std::vector<double> density_serial(const PerturbedState &state, const std::vector<double> &grid,
                                   const std::vector<int> &side);
std::vector<double> density_parallel(const PerturbedState &state, const std::vector<double> &grid,
                                     const std::vector<int> &side);

// sqrt(trapezoid integral of (a - b)^2) on a shared grid.
double l2_distance(const DensityProfile &a, const DensityProfile &b);
// Smallest grid radius with cumulative probability >= fraction.
double radius_containing(const DensityProfile &p, double fraction);

} // namespace dshell
