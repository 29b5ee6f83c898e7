#pragma once

// Transfer matrices of the radial equation across a sharply peaked vector potential,
//
//   phi' = A(r) phi,   A = [[gamma, E - V - m], [-(E - V) - m, -gamma]]
//        = sigma_z gamma - sigma_x m + K (E - V),   K = i sigma_y,
//
// and their approach to exp(-lambda K) = [[cos, -sin], [sin, cos]] as the peak narrows.

#include "dshell/green.hpp"
#include "dshell/mat2.hpp"

#include <string>
#include <vector>

namespace dshell {

enum class PeakShape { Rectangle, Gaussian, Triangle };

const char *to_string(PeakShape shape);
PeakShape parse_peak_shape(const std::string &name);

// Rectangle: lambda / (2w) on [R - w, R + w].
// Triangle:  lambda (w - |r - R|) / w^2 on [R - w, R + w].
// Gaussian:  standard deviation w / 8, truncated at 8 standard deviations and rescaled
//            to integrate to lambda.
// All three are supported on [R - w, R + w].
struct PeakProfile {
  PeakShape shape = PeakShape::Rectangle;
  double R = 1.0;
  double width = 1e-3;
  double lambda = 0.0;

  double support_radius() const;
  double operator()(double r) const;
  // The profile formula with |r - R| clamped to the support: the one-sided limit at the
  // edges, for integrating piecewise.
  double inside(double r) const;
  // Points inside the support where V is not smooth.
  std::vector<double> breakpoints() const;
  // Throws InvalidInput for width <= 0 or support reaching r <= 0.
  void validate() const;
};

// Adaptive Gauss-Kronrod quadrature of the profile over its support.
double profile_integral(const PeakProfile &p);

// Real form of exp(-i lambda sigma_y).
Mat2 delta_transfer(double lambda);

struct TransferResult {
  Mat2 T;
  Mat2 target;
  double deviation = 0.0; // max-norm of T - target
  double width = 0.0;
};

// Transfer matrix from r_from to r_to (columns integrated from the identity) with an
// adaptive Dormand-Prince 5(4) pair at absolute and relative tolerance 1e-12.
// Throws NumericalError when the step size underflows.
Mat2 transfer_between(const OscillatorParams &osc, const PeakProfile &p, double E, double r_from,
                      double r_to);
TransferResult transfer_matrix(const OscillatorParams &osc, const PeakProfile &p, double E);

struct ConvergenceStudy {
  std::vector<TransferResult> results;
  double slope = 0.0;        // least-squares slope of log deviation against log width
  Mat2 extrapolated;         // polynomial extrapolation of T to zero width
  double extrapolated_deviation = 0.0;
};

// widths strictly decreasing, at least 4. The OpenMP and serial paths give identical results.
ConvergenceStudy convergence_study(const OscillatorParams &osc, PeakShape shape, double R,
                                   double lambda, double E, const std::vector<double> &widths,
                                   bool parallel = true);

// Widths used by default: 2e-2, 1e-2, 5e-3, 2.5e-3 (units of 1/m).
std::vector<double> default_widths();

} // namespace dshell
