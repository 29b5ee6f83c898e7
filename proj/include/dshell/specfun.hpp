#pragma once

// Real-argument special functions for the Dirac-oscillator Green matrix:
// log-Gamma, Kummer M and U, Whittaker M and W and their z-derivatives.
//
// Whittaker functions grow or decay like exp(+/-z/2) and the Green matrix
// multiplies one of each, so every value is carried as a log-magnitude and a
// sign (LogValue) or as a common log scale with a value/derivative mantissa
// (ScaledPair). Nothing here is exponentiated unless the caller asks for it.

#include <cmath>
#include <limits>

namespace dshell::specfun {

// Parameter distance to a pole of Gamma(1/2 + nu - mu) below which the Green
// matrix refuses to evaluate; such points are the unperturbed oscillator
// levels and are handled by the caller.
inline constexpr double kPoleProximity = 1e-6;

// ln_gamma refuses arguments this close to a nonpositive integer.
inline constexpr double kGammaPoleTolerance = 1e-12;

// |x| = exp(log_abs), sign in {-1, 0, +1}; sign 0 means exactly zero.
struct LogValue {
  double log_abs = -std::numeric_limits<double>::infinity();
  int sign = 0;

  double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_abs); }
};

// f = exp(log_scale) * value, f' = exp(log_scale) * deriv.
struct ScaledPair {
  double log_scale = 0.0;
  double value = 0.0;
  double deriv = 0.0;

  LogValue log_value() const;
  double linear_value() const { return std::exp(log_scale) * value; }
  double linear_deriv() const { return std::exp(log_scale) * deriv; }
  // Fold the larger mantissa magnitude into log_scale.
  void normalize();
};

struct HypergeoArgs {
  double a = 0.0;
  double b = 1.0;
  double z = 0.0;
};

// log|Gamma(x)| and sign(Gamma(x)). Throws PoleError within kGammaPoleTolerance
// of a nonpositive integer.
LogValue ln_gamma(double x);

// 1/Gamma(x); smooth through the poles of Gamma (returns sign 0 exactly there).
LogValue rgamma(double x);

// Confluent hypergeometric M(a, b, z) (Kummer's function, 1F1), z >= 0.
LogValue kummer_m(const HypergeoArgs &args);
ScaledPair kummer_m_pair(const HypergeoArgs &args);

// Confluent hypergeometric U(a, b, z) (Tricomi's function), z > 0.
LogValue kummer_u(const HypergeoArgs &args);
ScaledPair kummer_u_pair(const HypergeoArgs &args);

// M_{mu,nu}(z) = e^{-z/2} z^{nu+1/2} M(nu - mu + 1/2, 2 nu + 1, z).
LogValue whittaker_m(double mu, double nu, double z);
// W_{mu,nu}(z) = e^{-z/2} z^{nu+1/2} U(nu - mu + 1/2, 2 nu + 1, z). Finite for
// all mu; it reduces to a multiple of M_{mu,nu} where 1/2 + nu - mu is a
// nonpositive integer.
LogValue whittaker_w(double mu, double nu, double z);

// d/dz of the above, linear scale. z > 0.
double whittaker_m_dz(double mu, double nu, double z);
double whittaker_w_dz(double mu, double nu, double z);

// Value and z-derivative sharing one log scale. z > 0.
ScaledPair whittaker_m_pair(double mu, double nu, double z);
ScaledPair whittaker_w_pair(double mu, double nu, double z);

// Throws PoleError when x is within kPoleProximity of a nonpositive integer.
void require_clear_of_gamma_pole(double x, const char *what);

// sin(pi x) with exact argument reduction.
double sin_pi(double x);

} // namespace dshell::specfun
