#pragma once

// Radial Green matrix of the unperturbed Dirac oscillator,
//
//   [-i sigma_y d/dr + sigma_x gamma(r) + sigma_z m - E] G(r, r'; E) = delta(r - r'),
//   gamma(r) = kappa / r + m omega r,
//
// assembled from Whittaker functions of z = m omega r^2. The diagonal entries are
//
//   G_{+-+-}(r, r') = (E +- m) / (2 m omega) * Gamma(nu - mu + 1/2) / Gamma(2 nu + 1)
//                     * M_{mu,nu}(m omega r_<^2) W_{mu,nu}(m omega r_>^2) / sqrt(r r')
//
// with (mu, nu) = (mu_+, nu_+) or (mu_-, nu_-), and the off-diagonal entries follow from
//
//   G_{-+} = (d/dr + gamma) G_{++} / (E + m),   G_{+-} = (-d/dr + gamma) G_{--} / (E - m),
//
// the derivative acting on the first argument. Across r = r' the matrix jumps by
// i sigma_y = [[0, 1], [-1, 0]].

#include "dshell/mat2.hpp"

namespace dshell {

// m > 0, omega > 0, kappa a nonzero integer.
struct OscillatorParams {
  double m = 1.0;
  double omega = 1.0;
  int kappa = -1;

  // Throws InvalidInput.
  void validate() const;
  double gamma(double r) const { return kappa / r + m * omega * r; }
};

struct GreenParams {
  double mu_plus = 0.0;
  double mu_minus = 0.0;
  double nu_plus = 0.0;
  double nu_minus = 0.0;
};

// Which one-sided limit to take at r = r'. Above: r approaches r' from above, so
// the decaying factor carries the first argument.
enum class Side { Above, Below };

// |E -/+ m| below this refuses the off-diagonal entries.
inline constexpr double kSingularPrefactorTolerance = 1e-12;

GreenParams green_params(const OscillatorParams &osc, double E);

struct DiagEntries {
  double pp = 0.0;
  double mm = 0.0;
};

struct OffDiagEntries {
  double pm = 0.0;
  double mp = 0.0;
};

// Throws PoleError when Gamma(nu_+- - mu_+- + 1/2) is within specfun::kPoleProximity of
// a pole, InvalidInput for r, r' <= 0.
DiagEntries green_diag(const OscillatorParams &osc, double E, double r, double r_prime);

// Additionally throws SingularPrefactorError when |E -/+ m| < kSingularPrefactorTolerance.
OffDiagEntries green_offdiag(const OscillatorParams &osc, double E, double r, double r_prime,
                             Side side);

// [[G_{++}, G_{+-}], [G_{-+}, G_{--}]].
Mat2 green_matrix(const OscillatorParams &osc, double E, double r, double r_prime,
                  Side side = Side::Above);

// True when E is far enough from every Gamma pole and from +/-m for green_matrix to
// evaluate. Cheap; does not touch the Whittaker functions.
bool green_admissible(const OscillatorParams &osc, double E);

} // namespace dshell
