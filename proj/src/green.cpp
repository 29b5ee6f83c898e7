#include "dshell/green.hpp"

#include "dshell/errors.hpp"
#include "dshell/specfun.hpp"

#include <cmath>
#include <sstream>

namespace dshell {

void OscillatorParams::validate() const {
  std::ostringstream os;
  if (!(m > 0.0) || !std::isfinite(m))
    os << "mass m must be finite and > 0 (got " << m << ")";
  else if (!(omega > 0.0) || !std::isfinite(omega))
    os << "omega must be finite and > 0 (got " << omega << ")";
  else if (kappa == 0)
    os << "kappa must be a nonzero integer";
  else
    return;
  throw InvalidInput(os.str());
}

GreenParams green_params(const OscillatorParams &osc, double E) {
  const double x = (E * E - osc.m * osc.m) / (osc.m * osc.omega) - 2.0 * osc.kappa;
  return {0.25 * (x + 1.0), 0.25 * (x - 1.0), 0.5 * std::abs(osc.kappa + 0.5),
          0.5 * std::abs(osc.kappa - 0.5)};
}

namespace {

// f(r) = e^{log_scale} value, f'(r) = e^{log_scale} deriv, for f = M(z)/sqrt(r) or W(z)/sqrt(r).
struct Radial {
  double log_scale = 0.0;
  double value = 0.0;
  double deriv = 0.0;
};

Radial to_radial(const specfun::ScaledPair &p, double mw, double r) {
  return {p.log_scale - 0.5 * std::log(r), p.value, p.deriv * 2.0 * mw * r - p.value / (2.0 * r)};
}

struct Channel {
  double mu = 0.0, nu = 0.0;
  double log_amp = 0.0; // log|Gamma(nu - mu + 1/2) / (2 m omega Gamma(2 nu + 1))|
  int sign = 1;
};

Channel make_channel(const OscillatorParams &osc, double mu, double nu) {
  const double x = nu - mu + 0.5;
  specfun::require_clear_of_gamma_pole(x, "green");
  const auto num = specfun::ln_gamma(x);
  const auto den = specfun::ln_gamma(2.0 * nu + 1.0);
  return {mu, nu, num.log_abs - den.log_abs - std::log(2.0 * osc.m * osc.omega),
          num.sign * den.sign};
}

// The two radial factors of one channel, resolved for first argument r.
struct Resolved {
  Radial first;  // the factor that depends on r
  Radial second; // the factor that depends on r'
};

Resolved resolve(const OscillatorParams &osc, const Channel &ch, double r, double r_prime,
                 bool r_is_outer) {
  const double mw = osc.m * osc.omega;
  const double r_in = r_is_outer ? r_prime : r;
  const double r_out = r_is_outer ? r : r_prime;
  const Radial in = to_radial(specfun::whittaker_m_pair(ch.mu, ch.nu, mw * r_in * r_in), mw, r_in);
  const Radial out = to_radial(specfun::whittaker_w_pair(ch.mu, ch.nu, mw * r_out * r_out), mw, r_out);
  return r_is_outer ? Resolved{out, in} : Resolved{in, out};
}

void require_positive_radii(double r, double r_prime) {
  if (!(r > 0.0) || !(r_prime > 0.0) || !std::isfinite(r) || !std::isfinite(r_prime)) {
    std::ostringstream os;
    os << "green: radii must be finite and > 0 (r=" << r << ", r'=" << r_prime << ")";
    throw InvalidInput(os.str());
  }
}

void require_regular_prefactor(const OscillatorParams &osc, double E) {
  if (std::abs(E - osc.m) < kSingularPrefactorTolerance ||
      std::abs(E + osc.m) < kSingularPrefactorTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "green: E = " << E << " is within " << kSingularPrefactorTolerance
       << " of +/-m, where the off-diagonal prefactor is singular";
    throw SingularPrefactorError(os.str());
  }
}

bool outer_first(double r, double r_prime, Side side) {
  return r > r_prime || (r == r_prime && side == Side::Above);
}

double diag_entry(const Channel &ch, double e_factor, const Resolved &f) {
  const double mant = e_factor * ch.sign * f.first.value * f.second.value;
  return mant * std::exp(ch.log_amp + f.first.log_scale + f.second.log_scale);
}

// amp * (s d/dr + gamma) [first(r) second(r')], s = +-1; the (E +- m) factor is cancelled.
double offdiag_entry(const Channel &ch, double s, double gamma, const Resolved &f) {
  const double mant = ch.sign * (s * f.first.deriv + gamma * f.first.value) * f.second.value;
  return mant * std::exp(ch.log_amp + f.first.log_scale + f.second.log_scale);
}

struct Channels {
  Channel plus, minus;
};

Channels make_channels(const OscillatorParams &osc, double E) {
  osc.validate();
  const auto gp = green_params(osc, E);
  return {make_channel(osc, gp.mu_plus, gp.nu_plus), make_channel(osc, gp.mu_minus, gp.nu_minus)};
}

} // namespace

DiagEntries green_diag(const OscillatorParams &osc, double E, double r, double r_prime) {
  require_positive_radii(r, r_prime);
  const auto ch = make_channels(osc, E);
  // resolve on (r_<, r_>) so that swapping the arguments is bitwise symmetric
  const double lo = std::min(r, r_prime), hi = std::max(r, r_prime);
  const auto fp = resolve(osc, ch.plus, lo, hi, false);
  const auto fm = resolve(osc, ch.minus, lo, hi, false);
  return {diag_entry(ch.plus, E + osc.m, fp), diag_entry(ch.minus, E - osc.m, fm)};
}

OffDiagEntries green_offdiag(const OscillatorParams &osc, double E, double r, double r_prime,
                             Side side) {
  require_positive_radii(r, r_prime);
  require_regular_prefactor(osc, E);
  const auto ch = make_channels(osc, E);
  const bool outer = outer_first(r, r_prime, side);
  const double g = osc.gamma(r);
  const auto fp = resolve(osc, ch.plus, r, r_prime, outer);
  const auto fm = resolve(osc, ch.minus, r, r_prime, outer);
  return {offdiag_entry(ch.minus, -1.0, g, fm), offdiag_entry(ch.plus, 1.0, g, fp)};
}

Mat2 green_matrix(const OscillatorParams &osc, double E, double r, double r_prime, Side side) {
  require_positive_radii(r, r_prime);
  require_regular_prefactor(osc, E);
  const auto ch = make_channels(osc, E);
  const bool outer = outer_first(r, r_prime, side);
  const double g = osc.gamma(r);
  const auto fp = resolve(osc, ch.plus, r, r_prime, outer);
  const auto fm = resolve(osc, ch.minus, r, r_prime, outer);
  return {diag_entry(ch.plus, E + osc.m, fp), offdiag_entry(ch.minus, -1.0, g, fm),
          offdiag_entry(ch.plus, 1.0, g, fp), diag_entry(ch.minus, E - osc.m, fm)};
}

bool green_admissible(const OscillatorParams &osc, double E) {
  if (std::abs(E - osc.m) < kSingularPrefactorTolerance ||
      std::abs(E + osc.m) < kSingularPrefactorTolerance)
    return false;
  const auto gp = green_params(osc, E);
  for (double x : {gp.nu_plus - gp.mu_plus + 0.5, gp.nu_minus - gp.mu_minus + 0.5}) {
    if (x <= 0.5 && std::abs(x - std::round(x)) < specfun::kPoleProximity)
      return false;
  }
  return std::isfinite(E);
}

} // namespace dshell
