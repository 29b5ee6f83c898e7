#include "dshell/specfun.hpp"

#include "dshell/errors.hpp"
#include "specfun_detail.hpp"

#include <math.h> // lgamma_r

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace dshell::specfun {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLnPi = 1.14472988584940017414;
constexpr double kSeriesTol = 1e-17;
constexpr double kRescale = 1e200;
const double kLnRescale = std::log(kRescale);

std::string describe(const char *what, double a, double b, double z) {
  std::ostringstream os;
  os.precision(17);
  os << what << " (a=" << a << ", b=" << b << ", z=" << z << ")";
  return os.str();
}

double distance_to_nonpositive_integer(double x) {
  if (x > 0.5)
    return x;
  return std::abs(x - std::round(x));
}

// Combine exp(l1)*v1 + exp(l2)*v2 on a common scale.
ScaledPair add_scaled(const ScaledPair &p, const ScaledPair &q) {
  if (p.value == 0.0 && p.deriv == 0.0)
    return q;
  if (q.value == 0.0 && q.deriv == 0.0)
    return p;
  const double scale = std::max(p.log_scale, q.log_scale);
  const double fp = std::exp(p.log_scale - scale);
  const double fq = std::exp(q.log_scale - scale);
  ScaledPair out{scale, p.value * fp + q.value * fq, p.deriv * fp + q.deriv * fq};
  out.normalize();
  return out;
}

} // namespace

void ScaledPair::normalize() {
  const double m = std::max(std::abs(value), std::abs(deriv));
  if (m == 0.0 || !std::isfinite(m))
    return;
  const int e = std::ilogb(m);
  value = std::scalbn(value, -e);
  deriv = std::scalbn(deriv, -e);
  log_scale += e * std::log(2.0);
}

LogValue ScaledPair::log_value() const {
  if (value == 0.0)
    return {};
  return {log_scale + std::log(std::abs(value)), value > 0 ? 1 : -1};
}

void require_clear_of_gamma_pole(double x, const char *what) {
  if (x <= 0.5 && distance_to_nonpositive_integer(x) < kPoleProximity) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": Gamma argument " << x << " is within " << kPoleProximity << " of a pole";
    throw PoleError(os.str());
  }
}

double sin_pi(double x) {
  // reduce to r in [-1, 1]; x - 2*round(x/2) is exact for |x| < 2^52
  double r = x - 2.0 * std::round(0.5 * x);
  if (r > 0.5)
    r = 1.0 - r;
  else if (r < -0.5)
    r = -1.0 - r;
  return std::sin(kPi * r);
}

LogValue ln_gamma(double x) {
  if (std::isnan(x))
    throw InvalidInput("ln_gamma: NaN argument");
  if (x <= 0.0 && distance_to_nonpositive_integer(x) < kGammaPoleTolerance) {
    std::ostringstream os;
    os.precision(17);
    os << "ln_gamma: argument " << x << " is at a pole of Gamma";
    throw PoleError(os.str());
  }
  if (x < 0.5) {
    // reflection keeps full relative accuracy next to the poles
    const double s = sin_pi(x);
    int sg = 1;
    const double lg = lgamma_r(1.0 - x, &sg);
    return {kLnPi - std::log(std::abs(s)) - lg, s > 0 ? 1 : -1};
  }
  int sg = 1;
  const double lg = lgamma_r(x, &sg);
  return {lg, 1};
}

LogValue rgamma(double x) {
  if (x <= 0.0 && x == std::round(x))
    return {};
  if (x < 0.5) {
    const double s = sin_pi(x);
    if (s == 0.0)
      return {};
    int sg = 1;
    const double lg = lgamma_r(1.0 - x, &sg);
    return {std::log(std::abs(s)) + lg - kLnPi, s > 0 ? 1 : -1};
  }
  int sg = 1;
  return {-lgamma_r(x, &sg), 1};
}

namespace detail {

Attempt series_m(double a, double b, double z) {
  Attempt out;
  if (z == 0.0) {
    out.pair = {0.0, 1.0, a / b};
    out.ok = true;
    return out;
  }
  double term = 1.0, sum = 1.0, abs_sum = 1.0;
  double dsum = 0.0, dabs = 0.0; // sum k t_k, derivative is dsum / z
  double scale = 0.0;
  const double abs_a = std::abs(a);
  constexpr int kMaxTerms = 20000;
  bool converged = false;
  for (int k = 0; k < kMaxTerms; ++k) {
    term *= (a + k) / (b + k) * z / (k + 1);
    const double kk = k + 1;
    sum += term;
    abs_sum += std::abs(term);
    dsum += kk * term;
    dabs += kk * std::abs(term);
    if (term == 0.0) {
      converged = true; // a is a nonpositive integer: polynomial
      break;
    }
    if (abs_sum > kRescale) {
      term /= kRescale;
      sum /= kRescale;
      abs_sum /= kRescale;
      dsum /= kRescale;
      dabs /= kRescale;
      scale += kLnRescale;
    }
    if (kk > abs_a && kk > z - b && std::abs(term) <= kSeriesTol * std::abs(sum) &&
        kk * std::abs(term) <= kSeriesTol * std::abs(dsum)) {
      converged = true;
      break;
    }
  }
  if (!converged || sum == 0.0)
    return out;
  out.pair = {scale, sum, dsum / z};
  out.pair.normalize();
  const double cond_v = abs_sum / std::abs(sum);
  const double cond_d = dsum != 0.0 ? dabs / std::abs(dsum) : 1.0;
  out.cond = std::max(cond_v, cond_d);
  out.ok = out.cond <= kMaxCancellation;
  return out;
}

Attempt asymptotic_u(double a, double b, double z) {
  Attempt out;
  const double c = a - b + 1.0;
  const double bump = std::abs(a) + std::abs(c) + 2.0;
  double term = 1.0, sum = 1.0, abs_sum = 1.0;
  double dsum = -a, dabs = std::abs(a); // sum of term * (-(a + s)); derivative is dsum / z
  constexpr int kMaxTerms = 2000;
  bool converged = false;
  for (int s = 0; s < kMaxTerms; ++s) {
    const double ratio = (a + s) * (c + s) / ((s + 1) * (-z));
    term *= ratio;
    if (term == 0.0) {
      converged = true; // terminating: a or a-b+1 is a nonpositive integer
      break;
    }
    const double dterm = -term * (a + s + 1);
    sum += term;
    abs_sum += std::abs(term);
    dsum += dterm;
    dabs += std::abs(dterm);
    if (std::abs(term) <= kSeriesTol * std::abs(sum) &&
        std::abs(dterm) <= kSeriesTol * std::max(std::abs(dsum), std::abs(sum))) {
      converged = true;
      break;
    }
    if (std::abs(ratio) >= 1.0 && s + 1 > bump)
      return out; // terms have started to grow again: divergent tail reached
    if (!std::isfinite(abs_sum))
      return out;
  }
  if (!converged || sum == 0.0)
    return out;
  out.pair = {-a * std::log(z), sum, dsum / z};
  out.pair.normalize();
  const double cond_v = abs_sum / std::abs(sum);
  const double cond_d = dsum != 0.0 ? dabs / std::abs(dsum) : 1.0;
  out.cond = std::max(cond_v, cond_d);
  out.ok = out.cond <= kMaxCancellation;
  return out;
}

Attempt connection_u(double a, double b, double z) {
  Attempt out;
  if (std::abs(b - std::round(b)) < 1e-8)
    return out;
  // U = Gamma(1-b)/Gamma(a-b+1) M(a,b,z) + Gamma(b-1)/Gamma(a) z^{1-b} M(a-b+1, 2-b, z)
  const Attempt m1 = series_m(a, b, z);
  const Attempt m2 = series_m(a - b + 1.0, 2.0 - b, z);
  if (!m1.ok || !m2.ok)
    return out;

  ScaledPair t1, t2;
  const LogValue r1 = rgamma(a - b + 1.0);
  if (r1.sign != 0) {
    const LogValue g1 = ln_gamma(1.0 - b);
    t1 = m1.pair;
    t1.log_scale += g1.log_abs + r1.log_abs;
    const int s = g1.sign * r1.sign;
    t1.value *= s;
    t1.deriv *= s;
  }
  const LogValue r2 = rgamma(a);
  if (r2.sign != 0) {
    const LogValue g2 = ln_gamma(b - 1.0);
    // d/dz [z^{1-b} M2] = z^{1-b} [M2' + (1-b) M2 / z]
    t2 = m2.pair;
    t2.deriv = m2.pair.deriv + (1.0 - b) * m2.pair.value / z;
    t2.log_scale += g2.log_abs + r2.log_abs + (1.0 - b) * std::log(z);
    const int s = g2.sign * r2.sign;
    t2.value *= s;
    t2.deriv *= s;
  }
  ScaledPair u = add_scaled(t1, t2);
  if (u.value == 0.0)
    return out;
  // cancellation between the two terms, measured against the result
  const double scale = u.log_scale;
  const double mag_v = std::abs(t1.value) * std::exp(t1.log_scale - scale) +
                       std::abs(t2.value) * std::exp(t2.log_scale - scale);
  const double mag_d = std::abs(t1.deriv) * std::exp(t1.log_scale - scale) +
                       std::abs(t2.deriv) * std::exp(t2.log_scale - scale);
  const double cond_v = mag_v / std::abs(u.value);
  const double cond_d = u.deriv != 0.0 ? mag_d / std::abs(u.deriv) : 1.0;
  out.pair = u;
  out.cond = std::max({cond_v, cond_d, m1.cond, m2.cond});
  out.ok = std::max(cond_v, cond_d) * std::max(m1.cond, m2.cond) <= 10 * kMaxCancellation;
  return out;
}

ScaledPair continue_kummer(double a, double b, double z_from, ScaledPair start, double z_to) {
  constexpr int kMaxTerms = 400;
  constexpr double kMaxStepCond = 64.0;
  double z = z_from;
  ScaledPair state = start;
  state.normalize();
  const double dir = z_to > z_from ? 1.0 : -1.0;
  double h_try = dir * std::min(0.5 * z, 1.0);
  int steps = 0;
  while (z != z_to) {
    if (++steps > 2000000)
      throw ConvergenceError(describe("Kummer continuation exceeded step budget", a, b, z));
    double h = h_try;
    const double remaining = z_to - z;
    if (std::abs(h) > 0.5 * z)
      h = dir * 0.5 * z;
    bool last = false;
    if (std::abs(h) >= std::abs(remaining)) {
      h = remaining;
      last = true;
    }
    // Taylor coefficients scaled by h^k:
    // d_{k+2} = [(k + a) d_k h^2 - (k+1)(k + b - z) d_{k+1} h] / (z (k+1)(k+2))
    double d0 = state.value, d1 = state.deriv * h;
    double sum = d0 + d1, dsum = d1;
    double abs_v = std::abs(d0) + std::abs(d1), abs_d = std::abs(d1);
    bool converged = false;
    for (int k = 0; k < kMaxTerms; ++k) {
      const double d2 =
          ((k + a) * d0 * h * h - (k + 1.0) * (k + b - z) * d1 * h) / (z * (k + 1.0) * (k + 2.0));
      sum += d2;
      dsum += (k + 2.0) * d2;
      abs_v += std::abs(d2);
      abs_d += (k + 2.0) * std::abs(d2);
      if (k > 2 && std::abs(d1) + std::abs(d2) <= kSeriesTol * std::max(std::abs(sum), std::abs(dsum))) {
        converged = true;
        break;
      }
      d0 = d1;
      d1 = d2;
    }
    // cancellation relative to the size of the new state (value and h * derivative)
    const double norm = std::abs(sum) + std::abs(dsum);
    const double cond = norm > 0.0 ? (abs_v + abs_d) / norm : HUGE_VAL;
    if (!converged || !(cond <= kMaxStepCond)) {
      h_try = 0.5 * h;
      if (std::abs(h_try) < 1e-9 * std::max(1.0, z))
        throw ConvergenceError(describe("Kummer continuation step underflow", a, b, z));
      continue;
    }
    state.value = sum;
    state.deriv = dsum / h;
    state.normalize();
    z = last ? z_to : z + h;
    // loosen the step when the expansion was cheap and well conditioned
    h_try = cond < 0.25 * kMaxStepCond ? 1.5 * h : h;
  }
  return state;
}

} // namespace detail

LogValue kummer_m(const HypergeoArgs &args) { return kummer_m_pair(args).log_value(); }

ScaledPair kummer_m_pair(const HypergeoArgs &args) {
  const double a = args.a, b = args.b, z = args.z;
  if (!(z >= 0.0) || !std::isfinite(z))
    throw InvalidInput(describe("kummer_m: z must be finite and >= 0", a, b, z));
  if (b <= 0.0 && b == std::round(b))
    throw InvalidInput(describe("kummer_m: b is a nonpositive integer", a, b, z));
  detail::Attempt direct = detail::series_m(a, b, z);
  if (direct.ok)
    return direct.pair;
  // start closer to the origin, where the series cannot cancel, and continue outwards
  double z_start = z;
  detail::Attempt start;
  for (int i = 0; i < 60; ++i) {
    z_start *= 0.25;
    start = detail::series_m(a, b, z_start);
    if (start.ok)
      break;
  }
  if (!start.ok)
    throw ConvergenceError(describe("kummer_m: no well-conditioned starting point", a, b, z));
  return detail::continue_kummer(a, b, z_start, start.pair, z);
}

LogValue kummer_u(const HypergeoArgs &args) { return kummer_u_pair(args).log_value(); }

ScaledPair kummer_u_pair(const HypergeoArgs &args) {
  const double a = args.a, b = args.b, z = args.z;
  if (!(z > 0.0) || !std::isfinite(z))
    throw InvalidInput(describe("kummer_u: z must be finite and > 0", a, b, z));
  if (b <= 0.0 && b == std::round(b))
    throw InvalidInput(describe("kummer_u: b is a nonpositive integer", a, b, z));

  const detail::Attempt asym = detail::asymptotic_u(a, b, z);
  if (asym.ok)
    return asym.pair;
  const detail::Attempt conn = detail::connection_u(a, b, z);
  if (conn.ok)
    return conn.pair;

  // integrate inwards from a point where the expansion at infinity is accurate;
  // U dominates the other solution in that direction
  double z0 = std::max(1.25 * z, 8.0);
  detail::Attempt far;
  for (int i = 0; i < 80; ++i) {
    far = detail::asymptotic_u(a, b, z0);
    if (far.ok)
      break;
    z0 *= 1.5;
  }
  if (!far.ok)
    throw ConvergenceError(describe("kummer_u: asymptotic region not reached", a, b, z));
  return detail::continue_kummer(a, b, z0, far.pair, z);
}

namespace {

// e^{-z/2} z^{nu + 1/2} applied to a Kummer pair.
ScaledPair to_whittaker(const ScaledPair &kummer, double nu, double z) {
  ScaledPair out;
  out.log_scale = kummer.log_scale - 0.5 * z + (nu + 0.5) * std::log(z);
  out.value = kummer.value;
  out.deriv = (-0.5 + (nu + 0.5) / z) * kummer.value + kummer.deriv;
  out.normalize();
  return out;
}

void require_positive_z(const char *what, double mu, double nu, double z) {
  if (!(z > 0.0) || !std::isfinite(z)) {
    std::ostringstream os;
    os << what << ": z must be finite and > 0 (mu=" << mu << ", nu=" << nu << ", z=" << z << ")";
    throw InvalidInput(os.str());
  }
}

} // namespace

ScaledPair whittaker_m_pair(double mu, double nu, double z) {
  require_positive_z("whittaker_m", mu, nu, z);
  return to_whittaker(kummer_m_pair({nu - mu + 0.5, 2.0 * nu + 1.0, z}), nu, z);
}

ScaledPair whittaker_w_pair(double mu, double nu, double z) {
  require_positive_z("whittaker_w", mu, nu, z);
  return to_whittaker(kummer_u_pair({nu - mu + 0.5, 2.0 * nu + 1.0, z}), nu, z);
}

LogValue whittaker_m(double mu, double nu, double z) {
  if (z == 0.0) {
    if (nu + 0.5 <= 0.0)
      throw InvalidInput("whittaker_m: z = 0 requires nu > -1/2");
    return {}; // z^{nu+1/2} -> 0
  }
  return whittaker_m_pair(mu, nu, z).log_value();
}

LogValue whittaker_w(double mu, double nu, double z) {
  return whittaker_w_pair(mu, nu, z).log_value();
}

double whittaker_m_dz(double mu, double nu, double z) {
  return whittaker_m_pair(mu, nu, z).linear_deriv();
}

double whittaker_w_dz(double mu, double nu, double z) {
  return whittaker_w_pair(mu, nu, z).linear_deriv();
}

} // namespace dshell::specfun
