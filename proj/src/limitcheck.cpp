#include "dshell/limitcheck.hpp"

#include "dshell/errors.hpp"
#include "parallel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace dshell {

namespace {

constexpr double kGaussCut = 8.0;
constexpr double kMinWidth = 1e-10;
constexpr double kTolerance = 1e-12;

using State = std::array<double, 4>; // columns of T: (T11, T21, T12, T22)

void check_oscillator(const OscillatorParams &osc) {
  if (osc.kappa == 0)
    throw InvalidInput("kappa must be a nonzero integer");
  if (!(osc.m >= 0.0) || !(osc.omega >= 0.0))
    throw InvalidInput("m and omega must be nonnegative");
}

} // namespace

const char *to_string(PeakShape shape) {
  switch (shape) {
  case PeakShape::Rectangle:
    return "rectangle";
  case PeakShape::Gaussian:
    return "gaussian";
  case PeakShape::Triangle:
    return "triangle";
  }
  return "?";
}

PeakShape parse_peak_shape(const std::string &name) {
  for (auto s : {PeakShape::Rectangle, PeakShape::Gaussian, PeakShape::Triangle})
    if (name == to_string(s))
      return s;
  throw InvalidInput("unknown peak shape '" + name + "' (rectangle, gaussian, triangle)");
}

double PeakProfile::support_radius() const {
  return width;
}

double PeakProfile::operator()(double r) const {
  if (std::abs(r - R) > support_radius())
    return 0.0;
  return inside(r);
}

double PeakProfile::inside(double r) const {
  const double x = std::min(std::abs(r - R), support_radius());
  switch (shape) {
  case PeakShape::Rectangle:
    return lambda / (2.0 * width);
  case PeakShape::Triangle:
    return lambda * (width - x) / (width * width);
  case PeakShape::Gaussian: {
    const double sigma = width / kGaussCut;
    const double norm = sigma * std::sqrt(2.0 * M_PI) * std::erf(kGaussCut / std::sqrt(2.0));
    return lambda / norm * std::exp(-0.5 * (x / sigma) * (x / sigma));
  }
  }
  return 0.0;
}

std::vector<double> PeakProfile::breakpoints() const {
  if (shape == PeakShape::Triangle)
    return {R};
  return {};
}

void PeakProfile::validate() const {
  if (!(width > 0.0) || !std::isfinite(width))
    throw InvalidInput("peak width must be positive");
  if (!std::isfinite(lambda))
    throw InvalidInput("peak strength must be finite");
  if (!(R - support_radius() > 0.0))
    throw InvalidInput("peak support must lie in r > 0");
}

double profile_integral(const PeakProfile &p) {
  p.validate();
  using boost::math::quadrature::gauss_kronrod;
  std::vector<double> cuts{p.R - p.support_radius()};
  for (double b : p.breakpoints())
    cuts.push_back(b);
  cuts.push_back(p.R + p.support_radius());
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
    sum += gauss_kronrod<double, 61>::integrate([&](double r) { return p.inside(r); }, cuts[i],
                                                cuts[i + 1], 15, 1e-15);
  return sum;
}

Mat2 delta_transfer(double lambda) { return exp_i_sigma_y(-lambda); }

Mat2 transfer_between(const OscillatorParams &osc, const PeakProfile &p, double E, double r_from,
                      double r_to) {
  check_oscillator(osc);
  p.validate();
  if (p.width < kMinWidth) {
    std::ostringstream os;
    os << "peak width " << p.width << " is below " << kMinWidth << ": step size underflow";
    throw NumericalError(os.str());
  }
  if (!(r_from > 0.0) || !(r_to > 0.0))
    throw InvalidInput("transfer interval must lie in r > 0");
  using namespace boost::numeric::odeint;

  bool in_support = false;
  const auto rhs = [&](const State &y, State &dy, double r) {
    const double g = osc.kappa / r + osc.m * osc.omega * r;
    const double e = E - (in_support ? p.inside(r) : 0.0);
    const double a12 = e - osc.m, a21 = -e - osc.m;
    for (int c = 0; c < 2; ++c) {
      const double f = y[2 * c], q = y[2 * c + 1];
      dy[2 * c] = g * f + a12 * q;
      dy[2 * c + 1] = a21 * f - g * q;
    }
  };

  std::vector<double> cuts{r_from};
  const double lo = std::min(r_from, r_to), hi = std::max(r_from, r_to);
  std::vector<double> inner{p.R - p.support_radius(), p.R + p.support_radius()};
  for (double b : p.breakpoints())
    inner.push_back(b);
  std::sort(inner.begin(), inner.end());
  if (r_to < r_from)
    std::reverse(inner.begin(), inner.end());
  for (double b : inner)
    if (b > lo && b < hi)
      cuts.push_back(b);
  cuts.push_back(r_to);

  State y{1.0, 0.0, 0.0, 1.0};
  auto stepper = make_controlled(kTolerance, kTolerance, runge_kutta_dopri5<State>());
  try {
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const double len = cuts[i + 1] - cuts[i];
      if (len == 0.0)
        continue;
      const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
      in_support = std::abs(mid - p.R) < p.support_radius();
      integrate_adaptive(stepper, rhs, y, cuts[i], cuts[i + 1], len * 1e-3);
    }
  } catch (const std::exception &e) {
    throw NumericalError(std::string("transfer integration failed: ") + e.what());
  }
  for (double v : y)
    if (!std::isfinite(v))
      throw NumericalError("transfer integration produced non-finite values");
  return {y[0], y[2], y[1], y[3]};
}

TransferResult transfer_matrix(const OscillatorParams &osc, const PeakProfile &p, double E) {
  p.validate();
  TransferResult out;
  out.T = transfer_between(osc, p, E, p.R - p.support_radius(), p.R + p.support_radius());
  out.target = delta_transfer(p.lambda);
  out.deviation = (out.T - out.target).max_norm();
  out.width = p.width;
  return out;
}

ConvergenceStudy convergence_study(const OscillatorParams &osc, PeakShape shape, double R,
                                   double lambda, double E, const std::vector<double> &widths,
                                   bool parallel) {
  if (widths.size() < 4)
    throw InvalidInput("convergence study needs at least 4 widths");
  for (std::size_t i = 0; i + 1 < widths.size(); ++i)
    if (!(widths[i + 1] < widths[i]))
      throw InvalidInput("convergence widths must be strictly decreasing");
  for (double w : widths)
    PeakProfile{shape, R, w, lambda}.validate();

  ConvergenceStudy st;
  st.results.resize(widths.size());
  const long n = static_cast<long>(widths.size());
  if (parallel) {
    ErrorSlot slot;
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i)
      slot.run([&] { st.results[i] = transfer_matrix(osc, {shape, R, widths[i], lambda}, E); });
    slot.rethrow();
  } else {
    for (long i = 0; i < n; ++i)
      st.results[i] = transfer_matrix(osc, {shape, R, widths[i], lambda}, E);
  }

  // least-squares slope in log-log
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto &r : st.results) {
    const double x = std::log(r.width), y = std::log(std::max(r.deviation, 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  st.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);

  // Neville extrapolation of each entry to width 0
  std::array<std::vector<double>, 4> tab;
  for (const auto &r : st.results) {
    tab[0].push_back(r.T.a11);
    tab[1].push_back(r.T.a12);
    tab[2].push_back(r.T.a21);
    tab[3].push_back(r.T.a22);
  }
  std::array<double, 4> limit{};
  for (int k = 0; k < 4; ++k) {
    auto p = tab[k];
    for (std::size_t level = 1; level < p.size(); ++level)
      for (std::size_t i = p.size() - 1; i >= level; --i) {
        const double wi = widths[i], wj = widths[i - level];
        p[i] = (wi * p[i - 1] - wj * p[i]) / (wi - wj);
      }
    limit[k] = p.back();
  }
  st.extrapolated = {limit[0], limit[1], limit[2], limit[3]};
  st.extrapolated_deviation = (st.extrapolated - delta_transfer(lambda)).max_norm();
  return st;
}

std::vector<double> default_widths() { return {2e-2, 1e-2, 5e-3, 2.5e-3}; }

} // namespace dshell
