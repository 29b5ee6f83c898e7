#include "dshell/verify.hpp"

#include "dshell/checks.hpp"
#include "dshell/errors.hpp"
#include "dshell/fixtures.hpp"
#include "dshell/limitcheck.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dshell {

namespace {

constexpr int kTuples = 20;

CheckResult jump_check(std::uint64_t seed) {
  CheckResult c{"jump", true, 0.0, 1e-8, 0, ""};
  for (const auto &t : green_check_tuples(seed, kTuples)) {
    c.max_error = std::max(c.max_error, jump_error(t));
    ++c.samples;
  }
  c.passed = c.max_error < c.tolerance;
  c.detail = "[G(R+,R) - G(R-,R)] - i sigma_y, max-norm";
  return c;
}

CheckResult ode_check(std::uint64_t seed) {
  CheckResult c{"ode", true, 0.0, 1e-6, 0, ""};
  for (const auto &t : green_check_tuples(seed, kTuples))
    for (double f : {0.8, 1.25}) {
      c.max_error = std::max(c.max_error, ode_residual(t, f * t.R));
      ++c.samples;
    }
  c.passed = c.max_error < c.tolerance;
  c.detail = "finite-difference residual of the defining equation at 0.8 R and 1.25 R";
  return c;
}

CheckResult specfun_check() {
  CheckResult c{"specfun", true, 0.0, 1e-9, 0, ""};
  for (const auto &fx : builtin_specfun_fixtures()) {
    const double err = relative_error(evaluate_fixture(fx), fx.reference);
    c.max_error = std::max(c.max_error, std::isfinite(err) ? err : 1e300);
    ++c.samples;
  }
  c.passed = c.max_error <= c.tolerance;
  c.detail = "relative error against the stored arbitrary-precision fixtures";
  return c;
}

CheckResult delta_check() {
  CheckResult c{"delta", true, 0.0, 1e-6, 0, ""};
  const PeakShape shapes[] = {PeakShape::Rectangle, PeakShape::Gaussian, PeakShape::Triangle};
  for (int kappa : {-1, 1})
    for (double E : {0.5, 1.5})
      for (double lambda : {M_PI / 6, M_PI / 4, M_PI / 2, -M_PI / 3}) {
        const OscillatorParams osc{1.0, 1.0, kappa};
        std::vector<Mat2> limits;
        for (auto s : shapes) {
          const auto st = convergence_study(osc, s, 1.0, lambda, E, default_widths());
          c.max_error = std::max(c.max_error, st.extrapolated_deviation);
          limits.push_back(st.extrapolated);
          ++c.samples;
        }
        for (std::size_t i = 1; i < limits.size(); ++i)
          c.max_error = std::max(c.max_error, (limits[i] - limits[0]).max_norm());
      }
  c.passed = c.max_error < c.tolerance;
  c.detail = "extrapolated transfer matrices against exp(-i lambda sigma_y) and across shapes";
  return c;
}

} // namespace

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto &c) { return c.passed; });
}

const std::vector<std::string> &verify_check_names() {
  static const std::vector<std::string> names{"jump", "ode", "specfun", "delta"};
  return names;
}

VerifyReport run_verify(std::uint64_t seed, const std::vector<std::string> &only) {
  const auto &names = verify_check_names();
  for (const auto &n : only)
    if (std::find(names.begin(), names.end(), n) == names.end())
      throw InvalidInput("unknown check '" + n + "' (jump, ode, specfun, delta)");
  VerifyReport r;
  r.seed = seed;
  const auto wanted = [&](const std::string &n) {
    return only.empty() || std::find(only.begin(), only.end(), n) != only.end();
  };
  if (wanted("jump"))
    r.checks.push_back(jump_check(seed));
  if (wanted("ode"))
    r.checks.push_back(ode_check(seed));
  if (wanted("specfun"))
    r.checks.push_back(specfun_check());
  if (wanted("delta"))
    r.checks.push_back(delta_check());
  return r;
}

} // namespace dshell
