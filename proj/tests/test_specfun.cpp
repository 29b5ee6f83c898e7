#include <doctest.h>

#include "dshell/errors.hpp"
#include "dshell/fixtures.hpp"
#include "dshell/specfun.hpp"
#include "specfun_detail.hpp"

#include <cmath>
#include <fstream>
#include <random>

using namespace dshell;
using namespace dshell::specfun;

namespace {

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

const SpecfunFixture &example_fixture(const std::string &func) {
  for (const auto &fx : builtin_specfun_fixtures())
    if (fx.func == func && fx.tag == "example")
      return fx;
  throw std::runtime_error("missing example fixture " + func);
}

// five-point central difference
template <class F> double central_diff(F f, double x, double h) {
  return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h);
}

} // namespace

TEST_CASE("ln_gamma reference values and sign") {
  const auto one = ln_gamma(1.0);
  CHECK(one.log_abs == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(one.sign == 1);
  const auto half = ln_gamma(0.5);
  CHECK(rel(half.log_abs, 0.5723649429247001) < 1e-13);
  CHECK(half.sign == 1);
  const auto four = ln_gamma(4.0);
  CHECK(rel(four.log_abs, std::log(6.0)) < 1e-13);

  // Gamma(-0.5) = -2 sqrt(pi), Gamma(-1.5) = 4 sqrt(pi) / 3
  const auto m05 = ln_gamma(-0.5);
  CHECK(m05.sign == -1);
  CHECK(rel(m05.log_abs, std::log(2 * std::sqrt(M_PI))) < 1e-13);
  const auto m15 = ln_gamma(-1.5);
  CHECK(m15.sign == 1);
  CHECK(rel(m15.log_abs, std::log(4 * std::sqrt(M_PI) / 3)) < 1e-13);

  // relative accuracy next to a pole: Gamma(-3 + d) ~ -1/(6 d)
  const double x = -3.0 + 1e-9, d = x + 3.0;
  const auto near = ln_gamma(x);
  CHECK(near.sign == -1);
  CHECK(std::abs(near.log_abs - std::log(1.0 / (6.0 * d))) < 1e-8);

  CHECK_THROWS_AS(ln_gamma(0.0), PoleError);
  CHECK_THROWS_AS(ln_gamma(-2.0 + 1e-13), PoleError);
  CHECK_NOTHROW(ln_gamma(-2.0 + 1e-10));
}

TEST_CASE("rgamma passes smoothly through the poles") {
  CHECK(rgamma(-3.0).sign == 0);
  CHECK(rgamma(0.0).sign == 0);
  // 1/Gamma(-3 + d) ~ -6 d
  const double x = -3.0 + 1e-10, d = x + 3.0;
  const auto r = rgamma(x);
  CHECK(r.sign == -1);
  CHECK(rel(r.value(), -6.0 * d) < 1e-8);
  CHECK(rel(rgamma(5.0).value(), 1.0 / 24.0) < 1e-14);
}

TEST_CASE("kummer_m closed forms") {
  for (double a : {-3.7, 0.25, 1.0, 12.5})
    for (double b : {1.5, 2.5, 7.0})
      CHECK(kummer_m({a, b, 0.0}).value() == 1.0);

  CHECK(rel(kummer_m({1.0, 2.0, 1.0}).value(), std::exp(1.0) - 1.0) < 1e-13);

  for (double z = 0.01; z <= 50.0; z *= 1.37) {
    INFO("z = " << z);
    CHECK(rel(kummer_m({1.0, 2.0, z}).value(), std::expm1(z) / z) < 1e-11);
    CHECK(rel(kummer_m({1.0, 1.0, z}).value(), std::exp(z)) < 1e-11);
  }
}

TEST_CASE("kummer_m example against the arbitrary-precision oracle") {
  const auto &fx = example_fixture("kummer_m");
  CHECK(fx.p1 == 0.75);
  CHECK(relative_error(kummer_m({0.75, 1.5, 2.5}), fx.reference) < 1e-11);
}

TEST_CASE("kummer_u closed forms and asymptotics") {
  for (double b : {1.5, 2.5, 4.5})
    for (double z : {0.1, 1.0, 30.0, 350.0})
      CHECK(rel(kummer_u({0.0, b, z}).value(), 1.0) < 1e-14);

  const double z = 300.0, a = 1.25;
  const auto u = kummer_u({a, 1.5, z});
  CHECK(std::abs(std::exp(u.log_abs + a * std::log(z)) - 1.0) < 1e-2);

  const auto &fx = example_fixture("kummer_u");
  CHECK(relative_error(kummer_u({1.25, 2.5, 3.0}), fx.reference) < 1e-10);

  CHECK_THROWS_AS(kummer_u({1.0, 1.5, 0.0}), InvalidInput);
}

TEST_CASE("whittaker_m closed forms") {
  CHECK(rel(whittaker_m(0.0, 0.5, 2.0).value(), 2.0 * std::sinh(1.0)) < 1e-13);
  CHECK(whittaker_m(0.3, 0.25, 0.0).sign == 0);

  for (double z = 0.01; z <= 50.0; z *= 1.37) {
    INFO("z = " << z);
    CHECK(rel(whittaker_m(0.0, 0.5, z).value(), 2.0 * std::sinh(z / 2)) < 1e-11);
  }

  // small-argument behaviour z^{nu + 1/2}
  const double zs = 1e-8;
  for (double nu : {0.25, 0.75, 1.25}) {
    const double ratio = std::exp(whittaker_m(0.7, nu, zs).log_abs - (nu + 0.5) * std::log(zs));
    CHECK(std::abs(ratio - 1.0) < 1e-6);
  }

  const auto &fx = example_fixture("whittaker_m");
  CHECK(relative_error(whittaker_m(0.75, 0.25, 1.0), fx.reference) < 1e-11);
}

TEST_CASE("whittaker_w closed forms and asymptotics") {
  CHECK(rel(whittaker_w(0.0, 0.5, 3.0).value(), std::exp(-1.5)) < 1e-13);
  CHECK(rel(whittaker_w(0.0, 0.5, 3.0).value(), 0.2231301601484298) < 1e-10);
  for (double z = 0.01; z <= 50.0; z *= 1.37) {
    INFO("z = " << z);
    CHECK(rel(whittaker_w(0.0, 0.5, z).value(), std::exp(-z / 2)) < 1e-11);
  }

  // W e^{z/2} z^{-mu} -> 1
  const double z = 200.0, mu = 0.5;
  const auto w = whittaker_w(mu, 0.75, z);
  CHECK(std::abs(std::exp(w.log_abs + z / 2 - mu * std::log(z)) - 1.0) < 1e-2);

  const auto &fx = example_fixture("whittaker_w");
  CHECK(relative_error(whittaker_w(1.25, 0.75, 2.0), fx.reference) < 1e-9);
}

TEST_CASE("whittaker_w stays finite where its Gamma prefactor has a pole") {
  // 1/2 + nu - mu = -2: U(-2, b, z) is a polynomial
  const double nu = 0.25, mu = nu + 2.5, b = 2 * nu + 1, z = 1.7;
  // U(-n, b, z) = (-1)^n (b)_n M(-n, b, z)
  const double m = 1.0 - 2.0 / b * z + (-2.0) * (-1.0) / (b * (b + 1)) * z * z / 2.0;
  const double u = b * (b + 1) * m;
  const double w = std::exp(-z / 2) * std::pow(z, nu + 0.5) * u;
  CHECK(rel(whittaker_w(mu, nu, z).value(), w) < 1e-12);

  CHECK_THROWS_AS(require_clear_of_gamma_pole(-2.0 + 5e-7, "test"), PoleError);
  CHECK_NOTHROW(require_clear_of_gamma_pole(-2.0 + 5e-6, "test"));
  CHECK_NOTHROW(require_clear_of_gamma_pole(1.0, "test"));
}

TEST_CASE("analytic z-derivatives") {
  CHECK(rel(whittaker_m_dz(0.0, 0.5, 2.0), std::cosh(1.0)) < 1e-12);
  CHECK(rel(whittaker_m_dz(0.0, 0.5, 2.0), 1.5430806348152437) < 1e-10);
  CHECK(rel(whittaker_w_dz(0.0, 0.5, 3.0), -0.1115650800742149) < 1e-10);

  const auto fm = [](double z) { return whittaker_m(0.75, 0.25, z).value(); };
  CHECK(rel(whittaker_m_dz(0.75, 0.25, 1.0), central_diff(fm, 1.0, 1e-3)) < 1e-8);
  // the plain central difference quoted for this case, h = 1e-6 z
  const double h = 1e-6;
  CHECK(rel(whittaker_m_dz(0.75, 0.25, 1.0), (fm(1.0 + h) - fm(1.0 - h)) / (2 * h)) < 1e-8);
}

TEST_CASE("derivative consistency over the physical parameter range") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> mu_d(-3.0, 12.0), z_d(0.05, 60.0);
  const double nus[] = {0.25, 0.75, 1.25};
  for (int i = 0; i < 60; ++i) {
    const double mu = mu_d(rng), nu = nus[i % 3], z = z_d(rng);
    INFO("mu=" << mu << " nu=" << nu << " z=" << z);
    const double h = 1e-3 * std::min(z, 5.0);
    // evaluate everything on the log scale of the centre point
    const auto m0 = whittaker_m_pair(mu, nu, z);
    const auto fm = [&](double x) {
      const auto p = whittaker_m_pair(mu, nu, x);
      return p.value * std::exp(p.log_scale - m0.log_scale);
    };
    const double fd_m = central_diff(fm, z, h);
    CHECK(std::abs(fd_m - m0.deriv) <= 1e-8 * std::max(std::abs(m0.deriv), std::abs(m0.value)));

    const auto w0 = whittaker_w_pair(mu, nu, z);
    const auto fw = [&](double x) {
      const auto p = whittaker_w_pair(mu, nu, x);
      return p.value * std::exp(p.log_scale - w0.log_scale);
    };
    const double fd_w = central_diff(fw, z, h);
    CHECK(std::abs(fd_w - w0.deriv) <= 1e-8 * std::max(std::abs(w0.deriv), std::abs(w0.value)));
  }
}

TEST_CASE("log scaling reproduces direct summation where it does not overflow") {
  for (double a : {-4.5, -0.3, 0.8, 3.2})
    for (double b : {1.5, 2.5})
      for (double z : {0.5, 3.0, 12.0}) {
        double term = 1.0, sum = 1.0;
        for (int k = 0; k < 400; ++k) {
          term *= (a + k) / (b + k) * z / (k + 1);
          sum += term;
        }
        INFO("a=" << a << " b=" << b << " z=" << z);
        CHECK(rel(kummer_m({a, b, z}).value(), sum) < 1e-11);
      }
}

TEST_CASE("evaluation schemes agree where their domains overlap") {
  using namespace dshell::specfun::detail;
  // series vs outward continuation for M
  for (double a : {-3.3, -0.6, 2.2})
    for (double z : {4.0, 9.0}) {
      const auto direct = series_m(a, 2.5, z);
      REQUIRE(direct.ok);
      const auto start = series_m(a, 2.5, 0.1);
      const auto cont = continue_kummer(a, 2.5, 0.1, start.pair, z);
      CHECK(std::abs(cont.value * std::exp(cont.log_scale - direct.pair.log_scale) /
                         direct.pair.value -
                     1.0) < 1e-11);
    }
  // connection formula vs asymptotic expansion vs inward continuation for U
  for (double a : {-2.6, 0.7, 3.1})
    for (double b : {1.5, 2.5}) {
      const double z = 25.0;
      const auto asym = asymptotic_u(a, b, 80.0);
      REQUIRE(asym.ok);
      const auto cont = continue_kummer(a, b, 80.0, asym.pair, z);
      const auto conn = connection_u(a, b, z);
      INFO("a=" << a << " b=" << b << " cond=" << conn.cond);
      if (conn.ok)
        CHECK(std::abs(conn.pair.value * std::exp(conn.pair.log_scale - cont.log_scale) /
                           cont.value -
                       1.0) < 1e-9);
      const auto asym25 = asymptotic_u(a, b, z);
      if (asym25.ok)
        CHECK(std::abs(asym25.pair.value * std::exp(asym25.pair.log_scale - cont.log_scale) /
                           cont.value -
                       1.0) < 1e-11);
    }
}

TEST_CASE("oracle equivalence on the pseudo-random grid") {
  std::ifstream in(DSHELL_FIXTURES);
  REQUIRE(in.good());
  const auto fixtures = parse_specfun_fixtures(in);
  REQUIRE(fixtures.size() == builtin_specfun_fixtures().size());
  int checked = 0;
  double worst = 0.0;
  for (const auto &fx : fixtures) {
    const auto ours = evaluate_fixture(fx);
    const double err = relative_error(ours, fx.reference);
    INFO(fx.func << "(" << fx.p1 << ", " << fx.p2 << ", " << fx.z << "): log ours "
                 << ours.log_abs << " ref " << fx.reference.log_abs);
    CHECK(err <= 1e-9);
    worst = std::max(worst, err);
    ++checked;
  }
  MESSAGE("fixtures checked: " << checked << ", worst relative error " << worst);
}
