#include <doctest.h>

#include "dshell/errors.hpp"
#include "dshell/levels.hpp"
#include "ode_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace dshell;

namespace {

const OscillatorParams kOsc{1.0, 1.0, -1};

std::vector<double> energies(const LevelList &l) {
  std::vector<double> out;
  for (const auto &r : l.levels)
    out.push_back(r.E);
  return out;
}

std::vector<double> criterion_one() {
  return {-std::sqrt(17.0), -std::sqrt(13.0), -3.0, -std::sqrt(5.0), 1.0,
          std::sqrt(5.0),   3.0,              std::sqrt(13.0), std::sqrt(17.0)};
}

bool near_any(double E, const std::vector<UnperturbedLevel> &ls, double tol) {
  return std::any_of(ls.begin(), ls.end(), [&](const auto &l) { return std::abs(l.E0 - E) < tol; });
}

} // namespace

TEST_CASE("unperturbed ladder for kappa = -1") {
  const auto ls = unperturbed_levels(kOsc, 4);
  const auto want = criterion_one();
  REQUIRE(ls.size() == want.size());
  for (std::size_t i = 0; i < ls.size(); ++i)
    CHECK(std::abs(ls[i].E0 - want[i]) < 1e-12);
  CHECK(std::none_of(ls.begin(), ls.end(), [](const auto &l) { return l.E0 == -1.0; }));
}

TEST_CASE("unperturbed ladder for kappa > 0 agrees with shooting") {
  const OscillatorParams osc{1.0, 1.0, 1};
  const auto ls = unperturbed_levels(osc, 1);
  REQUIRE(ls.size() == 4);
  CHECK(std::abs(ls[2].E0 - std::sqrt(7.0)) < 1e-12);
  CHECK(std::abs(ls[3].E0 - std::sqrt(11.0)) < 1e-12);
  for (const auto &l : ls)
    CHECK(oracle::regular_tail(osc, l.E0, 6.0) < 1e-3);
  // the regular solution of a non-level blows up
  CHECK(oracle::regular_tail(osc, std::sqrt(13.0), 6.0) > 1e3);
  CHECK(oracle::regular_tail(osc, std::sqrt(7.0) + 1e-3, 6.0) > 1e-3);
}

TEST_CASE("kappa = 0 is rejected") {
  CHECK_THROWS_AS(unperturbed_levels({1.0, 1.0, 0}, 3), InvalidInput);
  CHECK_THROWS_AS(find_levels({1.0, 1.0, 0}, ShellParams::make(1.0, 0.5), -6, 6), InvalidInput);
}

TEST_CASE("shell parameters reduce lambda to (-pi/2, pi/2]") {
  auto s = ShellParams::make(1.0, 3.0);
  CHECK(s.ell == 1);
  CHECK(std::abs(s.reduced_lambda - (3.0 - M_PI)) < 1e-15);
  CHECK(s.lambda == 3.0);
  s = ShellParams::make(1.0, M_PI / 2);
  CHECK(s.reduced_lambda == M_PI / 2);
  s = ShellParams::make(1.0, -M_PI / 2);
  CHECK(std::abs(s.reduced_lambda - M_PI / 2) < 1e-15);
  CHECK(ShellParams::make(1.0, 2 * M_PI).transparent());
  CHECK_THROWS_AS(ShellParams::make(0.0, 1.0), InvalidInput);
  CHECK_THROWS_AS(ShellParams::make(1.0, NAN), InvalidInput);
}

TEST_CASE("determinant at special couplings") {
  for (double E : {-2.7, 0.3, 1.9, 4.4}) {
    CHECK(std::abs(det_function(kOsc, ShellParams::make(1.0, 0.0), E) - 1.0) < 1e-14);
    CHECK(std::abs(det_function(kOsc, ShellParams::make(1.0, M_PI), E) + 1.0) < 1e-12);
    const double lam = 0.7;
    const Mat2 G = green_matrix(kOsc, E, 1.0, 1.0, Side::Above);
    CHECK(std::abs(det_function(kOsc, ShellParams::make(1.0, lam), E) -
                   (std::cos(lam) + std::sin(lam) * G.trace())) < 1e-12);
  }
}

TEST_CASE("lambda -> 0 recovers the unperturbed ladder") {
  for (int kappa : {-1, 1})
    for (double R : {0.3, 1.0}) {
      const OscillatorParams osc{1.0, 1.0, kappa};
      const auto got = find_levels(osc, ShellParams::make(R, 1e-9), -5, 5);
      const auto ladder = unperturbed_in_window(osc, -5.5, 5.5);
      INFO("kappa=" << kappa << " R=" << R);
      for (const auto &l : got.levels)
        CHECK(near_any(l.E, ladder, 1e-6));
      for (const auto &u : unperturbed_in_window(osc, -4.99, 4.99))
        CHECK(std::any_of(got.levels.begin(), got.levels.end(),
                          [&](const auto &l) { return std::abs(l.E - u.E0) < 1e-6; }));
      if (kappa == -1)
        for (double E0 : criterion_one())
          CHECK(std::any_of(got.levels.begin(), got.levels.end(),
                            [&](const auto &l) { return std::abs(l.E - E0) < 1e-6; }));
    }
}

TEST_CASE("lambda = 0 and lambda = pi return the unperturbed levels as transparent") {
  for (double lam : {0.0, M_PI}) {
    const auto got = find_levels(kOsc, ShellParams::make(1.0, lam), -6, 6);
    const auto want = unperturbed_in_window(kOsc, -6, 6);
    REQUIRE(got.levels.size() == want.size());
    for (std::size_t i = 0; i < want.size(); ++i) {
      CHECK(std::abs(got.levels[i].E - want[i].E0) < 1e-6);
      CHECK(got.levels[i].kind == LevelKind::Transparent);
    }
  }
}

TEST_CASE("roots agree with a dense sign-change scan") {
  const auto shell = ShellParams::make(1.0, M_PI / 4);
  const auto got = find_levels(kOsc, shell, -6, 6);
  const auto poles = unperturbed_in_window(kOsc, -6.5, 6.5);
  std::vector<double> cells;
  const double h = 1e-4;
  double prev_E = -6.0, prev_D = NAN;
  for (int i = 0; i <= 120000; ++i) {
    const double E = -6.0 + i * h;
    if (!green_admissible(kOsc, E) || std::abs(std::abs(E) - 1.0) < 1e-9) {
      prev_D = NAN;
      continue;
    }
    const double D = det_function(kOsc, shell, E);
    const bool pole_inside = std::any_of(poles.begin(), poles.end(), [&](const auto &p) {
      return p.E0 >= prev_E && p.E0 <= E;
    });
    if (!std::isnan(prev_D) && !pole_inside && (prev_D < 0) != (D < 0))
      cells.push_back(0.5 * (prev_E + E));
    prev_E = E;
    prev_D = D;
  }
  REQUIRE(cells.size() == got.levels.size());
  for (std::size_t i = 0; i < cells.size(); ++i)
    CHECK(std::abs(got.levels[i].E - cells[i]) < h);
}

TEST_CASE("exactly one level between consecutive unperturbed levels") {
  const auto got = energies(find_levels(kOsc, ShellParams::make(1.0, M_PI / 4), -6, 6));
  const auto poles = unperturbed_in_window(kOsc, -6, 6);
  for (std::size_t k = 0; k + 1 < poles.size(); ++k) {
    const auto n = std::count_if(got.begin(), got.end(), [&](double E) {
      return E > poles[k].E0 && E < poles[k + 1].E0;
    });
    INFO("between " << poles[k].E0 << " and " << poles[k + 1].E0);
    CHECK(n == 1);
  }
}

TEST_CASE("pi periodicity at pseudo-random tuples") {
  std::mt19937_64 rng(20260302);
  std::uniform_real_distribution<double> Rd(0.3, 3.0), Ld(-1.5, 1.5);
  const int kappas[] = {-2, -1, 1, 2};
  for (int t = 0; t < 10; ++t) {
    const OscillatorParams osc{1.0, 1.0, kappas[rng() % 4]};
    const double R = Rd(rng), lam = Ld(rng);
    const auto a = energies(find_levels(osc, ShellParams::make(R, lam), -6, 6));
    const auto b = energies(find_levels(osc, ShellParams::make(R, lam + M_PI), -6, 6));
    INFO("kappa=" << osc.kappa << " R=" << R << " lambda=" << lam);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      CHECK(std::abs(a[i] - b[i]) < 1e-8);
  }
}

TEST_CASE("every record satisfies its bracket invariants") {
  for (double R : {0.3, 1.0, 6.0}) {
    const auto scan = LevelScan(kOsc, R, -6, 6);
    const auto shell = ShellParams::make(R, M_PI / 4);
    for (const auto &l : scan.find(shell).levels) {
      INFO("R=" << R << " E=" << l.E << " kind=" << to_string(l.kind));
      CHECK(l.E_lo <= l.E);
      CHECK(l.E <= l.E_hi);
      if (l.kind == LevelKind::Bracketed) {
        CHECK(l.residual < 1e-8);
        CHECK(std::abs(det_function(kOsc, shell, l.E)) == doctest::Approx(l.residual));
        CHECK(det_function(kOsc, shell, l.E_lo) * det_function(kOsc, shell, l.E_hi) <= 0.0);
        for (const auto &p : scan.poles())
          CHECK_FALSE((p.E0 > l.E_lo - pole_exclusion(kOsc, p.E0) &&
                       p.E0 < l.E_hi + pole_exclusion(kOsc, p.E0)));
      } else {
        CHECK(l.kind == LevelKind::PoleAdjacent);
        CHECK(std::abs(l.E - l.nearest.E0) < 1e-5);
      }
    }
  }
}

TEST_CASE("serial and OpenMP trace scans agree bitwise") {
  std::vector<double> E;
  for (int i = 0; i < 400; ++i)
    E.push_back(-5.9 + 0.0295 * i);
  CHECK(trace_scan_serial(kOsc, 1.0, E) == trace_scan_parallel(kOsc, 1.0, E));
}

TEST_CASE("lambda sweep: transparent column, monotone branches") {
  for (double R : {0.3, 1.0}) {
    auto t = sweep_lambda(kOsc, R, default_lambda_grid(41), -6, 6);
    track_branches(t, 1.0);
    const auto ladder = unperturbed_in_window(kOsc, -6, 6);
    for (const auto &p : t.points) {
      if (p.axis == 0.0) {
        REQUIRE(p.levels.size() == ladder.size());
        for (std::size_t i = 0; i < ladder.size(); ++i)
          CHECK(std::abs(p.levels[i].E - ladder[i].E0) < 1e-12);
      } else {
        for (const auto &l : p.levels)
          CHECK_FALSE(near_any(l.E, ladder, 1e-12));
      }
    }
    for (std::size_t i = 1; i < t.points.size(); ++i)
      for (std::size_t a = 0; a < t.points[i].levels.size(); ++a)
        for (std::size_t b = 0; b < t.points[i - 1].levels.size(); ++b)
          if (t.points[i].branch[a] == t.points[i - 1].branch[b])
            CHECK(t.points[i].levels[a].E >= t.points[i - 1].levels[b].E);
  }
  CHECK(default_lambda_grid(101)[50] == 0.0);
  CHECK(default_lambda_grid(101).back() <= M_PI / 2);
}

TEST_CASE("radius sweep: limits and anticrossings") {
  const std::vector<double> radii{0.01, 0.5, 1.0, 2.0, 3.0, 20.0};
  auto t = sweep_radius(kOsc, M_PI / 4, radii, -6, 6);
  track_branches(t, 1.0);
  const auto ladder = unperturbed_in_window(kOsc, -7, 7);
  for (const auto *p : {&t.points.front(), &t.points.back()})
    for (const auto &l : p->levels) {
      INFO("R=" << p->axis << " E=" << l.E);
      CHECK(near_any(l.E, ladder, 1e-3));
    }
  for (const auto &p : t.points)
    for (double g : gap_to_next(p))
      if (!std::isnan(g))
        CHECK(g > 0.0);
  CHECK_THROWS_AS(sweep_radius(kOsc, 0.0, radii, -6, 6), InvalidInput);
  CHECK_THROWS_AS(sweep_radius(kOsc, 0.5, {1.0, 0.5}, -6, 6), InvalidInput);
}
