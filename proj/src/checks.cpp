#include "dshell/checks.hpp"

#include <cmath>
#include <random>

namespace dshell {

namespace {

double pole_distance(const OscillatorParams &osc, double E) {
  const auto gp = green_params(osc, E);
  double d = 1e300;
  for (double x : {gp.nu_plus - gp.mu_plus + 0.5, gp.nu_minus - gp.mu_minus + 0.5})
    if (x < 0.5)
      d = std::min(d, std::abs(x - std::round(x)));
  return d;
}

} // namespace

std::vector<GreenTuple> green_check_tuples(std::uint64_t seed, int count) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> r_dist(0.3, 3.0), e_dist(-4.0, 4.0);
  const int kappas[] = {-2, -1, 1, 2};
  std::vector<GreenTuple> out;
  while (static_cast<int>(out.size()) < count) {
    GreenTuple t;
    t.osc.kappa = kappas[rng() % 4];
    t.R = r_dist(rng);
    t.E = e_dist(rng);
    if (pole_distance(t.osc, t.E) < 0.05 || std::abs(std::abs(t.E) - 1.0) < 0.05)
      continue;
    out.push_back(t);
  }
  return out;
}

double jump_error(const GreenTuple &t) {
  const Mat2 above = green_matrix(t.osc, t.E, t.R, t.R, Side::Above);
  const Mat2 below = green_matrix(t.osc, t.E, t.R, t.R, Side::Below);
  const Mat2 d = above - below - pauli::i_sigma_y;
  return d.max_norm() / std::max(1.0, above.max_norm());
}

double ode_residual(const GreenTuple &t, double r, double h_rel) {
  const double h = h_rel * r;
  const auto G = [&](double x) { return green_matrix(t.osc, t.E, x, t.R, Side::Above); };
  const Mat2 d = (G(r - 2 * h) - G(r + 2 * h) + 8.0 * (G(r + h) - G(r - h))) * (1.0 / (12.0 * h));
  const Mat2 g0 = G(r);
  const OscillatorParams &o = t.osc;
  const Mat2 op = pauli::sigma_x * o.gamma(r) + pauli::sigma_z * o.m - Mat2::identity() * t.E;
  const Mat2 res = pauli::i_sigma_y * d * -1.0 + op * g0;
  return res.max_norm() / std::max(1.0, g0.max_norm());
}

} // namespace dshell
