#include "dshell/wavefun.hpp"

#include "dshell/errors.hpp"
#include "dshell/specfun.hpp"
#include "parallel.hpp"

#include <cmath>
#include <sstream>

namespace dshell {

namespace {

constexpr Mat2 kK = pauli::i_sigma_y;

constexpr double kPoleReach = 1e-5;
constexpr double kTangentStep = 1e-4;

// -K v: from the Green-matrix frame to (f, g).
Vec2 to_fg(const Vec2 &v) { return {-v.y, v.x}; }

double trapezoid(const std::vector<double> &x, const std::vector<double> &y) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i)
    s += 0.5 * (x[i + 1] - x[i]) * (y[i] + y[i + 1]);
  return s;
}

struct Grid {
  std::vector<double> r;
  std::vector<int> side;
};

Grid make_grid(double R, double r_max, int n_points) {
  if (!(r_max > R))
    throw InvalidInput("density grid requires r_max > R");
  if (n_points < 100)
    throw InvalidInput("density grid requires at least 100 points");
  Grid g;
  bool placed = false;
  for (int i = 0; i < n_points; ++i) {
    const double r = i == n_points - 1 ? r_max : r_max * i / (n_points - 1);
    if (!placed && r >= R) {
      g.r.insert(g.r.end(), {R, R});
      g.side.insert(g.side.end(), {-1, 1});
      placed = true;
      if (r == R)
        continue;
    }
    g.r.push_back(r);
    g.side.push_back(0);
  }
  return g;
}

DensityProfile finish(std::vector<double> grid, std::vector<int> side, std::vector<double> density,
                      double E) {
  DensityProfile p;
  p.normalization = trapezoid(grid, density);
  if (!(p.normalization > 0.0) || !std::isfinite(p.normalization)) {
    std::ostringstream os;
    os << "density at E=" << E << " cannot be normalized (integral " << p.normalization << ")";
    throw NumericalError(os.str());
  }
  for (auto &d : density)
    d /= p.normalization;
  p.grid = std::move(grid);
  p.side = std::move(side);
  p.density = std::move(density);
  p.energy = E;
  return p;
}

} // namespace

Vec2 channel_spinor(const OscillatorParams &osc, double E, double r, bool regular) {
  if (std::abs(E + osc.m) < kSingularPrefactorTolerance)
    throw SingularPrefactorError("channel spinor at E = -m");
  const auto gp = green_params(osc, E);
  const double mw = osc.m * osc.omega;
  const auto p = regular ? specfun::whittaker_m_pair(gp.mu_plus, gp.nu_plus, mw * r * r)
                         : specfun::whittaker_w_pair(gp.mu_plus, gp.nu_plus, mw * r * r);
  // u = M / sqrt(r) or W / sqrt(r), Green-frame spinor (u, (u' + gamma u) / (E + m))
  const double scale = std::exp(p.log_scale) / std::sqrt(r);
  const double u = p.value * scale;
  const double du = (p.deriv * 2.0 * mw * r - p.value / (2.0 * r)) * scale;
  return to_fg({u, (du + osc.gamma(r) * u) / (E + osc.m)});
}

PerturbedState::PerturbedState(const OscillatorParams &osc, const ShellParams &shell, double E)
    : osc_(osc), shell_(shell), E_(E) {
  osc.validate();
  if (shell.transparent())
    throw InvalidInput("lambda is a multiple of pi: the shell is transparent, the perturbed state "
                       "is the unperturbed one");
  const auto levels = unperturbed_in_window(osc, E - 1.0, E + 1.0);
  double best = 1e300;
  for (const auto &l : levels)
    if (std::abs(l.E0 - E) < best) {
      best = std::abs(l.E0 - E);
      E_pole_ = l.E0;
    }
  near_pole_ = best < kPoleReach * osc.m;
  if (near_pole_)
    match_near_pole();
  else
    null_vector();
}

void PerturbedState::null_vector() {
  if (!green_admissible(osc_, E_)) {
    std::ostringstream os;
    os << "E=" << E_ << " is not admissible for the Green matrix";
    throw NumericalError(os.str());
  }
  const double s = std::sin(shell_.lambda), c = std::cos(shell_.lambda);
  const Mat2 G = green_matrix(osc_, E_, shell_.R, shell_.R, Side::Above);
  const Mat2 M = Mat2::identity() + G * s + G * kK * (1.0 - c);
  const auto sv = singular_values(M);
  boundary_.sv_large = sv.first;
  boundary_.sv_small = sv.second;
  if (!(sv.first > 1e-8)) {
    std::ostringstream os;
    os << "level matrix at E=" << E_ << " has a degenerate null space (singular values "
       << sv.first << ", " << sv.second << ")";
    throw NumericalError(os.str());
  }
  // null vector from the larger row
  const Vec2 r1{M.a11, M.a12}, r2{M.a21, M.a22};
  const Vec2 row = r1.norm() >= r2.norm() ? r1 : r2;
  Vec2 phi = to_fg(Vec2{-row.y, row.x} * (1.0 / row.norm()));
  if (phi.x < 0.0 || (phi.x == 0.0 && phi.y < 0.0))
    phi = phi * -1.0;
  boundary_.phi_above = {phi.x, phi.y};
  const Vec2 jump = (Mat2::identity() - rot(shell_.lambda)) * phi;
  boundary_.jump = {jump.x, jump.y};
  boundary_.consistency = (to_fg(G * jump) - phi).norm();
}

PerturbedState::Tangent PerturbedState::tangent(double r, bool regular) const {
  const double h = kTangentStep * osc_.m;
  const auto at = [&](double E) { return channel_spinor(osc_, E, r, regular); };
  const Vec2 d1 = (at(E_pole_ + h) - at(E_pole_ - h)) * (0.5 / h);
  const Vec2 d2 = (at(E_pole_ + h / 2) - at(E_pole_ - h / 2)) * (1.0 / h);
  return {at(E_pole_), (d2 * 4.0 - d1) * (1.0 / 3.0)};
}

void PerturbedState::match_near_pole() {
  // inside u(E0) + delta u_E, outside b (w(E0) + delta w_E); the matching condition
  // b w(R) = Rot(-lambda) u(R) is quadratic in delta
  const Mat2 back = rot(-shell_.lambda);
  const Tangent u = tangent(shell_.R, true), w = tangent(shell_.R, false);
  const double su = 1.0 / std::max(u.value.norm(), u.slope.norm() * kPoleReach * osc_.m);
  const double sw = 1.0 / std::max(w.value.norm(), w.slope.norm() * kPoleReach * osc_.m);
  const Vec2 u0 = back * u.value * su, u1 = back * u.slope * su;
  const Vec2 w0 = w.value * sw, w1 = w.slope * sw;
  const auto cross = [](const Vec2 &a, const Vec2 &b) { return a.x * b.y - a.y * b.x; };
  const double c0 = cross(w0, u0), c1 = cross(w1, u0) + cross(w0, u1), c2 = cross(w1, u1);
  double delta = -c0 / c1;
  const double disc = c1 * c1 - 4.0 * c0 * c2;
  if (c2 != 0.0 && disc >= 0.0)
    delta = 2.0 * c0 / (-c1 - std::copysign(std::sqrt(disc), c1));
  if (!std::isfinite(delta) || std::abs(delta) > kPoleReach * osc_.m) {
    std::ostringstream os;
    os << "no perturbed state within " << kPoleReach * osc_.m << " of the level " << E_pole_;
    throw NumericalError(os.str());
  }
  delta_ = delta;
  const Vec2 in = u0 + u1 * delta, out = w0 + w1 * delta;
  const double b = (out.x * in.x + out.y * in.y) / (out.x * out.x + out.y * out.y);
  Vec2 above = out * b;
  double k = 1.0 / above.norm();
  if (above.x < 0.0 || (above.x == 0.0 && above.y < 0.0))
    k = -k;
  in_scale_ = k * su;
  out_scale_ = k * b * sw;
  above = above * k;
  const RadialSpinor below = at(shell_.R, Side::Below);
  boundary_.phi_above = {above.x, above.y};
  boundary_.jump = {above.x - below.f, above.y - below.g};
  boundary_.consistency = (back * below.vec() - above).norm();
  Mat2 cols{out.x / out.norm(), in.x / in.norm(), out.y / out.norm(), in.y / in.norm()};
  const auto sv = singular_values(cols);
  boundary_.sv_large = sv.first;
  boundary_.sv_small = sv.second;
}

double PerturbedState::energy() const { return near_pole_ ? E_pole_ + delta_ : E_; }

RadialSpinor PerturbedState::at(double r, Side side) const {
  if (near_pole_) {
    const bool inside = r < shell_.R || (r == shell_.R && side == Side::Below);
    const Tangent t = tangent(r, inside);
    const Vec2 v = (t.value + t.slope * delta_) * (inside ? in_scale_ : out_scale_);
    return {v.x, v.y};
  }
  // phi(r) = -K G(r, R) Delta
  const Vec2 v = to_fg(green_matrix(osc_, E_, r, shell_.R, side) * boundary_.jump.vec());
  return {v.x, v.y};
}

BoundarySpinor boundary_spinor(const OscillatorParams &osc, const ShellParams &shell, double E) {
  return PerturbedState(osc, shell, E).boundary();
}

RadialSpinor radial_spinor(const OscillatorParams &osc, const ShellParams &shell, double E, double r) {
  if (!(r > 0.0))
    throw InvalidInput("radial_spinor requires r > 0");
  return PerturbedState(osc, shell, E).at(r);
}

RadialSpinor unperturbed_spinor(const OscillatorParams &osc, double E0, double r) {
  osc.validate();
  if (!(r > 0.0))
    throw InvalidInput("unperturbed_spinor requires r > 0");
  if (std::abs(E0 + osc.m) < kSingularPrefactorTolerance)
    throw InvalidInput("E0 = -m is not an unperturbed level");
  // the upper channel has a Gamma pole at every level; put its Kummer parameter exactly on
  // the nonpositive integer so that M reduces to a polynomial
  const auto gp = green_params(osc, E0);
  const double x = gp.nu_plus - gp.mu_plus + 0.5;
  const double n = std::round(-x);
  if (n < 0 || std::abs(x + n) > 1e-6) {
    std::ostringstream os;
    os << "E0=" << E0 << " is not an unperturbed level";
    throw InvalidInput(os.str());
  }
  const double nu = gp.nu_plus, mu = nu + 0.5 + n;
  const double mw = osc.m * osc.omega;
  const auto p = specfun::whittaker_m_pair(mu, nu, mw * r * r);
  const double scale = std::exp(p.log_scale) / std::sqrt(r);
  const double u = p.value * scale;
  const double du = (p.deriv * 2.0 * mw * r - p.value / (2.0 * r)) * scale;
  const Vec2 v = to_fg({u, (du + osc.gamma(r) * u) / (E0 + osc.m)});
  return {v.x, v.y};
}

double default_r_max(const OscillatorParams &osc, double R, double E) {
  return std::max(4.0 * R, 3.0 * (std::abs(E) + 2.0) / std::sqrt(osc.m * osc.omega) / std::sqrt(osc.m));
}

std::vector<double> density_serial(const PerturbedState &state, const std::vector<double> &grid,
                                   const std::vector<int> &side) {
  std::vector<double> out(grid.size(), 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (grid[i] > 0.0)
      out[i] = state.at(grid[i], side[i] < 0 ? Side::Below : Side::Above).density();
  return out;
}

std::vector<double> density_parallel(const PerturbedState &state, const std::vector<double> &grid,
                                     const std::vector<int> &side) {
  std::vector<double> out(grid.size(), 0.0);
  const long n = static_cast<long>(grid.size());
  ErrorSlot slot;
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i)
    if (grid[i] > 0.0)
      slot.run([&] { out[i] = state.at(grid[i], side[i] < 0 ? Side::Below : Side::Above).density(); });
  slot.rethrow();
  return out;
}

DensityProfile density_profile(const OscillatorParams &osc, const ShellParams &shell, double E,
                               double r_max, int n_points) {
  const PerturbedState state(osc, shell, E);
  auto g = make_grid(shell.R, r_max, n_points);
  auto d = density_parallel(state, g.r, g.side);
  return finish(std::move(g.r), std::move(g.side), std::move(d), E);
}

DensityProfile unperturbed_density_profile(const OscillatorParams &osc, double R, double E0,
                                           double r_max, int n_points) {
  auto g = make_grid(R, r_max, n_points);
  std::vector<double> d(g.r.size(), 0.0);
  for (std::size_t i = 0; i < g.r.size(); ++i)
    if (g.r[i] > 0.0)
      d[i] = unperturbed_spinor(osc, E0, g.r[i]).density();
  return finish(std::move(g.r), std::move(g.side), std::move(d), E0);
}

double l2_distance(const DensityProfile &a, const DensityProfile &b) {
  if (a.grid != b.grid)
    throw InvalidInput("l2_distance requires profiles on the same grid");
  std::vector<double> sq(a.grid.size());
  for (std::size_t i = 0; i < sq.size(); ++i)
    sq[i] = (a.density[i] - b.density[i]) * (a.density[i] - b.density[i]);
  return std::sqrt(trapezoid(a.grid, sq));
}

double radius_containing(const DensityProfile &p, double fraction) {
  double cum = 0.0;
  for (std::size_t i = 0; i + 1 < p.grid.size(); ++i) {
    cum += 0.5 * (p.grid[i + 1] - p.grid[i]) * (p.density[i] + p.density[i + 1]);
    if (cum >= fraction)
      return p.grid[i + 1];
  }
  return p.grid.back();
}

} // namespace dshell
