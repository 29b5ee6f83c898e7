#include "dshell/levels.hpp"

#include "dshell/errors.hpp"
#include "dshell/specfun.hpp"
#include "parallel.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace dshell {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Distance from a level at which the scan grid hands over to the local pole model, and
// the offsets used to fit it.
constexpr double kPoleModelReach = 1e-5;
constexpr double kPoleFitOffset = 1e-4;

// Samples this close to +/-m are skipped (the off-diagonal prefactor is singular there).
constexpr double kSoftExclusion = 1e-6;

std::string format_energy(double E) {
  std::ostringstream os;
  os.precision(12);
  os << E;
  return os.str();
}

double theta(int kappa) { return kappa > 0 ? 1.0 : 0.0; }

UnperturbedLevel nearest_level(const std::vector<UnperturbedLevel> &levels, double E) {
  UnperturbedLevel best{};
  double d = std::numeric_limits<double>::infinity();
  for (const auto &l : levels) {
    if (std::abs(l.E0 - E) < d) {
      d = std::abs(l.E0 - E);
      best = l;
    }
  }
  return best;
}

double trace_at(const OscillatorParams &osc, double R, double E) {
  if (!green_admissible(osc, E))
    return kNaN;
  try {
    return green_matrix(osc, E, R, R, Side::Above).trace();
  } catch (const NumericalError &) {
    return kNaN;
  }
}

constexpr double kTransparentSnap = 1e-12;

} // namespace

ShellParams ShellParams::make(double R, double lambda) {
  if (!(R > 0.0) || !std::isfinite(R)) {
    std::ostringstream os;
    os << "shell radius R must be finite and > 0 (got " << R << ")";
    throw InvalidInput(os.str());
  }
  if (!std::isfinite(lambda))
    throw InvalidInput("coupling lambda must be finite");
  ShellParams s;
  s.R = R;
  s.lambda = lambda;
  s.ell = static_cast<long>(std::ceil(lambda / kPi - 0.5));
  s.reduced_lambda = lambda - static_cast<double>(s.ell) * kPi;
  if (s.reduced_lambda <= -kPi / 2) {
    s.reduced_lambda += kPi;
    s.ell -= 1;
  }
  // lambda = n pi entered in decimal
  if (std::abs(s.reduced_lambda) < kTransparentSnap)
    s.reduced_lambda = 0.0;
  return s;
}

std::vector<UnperturbedLevel> unperturbed_levels(const OscillatorParams &osc, int n_max) {
  osc.validate();
  if (n_max < 0)
    throw InvalidInput("n_max must be >= 0");
  std::vector<UnperturbedLevel> out;
  const double th = theta(osc.kappa);
  for (int n = 0; n <= n_max; ++n) {
    const double e2 = osc.m * osc.m + 4.0 * osc.m * osc.omega * (n + th * (osc.kappa + 0.5));
    const double E0 = std::sqrt(e2);
    out.push_back({n, 1, E0});
    if (!(th == 0.0 && n == 0))
      out.push_back({n, -1, -E0});
  }
  std::sort(out.begin(), out.end(),
            [](const UnperturbedLevel &a, const UnperturbedLevel &b) { return a.E0 < b.E0; });
  return out;
}

std::vector<UnperturbedLevel> unperturbed_in_window(const OscillatorParams &osc, double E_min,
                                                    double E_max) {
  osc.validate();
  const double e2 = std::max(E_min * E_min, E_max * E_max);
  const int n_max = static_cast<int>(std::ceil((e2 - osc.m * osc.m) / (4.0 * osc.m * osc.omega))) + 1;
  auto all = unperturbed_levels(osc, std::max(n_max, 0));
  std::vector<UnperturbedLevel> out;
  for (const auto &l : all)
    if (l.E0 >= E_min && l.E0 <= E_max)
      out.push_back(l);
  return out;
}

double pole_exclusion(const OscillatorParams &osc, double E0) {
  // the Gamma argument moves by |E| dE / (2 m omega); keep a 1.5x margin on kPoleProximity
  const double param = 1.5 * specfun::kPoleProximity * 2.0 * osc.m * osc.omega / std::abs(E0);
  return std::max(1e-6 * osc.m, param);
}

double det_function(const OscillatorParams &osc, const ShellParams &shell, double E) {
  const Mat2 G = green_matrix(osc, E, shell.R, shell.R, Side::Above);
  const double s = std::sin(shell.lambda), c = std::cos(shell.lambda);
  const Mat2 J{0.0, -1.0, 1.0, 0.0};
  const Mat2 M = Mat2::identity() + G * s + G * J * (c - 1.0);
  return M.det();
}

const char *to_string(LevelKind kind) {
  switch (kind) {
  case LevelKind::Bracketed:
    return "bracketed";
  case LevelKind::PoleAdjacent:
    return "pole_adjacent";
  case LevelKind::Transparent:
    return "transparent";
  }
  return "?";
}

std::vector<double> trace_scan_serial(const OscillatorParams &osc, double R,
                                      const std::vector<double> &E) {
  std::vector<double> out(E.size());
  for (std::size_t i = 0; i < E.size(); ++i)
    out[i] = trace_at(osc, R, E[i]);
  return out;
}

std::vector<double> trace_scan_parallel(const OscillatorParams &osc, double R,
                                        const std::vector<double> &E) {
  std::vector<double> out(E.size());
  const long n = static_cast<long>(E.size());
#pragma omp parallel for schedule(dynamic, 32)
  for (long i = 0; i < n; ++i)
    out[i] = trace_at(osc, R, E[i]);
  return out;
}

LevelScan::LevelScan(const OscillatorParams &osc, double R, double E_min, double E_max,
                     const FindOptions &opt)
    : osc_(osc), R_(R), E_min_(E_min), E_max_(E_max), opt_(opt) {
  osc.validate();
  if (!(R > 0.0) || !std::isfinite(R))
    throw InvalidInput("shell radius R must be finite and > 0");
  if (!(E_min < E_max) || !std::isfinite(E_min) || !std::isfinite(E_max))
    throw InvalidInput("energy window requires finite E_min < E_max");
  if (opt.grid < 2)
    throw InvalidInput("scan grid needs at least 2 points per subinterval");

  poles_ = unperturbed_in_window(osc, E_min, E_max);

  // subintervals between consecutive levels, with the exclusion windows cut out
  std::vector<double> cuts{E_min};
  std::vector<double> cut_excl{0.0};
  for (const auto &p : poles_) {
    cuts.push_back(p.E0);
    cut_excl.push_back(pole_exclusion(osc, p.E0));
  }
  cuts.push_back(E_max);
  cut_excl.push_back(0.0);
  // a window edge that falls inside an exclusion window is pushed out of it
  for (const auto &p : unperturbed_in_window(osc, E_min - 1.0, E_max + 1.0)) {
    const double w = pole_exclusion(osc, p.E0);
    if (std::abs(cuts.front() - p.E0) < w && p.E0 < E_min)
      cut_excl.front() = p.E0 + w - E_min;
    if (std::abs(cuts.back() - p.E0) < w && p.E0 > E_max)
      cut_excl.back() = E_max - (p.E0 - w);
  }

  std::vector<double> all_E;
  std::vector<std::size_t> offsets{0};
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    Segment seg;
    seg.lo = cuts[k] + cut_excl[k];
    seg.hi = cuts[k + 1] - cut_excl[k + 1];
    if (!(seg.lo < seg.hi))
      continue;
    for (int i = 0; i < opt.grid; ++i) {
      const double E = i == opt.grid - 1 ? seg.hi
                                         : seg.lo + (seg.hi - seg.lo) * i / (opt.grid - 1);
      if (std::abs(E - osc.m) < kSoftExclusion * osc.m || std::abs(E + osc.m) < kSoftExclusion * osc.m)
        continue;
      seg.E.push_back(E);
    }
    all_E.insert(all_E.end(), seg.E.begin(), seg.E.end());
    offsets.push_back(all_E.size());
    segments_.push_back(std::move(seg));
  }

  // pole models need tr G at E0 +- kPoleFitOffset and +- kPoleFitOffset / 2
  const std::size_t scan_size = all_E.size();
  for (const auto &p : poles_)
    for (double d : {kPoleFitOffset, -kPoleFitOffset, kPoleFitOffset / 2, -kPoleFitOffset / 2})
      all_E.push_back(p.E0 + d * osc.m);

  const auto trace = opt.parallel ? trace_scan_parallel(osc, R, all_E) : trace_scan_serial(osc, R, all_E);

  for (std::size_t k = 0; k < segments_.size(); ++k)
    segments_[k].trace.assign(trace.begin() + offsets[k], trace.begin() + offsets[k + 1]);

  for (std::size_t j = 0; j < poles_.size(); ++j) {
    const double *t = &trace[scan_size + 4 * j];
    PoleModel pm;
    pm.level = poles_[j];
    pm.exclusion = pole_exclusion(osc, poles_[j].E0);
    // tr G = rho / (E0 - E) + t_reg + O(E - E0): the symmetric combinations cancel the
    // linear term
    const double d1 = kPoleFitOffset * osc.m, d2 = d1 / 2;
    const double rho1 = d1 * (t[1] - t[0]) / 2, rho2 = d2 * (t[3] - t[2]) / 2;
    const double reg1 = (t[0] + t[1]) / 2, reg2 = (t[2] + t[3]) / 2;
    pm.valid = std::isfinite(rho1) && std::isfinite(rho2) && std::isfinite(reg1) && std::isfinite(reg2);
    // second-order Richardson step on the O(d^2) error
    pm.residue = (4 * rho2 - rho1) / 3;
    pm.t_reg = (4 * reg2 - reg1) / 3;
    pm.model_error = std::abs(rho2 - rho1) + d1 * std::abs(reg2 - reg1);
    if (!pm.valid) {
      std::ostringstream os;
      os << "pole model at E0=" << format_energy(poles_[j].E0) << " could not be fitted";
      scan_warnings_.push_back(os.str());
    }
    models_.push_back(pm);
  }
}

LevelList LevelScan::find(const ShellParams &shell) const {
  LevelList out;
  out.warnings = scan_warnings_;
  const auto reference = unperturbed_in_window(osc_, E_min_ - 1.0, E_max_ + 1.0);

  if (shell.transparent()) {
    for (const auto &p : poles_)
      out.levels.push_back({p.E0, p.E0, p.E0, 0.0, p, LevelKind::Transparent});
    return out;
  }

  const double s = std::sin(shell.lambda), c = std::cos(shell.lambda);
  const ShellParams sh = [&] {
    ShellParams x = shell;
    x.R = R_;
    return x;
  }();
  const double m = osc_.m;

  const auto D = [&](double E) {
    // toms748 may probe within 1e-12 of +/-m; D is continuous there
    if (std::abs(E - m) < 2 * kSingularPrefactorTolerance)
      E = m + std::copysign(2 * kSingularPrefactorTolerance, E - m);
    if (std::abs(E + m) < 2 * kSingularPrefactorTolerance)
      E = -m + std::copysign(2 * kSingularPrefactorTolerance, E + m);
    return det_function(osc_, sh, E);
  };

  // roots next to a level, from the pole model
  struct Claimed {
    double lo, hi;
  };
  std::vector<Claimed> claimed;
  for (const auto &pm : models_) {
    if (!pm.valid)
      continue;
    const double den = c + s * pm.t_reg;
    const double delta = pm.residue * s / den;
    if (!(std::abs(delta) < kPoleModelReach * m))
      continue;
    const double E = pm.level.E0 + delta;
    const double reach = kPoleModelReach * m;
    LevelRecord rec;
    rec.E = E;
    rec.E_lo = delta >= 0 ? pm.level.E0 : pm.level.E0 - reach;
    rec.E_hi = delta >= 0 ? pm.level.E0 + reach : pm.level.E0;
    // model error propagated to the root position, in units of D's scale
    rec.residual = pm.model_error * std::abs(s / den);
    rec.nearest = pm.level;
    rec.kind = LevelKind::PoleAdjacent;
    claimed.push_back({rec.E_lo, rec.E_hi});
    if (E >= E_min_ && E <= E_max_)
      out.levels.push_back(rec);
  }

  const auto refine = [&](double a, double b, double fa, double fb) {
    std::uintmax_t iters = 200;
    const auto tol = [](double x, double y) {
      return std::abs(y - x) <= 4 * std::numeric_limits<double>::epsilon() * std::max(std::abs(x), std::abs(y));
    };
    const auto r = boost::math::tools::toms748_solve(D, a, b, fa, fb, tol, iters);
    // pick the best of the final bracket
    double best = 0.5 * (r.first + r.second), best_f = std::abs(D(best));
    for (double x : {r.first, r.second}) {
      const double fx = std::abs(D(x));
      if (fx < best_f) {
        best = x;
        best_f = fx;
      }
    }
    return std::make_pair(best, best_f);
  };

  const auto add_bracket = [&](double a, double b, double fa, double fb) {
    for (const auto &cl : claimed)
      if (a < cl.hi && b > cl.lo) {
        // the model already owns this root; a bracket overlapping its reach is the same one
        return;
      }
    const auto [E, res] = refine(a, b, fa, fb);
    if (res >= opt_.root_tolerance) {
      std::ostringstream os;
      os << "root near E=" << format_energy(E) << " rejected: |D| = " << res
         << " exceeds root tolerance";
      out.warnings.push_back(os.str());
      return;
    }
    out.levels.push_back({E, a, b, res, nearest_level(reference, E), LevelKind::Bracketed});
  };

  for (const auto &seg : segments_) {
    // valid samples and their D values
    std::vector<double> xs, ds;
    for (std::size_t i = 0; i < seg.E.size(); ++i) {
      if (std::isnan(seg.trace[i]))
        continue;
      xs.push_back(seg.E[i]);
      ds.push_back(c + s * seg.trace[i]);
    }
    std::vector<std::size_t> changes;
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
      if ((ds[i] < 0) != (ds[i + 1] < 0) || ds[i] == 0.0)
        changes.push_back(i);

    std::vector<bool> refined(xs.size(), false);
    for (std::size_t k = 0; k < changes.size(); ++k) {
      const std::size_t i = changes[k];
      const bool adjacent = (k + 1 < changes.size() && changes[k + 1] == i + 1) ||
                            (k > 0 && changes[k - 1] + 1 == i);
      if (!adjacent) {
        if (ds[i] == 0.0)
          add_bracket(xs[i], xs[i], 0.0, 0.0);
        else
          add_bracket(xs[i], xs[i + 1], ds[i], ds[i + 1]);
        continue;
      }
      if (refined[i])
        continue;
      // two sign changes in adjacent cells: resample both cells ten times finer, once
      std::ostringstream os;
      os << "window too coarse near E=" << format_energy(xs[i]) << ", refined locally x10";
      out.warnings.push_back(os.str());
      const std::size_t j_end = std::min(i + 2, xs.size() - 1);
      for (std::size_t j = i; j <= j_end; ++j)
        refined[j] = true;
      std::vector<double> fx, fd;
      for (std::size_t j = i; j < j_end; ++j)
        for (int q = 0; q < 10; ++q) {
          const double E = xs[j] + (xs[j + 1] - xs[j]) * q / 10.0;
          const double t = trace_at(osc_, R_, E);
          if (!std::isnan(t)) {
            fx.push_back(E);
            fd.push_back(c + s * t);
          }
        }
      fx.push_back(xs[j_end]);
      fd.push_back(ds[j_end]);
      for (std::size_t q = 0; q + 1 < fx.size(); ++q)
        if ((fd[q] < 0) != (fd[q + 1] < 0))
          add_bracket(fx[q], fx[q + 1], fd[q], fd[q + 1]);
    }
  }

  std::sort(out.levels.begin(), out.levels.end(),
            [](const LevelRecord &a, const LevelRecord &b) { return a.E < b.E; });
  return out;
}

LevelList find_levels(const OscillatorParams &osc, const ShellParams &shell, double E_min,
                      double E_max, const FindOptions &opt) {
  return LevelScan(osc, shell.R, E_min, E_max, opt).find(shell);
}

std::vector<double> default_lambda_grid(int n) {
  if (n < 1)
    throw InvalidInput("lambda grid needs at least one point");
  std::vector<double> out(n);
  // lambda_i = (i - (n - 1) / 2) pi / n: exact zero in the middle for odd n
  for (int i = 0; i < n; ++i)
    out[i] = (2 * i - (n - 1)) * kPi / (2.0 * n);
  return out;
}

namespace {

void require_increasing(const std::vector<double> &grid, const char *what) {
  if (grid.empty())
    throw InvalidInput(std::string(what) + " grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1]))
      throw InvalidInput(std::string(what) + " grid must be strictly increasing");
}

} // namespace

SweepTable sweep_lambda(const OscillatorParams &osc, double R, const std::vector<double> &lambdas,
                        double E_min, double E_max, const FindOptions &opt) {
  require_increasing(lambdas, "lambda");
  for (double l : lambdas)
    if (!(l > -kPi / 2 && l <= kPi / 2))
      throw InvalidInput("lambda grid must lie in (-pi/2, pi/2]");
  const LevelScan scan(osc, R, E_min, E_max, opt);
  SweepTable table;
  table.axis_name = "lambda";
  table.points.resize(lambdas.size());
  std::vector<std::vector<std::string>> warnings(lambdas.size());
  const long n = static_cast<long>(lambdas.size());
  ErrorSlot slot;
#pragma omp parallel for schedule(dynamic) if (opt.parallel)
  for (long i = 0; i < n; ++i)
    slot.run([&] {
      auto found = scan.find(ShellParams::make(R, lambdas[i]));
      table.points[i].axis = lambdas[i];
      table.points[i].levels = std::move(found.levels);
      warnings[i] = std::move(found.warnings);
    });
  slot.rethrow();
  for (std::size_t i = 0; i < warnings.size(); ++i)
    for (auto &w : warnings[i])
      table.warnings.push_back("lambda=" + format_energy(lambdas[i]) + ": " + w);
  track_branches(table, osc.m);
  return table;
}

SweepTable sweep_radius(const OscillatorParams &osc, double lambda, const std::vector<double> &radii,
                        double E_min, double E_max, const FindOptions &opt) {
  require_increasing(radii, "radius");
  if (radii.front() <= 0.0)
    throw InvalidInput("radius grid must be > 0");
  const auto probe = ShellParams::make(radii.front(), lambda);
  if (probe.transparent())
    throw InvalidInput("lambda is a multiple of pi: the shell is transparent and every level "
                       "equals its unperturbed value; choose lambda != n pi");
  SweepTable table;
  table.axis_name = "radius";
  table.points.resize(radii.size());
  std::vector<std::vector<std::string>> warnings(radii.size());
  FindOptions inner = opt;
  inner.parallel = false;
  const long n = static_cast<long>(radii.size());
  ErrorSlot slot;
#pragma omp parallel for schedule(dynamic) if (opt.parallel)
  for (long i = 0; i < n; ++i)
    slot.run([&] {
      const LevelScan scan(osc, radii[i], E_min, E_max, inner);
      auto found = scan.find(ShellParams::make(radii[i], lambda));
      table.points[i].axis = radii[i];
      table.points[i].levels = std::move(found.levels);
      warnings[i] = std::move(found.warnings);
    });
  slot.rethrow();
  for (std::size_t i = 0; i < warnings.size(); ++i)
    for (auto &w : warnings[i])
      table.warnings.push_back("mR=" + format_energy(radii[i]) + ": " + w);
  track_branches(table, osc.m);
  return table;
}

void track_branches(SweepTable &table, double m) {
  int next_id = 0;
  const SweepPoint *prev = nullptr;
  for (auto &pt : table.points) {
    const std::size_t nb = pt.levels.size();
    pt.branch.assign(nb, -1);
    for (std::size_t i = 0; i + 1 < nb; ++i)
      if (pt.levels[i + 1].E - pt.levels[i].E < 1e-4 * m) {
        std::ostringstream os;
        os << table.axis_name << "=" << format_energy(pt.axis)
           << ": branch tracking ambiguous, levels " << format_energy(pt.levels[i].E) << " and "
           << format_energy(pt.levels[i + 1].E) << " closer than 1e-4 m";
        table.warnings.push_back(os.str());
      }
    if (prev != nullptr && !prev->levels.empty() && nb > 0) {
      const long na = static_cast<long>(prev->levels.size());
      const long nbl = static_cast<long>(nb);
      const long need = std::max(1L, std::min(na, nbl) - 1);
      long best_k = 0;
      double best_cost = std::numeric_limits<double>::infinity();
      for (long k = -(na - 1); k <= nbl - 1; ++k) {
        long overlap = 0;
        double cost = 0.0;
        for (long i = std::max(0L, -k); i < na && i + k < nbl; ++i) {
          cost += std::abs(prev->levels[i].E - pt.levels[i + k].E);
          ++overlap;
        }
        if (overlap < need)
          continue;
        cost /= overlap;
        if (cost < best_cost || (cost == best_cost && std::abs(k) < std::abs(best_k))) {
          best_cost = cost;
          best_k = k;
        }
      }
      if (std::isfinite(best_cost))
        for (long i = std::max(0L, -best_k); i < na && i + best_k < nbl; ++i)
          pt.branch[i + best_k] = prev->branch[i];
    }
    for (auto &b : pt.branch)
      if (b < 0)
        b = next_id++;
    prev = &pt;
  }
  table.branch_count = next_id;
}

std::vector<double> gap_to_next(const SweepPoint &point) {
  std::vector<double> out(point.levels.size(), kNaN);
  for (std::size_t i = 0; i + 1 < point.levels.size(); ++i)
    out[i] = point.levels[i + 1].E - point.levels[i].E;
  return out;
}

} // namespace dshell
