#include "dshell/cli.hpp"

#include "dshell/errors.hpp"
#include "dshell/levels.hpp"
#include "dshell/verify.hpp"
#include "dshell/wavefun.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <variant>

namespace dshell {

namespace {

using Json = nlohmann::ordered_json;
using Cell = std::variant<long, double, std::string>;

struct Table {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  Json parameters = Json::object();
  std::vector<std::string> warnings;
};

struct Config {
  std::optional<int> kappa;
  double omega = 1.0;
  std::optional<double> radius;
  std::vector<double> radii;
  std::optional<double> lambda;
  double emin = -6.0, emax = 6.0;
  int grid = 2000;
  std::string format = "csv";
  std::string out;
  std::uint64_t seed = 20260301;
  int nmax = 4;
  int points = 0;
  double rmin = 0.05, rmax = 6.0;
  int level = 0;
  std::optional<double> energy;
  std::vector<std::string> checks;
};

std::string cell_text(const Cell &c) {
  if (const auto *i = std::get_if<long>(&c))
    return std::to_string(*i);
  if (const auto *d = std::get_if<double>(&c))
    return format12(*d);
  return std::get<std::string>(c);
}

Json cell_json(const Cell &c) {
  if (const auto *i = std::get_if<long>(&c))
    return *i;
  if (const auto *d = std::get_if<double>(&c)) {
    if (!std::isfinite(*d))
      return nullptr;
    return std::stod(format12(*d));
  }
  return std::get<std::string>(c);
}

void write_table(const Table &t, const std::string &format, std::ostream &os) {
  if (format == "csv") {
    for (std::size_t i = 0; i < t.columns.size(); ++i)
      os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto &row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i)
        os << (i ? "," : "") << cell_text(row[i]);
      os << '\n';
    }
    return;
  }
  Json j;
  j["schema_version"] = 1;
  j["command"] = t.command;
  j["units"] = {{"energy", "m"}, {"length", "1/m"}, {"lambda", "rad"}};
  j["parameters"] = t.parameters;
  j["columns"] = t.columns;
  Json recs = Json::array();
  for (const auto &row : t.rows) {
    Json r = Json::object();
    for (std::size_t i = 0; i < row.size(); ++i)
      r[t.columns[i]] = cell_json(row[i]);
    recs.push_back(std::move(r));
  }
  j["records"] = std::move(recs);
  j["warnings"] = t.warnings;
  os << j.dump(2) << '\n';
}

void emit(const Table &t, const Config &c, const std::string &path, std::ostream &out,
          std::ostream &err) {
  for (const auto &w : t.warnings)
    err << "warning: " << w << '\n';
  if (path.empty()) {
    write_table(t, c.format, out);
    return;
  }
  std::ofstream f(path);
  if (!f)
    throw InvalidInput("cannot open output file '" + path + "'");
  write_table(t, c.format, f);
  if (!f)
    throw NumericalError("failed writing '" + path + "'");
}

OscillatorParams oscillator(int kappa, const Config &c) {
  const OscillatorParams osc{1.0, c.omega, kappa};
  osc.validate();
  return osc;
}

void check_window(const Config &c) {
  if (!(c.emin < c.emax))
    throw InvalidInput("--emin must be below --emax");
  if (c.grid < 10)
    throw InvalidInput("--grid must be at least 10");
}

FindOptions find_options(const Config &c) {
  FindOptions o;
  o.grid = c.grid;
  return o;
}

void cmd_unperturbed(const Config &c, std::ostream &out, std::ostream &err) {
  const auto osc = oscillator(c.kappa.value_or(-1), c);
  if (c.nmax < 0)
    throw InvalidInput("--nmax must be >= 0");
  Table t;
  t.command = "unperturbed";
  t.columns = {"n", "sign", "E0_over_m"};
  t.parameters = {{"kappa", osc.kappa}, {"omega_over_m", osc.omega}, {"nmax", c.nmax}};
  for (const auto &l : unperturbed_levels(osc, c.nmax))
    t.rows.push_back({long(l.n), long(l.sign), l.E0});
  emit(t, c, c.out, out, err);
}

void cmd_sweep_lambda(const Config &c, std::ostream &out, std::ostream &err) {
  check_window(c);
  const std::vector<int> kappas = c.kappa ? std::vector<int>{*c.kappa} : std::vector<int>{-1, 1};
  const std::vector<double> radii = c.radius ? std::vector<double>{*c.radius}
                                             : std::vector<double>{0.3, 1.0};
  const int points = c.points > 0 ? c.points : 101;
  Table t;
  t.command = "sweep-lambda";
  t.columns = {"kappa", "mR", "lambda", "branch_id", "E_over_m", "nearest_n", "residual"};
  t.parameters = {{"omega_over_m", c.omega}, {"emin", c.emin}, {"emax", c.emax},
                  {"grid", c.grid},          {"points", points}};
  const auto grid = default_lambda_grid(points);
  for (int kappa : kappas)
    for (double R : radii) {
      const auto osc = oscillator(kappa, c);
      if (!(R > 0.0))
        throw InvalidInput("--radius must be > 0");
      const auto table = sweep_lambda(osc, R, grid, c.emin, c.emax, find_options(c));
      for (const auto &w : table.warnings)
        t.warnings.push_back("kappa=" + std::to_string(kappa) + " mR=" + format12(R) + " " + w);
      for (const auto &p : table.points)
        for (std::size_t k = 0; k < p.levels.size(); ++k)
          t.rows.push_back({long(kappa), R, p.axis, long(p.branch[k]), p.levels[k].E,
                            long(p.levels[k].nearest.n), p.levels[k].residual});
    }
  emit(t, c, c.out, out, err);
}

void cmd_sweep_radius(const Config &c, std::ostream &out, std::ostream &err) {
  check_window(c);
  const auto osc = oscillator(c.kappa.value_or(-1), c);
  const double lambda = c.lambda.value_or(M_PI / 4);
  const int points = c.points > 0 ? c.points : 300;
  if (!(c.rmin > 0.0) || !(c.rmax > c.rmin) || points < 2)
    throw InvalidInput("radius grid needs 0 < --rmin < --rmax and --points >= 2");
  std::vector<double> radii;
  for (int i = 0; i < points; ++i)
    radii.push_back(c.rmin + (c.rmax - c.rmin) * i / (points - 1));
  radii.back() = c.rmax;
  const auto table = sweep_radius(osc, lambda, radii, c.emin, c.emax, find_options(c));
  Table t;
  t.command = "sweep-radius";
  t.columns = {"mR", "branch_id", "E_over_m", "nearest_n", "gap_to_next"};
  t.parameters = {{"kappa", osc.kappa}, {"omega_over_m", osc.omega}, {"lambda", lambda},
                  {"emin", c.emin},     {"emax", c.emax},           {"grid", c.grid},
                  {"rmin", c.rmin},     {"rmax", c.rmax},           {"points", points}};
  t.warnings = table.warnings;
  for (const auto &p : table.points) {
    const auto gaps = gap_to_next(p);
    for (std::size_t k = 0; k < p.levels.size(); ++k)
      t.rows.push_back({p.axis, long(p.branch[k]), p.levels[k].E, long(p.levels[k].nearest.n),
                        gaps[k]});
  }
  emit(t, c, c.out, out, err);
}

std::string suffixed(const std::string &path, double R, int level) {
  const std::filesystem::path p(path);
  std::ostringstream name;
  name << p.stem().string() << "_R" << format12(R) << "_L" << level << p.extension().string();
  return (p.parent_path() / name.str()).string();
}

void cmd_density(const Config &c, std::ostream &out, std::ostream &err) {
  check_window(c);
  const auto osc = oscillator(c.kappa.value_or(-1), c);
  const double lambda = c.lambda.value_or(M_PI / 4);
  std::vector<double> radii = c.radii;
  if (radii.empty())
    radii.push_back(c.radius.value_or(1.0));
  const int points = c.points > 0 ? c.points : 2000;
  if (radii.size() > 1 && c.out.empty())
    throw InvalidInput("several radii need --out; one file is written per radius");
  for (double R : radii) {
    const auto shell = ShellParams::make(R, lambda);
    if (shell.transparent())
      throw InvalidInput("lambda is a multiple of pi: the shell is transparent and the density "
                         "is the unperturbed one; choose lambda != n pi");
    const auto found = find_levels(osc, shell, c.emin, c.emax, find_options(c));
    if (found.levels.empty())
      throw NumericalError("no level in the energy window");
    int idx = c.level;
    if (c.energy) {
      double best = 1e300;
      for (std::size_t k = 0; k < found.levels.size(); ++k)
        if (std::abs(found.levels[k].E - *c.energy) < best) {
          best = std::abs(found.levels[k].E - *c.energy);
          idx = static_cast<int>(k);
        }
    }
    if (idx < 0 || idx >= static_cast<int>(found.levels.size()))
      throw InvalidInput("--level " + std::to_string(idx) + " out of range (" +
                         std::to_string(found.levels.size()) + " levels in the window)");
    const auto &lev = found.levels[idx];
    const auto prof = density_profile(osc, shell, lev.E, default_r_max(osc, R, lev.E), points);
    Table t;
    t.command = "density";
    t.columns = {"z", "density", "side_flag"};
    t.parameters = {{"kappa", osc.kappa}, {"omega_over_m", osc.omega}, {"mR", R},
                    {"lambda", lambda},   {"level", idx},             {"E_over_m", lev.E},
                    {"nearest_n", lev.nearest.n}, {"points", points}};
    t.warnings = found.warnings;
    for (std::size_t i = 0; i < prof.grid.size(); ++i)
      t.rows.push_back({prof.grid[i], prof.density[i], long(prof.side[i])});
    emit(t, c, radii.size() > 1 ? suffixed(c.out, R, idx) : c.out, out, err);
  }
}

int cmd_verify(const Config &c, std::ostream &out, std::ostream &err) {
  const auto rep = run_verify(c.seed, c.checks);
  Json j;
  j["schema_version"] = VerifyReport::schema_version;
  j["seed"] = rep.seed;
  j["passed"] = rep.passed();
  Json arr = Json::array();
  for (const auto &ch : rep.checks)
    arr.push_back({{"name", ch.name},
                   {"passed", ch.passed},
                   {"max_error", ch.max_error},
                   {"tolerance", ch.tolerance},
                   {"samples", ch.samples},
                   {"detail", ch.detail}});
  j["checks"] = std::move(arr);

  std::ostringstream human;
  for (const auto &ch : rep.checks) {
    char line[160];
    std::snprintf(line, sizeof line, "%-8s %s  max error %.3e  tolerance %.0e  samples %d\n",
                  ch.name.c_str(), ch.passed ? "PASS" : "FAIL", ch.max_error, ch.tolerance,
                  ch.samples);
    human << line;
  }
  human << (rep.passed() ? "all checks passed\n" : "verification FAILED\n");

  if (c.format == "json" && c.out.empty()) {
    out << j.dump(2) << '\n';
  } else {
    out << human.str();
    if (!c.out.empty()) {
      std::ofstream f(c.out);
      if (!f)
        throw InvalidInput("cannot open output file '" + c.out + "'");
      f << j.dump(2) << '\n';
    }
  }
  if (!rep.passed())
    err << "verification failed\n";
  return rep.passed() ? kExitOk : kExitNumerical;
}

} // namespace

std::string format12(double x) {
  if (std::isnan(x))
    return "nan";
  if (std::isinf(x))
    return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x == 0.0 ? 0.0 : x);
  return buf;
}

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
  CLI::App app{"Dirac oscillator with a surface delta-shell potential", "dshell"};
  app.require_subcommand(1);
  Config c;

  const auto common = [&](CLI::App *s, bool shell) {
    s->add_option("--kappa", c.kappa, "angular quantum number, nonzero integer");
    s->add_option("--omega", c.omega, "oscillator frequency in units of m")->capture_default_str();
    if (shell) {
      s->add_option("--lambda", c.lambda, "shell strength (radians)");
      s->add_option("--emin", c.emin, "lower end of the energy window (units of m)")
          ->capture_default_str();
      s->add_option("--emax", c.emax, "upper end of the energy window (units of m)")
          ->capture_default_str();
      s->add_option("--grid", c.grid, "scan points per pole-free interval")->capture_default_str();
    }
    s->add_option("--format", c.format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    s->add_option("--out", c.out, "output file (default stdout)");
    s->add_option("--seed", c.seed, "seed for pseudo-random tuples")->capture_default_str();
  };

  auto *unp = app.add_subcommand("unperturbed", "unperturbed levels");
  common(unp, false);
  unp->add_option("--nmax", c.nmax, "largest radial quantum number")->capture_default_str();

  auto *swl = app.add_subcommand("sweep-lambda", "levels against lambda on (-pi/2, pi/2]");
  common(swl, true);
  swl->add_option("--radius", c.radius, "shell radius mR");
  swl->add_option("--points", c.points, "lambda samples (default 101)");

  auto *swr = app.add_subcommand("sweep-radius", "levels against the shell radius");
  common(swr, true);
  swr->add_option("--rmin", c.rmin, "smallest mR")->capture_default_str();
  swr->add_option("--rmax", c.rmax, "largest mR")->capture_default_str();
  swr->add_option("--points", c.points, "radius samples (default 300)");

  auto *den = app.add_subcommand("density", "normalized probability density of one level");
  common(den, true);
  den->add_option("--radius", c.radii, "shell radius mR (repeatable)");
  den->add_option("--level", c.level, "level index in the window, ascending energy")
      ->capture_default_str();
  den->add_option("--energy", c.energy, "pick the level closest to this energy instead");
  den->add_option("--points", c.points, "grid points (default 2000)");

  auto *ver = app.add_subcommand("verify", "run the self-verification suites");
  common(ver, false);
  ver->add_option("--check", c.checks, "run only these checks: jump, ode, specfun, delta");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp &e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp &e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError &e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }

  try {
    if (unp->parsed())
      cmd_unperturbed(c, out, err);
    else if (swl->parsed())
      cmd_sweep_lambda(c, out, err);
    else if (swr->parsed())
      cmd_sweep_radius(c, out, err);
    else if (den->parsed())
      cmd_density(c, out, err);
    else if (ver->parsed())
      return cmd_verify(c, out, err);
    return kExitOk;
  } catch (const InvalidInput &e) {
    err << "invalid input: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const NumericalError &e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception &e) {
    err << "failure: " << e.what() << '\n';
    return kExitNumerical;
  }
}

} // namespace dshell
