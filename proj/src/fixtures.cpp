#include "dshell/fixtures.hpp"

#include "dshell/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace dshell {

// generated from tests/data/specfun_fixtures.csv at configure time
const char *builtin_fixture_csv();

namespace {

double parse_double(const std::string &s) {
  if (s == "-inf")
    return -std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size())
    throw InvalidInput("fixture: bad number '" + s + "'");
  return v;
}

} // namespace

std::vector<SpecfunFixture> parse_specfun_fixtures(std::istream &in) {
  std::vector<SpecfunFixture> out;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty())
      continue;
    if (header) {
      header = false;
      if (line.rfind("func,", 0) == 0)
        continue;
    }
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ','))
      cols.push_back(cell);
    if (cols.size() != 7)
      throw InvalidInput("fixture: expected 7 columns in '" + line + "'");
    SpecfunFixture fx;
    fx.func = cols[0];
    fx.p1 = parse_double(cols[1]);
    fx.p2 = parse_double(cols[2]);
    fx.z = parse_double(cols[3]);
    fx.reference.log_abs = parse_double(cols[4]);
    fx.reference.sign = std::stoi(cols[5]);
    fx.tag = cols[6];
    out.push_back(std::move(fx));
  }
  return out;
}

const std::vector<SpecfunFixture> &builtin_specfun_fixtures() {
  static const std::vector<SpecfunFixture> table = [] {
    std::istringstream in(builtin_fixture_csv());
    return parse_specfun_fixtures(in);
  }();
  return table;
}

specfun::LogValue evaluate_fixture(const SpecfunFixture &fx) {
  using namespace specfun;
  if (fx.func == "kummer_m")
    return kummer_m({fx.p1, fx.p2, fx.z});
  if (fx.func == "kummer_u")
    return kummer_u({fx.p1, fx.p2, fx.z});
  if (fx.func == "whittaker_m")
    return whittaker_m(fx.p1, fx.p2, fx.z);
  if (fx.func == "whittaker_w")
    return whittaker_w(fx.p1, fx.p2, fx.z);
  throw InvalidInput("fixture: unknown function '" + fx.func + "'");
}

double relative_error(const specfun::LogValue &ours, const specfun::LogValue &ref) {
  if (ours.sign != ref.sign)
    return std::numeric_limits<double>::infinity();
  if (ref.sign == 0)
    return 0.0;
  return std::abs(std::expm1(ours.log_abs - ref.log_abs));
}

} // namespace dshell
