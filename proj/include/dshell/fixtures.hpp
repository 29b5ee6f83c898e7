#pragma once

// Reference values for the special functions, produced once by
// tools/gen_specfun_fixtures.py at arbitrary precision and shipped with the build.

#include "dshell/specfun.hpp"

#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace dshell {

struct SpecfunFixture {
  std::string func; // kummer_m | kummer_u | whittaker_m | whittaker_w
  double p1 = 0.0;  // a or mu
  double p2 = 0.0;  // b or nu
  double z = 0.0;
  specfun::LogValue reference;
  std::string tag;
};

std::vector<SpecfunFixture> parse_specfun_fixtures(std::istream &in);

// Fixture table compiled into the library.
const std::vector<SpecfunFixture> &builtin_specfun_fixtures();

specfun::LogValue evaluate_fixture(const SpecfunFixture &fx);

// |ours/ref - 1| computed in the log domain; infinite on sign mismatch.
double relative_error(const specfun::LogValue &ours, const specfun::LogValue &ref);

} // namespace dshell
