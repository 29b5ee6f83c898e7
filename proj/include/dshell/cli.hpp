#pragma once

// Command-line front end. Energies are printed in units of m, radii as m r, with m = 1
// internally.

#include <ostream>
#include <string>
#include <vector>

namespace dshell {

enum ExitCode { kExitOk = 0, kExitNumerical = 1, kExitInvalid = 2 };

// args excludes the program name. Data goes to `out` unless --out is given; diagnostics
// and warnings go to `err`.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

// Shortest decimal form with 12 significant digits.
std::string format12(double x);

} // namespace dshell
