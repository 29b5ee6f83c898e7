#pragma once

// Bound levels of the Dirac oscillator with a surface delta shell of radius R and
// strength lambda: real roots of
//
//   D(E) = det[I + sin(lambda) G + (cos(lambda) - 1) G J],   G = G(R+, R; E), J = -i sigma_y,
//
// which reduces to cos(lambda) + sin(lambda) tr G(R, R; E). Between two consecutive
// unperturbed levels tr G increases monotonically from -inf to +inf, so each such
// interval holds exactly one perturbed level.

#include "dshell/green.hpp"

#include <string>
#include <vector>

namespace dshell {

struct ShellParams {
  double R = 1.0;
  double lambda = 0.0;          // as supplied
  double reduced_lambda = 0.0;  // in (-pi/2, pi/2]; set to 0 within 1e-12 of n pi
  long ell = 0;                 // lambda = reduced_lambda + ell * pi

  // Throws InvalidInput for R <= 0 or non-finite lambda.
  static ShellParams make(double R, double lambda);
  bool transparent() const { return reduced_lambda == 0.0; }
};

struct UnperturbedLevel {
  int n = 0;
  int sign = 1;
  double E0 = 0.0;
};

// E0^2 - m^2 = 4 m omega [n + theta(kappa) (kappa + 1/2)], n = 0..n_max, both signs,
// E0 = -m excluded; sorted by energy.
std::vector<UnperturbedLevel> unperturbed_levels(const OscillatorParams &osc, int n_max);

// All unperturbed levels with E_min <= E0 <= E_max, sorted.
std::vector<UnperturbedLevel> unperturbed_in_window(const OscillatorParams &osc, double E_min,
                                                    double E_max);

// Half-width of the excluded window around an unperturbed level E0: 1e-6 m, widened where
// needed so that green_matrix never sees a Gamma argument closer than kPoleProximity.
double pole_exclusion(const OscillatorParams &osc, double E0);

double det_function(const OscillatorParams &osc, const ShellParams &shell, double E);

enum class LevelKind {
  Bracketed,    // sign change of D inside a pole-free bracket, refined by TOMS 748
  PoleAdjacent, // inside the excluded window of a level; from the local pole model
  Transparent,  // lambda = n pi: the unperturbed level itself
};

const char *to_string(LevelKind kind);

struct LevelRecord {
  double E = 0.0;
  double E_lo = 0.0, E_hi = 0.0;
  double residual = 0.0;  // |D(E)|; for PoleAdjacent the pole-model error estimate
  UnperturbedLevel nearest;
  LevelKind kind = LevelKind::Bracketed;
};

struct FindOptions {
  int grid = 2000;              // scan points per pole-free subinterval
  double root_tolerance = 1e-8; // on |D|
  double energy_tolerance = 1e-10;
  bool parallel = true;
};

struct LevelList {
  std::vector<LevelRecord> levels;
  std::vector<std::string> warnings;
};

// Scan data for one (oscillator, R, window): tr G(R+, R; E) on the scan grid and the local
// pole models. Independent of lambda, so one scan serves a whole lambda sweep.
class LevelScan {
public:
  LevelScan(const OscillatorParams &osc, double R, double E_min, double E_max,
            const FindOptions &opt = {});

  LevelList find(const ShellParams &shell) const;

  const OscillatorParams &osc() const { return osc_; }
  double radius() const { return R_; }
  const std::vector<UnperturbedLevel> &poles() const { return poles_; }

  struct Segment {
    double lo = 0.0, hi = 0.0; // sampled range, exclusion windows already removed
    std::vector<double> E;
    std::vector<double> trace;
  };
  struct PoleModel {
    UnperturbedLevel level;
    double residue = 0.0;   // rho in tr G ~ rho / (E0 - E) + t_reg
    double t_reg = 0.0;
    double model_error = 0.0;
    double exclusion = 0.0;
    bool valid = false;     // false when the model could not be fitted
  };
  const std::vector<Segment> &segments() const { return segments_; }
  const std::vector<PoleModel> &pole_models() const { return models_; }

private:
  OscillatorParams osc_;
  double R_;
  double E_min_, E_max_;
  FindOptions opt_;
  std::vector<UnperturbedLevel> poles_;
  std::vector<Segment> segments_;
  std::vector<PoleModel> models_;
  std::vector<std::string> scan_warnings_;
};

LevelList find_levels(const OscillatorParams &osc, const ShellParams &shell, double E_min,
                      double E_max, const FindOptions &opt = {});

// tr G(R+, R; E) on a grid of energies; NaN where green_matrix refuses. The serial and
// OpenMP variants produce identical values.
std::vector<double> trace_scan_serial(const OscillatorParams &osc, double R,
                                      const std::vector<double> &E);
std::vector<double> trace_scan_parallel(const OscillatorParams &osc, double R,
                                        const std::vector<double> &E);

struct SweepPoint {
  double axis = 0.0;
  std::vector<LevelRecord> levels; // sorted by E
  std::vector<int> branch;         // branch id per level
};

struct SweepTable {
  std::string axis_name; // "lambda" | "radius"
  std::vector<SweepPoint> points;
  std::vector<std::string> warnings;
  int branch_count = 0;
};

// Cell-centred grid of n points on (-pi/2, pi/2]; contains 0 when n is odd.
std::vector<double> default_lambda_grid(int n = 101);

SweepTable sweep_lambda(const OscillatorParams &osc, double R, const std::vector<double> &lambdas,
                        double E_min, double E_max, const FindOptions &opt = {});
SweepTable sweep_radius(const OscillatorParams &osc, double lambda, const std::vector<double> &radii,
                        double E_min, double E_max, const FindOptions &opt = {});

// Assign branch ids by order-preserving alignment of consecutive level lists; flags
// near-degenerate pairs (closer than 1e-4 m) in warnings.
void track_branches(SweepTable &table, double m);

// E_{k+1} - E_k for each level of one sample; NaN for the highest level.
std::vector<double> gap_to_next(const SweepPoint &point);

} // namespace dshell
