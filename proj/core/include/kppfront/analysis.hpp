#pragma once

#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "kppfront/domain.hpp"
#include "kppfront/evolve.hpp"
#include "kppfront/front.hpp"
#include "kppfront/reaction.hpp"

namespace kppfront {

struct DecayFit {
  Side side = Side::Right;
  /// Positive decay rate of U along the mid row, away from the origin.
  double exponent = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double a = 0.0;
  double b = 0.0;
  bool clean = false;
  /// (max - min) / mid-row exponent over per-row fits.
  double y_spread = 0.0;
};

inline constexpr double kCleanFit = 0.99;

/// Least squares of ln U against x1 on |x1| in [from X, to X] on the given side.
/// Throws InvalidArgument when the window holds fewer than 3 samples or a nonpositive value.
DecayFit fit_decay(const Field& U, Side side, double from = 0.5, double to = 0.9);

/// Decay rate predicted towards x1 -> -inf and +inf for a limit eigenvalue lambda.
double left_tail_rate(double lambda_alpha, double c);
double right_tail_rate(double lambda_beta, double c);
/// lambda_alpha + c^2 - 2 c sqrt(lambda_alpha + c^2 / 4); symmetric tails need lambda_beta to equal it.
double symmetry_criterion(double lambda_alpha, double c);

enum class SymmetryVerdict { Asymmetric, PossiblySymmetric };
std::string_view to_string(SymmetryVerdict verdict);

struct SymmetryReport {
  double left_exponent = 0.0;
  double right_exponent = 0.0;
  double left_predicted = 0.0;
  double right_predicted = 0.0;
  double criterion_lhs = 0.0;
  double criterion_rhs = 0.0;
  SymmetryVerdict verdict = SymmetryVerdict::PossiblySymmetric;
  /// sup |U(x1, y) - U(-x1, y)| / sup U.
  double asymmetry = 0.0;
  bool left_matches = false;
  bool right_matches = false;
  DecayFit left_fit;
  DecayFit right_fit;
};

inline constexpr double kCriterionTol = 1e-6;
inline constexpr double kExponentTol = 0.05;

SymmetryReport symmetry_report(const Field& U, double lambda_alpha, double lambda_beta, double c,
                               double criterion_tol = kCriterionTol, double exponent_tol = kExponentTol);

/// sup |U(x1, y) - U(-x1, y)| / sup U on a grid symmetric about x1 = 0.
double mirror_asymmetry(const Field& U);

struct TailBoundCheck {
  bool passed = false;
  /// Worst U / upper envelope and lower envelope / U; both <= 1 when the check passes.
  double upper_ratio = 0.0;
  double lower_ratio = 0.0;
};

/// Checks U(x) <= U(x0) e^{-(1 - slack) upper_rate (|x1| - x0)} and
/// U(x) >= U(x0) e^{-(1 + slack) lower_rate (|x1| - x0)} on every row for |x1| in
/// [from X, to X] on one side, with the constants pinned at |x1| = x0 = from X.
TailBoundCheck tail_bounds(const Field& U, Side side, double upper_rate, double lower_rate,
                           double slack = 0.1, double from = 0.5, double to = 0.9);

struct ThresholdResult {
  double value = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  int evaluations = 0;
};

/// Bisection for a sign change of g on [lo, hi] down to a bracket of width tol.
/// Throws InvalidArgument when g(lo) and g(hi) share a sign.
ThresholdResult bisect_sign(const std::function<double(double)>& g, double lo, double hi, double tol);

/// Bisection on a two-class boundary. Throws InvalidArgument when the end classes agree
/// and UndecidedError when an evaluation stays Undecided.
ThresholdResult bisect_outcome(const std::function<Outcome(double)>& g, double lo, double hi, double tol);

enum class ThresholdParameter { L, c, alpha };
enum class ThresholdObjective { EigenSign, DynamicOutcome };

std::string_view to_string(ThresholdParameter p);
std::string_view to_string(ThresholdObjective o);

/// Mixed-environment setup shared by both threshold modes.
struct IllustrationSetup {
  double alpha = 0.3;
  double L = 5.0;
  double theta = -2.0;
  double c = 1.0;
  double X = 60.0;
  int nx = 599;
  int ny = 10;
  BoundaryKind lateral = BoundaryKind::Neumann;
  double horizon = 200.0;
  double max_horizon = 3200.0;
  /// 0 selects the default step.
  double dt = 0.0;
  double eigen_tol = kDefaultEigenTol;

  Grid grid() const;
  Reaction reaction() const;
  IllustrationSetup with(ThresholdParameter p, double value) const;
};

/// Principal eigenvalue of the drift operator for the setup (for alpha: the
/// cross-sectional eigenvalue lambda(-d_yy - mu_alpha)).
double illustration_eigenvalue(const IllustrationSetup& setup, ThresholdParameter p);

/// Classified outcome of a run from u0 = S, doubling the horizon while Undecided
/// until the next doubling would pass max_horizon.
Outcome settle_outcome(const Reaction& reaction, double c, const Grid& grid, double horizon, double max_horizon,
                       double dt = 0.0);

/// Dynamic outcome from u0 = S, doubling the horizon while Undecided up to max_horizon.
Outcome illustration_outcome(const IllustrationSetup& setup);

ThresholdResult threshold_search(const IllustrationSetup& setup, ThresholdParameter parameter, double lo,
                                 double hi, ThresholdObjective objective, double tol);

struct StripSpec {
  double X = 20.0;
  int nx = 399;
  /// Interior nodes across the strip in the Dirichlet problem.
  int ny_strip = 9;
  /// Extension of the rectangle beyond the strip on each side.
  double margin = 1.0;

  Grid strip_grid() const;
  Grid extended_grid() const;
  /// Row of the extended grid holding strip row j.
  int strip_row(int j) const;
};

struct ConcentrationRecord {
  int n = 0;
  double lambda_n = 0.0;
  double sup_exterior = 0.0;
  double dist_to_dirichlet_front = 0.0;
};

struct ConcentrationSweep {
  std::vector<ConcentrationRecord> records;
  double lambda_D = 0.0;
  std::optional<double> c_star_D;
  /// Dirichlet front of the strip; always set by concentration_sweep.
  std::optional<FrontSolution> dirichlet;
  std::vector<Field> fronts;
  bool lambda_nondecreasing = false;
  bool lambda_below_D = false;
  bool fronts_nonincreasing = false;
  double final_distance = 0.0;
};

/// Penalized whole-rectangle fronts for n = 0..n_max against the Dirichlet front of the strip.
/// Throws RegimeError when c >= c*_D; NumericalError carries n when a solve fails.
ConcentrationSweep concentration_sweep(const Reaction& base, double c, int n_max, const StripSpec& spec,
                                       double tol = kDefaultNewtonTol, int workers = 1);

/// Restriction of a field on the extended grid to the strip rows.
Field restrict_to_strip(const Field& extended, const StripSpec& spec);

struct MassSummary {
  double initial_l1 = 0.0;
  double final_l1 = 0.0;
  double final_dist_l1 = 0.0;
  /// d ln(dist_l1) / dt over the second half of the samples.
  double log_slope = 0.0;
  bool gap_monotone = false;
};

MassSummary mass_series(const Trajectory& trajectory);

}  // namespace kppfront
