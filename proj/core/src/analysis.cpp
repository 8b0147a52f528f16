#include "kppfront/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "kppfront/eigen.hpp"
#include "kppfront/error.hpp"
#include "kppfront/parallel.hpp"

namespace kppfront {

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
    syy += (y[k] - my) * (y[k] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

std::pair<double, double> window(const Grid& g, Side side, double from, double to) {
  if (!(from >= 0.0 && from < to && to <= 1.0)) throw InvalidArgument("fit window needs 0 <= from < to <= 1");
  if (side == Side::Right) return {from * g.X(), to * g.X()};
  return {-to * g.X(), -from * g.X()};
}

LineFit fit_row(const Field& U, int row, double a, double b) {
  const auto samples = tail_slice(U, row, a, b);
  if (samples.size() < 3) throw InvalidArgument("fit window holds fewer than 3 samples");
  std::vector<double> x, y;
  for (const auto& s : samples) {
    if (!(s.value > 0.0)) throw InvalidArgument("nonpositive value inside the fit window; shrink the window");
    x.push_back(s.x);
    y.push_back(std::log(s.value));
  }
  return least_squares(x, y);
}

}  // namespace

DecayFit fit_decay(const Field& U, Side side, double from, double to) {
  const Grid& g = U.grid();
  const auto [a, b] = window(g, side, from, to);
  const double sign = side == Side::Right ? -1.0 : 1.0;
  const LineFit mid = fit_row(U, g.mid_row(), a, b);
  DecayFit fit;
  fit.side = side;
  fit.exponent = sign * mid.slope;
  fit.intercept = mid.intercept;
  fit.r_squared = mid.r_squared;
  fit.a = a;
  fit.b = b;
  fit.clean = mid.r_squared >= kCleanFit;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int j = 0; j < g.ny(); ++j) {
    const double e = sign * fit_row(U, j, a, b).slope;
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  fit.y_spread = (hi - lo) / std::abs(fit.exponent);
  return fit;
}

double left_tail_rate(double lambda_alpha, double c) {
  return (-c + std::sqrt(c * c + 4.0 * lambda_alpha)) / 2.0;
}

double right_tail_rate(double lambda_beta, double c) {
  return (c + std::sqrt(c * c + 4.0 * lambda_beta)) / 2.0;
}

double symmetry_criterion(double lambda_alpha, double c) {
  return lambda_alpha + c * c - 2.0 * c * std::sqrt(lambda_alpha + c * c / 4.0);
}

std::string_view to_string(SymmetryVerdict verdict) {
  return verdict == SymmetryVerdict::Asymmetric ? "asymmetric" : "possibly_symmetric";
}

double mirror_asymmetry(const Field& U) {
  const Grid& g = U.grid();
  double diff = 0.0;
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny(); ++j) diff = std::max(diff, std::abs(U.at(i, j) - U.at(g.nx() - 1 - i, j)));
  const double top = norm(U, NormKind::Sup);
  return top > 0.0 ? diff / top : 0.0;
}

SymmetryReport symmetry_report(const Field& U, double lambda_alpha, double lambda_beta, double c,
                               double criterion_tol, double exponent_tol) {
  if (!(lambda_alpha > 0.0) || !(lambda_beta > 0.0))
    throw InvalidArgument("symmetry report needs positive limit eigenvalues");
  SymmetryReport r;
  r.left_fit = fit_decay(U, Side::Left);
  r.right_fit = fit_decay(U, Side::Right);
  r.left_exponent = r.left_fit.exponent;
  r.right_exponent = r.right_fit.exponent;
  r.left_predicted = left_tail_rate(lambda_alpha, c);
  r.right_predicted = right_tail_rate(lambda_beta, c);
  r.criterion_lhs = lambda_beta;
  r.criterion_rhs = symmetry_criterion(lambda_alpha, c);
  r.verdict = std::abs(r.criterion_lhs - r.criterion_rhs) > criterion_tol ? SymmetryVerdict::Asymmetric
                                                                          : SymmetryVerdict::PossiblySymmetric;
  r.asymmetry = mirror_asymmetry(U);
  r.left_matches = std::abs(r.left_exponent - r.left_predicted) <= exponent_tol * r.left_predicted;
  r.right_matches = std::abs(r.right_exponent - r.right_predicted) <= exponent_tol * r.right_predicted;
  return r;
}

TailBoundCheck tail_bounds(const Field& U, Side side, double upper_rate, double lower_rate, double slack,
                           double from, double to) {
  const Grid& g = U.grid();
  const auto [a, b] = window(g, side, from, to);
  TailBoundCheck out;
  for (int j = 0; j < g.ny(); ++j) {
    const auto samples = tail_slice(U, j, a, b);
    if (samples.size() < 2) throw InvalidArgument("tail window holds fewer than 2 samples");
    const TailSample& anchor = side == Side::Right ? samples.front() : samples.back();
    if (!(anchor.value > 0.0)) throw InvalidArgument("front vanishes at the tail anchor");
    for (const auto& s : samples) {
      const double d = std::abs(s.x) - std::abs(anchor.x);
      const double upper = anchor.value * std::exp(-(1.0 - slack) * upper_rate * d);
      const double lower = anchor.value * std::exp(-(1.0 + slack) * lower_rate * d);
      out.upper_ratio = std::max(out.upper_ratio, s.value / upper);
      out.lower_ratio = std::max(out.lower_ratio, s.value > 0.0 ? lower / s.value
                                                                : std::numeric_limits<double>::infinity());
    }
  }
  out.passed = out.upper_ratio <= 1.0 + 1e-12 && out.lower_ratio <= 1.0 + 1e-12;
  return out;
}

ThresholdResult bisect_sign(const std::function<double(double)>& g, double lo, double hi, double tol) {
  if (!(lo < hi) || !(tol > 0.0)) throw InvalidArgument("bisection needs lo < hi and tol > 0");
  ThresholdResult r{0.0, lo, hi, 2};
  const double glo = g(lo);
  const double ghi = g(hi);
  if (!(glo * ghi < 0.0)) throw InvalidArgument("objective does not change sign on the range");
  const bool lo_negative = glo < 0.0;
  while (r.hi - r.lo > tol) {
    const double m = 0.5 * (r.lo + r.hi);
    const double gm = g(m);
    ++r.evaluations;
    if ((gm < 0.0) == lo_negative)
      r.lo = m;
    else
      r.hi = m;
  }
  r.value = 0.5 * (r.lo + r.hi);
  return r;
}

ThresholdResult bisect_outcome(const std::function<Outcome(double)>& g, double lo, double hi, double tol) {
  if (!(lo < hi) || !(tol > 0.0)) throw InvalidArgument("bisection needs lo < hi and tol > 0");
  ThresholdResult r{0.0, lo, hi, 2};
  const Outcome olo = g(lo);
  const Outcome ohi = g(hi);
  if (olo == Outcome::Undecided || ohi == Outcome::Undecided)
    throw UndecidedError("outcome undecided at a range end point; raise the horizon");
  if (olo == ohi) throw InvalidArgument("outcome does not change on the range");
  while (r.hi - r.lo > tol) {
    const double m = 0.5 * (r.lo + r.hi);
    const Outcome om = g(m);
    ++r.evaluations;
    if (om == Outcome::Undecided)
      throw UndecidedError("outcome undecided at " + std::to_string(m) + "; raise the horizon", m, r.evaluations);
    if (om == olo)
      r.lo = m;
    else
      r.hi = m;
  }
  r.value = 0.5 * (r.lo + r.hi);
  return r;
}

std::string_view to_string(ThresholdParameter p) {
  switch (p) {
    case ThresholdParameter::L: return "L";
    case ThresholdParameter::c: return "c";
    case ThresholdParameter::alpha: return "alpha";
  }
  return "L";
}

std::string_view to_string(ThresholdObjective o) {
  return o == ThresholdObjective::EigenSign ? "eigen_sign" : "dynamic_outcome";
}

Grid IllustrationSetup::grid() const { return Grid::build(X, 1.0, nx, ny, lateral); }

Reaction IllustrationSetup::reaction() const { return make_illustration(alpha, L, theta); }

IllustrationSetup IllustrationSetup::with(ThresholdParameter p, double value) const {
  IllustrationSetup s = *this;
  switch (p) {
    case ThresholdParameter::L: s.L = value; break;
    case ThresholdParameter::c: s.c = value; break;
    case ThresholdParameter::alpha: s.alpha = value; break;
  }
  return s;
}

double illustration_eigenvalue(const IllustrationSetup& setup, ThresholdParameter p) {
  if (p == ThresholdParameter::alpha) {
    const double alpha = setup.alpha;
    return cross_section_eigen([alpha](double y) { return illustration_mu(alpha, y); }, 1.0, setup.ny,
                               setup.lateral, setup.eigen_tol)
        .lambda;
  }
  return drift_eigen(setup.grid(), setup.reaction().linearization(), setup.c, setup.eigen_tol).lambda;
}

Outcome settle_outcome(const Reaction& reaction, double c, const Grid& grid, double horizon, double max_horizon,
                       double dt) {
  if (!(horizon > 0.0)) throw InvalidArgument("horizon must be positive");
  RunOptions opts;
  opts.horizon = horizon;
  opts.sample_every = 1.0;
  opts.dt = dt;
  Trajectory total = run(reaction, c, Field(grid, reaction.saturation()), opts);
  Outcome o = classify(total);
  double elapsed = horizon;
  while (o == Outcome::Undecided && 2.0 * elapsed <= max_horizon) {
    opts.t0 = elapsed;
    opts.horizon = elapsed;
    Trajectory more = run(reaction, c, *total.final_state, opts);
    total.samples.insert(total.samples.end(), more.samples.begin() + 1, more.samples.end());
    total.final_state = std::move(more.final_state);
    elapsed *= 2.0;
    o = classify(total);
  }
  return o;
}

Outcome illustration_outcome(const IllustrationSetup& setup) {
  return settle_outcome(setup.reaction(), setup.c, setup.grid(), setup.horizon, setup.max_horizon, setup.dt);
}

ThresholdResult threshold_search(const IllustrationSetup& setup, ThresholdParameter parameter, double lo,
                                 double hi, ThresholdObjective objective, double tol) {
  if (objective == ThresholdObjective::EigenSign)
    return bisect_sign([&](double v) { return illustration_eigenvalue(setup.with(parameter, v), parameter); },
                       lo, hi, tol);
  return bisect_outcome([&](double v) { return illustration_outcome(setup.with(parameter, v)); }, lo, hi, tol);
}

Grid StripSpec::strip_grid() const { return Grid::build(X, 1.0, nx, ny_strip, BoundaryKind::Dirichlet); }

Grid StripSpec::extended_grid() const {
  const double cells = (1.0 + 2.0 * margin) * (ny_strip + 1);
  const long rounded = std::lround(cells);
  if (std::abs(cells - static_cast<double>(rounded)) > 1e-9)
    throw InvalidArgument("margin must be a multiple of the strip spacing");
  return Grid::build(X, 1.0 + 2.0 * margin, nx, static_cast<int>(rounded) + 1, BoundaryKind::Neumann);
}

int StripSpec::strip_row(int j) const { return static_cast<int>(std::lround(margin * (ny_strip + 1))) + 1 + j; }

Field restrict_to_strip(const Field& extended, const StripSpec& spec) {
  const Grid strip = spec.strip_grid();
  Field out(strip);
  for (int i = 0; i < strip.nx(); ++i)
    for (int j = 0; j < strip.ny(); ++j) out.at(i, j) = extended.at(i, spec.strip_row(j));
  return out;
}

ConcentrationSweep concentration_sweep(const Reaction& base, double c, int n_max, const StripSpec& spec,
                                       double tol, int workers) {
  if (n_max < 0) throw InvalidArgument("n_max must be nonnegative");
  const Grid strip = spec.strip_grid();
  const Grid ext = spec.extended_grid();
  ConcentrationSweep out;
  out.lambda_D = drift_eigen(strip, base.linearization(), c).lambda;
  out.c_star_D = critical_speed(drift_eigen(strip, base.linearization(), 0.0).lambda);
  if (!(out.lambda_D < 0.0))
    throw RegimeError("c is not below the Dirichlet critical speed of the strip (lambda_D(c) = " +
                      std::to_string(out.lambda_D) + ")");
  out.dirichlet = dirichlet_front(base, c, strip, tol);

  std::vector<int> ns(n_max + 1);
  for (int n = 0; n <= n_max; ++n) ns[n] = n;
  struct Solved {
    double lambda;
    Field U;
  };
  auto solved = parallel_map(
      ns,
      [&](int n) {
        try {
          const Reaction pen = make_penalized(base, n, spec.margin);
          const double lambda = drift_eigen(ext, pen.linearization(), c).lambda;
          return Solved{lambda, solve_front(pen, c, ext, tol).U};
        } catch (const NumericalError& e) {
          throw NumericalError("concentration solve failed at n = " + std::to_string(n) + ": " + e.what(),
                               e.residual(), n);
        }
      },
      workers);

  const int first = spec.strip_row(0);
  const int last = spec.strip_row(spec.ny_strip - 1);
  for (int n = 0; n <= n_max; ++n) {
    const Field& U = solved[n].U;
    ConcentrationRecord rec{n, solved[n].lambda, 0.0, 0.0};
    for (int i = 0; i < ext.nx(); ++i)
      for (int j = 0; j < ext.ny(); ++j)
        if (j < first || j > last) rec.sup_exterior = std::max(rec.sup_exterior, std::abs(U.at(i, j)));
    rec.dist_to_dirichlet_front = distance(restrict_to_strip(U, spec), out.dirichlet->U, NormKind::Sup);
    out.records.push_back(rec);
    out.fronts.push_back(U);
  }
  out.lambda_nondecreasing = true;
  out.lambda_below_D = true;
  out.fronts_nonincreasing = true;
  for (int n = 0; n <= n_max; ++n) {
    out.lambda_below_D = out.lambda_below_D && out.records[n].lambda_n < out.lambda_D;
    if (n == 0) continue;
    out.lambda_nondecreasing = out.lambda_nondecreasing && out.records[n].lambda_n >= out.records[n - 1].lambda_n;
    const Field diff = out.fronts[n] - out.fronts[n - 1];
    out.fronts_nonincreasing = out.fronts_nonincreasing && diff.max() <= kUndershootLimit;
  }
  out.final_distance = out.records.back().dist_to_dirichlet_front;
  return out;
}

MassSummary mass_series(const Trajectory& trajectory) {
  if (trajectory.samples.empty()) throw InvalidArgument("empty trajectory");
  const auto& s = trajectory.samples;
  MassSummary m;
  m.initial_l1 = s.front().l1_norm;
  m.final_l1 = s.back().l1_norm;
  m.final_dist_l1 = s.back().dist_l1;
  // Once the gap hits roundoff it wanders; allow for that.
  const double floor = 1e-12 * (1.0 + s.front().l1_norm + s.front().dist_l1);
  m.gap_monotone = true;
  for (std::size_t k = 1; k < s.size(); ++k)
    m.gap_monotone = m.gap_monotone && s[k].dist_l1 <= s[k - 1].dist_l1 + floor;
  std::vector<double> t, y;
  for (std::size_t k = s.size() / 2; k < s.size(); ++k)
    if (s[k].dist_l1 > floor) {
      t.push_back(s[k].t);
      y.push_back(std::log(s[k].dist_l1));
    }
  if (t.size() >= 2) m.log_slope = least_squares(t, y).slope;
  return m;
}

}  // namespace kppfront
