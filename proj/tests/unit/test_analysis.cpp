#include <gtest/gtest.h>

#include <cmath>

#include "kppfront/analysis.hpp"
#include "kppfront/eigen.hpp"
#include "kppfront/error.hpp"
#include "kppfront/evolve.hpp"
#include "kppfront/front.hpp"

using namespace kppfront;

namespace {

Field two_sided(const Grid& g, double left, double right, double wobble = 0.0) {
  return Field::sample(g, [=](double x, double y) {
    const double base = x < 0.0 ? std::exp(left * x) : std::exp(-right * x);
    return base * (1.0 + wobble * std::sin(M_PI * y));
  });
}

Reaction compact() { return make_compact_favorable(1.0, 2.0, 4.0, 1.0); }

double c_star(const Reaction& f, const Grid& g) { return *critical_speed(drift_eigen(g, f.linearization(), 0.0).lambda); }

}  // namespace

TEST(FitDecay, SyntheticExponential) {
  const Grid g = Grid::build(20.0, 1.0, 401, 5, BoundaryKind::Neumann);
  const Field U = two_sided(g, 2.0, 2.0, 0.01);
  for (Side s : {Side::Left, Side::Right}) {
    const DecayFit f = fit_decay(U, s);
    EXPECT_NEAR(f.exponent, 2.0, 0.01);
    EXPECT_TRUE(f.clean);
    EXPECT_GT(f.r_squared, kCleanFit);
  }
}

TEST(FitDecay, PureExponentialAnyWindow) {
  const Grid g = Grid::build(30.0, 1.0, 601, 3, BoundaryKind::Neumann);
  const Field U = two_sided(g, 0.7, 1.3);
  for (auto [a, b] : {std::pair{0.3, 0.6}, std::pair{0.5, 0.9}, std::pair{0.2, 0.95}}) {
    EXPECT_NEAR(fit_decay(U, Side::Left, a, b).exponent, 0.7, 1e-4 * 0.7);
    EXPECT_NEAR(fit_decay(U, Side::Right, a, b).exponent, 1.3, 1e-4 * 1.3);
    EXPECT_NEAR(fit_decay(U, Side::Right, a, b).y_spread, 0.0, 1e-10);
  }
}

TEST(FitDecay, RejectsBadWindows) {
  const Grid g = Grid::build(10.0, 1.0, 101, 3, BoundaryKind::Neumann);
  Field U = two_sided(g, 1.0, 1.0);
  EXPECT_THROW(fit_decay(U, Side::Right, 0.5, 0.51), InvalidArgument);
  U.at(90, g.mid_row()) = 0.0;
  EXPECT_THROW(fit_decay(U, Side::Right), InvalidArgument);
}

TEST(FitDecay, ConstantPotentialFrontAtRest) {
  // At c = 0 with r -> -m outside a bounded core, U decays like e^{-sqrt(m) |x|}.
  const Grid g = Grid::build(30.0, 1.0, 599, 3, BoundaryKind::Neumann);
  const Reaction f = make_compact_favorable(0.5, 2.0, 4.0, 1.0);
  const FrontSolution U = solve_front(f, 0.0, g);
  ASSERT_TRUE(U.positive);
  EXPECT_NEAR(fit_decay(U.U, Side::Left).exponent, std::sqrt(0.5), 0.05 * std::sqrt(0.5));
  EXPECT_NEAR(fit_decay(U.U, Side::Right).exponent, std::sqrt(0.5), 0.05 * std::sqrt(0.5));
}

TEST(Symmetry, PredictedRates) {
  EXPECT_NEAR(left_tail_rate(1.0, 1.0), (std::sqrt(5.0) - 1.0) / 2.0, 1e-15);
  EXPECT_NEAR(right_tail_rate(1.0, 1.0), (std::sqrt(5.0) + 1.0) / 2.0, 1e-15);
  EXPECT_NEAR(symmetry_criterion(1.0, 1.0), 2.0 - std::sqrt(5.0), 1e-15);
  EXPECT_DOUBLE_EQ(symmetry_criterion(3.0, 0.0), 3.0);
  // The criterion is the lambda_beta whose right rate equals the left rate.
  const double lb = symmetry_criterion(4.0, 1.0);
  EXPECT_NEAR(right_tail_rate(lb, 1.0), left_tail_rate(4.0, 1.0), 1e-12);
}

TEST(Symmetry, ReportExamples) {
  const Grid g = Grid::build(30.0, 1.0, 601, 3, BoundaryKind::Neumann);
  const double a = left_tail_rate(1.0, 1.0), b = right_tail_rate(1.0, 1.0);
  const SymmetryReport r = symmetry_report(two_sided(g, a, b), 1.0, 1.0, 1.0);
  EXPECT_EQ(r.verdict, SymmetryVerdict::Asymmetric);
  EXPECT_NEAR(r.criterion_rhs, -0.2360679775, 1e-9);
  EXPECT_TRUE(r.left_matches);
  EXPECT_TRUE(r.right_matches);
  EXPECT_GT(r.asymmetry, 0.1);

  const SymmetryReport still = symmetry_report(two_sided(g, 1.0, 1.0), 1.0, 1.0, 0.0);
  EXPECT_EQ(still.verdict, SymmetryVerdict::PossiblySymmetric);
  EXPECT_LT(still.asymmetry, 1e-14);

  const double lb = symmetry_criterion(4.0, 1.0);
  const SymmetryReport tuned = symmetry_report(two_sided(g, 1.0, 1.0), 4.0, lb, 1.0);
  EXPECT_EQ(tuned.verdict, SymmetryVerdict::PossiblySymmetric);
  EXPECT_EQ(to_string(SymmetryVerdict::Asymmetric), "asymmetric");
}

TEST(Symmetry, VerdictStableUnderRefinement) {
  const Reaction f = make_well(-1.0, -1.0, 4.0, 2.0);
  for (double c : {0.0, 1.0}) {
    SymmetryVerdict first{};
    for (int nx : {299, 599}) {
      const Grid g = Grid::build(30.0, 1.0, nx, 3, BoundaryKind::Neumann);
      const FrontSolution U = solve_front(f, c, g);
      const SymmetryReport r = symmetry_report(U.U, 1.0, 1.0, c);
      if (nx == 299) first = r.verdict;
      EXPECT_EQ(r.verdict, first) << c;
      EXPECT_TRUE(r.left_matches) << c << " " << nx;
      EXPECT_TRUE(r.right_matches) << c << " " << nx;
      if (c == 0.0) {
        EXPECT_LT(r.asymmetry, 1e-10);
      }
    }
  }
}

TEST(Bisection, SignChange) {
  const auto r = bisect_sign([](double x) { return x - 0.3; }, 0.0, 1.0, 1e-6);
  EXPECT_NEAR(r.value, 0.3, 1e-6);
  EXPECT_LE(r.hi - r.lo, 1e-6);
  EXPECT_LE(r.lo, 0.3);
  EXPECT_GE(r.hi, 0.3);
  EXPECT_THROW(bisect_sign([](double x) { return x + 1.0; }, 0.0, 1.0, 1e-6), InvalidArgument);
}

TEST(Bisection, Outcomes) {
  auto g = [](double x) { return x < 0.42 ? Outcome::Persistence : Outcome::Extinction; };
  const auto r = bisect_outcome(g, 0.0, 1.0, 1e-3);
  EXPECT_NEAR(r.value, 0.42, 1e-3);
  EXPECT_THROW(bisect_outcome([](double) { return Outcome::Extinction; }, 0.0, 1.0, 1e-3), InvalidArgument);
  auto fuzzy = [](double x) {
    if (x < 0.2) return Outcome::Persistence;
    if (x > 0.8) return Outcome::Extinction;
    return Outcome::Undecided;
  };
  EXPECT_THROW(bisect_outcome(fuzzy, 0.0, 1.0, 1e-3), UndecidedError);
}

TEST(Threshold, AlphaBarMatchesTranscendentalRoot) {
  // Zero eigenvalue of -d_yy - mu_alpha with Neumann walls: cos(y) on [0, alpha],
  // cosh(1 - y) above, matched in log-derivative: tan(alpha) = tanh(1 - alpha).
  double lo = 0.0, hi = 1.0;
  for (int k = 0; k < 80; ++k) {
    const double m = 0.5 * (lo + hi);
    (std::tan(m) - std::tanh(1.0 - m) < 0.0 ? lo : hi) = m;
  }
  IllustrationSetup s;
  s.ny = 201;
  const auto r = threshold_search(s, ThresholdParameter::alpha, 0.05, 0.95, ThresholdObjective::EigenSign, 1e-4);
  EXPECT_NEAR(r.value, 0.5 * (lo + hi), 1e-2);
}

TEST(Threshold, LStarMonotoneInTheta) {
  IllustrationSetup s;
  s.X = 30.0;
  s.nx = 299;
  s.ny = 5;
  double prev = -1.0;
  for (double theta : {-1.0, -2.0, -3.0}) {
    s.theta = theta;
    const auto r = threshold_search(s, ThresholdParameter::L, 0.0, 30.0, ThresholdObjective::EigenSign, 0.05);
    EXPECT_GE(r.value, prev - 0.05) << theta;
    EXPECT_LE(r.hi - r.lo, 0.05 + 1e-12);
    prev = r.value;
  }
}

TEST(Threshold, NoSignChangeRefused) {
  IllustrationSetup s;
  s.X = 30.0;
  s.nx = 299;
  s.ny = 5;
  EXPECT_THROW(threshold_search(s, ThresholdParameter::L, 10.0, 30.0, ThresholdObjective::EigenSign, 0.05),
               InvalidArgument);
}

TEST(Concentration, SmallSweep) {
  const Reaction base = make_well(-1.0, -1.0, 14.0, 2.0);
  StripSpec spec;
  spec.X = 10.0;
  spec.nx = 99;
  spec.ny_strip = 9;
  const auto cd = critical_speed(drift_eigen(spec.strip_grid(), base.linearization(), 0.0).lambda);
  ASSERT_TRUE(cd);
  const ConcentrationSweep s = concentration_sweep(base, 0.5 * *cd, 4, spec);
  ASSERT_EQ(s.records.size(), 5u);
  EXPECT_TRUE(s.lambda_below_D);
  EXPECT_TRUE(s.lambda_nondecreasing);
  EXPECT_TRUE(s.fronts_nonincreasing);
  for (std::size_t n = 1; n < s.records.size(); ++n) {
    EXPECT_LT(s.records[n].sup_exterior, s.records[n - 1].sup_exterior);
    EXPECT_LT(s.records[n].dist_to_dirichlet_front, s.records[n - 1].dist_to_dirichlet_front);
  }
  EXPECT_EQ(restrict_to_strip(s.fronts.back(), spec).grid(), spec.strip_grid());
  EXPECT_THROW(concentration_sweep(base, 1.1 * *cd, 2, spec), RegimeError);
}

TEST(MassSeries, ExtinctionLosesMass) {
  const Grid g = Grid::build(20.0, 1.0, 199, 3, BoundaryKind::Neumann);
  RunOptions o;
  o.horizon = 80.0;
  const Trajectory t = run(compact(), 1.1 * c_star(compact(), g), Field(g, 1.0), o);
  const MassSummary m = mass_series(t);
  EXPECT_LT(m.final_l1, 1e-5 * m.initial_l1);
  EXPECT_TRUE(m.gap_monotone);
  EXPECT_LT(m.log_slope, 0.0);
}

TEST(MassSeries, GapToFront) {
  const Grid g = Grid::build(20.0, 1.0, 199, 3, BoundaryKind::Neumann);
  const double c = 0.5 * c_star(compact(), g);
  const FrontSolution U = solve_front(compact(), c, g, 1e-11);
  RunOptions o;
  o.horizon = 40.0;
  o.reference = U.U;
  const MassSummary at_front = mass_series(run(compact(), c, U.U, o));
  EXPECT_LT(at_front.final_dist_l1, 1e-8);

  // Compactly supported data below the front approaches it monotonically.
  Field below = Field::sample(g, [](double x, double) { return x >= 0.0 && x <= 4.0 ? 0.1 : 0.0; });
  for (std::size_t k = 0; k < below.size(); ++k) below.data()[k] = std::min(below.data()[k], U.U.data()[k]);
  o.horizon = 30.0;
  const MassSummary m = mass_series(run(compact(), c, below, o));
  EXPECT_TRUE(m.gap_monotone);
  EXPECT_LT(m.log_slope, 0.0);
  EXPECT_LT(m.final_dist_l1, 1e-3 * m.initial_l1);
  EXPECT_THROW(mass_series(Trajectory{}), InvalidArgument);
}
