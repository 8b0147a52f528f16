#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "kppfront/eigen.hpp"
#include "kppfront/error.hpp"
#include "kppfront/periodic_eigen.hpp"
#include "kppfront/reaction.hpp"
#include "oracles.hpp"

using namespace kppfront;

namespace {

PeriodicSpec spec_with(int steps, double T = 1.0) {
  PeriodicSpec s;
  s.T = T;
  s.time_steps_per_period = steps;
  return s;
}

GrowthProfile time_only(std::function<double(double)> gamma, double T, double bound) {
  return GrowthProfile::periodic([gamma](double t, double, double) { return gamma(t); }, T, bound);
}

GrowthProfile pulsing_compact(double amplitude) {
  return make_time_periodic(make_compact_favorable(1.0, 2.0, 4.0, 1.0).linearization(), amplitude, 1.0)
      .linearization();
}

// Dense monodromy of the Crank-Nicolson space-time system: each time level is
// eliminated in turn, so the product of the dense step blocks maps v(0) to v(T).
Eigen::MatrixXd dense_monodromy(const GrowthProfile& r, const Grid& g, double c, int steps, double T) {
  const Eigen::MatrixXd A = oracle::dense_generator(g, c);
  const Eigen::Index n = A.rows();
  const double dt = T / steps;
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd M = I;
  for (int k = 0; k < steps; ++k) {
    Eigen::VectorXd rate(n);
    for (int i = 0; i < g.nx(); ++i)
      for (int j = 0; j < g.ny(); ++j) rate[g.index(i, j)] = r.at((k + 0.5) * dt, g.x(i), g.y(j));
    const Eigen::MatrixXd B = A + Eigen::MatrixXd(rate.asDiagonal());
    M = (I - 0.5 * dt * B).partialPivLu().solve((I + 0.5 * dt * B) * M);
  }
  return M;
}

double dominant_real(const Eigen::MatrixXd& M) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
  double best = -1e300, best_abs = -1.0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) {
    const auto z = es.eigenvalues()[k];
    if (std::abs(z) > best_abs) {
      best_abs = std::abs(z);
      best = z.real();
    }
  }
  return best;
}

}  // namespace

TEST(PeriodicSpec, Validation) {
  EXPECT_THROW(spec_with(8).validate(), InvalidArgument);
  EXPECT_THROW(spec_with(32, 0.0).validate(), InvalidArgument);
  EXPECT_NO_THROW(spec_with(16).validate());
}

TEST(PeriodMap, HeatModeDecay) {
  const double X = 1.0;
  const Grid g = Grid::build(X, 1.0, 21, 4, BoundaryKind::PeriodicY);
  const double h = g.hx();
  const double lam = 2.0 / (h * h) * (1.0 - std::cos(M_PI * h / (2.0 * X)));
  const Field v0 = Field::sample(g, [X](double x, double) { return std::cos(M_PI * x / (2.0 * X)); });
  const GrowthProfile zero = GrowthProfile::autonomous([](double, double) { return 0.0; }, 0.0);
  const int M = 1024;
  const Field v = monodromy_map(zero, g, 0.0, spec_with(M), v0);
  const double z = -lam / M;
  const double amp = std::pow((1.0 + 0.5 * z) / (1.0 - 0.5 * z), M);
  for (std::size_t k = 0; k < v.size(); ++k) {
    EXPECT_NEAR(v.data()[k], amp * v0.data()[k], 1e-12);
    EXPECT_NEAR(v.data()[k], std::exp(-lam) * v0.data()[k], 1e-6);
  }
}

TEST(PeriodMap, SeparableTimeRate) {
  const Grid box = Grid::build(1.0, 1.0, 8, 4, BoundaryKind::PeriodicY, EndKind::Periodic);
  const auto gamma = [](double t) { return 1.0 + std::cos(2.0 * M_PI * t); };
  const Field v = monodromy_map(time_only(gamma, 1.0, 2.0), box, 0.0, spec_with(1024), Field(box, 1.0));
  for (double x : v.data()) EXPECT_NEAR(x, std::exp(1.0), 1e-6 * std::exp(1.0));
}

TEST(PeriodMap, Linear) {
  const Grid g = Grid::build(5.0, 1.0, 41, 6, BoundaryKind::Neumann);
  const PeriodMap map(pulsing_compact(0.5), g, 0.7, spec_with(32));
  const Field a = Field::sample(g, [](double x, double y) { return std::exp(-x * x) * (1.0 + y); });
  const Field b = Field::sample(g, [](double x, double) { return 1.0 / (1.0 + x * x); });
  const Field lhs = map.apply(2.5 * a + b);
  const Field rhs = 2.5 * map.apply(a) + map.apply(b);
  EXPECT_LT(distance(lhs, rhs, NormKind::Sup), 1e-13 * norm(rhs, NormKind::Sup));
}

TEST(PeriodMap, DetectsGrowthBeyondDeclaredBound) {
  const Grid g = Grid::build(10.0, 1.0, 41, 4, BoundaryKind::Neumann);
  // Declared bound 0 understates the true rate 5.
  const GrowthProfile liar = GrowthProfile::autonomous([](double, double) { return 5.0; }, 0.0);
  const PeriodMap map(liar, g, 0.0, spec_with(32));
  EXPECT_THROW(map.apply(Field(g, 1.0)), NumericalError);
}

TEST(Floquet, TimeOnlyRate) {
  const Grid box = Grid::build(1.0, 1.0, 8, 4, BoundaryKind::PeriodicY, EndKind::Periodic);
  const auto gamma = [](double t) { return 1.0 + std::cos(2.0 * M_PI * t); };
  const FloquetResult f = floquet_eigen(time_only(gamma, 1.0, 2.0), box, 0.0, spec_with(1024));
  EXPECT_NEAR(f.lambda_p, -1.0, 1e-6);
}

TEST(Floquet, AutonomousMatchesDriftEigen) {
  const Grid g = Grid::build(8.0, 1.0, 81, 6, BoundaryKind::Neumann);
  const GrowthProfile r = make_compact_favorable(1.0, 2.0, 4.0, 1.0).linearization();
  const double c = 0.5;
  const FloquetResult f = floquet_eigen(r, g, c, spec_with(128), 1e-10);
  EXPECT_LT(std::abs(f.lambda_p - drift_eigen(g, r, c).lambda), 1e-4);
}

// The frozen value below was produced by dense_monodromy on this exact setup.
TEST(Floquet, BlockEliminationOracle) {
  const Grid g = Grid::build(10.0, 1.0, 60, 10, BoundaryKind::PeriodicY);
  const GrowthProfile r = pulsing_compact(0.5);
  const double c = 0.5;
  const int steps = 32;
  constexpr double kFrozenLambda = -1.5685831009919959;
  const double mu = dominant_real(dense_monodromy(r, g, c, steps, 1.0));
  ASSERT_GT(mu, 0.0);
  const double oracle_lambda = -std::log(mu);
  EXPECT_NEAR(oracle_lambda, kFrozenLambda, 1e-10);
  const FloquetResult f = floquet_eigen(r, g, c, spec_with(steps), 1e-11);
  EXPECT_NEAR(f.lambda_p, kFrozenLambda, 1e-7);
}

TEST(Floquet, ConstantShiftMovesLambda) {
  const Grid g = Grid::build(6.0, 1.0, 61, 5, BoundaryKind::Neumann);
  const GrowthProfile r = pulsing_compact(0.5);
  const double base = floquet_eigen(r, g, 0.5, spec_with(128), 1e-10).lambda_p;
  for (double k : {-1.0, 2.0}) {
    GrowthProfile shifted = GrowthProfile::periodic([r, k](double t, double x, double y) { return r.at(t, x, y) + k; },
                                                    1.0, r.bound() + std::abs(k));
    const double lam = floquet_eigen(shifted, g, 0.5, spec_with(128), 1e-10).lambda_p;
    // Crank-Nicolson makes the shift exact only up to its O(dt^2 lambda^3) error.
    const double dt = 1.0 / 128;
    const double tol = dt * dt * (std::pow(std::abs(lam), 3) + std::pow(std::abs(base), 3)) / 6.0;
    EXPECT_NEAR(lam, base - k, tol) << k;
  }
}

TEST(Floquet, SecondOrderInTime) {
  const Grid g = Grid::build(6.0, 1.0, 61, 5, BoundaryKind::Neumann);
  const GrowthProfile r = pulsing_compact(0.8);
  double lam[3];
  int m = 16;
  for (double& l : lam) {
    l = floquet_eigen(r, g, 0.5, spec_with(m), 1e-11).lambda_p;
    m *= 2;
  }
  const double ratio = (lam[0] - lam[1]) / (lam[1] - lam[2]);
  EXPECT_GT(ratio, 3.0);
  EXPECT_LT(ratio, 5.0);
}

TEST(Floquet, EigenfunctionPositiveAndPeriodic) {
  const Grid g = Grid::build(6.0, 1.0, 61, 5, BoundaryKind::Neumann);
  const PeriodMap map(pulsing_compact(0.5), g, 0.5, spec_with(64));
  const FloquetResult f = floquet_eigen(map, 1e-10);
  ASSERT_EQ(f.snapshots.size(), 2u);
  for (const Field& s : f.snapshots) {
    EXPECT_GT(s.min(), 0.0);
    EXPECT_DOUBLE_EQ(s.max(), 1.0);
  }
  const Field& phi = f.snapshots[0];
  const Field back = map.apply(phi);
  EXPECT_LT(distance(back, f.multiplier * phi, NormKind::L2) / norm(phi, NormKind::L2), 1e-8);
  EXPECT_NEAR(f.multiplier, std::exp(-f.lambda_p), 1e-14 * f.multiplier);
}

TEST(Floquet, TruncatedSweepNonincreasing) {
  GridDensity density;
  density.hx = 0.1;
  density.ny = 5;
  const auto sweep = truncated_floquet_sweep(pulsing_compact(0.5), 0.5, {10.0, 20.0, 40.0}, spec_with(32), density);
  ASSERT_EQ(sweep.entries.size(), 3u);
  for (std::size_t k = 1; k < 3; ++k) EXPECT_LE(sweep.entries[k].lambda, sweep.entries[k - 1].lambda + 1e-8);
  const double d1 = sweep.entries[0].lambda - sweep.entries[1].lambda;
  const double d2 = sweep.entries[1].lambda - sweep.entries[2].lambda;
  RecordProperty("gap_10_20", std::to_string(d1));
  RecordProperty("gap_20_40", std::to_string(d2));
  EXPECT_TRUE(sweep.warnings.empty());
}

TEST(Floquet, AutonomousTruncationMatchesDrift) {
  GridDensity density;
  density.hx = 0.1;
  density.ny = 5;
  const GrowthProfile r = make_compact_favorable(1.0, 2.0, 4.0, 1.0).linearization();
  const auto fs = truncated_floquet_sweep(r, 0.5, {6.0, 10.0, 14.0}, spec_with(128), density, 1e-10);
  const auto ts = truncation_limit(r, 0.5, {6.0, 10.0, 14.0}, density);
  for (std::size_t k = 0; k < 3; ++k) EXPECT_LT(std::abs(fs.entries[k].lambda - ts.entries[k].lambda), 1e-4);
}
