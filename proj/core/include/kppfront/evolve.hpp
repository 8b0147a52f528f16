#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "kppfront/domain.hpp"
#include "kppfront/periodic_eigen.hpp"
#include "kppfront/reaction.hpp"
#include "kppfront/sparse.hpp"

namespace kppfront {

struct SimState {
  double t = 0.0;
  Field u;
  double dt = 0.0;
};

/// sup |f_s(t, x, s)| over grid nodes, s in [0, s_max] and (for periodic reactions) one period.
double reaction_slope_bound(const Reaction& reaction, const Grid& grid, double s_max);

/// min(0.25 / sup|f_s|, hx, 1 / (1/hx^2 + 1/hy^2)). The last bound keeps the explicit half of
/// Crank-Nicolson nonnegative, which makes the scheme order preserving.
double default_dt(const Reaction& reaction, const Grid& grid, double s_max);

/// Moving-frame IMEX integrator for u_t = Delta u + c d_1 u + f(t, x, u):
///
///   u*      = u + dt/2 (A u + f(t, u))
///   u_next  = (I - dt/2 A)^{-1} [(I + dt/2 A) u + dt f(t + dt/2, u*)]
///
/// with A = Delta_h + c d_h. Fixed points are exactly the discrete steady states.
/// Negative values left by the solve are clamped to zero and their magnitude recorded.
class ImexStepper {
public:
  ImexStepper(const Reaction& reaction, const Grid& grid, double c, double dt);

  double dt() const { return dt_; }
  const Grid& grid() const { return grid_; }

  /// Advances in place from time t.
  void advance(Vector& u, double t) const;
  SimState step(const SimState& state) const;

  /// Largest negative excursion clamped so far.
  double max_undershoot() const { return undershoot_; }

private:
  void reaction_into(const Vector& u, double t, Vector& out) const;

  Reaction reaction_;
  Grid grid_;
  double dt_;
  SparseMatrix generator_;
  LuSolver implicit_;
  std::vector<double> xs_;
  std::vector<double> ys_;
  mutable double undershoot_ = 0.0;
};

/// One IMEX step with a freshly factored operator.
SimState step_imex(const SimState& state, const Reaction& reaction, double c);

/// Undershoots above this magnitude flag a run.
inline constexpr double kUndershootLimit = 1e-10;

struct TrajectorySample {
  double t;
  double sup_norm;
  double l1_norm;
  double dist_sup;
  double dist_l1;
  double tail_sup;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  /// True when the sup norm is monotone over the second half of the samples.
  bool sup_eventually_monotone = false;
  double max_undershoot = 0.0;
  bool undershoot_flag = false;
  double dt = 0.0;
  std::optional<Field> final_state;
};

struct RunOptions {
  double horizon = 100.0;
  double sample_every = 1.0;
  /// Distances are measured to this field, or to zero when absent.
  std::optional<Field> reference;
  /// 0 selects default_dt; the step is shrunk so samples fall on step boundaries.
  double dt = 0.0;
  double t0 = 0.0;
};

Trajectory run(const Reaction& reaction, double c, const Field& u0, const RunOptions& options);

enum class Outcome { Persistence, Extinction, Undecided };

std::string_view to_string(Outcome outcome);

inline constexpr double kExtinctionThreshold = 1e-6;
inline constexpr double kPersistenceFloor = 1e-2;

/// Extinction if the final sup is below `extinction_threshold`; Persistence if it is above
/// `persistence_floor` and changed by less than 1e-3 (relative) over the last 10% of the run.
Outcome classify(const Trajectory& trajectory, double extinction_threshold = kExtinctionThreshold,
                 double persistence_floor = kPersistenceFloor);

struct PulsatingFront {
  /// Snapshots at t = k T / 4, k = 0..3.
  std::vector<Field> orbit;
  /// ||u(T) - u(0)||_sup of the returned orbit.
  double defect = 0.0;
  int periods = 0;
  double floquet_lambda = 0.0;
  bool positive = false;
  bool tail_ok = false;
};

/// Iterates the nonlinear period map from a small multiple of the Floquet eigenfunction.
/// Throws RegimeError when the Floquet eigenvalue is nonnegative and NumericalError when
/// the period sequence stops increasing or fails to settle.
PulsatingFront pulsating_front(const Reaction& reaction, double c, const Grid& grid,
                               const PeriodicSpec& spec, double tol = 1e-8, int max_periods = 2000);

}  // namespace kppfront
