#include "kppfront/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kppfront/error.hpp"

namespace kppfront {

double reaction_slope_bound(const Reaction& reaction, const Grid& grid, double s_max) {
  const int time_samples = reaction.time_periodic() ? 16 : 1;
  const double period = reaction.period().value_or(1.0);
  double bound = 0.0;
  for (int q = 0; q < time_samples; ++q) {
    const double t = period * q / time_samples;
    for (int i = 0; i < grid.nx(); ++i)
      for (int j = 0; j < grid.ny(); ++j)
        for (int k = 0; k <= 4; ++k)
          bound = std::max(bound, std::abs(reaction.ds(t, grid.x(i), grid.y(j), 0.25 * k * s_max)));
  }
  return bound;
}

double default_dt(const Reaction& reaction, const Grid& grid, double s_max) {
  const double slope = reaction_slope_bound(reaction, grid, s_max);
  double dt = std::min(grid.hx(), 1.0 / (1.0 / (grid.hx() * grid.hx()) + 1.0 / (grid.hy() * grid.hy())));
  if (slope > 0.0) dt = std::min(dt, 0.25 / slope);
  return dt;
}

ImexStepper::ImexStepper(const Reaction& reaction, const Grid& grid, double c, double dt)
    : reaction_(reaction), grid_(grid), dt_(dt), generator_(transport_matrix(grid, c)) {
  if (!(dt > 0.0)) throw InvalidArgument("time step must be positive");
  SparseMatrix p = generator_;
  p *= -0.5 * dt;
  const auto slots = diagonal_slots(p);
  for (int s : slots) p.valuePtr()[s] += 1.0;
  implicit_.factorize(p);
  xs_.resize(grid.size());
  ys_.resize(grid.size());
  for (int i = 0; i < grid.nx(); ++i)
    for (int j = 0; j < grid.ny(); ++j) {
      xs_[grid.index(i, j)] = grid.x(i);
      ys_[grid.index(i, j)] = grid.y(j);
    }
}

void ImexStepper::reaction_into(const Vector& u, double t, Vector& out) const {
  out.resize(u.size());
  for (Eigen::Index k = 0; k < u.size(); ++k) out[k] = reaction_.at(t, xs_[k], ys_[k], u[k]);
}

void ImexStepper::advance(Vector& u, double t) const {
  const Vector au = generator_ * u;
  Vector f;
  reaction_into(u, t, f);
  const Vector mid = u + 0.5 * dt_ * (au + f);
  reaction_into(mid, t + 0.5 * dt_, f);
  u = implicit_.solve(u + 0.5 * dt_ * au + dt_ * f);
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    if (!std::isfinite(u[k])) throw NumericalError("non-finite value in time step", 0.0, 0);
    if (u[k] < 0.0) {
      undershoot_ = std::max(undershoot_, -u[k]);
      u[k] = 0.0;
    }
  }
}

SimState ImexStepper::step(const SimState& state) const {
  Vector u = to_vector(state.u);
  advance(u, state.t);
  return {state.t + dt_, to_field(grid_, u), dt_};
}

SimState step_imex(const SimState& state, const Reaction& reaction, double c) {
  return ImexStepper(reaction, state.u.grid(), c, state.dt).step(state);
}

namespace {

TrajectorySample sample(double t, const Field& u, const std::optional<Field>& reference) {
  const Grid& g = u.grid();
  TrajectorySample s{t, norm(u, NormKind::Sup), norm(u, NormKind::L1), 0.0, 0.0, 0.0};
  if (reference) {
    const Field d = u - *reference;
    s.dist_sup = norm(d, NormKind::Sup);
    s.dist_l1 = norm(d, NormKind::L1);
  } else {
    s.dist_sup = s.sup_norm;
    s.dist_l1 = s.l1_norm;
  }
  const double cut = 0.9 * g.X();
  for (int i = 0; i < g.nx(); ++i)
    if (std::abs(g.x(i)) >= cut)
      for (int j = 0; j < g.ny(); ++j) s.tail_sup = std::max(s.tail_sup, std::abs(u.at(i, j)));
  return s;
}

}  // namespace

Trajectory run(const Reaction& reaction, double c, const Field& u0, const RunOptions& options) {
  if (!(options.horizon > 0.0)) throw InvalidArgument("horizon must be positive");
  if (!(options.sample_every > 0.0)) throw InvalidArgument("sample interval must be positive");
  if (!u0.finite()) throw InvalidArgument("initial condition is not finite");
  if (u0.min() < 0.0) throw InvalidArgument("initial condition must be nonnegative");
  if (options.reference && !(options.reference->grid() == u0.grid()))
    throw InvalidArgument("reference front lives on a different grid");
  const Grid& grid = u0.grid();
  const double s_max = std::max(reaction.saturation(), u0.max());
  const double dt_cap = options.dt > 0.0 ? options.dt : default_dt(reaction, grid, s_max);
  const int per_sample = static_cast<int>(std::ceil(options.sample_every / dt_cap - 1e-9));
  const double dt = options.sample_every / per_sample;
  const int n_samples = static_cast<int>(std::ceil(options.horizon / options.sample_every - 1e-9));

  ImexStepper stepper(reaction, grid, c, dt);
  Trajectory out;
  out.dt = dt;
  Vector u = to_vector(u0);
  out.samples.push_back(sample(options.t0, to_field(grid, u), options.reference));
  for (int s = 1; s <= n_samples; ++s) {
    const double base = options.t0 + (s - 1) * options.sample_every;
    for (int k = 0; k < per_sample; ++k) stepper.advance(u, base + k * dt);
    out.samples.push_back(sample(options.t0 + s * options.sample_every, to_field(grid, u), options.reference));
  }
  out.final_state = to_field(grid, u);
  out.max_undershoot = stepper.max_undershoot();
  out.undershoot_flag = out.max_undershoot > kUndershootLimit;

  const std::size_t half = out.samples.size() / 2;
  bool down = true;
  bool up = true;
  for (std::size_t k = half + 1; k < out.samples.size(); ++k) {
    down = down && out.samples[k].sup_norm <= out.samples[k - 1].sup_norm;
    up = up && out.samples[k].sup_norm >= out.samples[k - 1].sup_norm;
  }
  out.sup_eventually_monotone = down || up;
  return out;
}

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Persistence: return "persistence";
    case Outcome::Extinction: return "extinction";
    case Outcome::Undecided: return "undecided";
  }
  return "undecided";
}

Outcome classify(const Trajectory& trajectory, double extinction_threshold, double persistence_floor) {
  if (trajectory.samples.empty()) throw InvalidArgument("cannot classify an empty trajectory");
  const auto& last = trajectory.samples.back();
  if (last.sup_norm < extinction_threshold) return Outcome::Extinction;
  if (last.sup_norm <= persistence_floor) return Outcome::Undecided;
  const double t_start = trajectory.samples.front().t;
  const double cut = last.t - 0.1 * (last.t - t_start);
  // Latest sample at or before the cut, so coarse sampling still leaves a window.
  auto it = std::find_if(trajectory.samples.rbegin(), trajectory.samples.rend(),
                         [cut](const TrajectorySample& s) { return s.t <= cut + 1e-12; });
  if (it == trajectory.samples.rend() || it == trajectory.samples.rbegin()) return Outcome::Undecided;
  const double change = std::abs(last.sup_norm - it->sup_norm) / last.sup_norm;
  return change < 1e-3 ? Outcome::Persistence : Outcome::Undecided;
}

PulsatingFront pulsating_front(const Reaction& reaction, double c, const Grid& grid,
                               const PeriodicSpec& spec, double tol, int max_periods) {
  spec.validate();
  const FloquetResult floquet = floquet_eigen(reaction.linearization(), grid, c, spec);
  if (floquet.lambda_p >= 0.0)
    throw RegimeError("extinction regime: Floquet eigenvalue " + std::to_string(floquet.lambda_p) +
                      " is nonnegative, no pulsating front exists");

  const double S = reaction.saturation();
  int steps = (spec.time_steps_per_period + 3) / 4 * 4;
  while (spec.T / steps > default_dt(reaction, grid, S)) steps *= 2;
  const double dt = spec.T / steps;
  ImexStepper stepper(reaction, grid, c, dt);

  Vector u = 1e-3 * S * to_vector(floquet.snapshots.front());
  PulsatingFront out;
  out.floquet_lambda = floquet.lambda_p;
  bool settled = false;
  for (int n = 1; n <= max_periods; ++n) {
    Vector next = u;
    for (int k = 0; k < steps; ++k) stepper.advance(next, k * dt);
    const Vector diff = next - u;
    const double sup = next.lpNorm<Eigen::Infinity>();
    if (diff.minCoeff() < -(kUndershootLimit + 1e-12 * sup))
      throw NumericalError("period sequence is not nondecreasing", -diff.minCoeff(), n);
    u = next;
    out.periods = n;
    if (diff.lpNorm<Eigen::Infinity>() < tol) {
      settled = true;
      break;
    }
  }
  if (!settled) throw NumericalError("pulsating iteration did not settle", 0.0, max_periods);

  Vector v = u;
  for (int k = 0; k < steps; ++k) {
    if (k % (steps / 4) == 0) out.orbit.push_back(to_field(grid, v));
    stepper.advance(v, k * dt);
  }
  out.defect = (v - u).lpNorm<Eigen::Infinity>();
  out.positive = std::all_of(out.orbit.begin(), out.orbit.end(), [](const Field& f) { return f.min() > 0.0; });
  out.tail_ok = std::all_of(out.orbit.begin(), out.orbit.end(),
                            [](const Field& f) { return effectively_decayed(f); });
  return out;
}

}  // namespace kppfront
