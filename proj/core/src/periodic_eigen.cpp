#include "kppfront/periodic_eigen.hpp"

#include <algorithm>
#include <cmath>

#include "kppfront/error.hpp"

namespace kppfront {

void PeriodicSpec::validate() const {
  if (!(T > 0.0)) throw InvalidArgument("period T must be positive");
  if (!(y_period > 0.0)) throw InvalidArgument("lateral period must be positive");
  if (time_steps_per_period < 16) throw InvalidArgument("need at least 16 time steps per period");
}

PeriodMap::PeriodMap(const GrowthProfile& growth, const Grid& grid, double c, const PeriodicSpec& spec,
                     std::size_t cache_bytes)
    : grid_(grid),
      spec_(spec),
      dt_(spec.T / spec.time_steps_per_period),
      growth_sup_(growth.bound()),
      generator_(transport_matrix(grid, c)),
      diag_(diagonal_slots(generator_)),
      autonomous_(!growth.time_periodic()) {
  spec_.validate();
  const int distinct = autonomous_ ? 1 : spec_.time_steps_per_period;
  steps_.resize(distinct);
  for (int k = 0; k < distinct; ++k) {
    const double t = (k + 0.5) * dt_;
    auto& rate = steps_[k].rate;
    rate.resize(grid.size());
    for (int i = 0; i < grid.nx(); ++i)
      for (int j = 0; j < grid.ny(); ++j) rate[grid.index(i, j)] = growth.at(t, grid.x(i), grid.y(j));
  }
  steps_[0].lu.emplace(implicit_matrix(0));
  const std::size_t per_step = std::max<std::size_t>(steps_[0].lu->memory_bytes(), 1);
  if (per_step * static_cast<std::size_t>(distinct) <= cache_bytes)
    for (int k = 1; k < distinct; ++k) steps_[k].lu.emplace(implicit_matrix(k));
  else if (distinct > 1)
    steps_[0].lu.reset();
}

SparseMatrix PeriodMap::implicit_matrix(int k) const {
  SparseMatrix m = generator_;
  m *= -0.5 * dt_;
  const auto& rate = steps_[k].rate;
  for (std::size_t n = 0; n < rate.size(); ++n) m.valuePtr()[diag_[n]] += 1.0 - 0.5 * dt_ * rate[n];
  return m;
}

Vector PeriodMap::step(int k, const Vector& v) const {
  const Step& s = steps_[autonomous_ ? 0 : k];
  const Eigen::Map<const Vector> rate(s.rate.data(), static_cast<Eigen::Index>(s.rate.size()));
  const Vector rhs = v + 0.5 * dt_ * (generator_ * v + rate.cwiseProduct(v));
  if (s.lu) return s.lu->solve(rhs);
  return LuSolver(implicit_matrix(autonomous_ ? 0 : k)).solve(rhs);
}

Field PeriodMap::advance(const Field& v0, int steps) const {
  if (!(v0.grid() == grid_)) throw InvalidArgument("field does not live on the period-map grid");
  if (!v0.finite()) throw InvalidArgument("initial field is not finite");
  Vector v = to_vector(v0);
  const double start = v.lpNorm<Eigen::Infinity>();
  for (int k = 0; k < steps; ++k) v = step(k % spec_.time_steps_per_period, v);
  const double bound = std::exp(growth_sup_ * dt_ * steps) * 10.0 * start;
  const double sup = v.lpNorm<Eigen::Infinity>();
  if (!std::isfinite(sup) || sup > bound)
    throw NumericalError("period map unstable: sup norm grew beyond the a priori bound", sup, steps);
  return to_field(grid_, v);
}

Field PeriodMap::apply(const Field& v0) const { return advance(v0, spec_.time_steps_per_period); }

Field monodromy_map(const GrowthProfile& growth, const Grid& grid, double c, const PeriodicSpec& spec,
                    const Field& v0) {
  return PeriodMap(growth, grid, c, spec).apply(v0);
}

FloquetResult floquet_eigen(const PeriodMap& map, double tol, int max_iter) {
  if (!(tol > 0.0)) throw InvalidArgument("Floquet tolerance must be positive");
  const Grid& grid = map.grid();
  Vector v = Vector::Ones(static_cast<Eigen::Index>(grid.size())).normalized();
  double mu = 0.0;
  double res = 0.0;
  int it = 0;
  bool converged = false;
  for (it = 1; it <= max_iter; ++it) {
    const Vector w = to_vector(map.apply(to_field(grid, v)));
    mu = v.dot(w);
    res = (w - mu * v).norm();
    const double nw = w.norm();
    if (!(nw > 0.0)) throw NumericalError("period map annihilated the iterate", res, it);
    v = w / nw;
    if (v.sum() < 0.0) v = -v;
    if (res < tol) {
      converged = true;
      break;
    }
  }
  if (!converged) throw NumericalError("Floquet power iteration did not converge", res, max_iter);
  if (!(mu > 0.0)) throw PositivityError("principal multiplier is not positive", res, it);

  FloquetResult out;
  out.multiplier = mu;
  out.lambda_p = -std::log(mu) / map.spec().T;
  out.iterations = it;
  out.residual = res;
  Field phi = to_field(grid, v);
  Field half = map.advance(phi, map.spec().time_steps_per_period / 2);
  for (Field* f : {&phi, &half}) {
    if (!(f->min() > 0.0)) throw PositivityError("Floquet eigenfunction is not positive", res, it);
    *f *= 1.0 / f->max();
  }
  out.snapshots = {std::move(phi), std::move(half)};
  return out;
}

FloquetResult floquet_eigen(const GrowthProfile& growth, const Grid& grid, double c,
                            const PeriodicSpec& spec, double tol, int max_iter) {
  return floquet_eigen(PeriodMap(growth, grid, c, spec), tol, max_iter);
}

FloquetSweep truncated_floquet_sweep(const GrowthProfile& growth, double c,
                                     const std::vector<double>& R_list, const PeriodicSpec& spec,
                                     GridDensity density, double tol) {
  if (R_list.size() < 3) throw InvalidArgument("truncation sweep needs at least 3 lengths");
  for (std::size_t k = 1; k < R_list.size(); ++k)
    if (!(R_list[k] > R_list[k - 1])) throw InvalidArgument("truncation lengths must increase");
  density.H = spec.y_period;
  FloquetSweep out;
  for (double R : R_list) {
    const FloquetResult f = floquet_eigen(growth, grid_for_length(R, density), c, spec, tol);
    out.entries.push_back({R, f.lambda_p});
  }
  for (std::size_t k = 1; k < out.entries.size(); ++k)
    if (out.entries[k].lambda > out.entries[k - 1].lambda + tol)
      out.warnings.push_back("lambda_p(R) increases between R = " + std::to_string(out.entries[k - 1].R) +
                             " and R = " + std::to_string(out.entries[k].R) + "; refine the grid");
  out.gap = std::abs(out.entries.back().lambda - out.entries[out.entries.size() - 2].lambda);
  return out;
}

}  // namespace kppfront
