#include "kppfront/front.hpp"

#include <algorithm>
#include <cmath>

#include "kppfront/error.hpp"
#include "kppfront/evolve.hpp"
#include "kppfront/parallel.hpp"
#include "kppfront/sparse.hpp"

namespace kppfront {

namespace {

class FrontSystem {
public:
  FrontSystem(const Reaction& reaction, double c, const Grid& grid)
      : reaction_(reaction), grid_(grid), A_(transport_matrix(grid, c)), xs_(grid.size()), ys_(grid.size()) {
    for (int i = 0; i < grid.nx(); ++i)
      for (int j = 0; j < grid.ny(); ++j) {
        xs_[grid.index(i, j)] = grid.x(i);
        ys_[grid.index(i, j)] = grid.y(j);
      }
  }

  const SparseMatrix& generator() const { return A_; }

  Vector residual(const Vector& u) const {
    Vector F = A_ * u;
    for (Eigen::Index k = 0; k < u.size(); ++k) F[k] += reaction_(xs_[k], ys_[k], u[k]);
    return F;
  }

  Vector slope(const Vector& u) const {
    Vector d(u.size());
    for (Eigen::Index k = 0; k < u.size(); ++k) d[k] = reaction_.ds(0.0, xs_[k], ys_[k], u[k]);
    return d;
  }

private:
  const Reaction& reaction_;
  Grid grid_;
  SparseMatrix A_;
  std::vector<double> xs_;
  std::vector<double> ys_;
};

double sup(const Vector& v) { return v.lpNorm<Eigen::Infinity>(); }

Vector clamp_nonnegative(Vector v) { return v.cwiseMax(0.0); }

FrontSolution finish(const Grid& grid, double c, const Vector& u, double residual, int iterations,
                     double saturation) {
  FrontSolution out{to_field(grid, u), residual, c, grid.lateral()};
  out.iterations = iterations;
  out.mass = norm(out.U, NormKind::L1);
  out.trivial = sup(u) < 1e-8 * saturation;
  out.positive = !out.trivial && out.U.min() > 0.0;
  out.tail_ok = out.trivial || effectively_decayed(out.U);
  return out;
}

}  // namespace

Field front_residual(const Reaction& reaction, double c, const Field& U) {
  FrontSystem sys(reaction, c, U.grid());
  return to_field(U.grid(), sys.residual(to_vector(U)));
}

Field subsolution_seed(const EigenResult& eig, const Reaction& reaction, double c, double epsilon) {
  if (!(eig.lambda < 0.0)) throw InvalidArgument("subsolution seed needs a negative principal eigenvalue");
  if (!eig.eigenfunction) throw InvalidArgument("subsolution seed needs a 2D eigenfunction");
  if (!(epsilon > 0.0)) throw InvalidArgument("epsilon must be positive");
  const Field& phi = *eig.eigenfunction;
  FrontSystem sys(reaction, c, phi.grid());
  const Vector base = to_vector(phi);
  double eps = std::min(epsilon, reaction.saturation() / base.maxCoeff());
  for (int h = 0; h <= 60; ++h, eps *= 0.5) {
    const Vector u = eps * base;
    if (sys.residual(u).minCoeff() >= -1e-12) return to_field(phi.grid(), u);
  }
  throw NumericalError("could not certify a subsolution after 60 halvings; the discrete eigenvalue may be >= 0");
}

FrontSolution newton_front(const Reaction& reaction, double c, const Grid& grid, const Field& seed,
                           double tol, int max_iter) {
  if (!(seed.grid() == grid)) throw InvalidArgument("seed lives on a different grid");
  if (!seed.finite() || seed.min() < 0.0) throw InvalidArgument("seed must be finite and nonnegative");
  if (!(tol > 0.0)) throw InvalidArgument("Newton tolerance must be positive");
  FrontSystem sys(reaction, c, grid);
  SparseMatrix J = sys.generator();
  const auto slots = diagonal_slots(J);
  Vector diag(J.rows());
  for (Eigen::Index k = 0; k < J.rows(); ++k) diag[k] = J.valuePtr()[slots[k]];
  LuSolver lu;
  lu.set_pivot_threshold(0.1);

  auto solve_step = [&](const Vector& u, const Vector& F, double shift) {
    const Vector d = sys.slope(u);
    for (Eigen::Index k = 0; k < J.rows(); ++k) J.valuePtr()[slots[k]] = diag[k] + d[k] - shift;
    lu.factorize(J);
    return Vector(lu.solve(-F));
  };

  // Tail values sit far below the absolute residual floor. A few Newton
  // steps with diagonal pivoting make them componentwise accurate.
  auto scaled = [&](const Vector& v, const Vector& R) {
    double m = 0.0;
    for (Eigen::Index k = 0; k < v.size(); ++k)
      m = std::max(m, std::abs(R[k]) / (std::abs(diag[k]) * v[k] + 1e-300));
    return m;
  };
  auto polish = [&](Vector u, Vector F, double fn, int it) {
    lu.set_pivot_threshold(1e-8);
    double rel = scaled(u, F);
    for (int k = 0; k < 8 && rel > 1e-12; ++k) {
      const Vector next = clamp_nonnegative(u + solve_step(u, F, 0.0));
      const Vector Fn = sys.residual(next);
      const double fnext = sup(Fn);
      const double rnext = scaled(next, Fn);
      if (!std::isfinite(fnext) || fnext > std::max(fn, tol) || rnext >= rel) break;
      u = next;
      F = Fn;
      fn = fnext;
      rel = rnext;
    }
    return finish(grid, c, u, fn, it, reaction.saturation());
  };

  Vector u = to_vector(seed);
  Vector F = sys.residual(u);
  double fn = sup(F);
  const double dtau0 = 0.5 / std::max(1.0, reaction.linearization().bound());
  double dtau = dtau0;
  bool continuation = true;
  for (int it = 1; it <= max_iter; ++it) {
    if (fn < tol) return polish(u, F, fn, it);
    if (continuation) {
      const Vector next = clamp_nonnegative(u + solve_step(u, F, 1.0 / dtau));
      const Vector Fn = sys.residual(next);
      const double fnext = sup(Fn);
      if (!std::isfinite(fnext)) {
        dtau = std::max(0.25 * dtau, 1e-12);
        continue;
      }
      dtau = std::max(dtau0, dtau * std::clamp(fn / fnext, 0.1, 10.0));
      u = next;
      F = Fn;
      fn = fnext;
      if (dtau > 1e6) continuation = false;
    } else {
      const Vector delta = solve_step(u, F, 0.0);
      bool accepted = false;
      for (double step = 1.0; step > 1e-9; step *= 0.5) {
        const Vector next = clamp_nonnegative(u + step * delta);
        const Vector Fn = sys.residual(next);
        const double fnext = sup(Fn);
        if (std::isfinite(fnext) && fnext < fn) {
          u = next;
          F = Fn;
          fn = fnext;
          accepted = true;
          break;
        }
      }
      if (!accepted) {
        continuation = true;
        dtau = 1.0;
      }
    }
  }
  if (fn < tol) return polish(u, F, fn, max_iter);
  throw NumericalError("front iteration did not converge", fn, max_iter);
}

FrontSolution solve_front(const Reaction& reaction, double c, const Grid& grid, double tol) {
  return newton_front(reaction, c, grid, Field(grid, reaction.saturation()), tol);
}

FrontSolution dirichlet_front(const Reaction& reaction, double c, const Grid& grid, double tol) {
  if (grid.lateral() != BoundaryKind::Dirichlet)
    throw InvalidArgument("dirichlet_front needs a grid with Dirichlet lateral edges");
  return solve_front(reaction, c, grid, tol);
}

bool x_homogeneous(const GrowthProfile& growth, const Grid& grid) {
  for (int j = 0; j < grid.ny(); ++j) {
    const double ref = growth(grid.x(0), grid.y(j));
    for (int i = 1; i < grid.nx(); ++i)
      if (std::abs(growth(grid.x(i), grid.y(j)) - ref) > 1e-12 * (1.0 + std::abs(ref))) return false;
  }
  return true;
}

UniquenessReport uniqueness_probe(const Reaction& reaction, double c, const Grid& grid, int n_seeds,
                                  double tol, int workers) {
  if (n_seeds < 2) throw InvalidArgument("uniqueness probe needs at least 2 seeds");
  UniquenessReport report;
  if (x_homogeneous(reaction.linearization(), grid)) {
    report.skipped = true;
    report.note = "growth rate does not depend on x1; fronts are unique only up to translation";
    return report;
  }
  const Field top(grid, reaction.saturation());
  std::vector<Field> seeds;
  const EigenResult eig = drift_eigen(grid, reaction.linearization(), c);
  Field start = top;
  if (eig.lambda < 0.0) {
    start = subsolution_seed(eig, reaction, c);
    seeds.push_back(start);
    report.seeds.push_back("subsolution");
  } else {
    report.note = "principal eigenvalue is nonnegative; no subsolution seed exists";
  }
  seeds.push_back(top);
  report.seeds.push_back("supersolution");
  if (static_cast<int>(seeds.size()) < n_seeds) {
    RunOptions opts;
    opts.horizon = 50.0;
    opts.sample_every = 50.0;
    seeds.push_back(*run(reaction, c, start, opts).final_state);
    report.seeds.push_back("time_marched");
  }
  while (static_cast<int>(seeds.size()) > n_seeds) {
    seeds.pop_back();
    report.seeds.pop_back();
  }
  report.fronts = parallel_map(
      seeds, [&](const Field& s) { return newton_front(reaction, c, grid, s, tol); }, workers);
  for (std::size_t a = 0; a < report.fronts.size(); ++a)
    for (std::size_t b = a + 1; b < report.fronts.size(); ++b)
      report.max_distance =
          std::max(report.max_distance, distance(report.fronts[a].U, report.fronts[b].U, NormKind::Sup));
  report.violation = report.max_distance > 100.0 * tol;
  return report;
}

}  // namespace kppfront
