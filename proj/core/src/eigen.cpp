#include "kppfront/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "kppfront/error.hpp"
#include "stencil.hpp"

namespace kppfront {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseMatrix from_triplets(std::size_t n, const Triplets& t) {
  SparseMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

double gershgorin_lower(const SparseMatrix& a) {
  double g = std::numeric_limits<double>::infinity();
  for (Eigen::Index r = 0; r < a.outerSize(); ++r) {
    double diag = 0.0;
    double off = 0.0;
    for (SparseMatrix::InnerIterator it(a, r); it; ++it) {
      if (it.col() == r)
        diag += it.value();
      else
        off += std::abs(it.value());
    }
    g = std::min(g, diag - off);
  }
  return g;
}

double row_sum_norm(const SparseMatrix& a) {
  double m = 0.0;
  for (Eigen::Index r = 0; r < a.outerSize(); ++r) {
    double s = 0.0;
    for (SparseMatrix::InnerIterator it(a, r); it; ++it) s += std::abs(it.value());
    m = std::max(m, s);
  }
  return m;
}

// Smallest Collatz-Wielandt ratio (A v)_i / v_i; a lower bound on the principal
// eigenvalue when A has nonpositive off-diagonals and v > 0.
double collatz_lower(const Vector& av, const Vector& v) {
  double lo = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < v.size(); ++i) lo = std::min(lo, av[i] / v[i]);
  return lo;
}

}  // namespace

SparseOperator assemble(const Grid& grid, const GrowthProfile& growth, double c, bool symmetrized,
                        double t) {
  SparseOperator op;
  op.grid = grid;
  if (!symmetrized) {
    SparseMatrix m = -transport_matrix(grid, c);
    for (int i = 0; i < grid.nx(); ++i)
      for (int j = 0; j < grid.ny(); ++j) {
        const auto k = static_cast<Eigen::Index>(grid.index(i, j));
        m.coeffRef(k, k) -= growth.at(t, grid.x(i), grid.y(j));
      }
    m.makeCompressed();
    op.matrix = std::move(m);
    return op;
  }

  if (grid.ends() == EndKind::Periodic && c != 0.0)
    throw InvalidArgument("symmetrization needs Dirichlet ends when c != 0");
  check_peclet(grid, c);
  const Axis& ax = grid.x_axis();
  const double hx2 = ax.h * ax.h;
  const double a = 1.0 / hx2 - c / (2.0 * ax.h);
  const double b = 1.0 / hx2 + c / (2.0 * ax.h);
  const double off = std::sqrt(a * b);
  const auto ys = symmetric_second_difference(grid.y_axis());

  Triplets trip;
  trip.reserve(grid.size() * 5);
  for (int i = 0; i < grid.nx(); ++i)
    for (int j = 0; j < grid.ny(); ++j) {
      const auto row = static_cast<int>(grid.index(i, j));
      trip.emplace_back(row, row, 2.0 / hx2 - growth.at(t, grid.x(i), grid.y(j)));
      for (int step : {-1, 1}) {
        const int k = neighbour(ax, i, step);
        if (k >= 0) trip.emplace_back(row, static_cast<int>(grid.index(k, j)), -off);
      }
      for (const auto& [k, w] : ys[j]) trip.emplace_back(row, static_cast<int>(grid.index(i, k)), -w);
    }
  op.matrix = from_triplets(grid.size(), trip);
  op.symmetric = true;

  const double ic = 0.5 * (grid.nx() - 1);
  const double ratio = a / b;
  op.gauge.resize(grid.size());
  for (int i = 0; i < grid.nx(); ++i) {
    const double gx = c == 0.0 ? 1.0 : std::pow(ratio, 0.5 * (i - ic));
    for (int j = 0; j < grid.ny(); ++j)
      op.gauge[grid.index(i, j)] = gx / std::sqrt(grid.y_axis().weight(j));
  }
  return op;
}

SparseOperator assemble_axis(const Axis& axis, const std::vector<double>& potential) {
  if (static_cast<int>(potential.size()) != axis.n)
    throw InvalidArgument("potential size does not match the axis");
  const auto rows = symmetric_second_difference(axis);
  Triplets trip;
  for (int i = 0; i < axis.n; ++i)
    for (const auto& [k, w] : rows[i]) trip.emplace_back(i, k, k == i ? -w - potential[i] : -w);
  SparseOperator op;
  op.matrix = from_triplets(static_cast<std::size_t>(axis.n), trip);
  op.symmetric = true;
  op.gauge.resize(axis.n);
  for (int i = 0; i < axis.n; ++i) op.gauge[i] = 1.0 / std::sqrt(axis.weight(i));
  return op;
}

EigenResult principal_eigen(const SparseOperator& op, double tol, int max_iter) {
  if (!(tol > 0.0)) throw InvalidArgument("eigen tolerance must be positive");
  if (max_iter < 1) throw InvalidArgument("eigen max_iter must be positive");
  const SparseMatrix& A = op.matrix;
  const Eigen::Index n = A.rows();
  const bool sym = op.symmetric;

  SparseMatrix shifted = A;
  const auto slots = diagonal_slots(shifted);
  Vector diag(n);
  for (Eigen::Index k = 0; k < n; ++k) diag[k] = A.valuePtr()[slots[k]];

  LuSolver lu;
  auto refactor = [&](double s) {
    for (Eigen::Index k = 0; k < n; ++k) shifted.valuePtr()[slots[k]] = diag[k] - s;
    lu.factorize(shifted);
  };

  const double g = gershgorin_lower(A);
  double sigma = g - std::max(1.0, 1e-3 * std::abs(g));
  refactor(sigma);

  Vector v = Vector::Ones(n).normalized();
  Vector u = v;
  double mu = 0.0;
  double res = std::numeric_limits<double>::infinity();
  double res_left = 0.0;
  int it = 0;
  bool converged = false;
  for (it = 1; it <= max_iter; ++it) {
    v = lu.solve(v);
    if (v.sum() < 0.0) v = -v;
    const double nv = v.norm();
    if (!(nv > 0.0) || !std::isfinite(nv)) throw NumericalError("inverse iteration broke down", res, it);
    v /= nv;
    const Vector av = A * v;
    mu = v.dot(av);
    if (!sym) {
      u = lu.solve_transposed(u);
      if (u.sum() < 0.0) u = -u;
      u.normalize();
      const double uv = u.dot(v);
      if (std::abs(uv) > 1e-3) mu = u.dot(av) / uv;
      res_left = (A.transpose() * u - mu * u).norm();
    }
    res = (av - mu * v).norm();
    if (res < tol && res_left < tol) {
      converged = true;
      break;
    }
    if (it % 5 == 0 && v.minCoeff() > 0.0) {
      double cand = collatz_lower(av, v);
      if (sym) cand = std::min(cand, mu);
      cand -= 1e-9 * (1.0 + std::abs(mu));
      if (cand > sigma) {
        sigma = cand;
        refactor(sigma);
      }
    }
  }
  if (!converged)
    throw NumericalError("principal eigenvalue iteration did not converge", res, max_iter);

  EigenResult out;
  out.lambda = mu;
  out.iterations = it;
  out.residual = res;
  out.vector.assign(v.data(), v.data() + n);
  if (!op.gauge.empty())
    for (Eigen::Index k = 0; k < n; ++k) out.vector[k] *= op.gauge[k];
  const double top = *std::max_element(out.vector.begin(), out.vector.end());
  const double bottom = *std::min_element(out.vector.begin(), out.vector.end());
  if (!(top > 0.0) || !(bottom > 0.0))
    throw PositivityError("principal eigenvector is not positive", res, it);
  for (auto& x : out.vector) x /= top;
  if (op.grid) out.eigenfunction = Field(*op.grid, out.vector);
  return out;
}

EigenResult cross_section_eigen(const std::function<double(double)>& mu, double H, int ny,
                                BoundaryKind bc, double tol) {
  Axis::Closure closure = Axis::Closure::Dirichlet;
  if (bc == BoundaryKind::Neumann) closure = Axis::Closure::Neumann;
  if (bc == BoundaryKind::PeriodicY) closure = Axis::Closure::Periodic;
  const Axis axis = Axis::make(0.0, H, ny, closure);
  std::vector<double> potential(ny);
  for (int j = 0; j < ny; ++j) potential[j] = mu(axis.node(j));
  return principal_eigen(assemble_axis(axis, potential), tol);
}

EigenResult drift_eigen(const Grid& grid, const GrowthProfile& growth, double c, double tol) {
  if (c < 0.0) throw InvalidArgument("speed must be nonnegative");
  // The literal operator is strongly non-normal, so its eigenvalue error is only linear
  // in the residual; solve it well below the reporting tolerance.
  const SparseOperator literal = assemble(grid, growth, c, false);
  const double floor = 1e3 * std::numeric_limits<double>::epsilon() * row_sum_norm(literal.matrix);
  EigenResult direct = principal_eigen(literal, std::max(1e-2 * tol, floor));
  if (grid.ends() == EndKind::Periodic && c != 0.0) {
    direct.lambda_direct = direct.lambda;
    return direct;
  }
  EigenResult sym = principal_eigen(assemble(grid, growth, c, true), tol);
  const double gap = std::abs(sym.lambda - direct.lambda);
  if (gap > 10.0 * tol)
    throw ConsistencyError("symmetric and direct eigenvalues disagree by " + std::to_string(gap), gap,
                           sym.iterations);
  sym.lambda_direct = direct.lambda;
  return sym;
}

Grid grid_for_length(double R, const GridDensity& density) {
  if (!(R > 0.0) || !(density.hx > 0.0)) throw InvalidArgument("length and spacing must be positive");
  const int cells = static_cast<int>(std::ceil(2.0 * R / density.hx - 1e-9));
  return Grid::build(R, density.H, std::max(cells - 1, 3), density.ny, density.lateral);
}

TruncationResult truncation_limit(const GrowthProfile& growth, double c,
                                  const std::vector<double>& R_list, const GridDensity& density,
                                  double tol) {
  if (R_list.size() < 3) throw InvalidArgument("truncation sweep needs at least 3 lengths");
  for (std::size_t k = 1; k < R_list.size(); ++k)
    if (!(R_list[k] > R_list[k - 1])) throw InvalidArgument("truncation lengths must increase");
  TruncationResult out;
  for (double R : R_list) {
    const Grid grid = grid_for_length(R, density);
    const EigenResult e = principal_eigen(assemble(grid, growth, c, true), tol);
    out.entries.push_back({R, e.lambda});
  }
  for (std::size_t k = 1; k < out.entries.size(); ++k)
    if (out.entries[k].lambda > out.entries[k - 1].lambda + tol)
      out.warnings.push_back("lambda_R increases between R = " + std::to_string(out.entries[k - 1].R) +
                             " and R = " + std::to_string(out.entries[k].R) + "; refine the grid");
  out.extrapolated = out.entries.back().lambda;
  out.gap = std::abs(out.entries.back().lambda - out.entries[out.entries.size() - 2].lambda);
  return out;
}

std::optional<double> critical_speed(double lambda0) {
  if (lambda0 < 0.0) return 2.0 * std::sqrt(-lambda0);
  return std::nullopt;
}

}  // namespace kppfront
