#include "kppfront/sparse.hpp"

#include <string>

#include <Eigen/SparseLU>

#include "kppfront/error.hpp"
#include "stencil.hpp"

namespace kppfront {

struct LuSolver::Impl {
  using ColMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor>;
  Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>> lu;
  Eigen::Index rows = -1;
  Eigen::Index nnz = -1;
  bool factored = false;
  double threshold = 1e-8;
};

LuSolver::LuSolver() : impl_(std::make_unique<Impl>()) {}

LuSolver::LuSolver(const SparseMatrix& a) : LuSolver() { factorize(a); }

LuSolver::~LuSolver() = default;
LuSolver::LuSolver(LuSolver&&) noexcept = default;
LuSolver& LuSolver::operator=(LuSolver&&) noexcept = default;

void LuSolver::set_pivot_threshold(double threshold) {
  impl_->threshold = threshold;
  impl_->rows = -1;
}

void LuSolver::factorize(const SparseMatrix& a) {
  Impl::ColMatrix m = a;
  m.makeCompressed();
  if (m.rows() != impl_->rows || m.nonZeros() != impl_->nnz) {
    impl_->lu.setPivotThreshold(impl_->threshold);
    impl_->lu.analyzePattern(m);
    impl_->rows = m.rows();
    impl_->nnz = m.nonZeros();
  }
  impl_->lu.factorize(m);
  impl_->factored = impl_->lu.info() == Eigen::Success;
  if (!impl_->factored)
    throw NumericalError("sparse LU factorization failed: " + impl_->lu.lastErrorMessage());
}

Vector LuSolver::solve(const Vector& b) const {
  if (!impl_->factored) throw NumericalError("solve called before a successful factorization");
  Vector x = impl_->lu.solve(b);
  if (impl_->lu.info() != Eigen::Success) throw NumericalError("sparse LU solve failed");
  return x;
}

Vector LuSolver::solve_transposed(const Vector& b) const {
  if (!impl_->factored) throw NumericalError("solve called before a successful factorization");
  Vector x = impl_->lu.transpose().solve(b);
  return x;
}

bool LuSolver::ready() const { return impl_->factored; }

std::size_t LuSolver::memory_bytes() const {
  if (!impl_->factored) return 0;
  const auto nnz = static_cast<std::size_t>(impl_->lu.nnzL() + impl_->lu.nnzU());
  return nnz * (sizeof(double) + sizeof(int));
}

std::vector<int> diagonal_slots(const SparseMatrix& a) {
  std::vector<int> slots(static_cast<std::size_t>(a.rows()), -1);
  for (Eigen::Index r = 0; r < a.outerSize(); ++r)
    for (SparseMatrix::InnerIterator it(a, r); it; ++it)
      if (it.col() == r) slots[r] = static_cast<int>(&it.value() - a.valuePtr());
  for (int s : slots)
    if (s < 0) throw InvalidArgument("matrix has a structurally missing diagonal entry");
  return slots;
}

void check_peclet(const Grid& grid, double c) {
  if (std::abs(c) * grid.hx() / 2.0 >= 1.0)
    throw InvalidArgument("grid Peclet number c hx / 2 = " + std::to_string(std::abs(c) * grid.hx() / 2.0) +
                          " must stay below 1; refine nx");
}

SparseMatrix transport_matrix(const Grid& grid, double c) {
  check_peclet(grid, c);
  const auto xs = second_difference(grid.x_axis());
  const auto ys = second_difference(grid.y_axis());
  const auto dx = first_difference(grid.x_axis());
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(grid.size() * 5);
  for (int i = 0; i < grid.nx(); ++i)
    for (int j = 0; j < grid.ny(); ++j) {
      const auto row = static_cast<int>(grid.index(i, j));
      for (const auto& [k, w] : xs[i]) t.emplace_back(row, static_cast<int>(grid.index(k, j)), w);
      for (const auto& [k, w] : dx[i]) t.emplace_back(row, static_cast<int>(grid.index(k, j)), c * w);
      for (const auto& [k, w] : ys[j]) t.emplace_back(row, static_cast<int>(grid.index(i, k)), w);
    }
  SparseMatrix m(static_cast<Eigen::Index>(grid.size()), static_cast<Eigen::Index>(grid.size()));
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

}  // namespace kppfront
