#pragma once

#include <memory>
#include <vector>

#include <Eigen/Sparse>

#include "kppfront/domain.hpp"

namespace kppfront {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

/// Sparse LU of a square matrix with a fixed pattern.
///
/// The pivot rule prefers the (column-permuted) diagonal, so M-matrices are
/// eliminated without cancellation and solves with nonnegative right-hand
/// sides stay nonnegative componentwise. Refactorizing a matrix with the same
/// pattern reuses the symbolic analysis.
class LuSolver {
public:
  LuSolver();
  explicit LuSolver(const SparseMatrix& a);
  ~LuSolver();
  LuSolver(LuSolver&&) noexcept;
  LuSolver& operator=(LuSolver&&) noexcept;

  /// Relative size a diagonal pivot needs to be kept (1 = partial pivoting).
  void set_pivot_threshold(double threshold);
  void factorize(const SparseMatrix& a);
  Vector solve(const Vector& b) const;
  Vector solve_transposed(const Vector& b) const;
  bool ready() const;
  /// Approximate storage of the factors.
  std::size_t memory_bytes() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Positions of the diagonal entries inside the value array of a compressed matrix.
std::vector<int> diagonal_slots(const SparseMatrix& a);

/// Discrete generator Delta_h + c d_h on the grid, literal central differences.
/// Neumann walls use mirror ghosts, Periodic closures wrap, Dirichlet ends drop
/// the boundary neighbour. Refuses grids with Peclet number c hx / 2 >= 1.
SparseMatrix transport_matrix(const Grid& grid, double c);

/// Throws InvalidArgument when c hx / 2 >= 1.
void check_peclet(const Grid& grid, double c);

inline Vector to_vector(const Field& f) {
  return Eigen::Map<const Vector>(f.data().data(), static_cast<Eigen::Index>(f.size()));
}

inline Field to_field(const Grid& grid, const Vector& v) {
  return Field(grid, std::vector<double>(v.data(), v.data() + v.size()));
}

}  // namespace kppfront
