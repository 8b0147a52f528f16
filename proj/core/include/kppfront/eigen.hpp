#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "kppfront/domain.hpp"
#include "kppfront/reaction.hpp"
#include "kppfront/sparse.hpp"

namespace kppfront {

/// Discretization of -L for L = Delta + c d_1 + r, either literally or in a
/// symmetric gauge. A symmetric operator is an exact similarity transform
/// D (-L_h) D^{-1} of the literal one, so both share their spectrum; `gauge`
/// holds diag(D^{-1}) so that a physical vector is gauge (.) v.
struct SparseOperator {
  SparseMatrix matrix;
  bool symmetric = false;
  std::vector<double> gauge;
  std::optional<Grid> grid;

  std::size_t size() const { return static_cast<std::size_t>(matrix.rows()); }
};

/// Eigenvalue of -L (persistence <=> lambda < 0 for the drift operator).
struct EigenResult {
  double lambda = 0.0;
  /// Physical eigenvector, positive, normalized to sup = 1.
  std::vector<double> vector;
  /// Same data as a Field when the operator lives on a 2D grid.
  std::optional<Field> eigenfunction;
  int iterations = 0;
  double residual = 0.0;
  /// Eigenvalue of the independent non-symmetric solve, when one was run.
  std::optional<double> lambda_direct;
};

inline constexpr double kDefaultEigenTol = 1e-8;
inline constexpr int kDefaultEigenMaxIter = 500;

/// Symmetrized: gauge-similar self-adjoint form; otherwise -Delta_h - c d_h - r.
/// `t` selects the time slice of a time-periodic profile.
SparseOperator assemble(const Grid& grid, const GrowthProfile& growth, double c, bool symmetrized,
                        double t = 0.0);

/// -d^2/dz^2 - potential on a single axis (symmetric gauge for Neumann closures).
SparseOperator assemble_axis(const Axis& axis, const std::vector<double>& potential);

/// Principal eigenpair by inverse iteration with a safeguarded shift.
/// Throws NumericalError on non-convergence, PositivityError when the
/// converged vector is not positive.
EigenResult principal_eigen(const SparseOperator& op, double tol = kDefaultEigenTol,
                            int max_iter = kDefaultEigenMaxIter);

/// lambda(-d_yy - mu(y)) on (0, H) with ny nodes and the given lateral closure.
EigenResult cross_section_eigen(const std::function<double(double)>& mu, double H, int ny,
                                BoundaryKind bc, double tol = kDefaultEigenTol);

/// Principal eigenvalue of -(Delta + c d_1 + r) on the grid from the symmetric
/// form, cross-checked against the literal non-symmetric operator.
/// Throws ConsistencyError when the two differ by more than 10 tol.
EigenResult drift_eigen(const Grid& grid, const GrowthProfile& growth, double c,
                        double tol = kDefaultEigenTol);

struct TruncationEntry {
  double R;
  double lambda;
};

struct TruncationResult {
  std::vector<TruncationEntry> entries;
  double extrapolated = 0.0;
  double gap = 0.0;
  std::vector<std::string> warnings;
};

/// Grid density used by truncation sweeps: x spacing target and lateral layout.
struct GridDensity {
  double hx = 0.1;
  double H = 1.0;
  int ny = 20;
  BoundaryKind lateral = BoundaryKind::Neumann;
};

/// Grid on [-R, R] x [0, H] whose x spacing is the closest to density.hx from below.
Grid grid_for_length(double R, const GridDensity& density);

/// lambda_R with Dirichlet ends at +-R over an increasing list of R.
TruncationResult truncation_limit(const GrowthProfile& growth, double c,
                                  const std::vector<double>& R_list, const GridDensity& density,
                                  double tol = kDefaultEigenTol);

/// 2 sqrt(-lambda0) when lambda0 < 0, nothing otherwise.
std::optional<double> critical_speed(double lambda0);

}  // namespace kppfront
