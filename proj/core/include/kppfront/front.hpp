#pragma once

#include <string>
#include <vector>

#include "kppfront/domain.hpp"
#include "kppfront/eigen.hpp"
#include "kppfront/reaction.hpp"

namespace kppfront {

struct FrontSolution {
  Field U;
  /// sup |Delta_h U + c d_h U + f(U)| at exit.
  double residual = 0.0;
  double c = 0.0;
  BoundaryKind bc = BoundaryKind::Neumann;
  double mass = 0.0;
  bool positive = false;
  bool tail_ok = false;
  /// The iteration settled on U = 0 (no front at this speed).
  bool trivial = false;
  int iterations = 0;
};

inline constexpr double kDefaultNewtonTol = 1e-10;
inline constexpr int kDefaultNewtonMaxIter = 500;

/// Delta_h U + c d_h U + f(x, U) on the grid of U.
Field front_residual(const Reaction& reaction, double c, const Field& U);

/// eps phi with eps halved until the residual is >= -1e-12 everywhere and eps sup phi <= S.
/// Throws InvalidArgument when eig.lambda >= 0 and NumericalError after 60 halvings.
Field subsolution_seed(const EigenResult& eig, const Reaction& reaction, double c, double epsilon = 1.0);

/// Pseudo-transient continuation that hands over to damped Newton once the
/// pseudo time step is large. Converges on sup |F| < tol; U = 0 is reported
/// as a trivial root, not an error.
FrontSolution newton_front(const Reaction& reaction, double c, const Grid& grid, const Field& seed,
                           double tol = kDefaultNewtonTol, int max_iter = kDefaultNewtonMaxIter);

/// newton_front from the constant supersolution S.
FrontSolution solve_front(const Reaction& reaction, double c, const Grid& grid,
                          double tol = kDefaultNewtonTol);

/// Same pipeline on a grid with Dirichlet lateral edges.
FrontSolution dirichlet_front(const Reaction& reaction, double c, const Grid& grid,
                              double tol = kDefaultNewtonTol);

struct UniquenessReport {
  bool skipped = false;
  std::string note;
  std::vector<std::string> seeds;
  std::vector<FrontSolution> fronts;
  /// Largest pairwise sup distance between converged limits.
  double max_distance = 0.0;
  bool violation = false;
};

/// True when r does not depend on x1 at any grid row.
bool x_homogeneous(const GrowthProfile& growth, const Grid& grid);

/// Solves from up to three seeds (subsolution, constant S, state time-marched to t = 50)
/// and compares the limits. Limits farther apart than 100 tol flag a violation.
UniquenessReport uniqueness_probe(const Reaction& reaction, double c, const Grid& grid, int n_seeds = 3,
                                  double tol = kDefaultNewtonTol, int workers = 1);

}  // namespace kppfront
