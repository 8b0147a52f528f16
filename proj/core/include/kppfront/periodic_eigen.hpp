#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kppfront/domain.hpp"
#include "kppfront/eigen.hpp"
#include "kppfront/reaction.hpp"
#include "kppfront/sparse.hpp"

namespace kppfront {

struct PeriodicSpec {
  double T = 1.0;
  /// Lateral cell height H used when a sweep builds its own grids.
  double y_period = 1.0;
  int time_steps_per_period = 64;

  void validate() const;
};

struct FloquetResult {
  double lambda_p = 0.0;
  /// Principal eigenvalue of the period map, exp(-lambda_p T).
  double multiplier = 0.0;
  /// Eigenfunction at t = 0 and t = T/2, each normalized to sup = 1.
  std::vector<Field> snapshots;
  int iterations = 0;
  /// ||map(phi) - multiplier phi||_2 / ||phi||_2 at exit.
  double residual = 0.0;
};

/// Linear period map of v_t = Delta v + c d_1 v + r(t, x) v over one period:
/// Crank-Nicolson in all linear terms with r frozen at each step midpoint.
///
/// Step factorizations are cached while they fit in `cache_bytes`; beyond
/// that they are recomputed on every application.
class PeriodMap {
public:
  PeriodMap(const GrowthProfile& growth, const Grid& grid, double c, const PeriodicSpec& spec,
            std::size_t cache_bytes = std::size_t{1} << 30);

  const Grid& grid() const { return grid_; }
  const PeriodicSpec& spec() const { return spec_; }

  /// v(T) from v(0) = v0.
  Field apply(const Field& v0) const;
  /// v after the first `steps` time steps.
  Field advance(const Field& v0, int steps) const;

private:
  struct Step {
    std::vector<double> rate;
    SparseMatrix explicit_part;
    std::optional<LuSolver> lu;
  };

  Vector step(int k, const Vector& v) const;
  SparseMatrix implicit_matrix(int k) const;

  Grid grid_;
  PeriodicSpec spec_;
  double dt_;
  double growth_sup_;
  SparseMatrix generator_;
  std::vector<int> diag_;
  std::vector<Step> steps_;
  bool autonomous_;
};

/// Convenience wrapper: one application of the period map.
Field monodromy_map(const GrowthProfile& growth, const Grid& grid, double c, const PeriodicSpec& spec,
                    const Field& v0);

inline constexpr int kDefaultFloquetMaxIter = 5000;

/// Power iteration on the period map from the all-ones field.
FloquetResult floquet_eigen(const GrowthProfile& growth, const Grid& grid, double c,
                            const PeriodicSpec& spec, double tol = kDefaultEigenTol,
                            int max_iter = kDefaultFloquetMaxIter);
FloquetResult floquet_eigen(const PeriodMap& map, double tol = kDefaultEigenTol,
                            int max_iter = kDefaultFloquetMaxIter);

struct FloquetSweep {
  std::vector<TruncationEntry> entries;
  double gap = 0.0;
  std::vector<std::string> warnings;
};

/// lambda_p(R) over increasing R with Dirichlet ends, lateral layout from `density`
/// (height spec.y_period).
FloquetSweep truncated_floquet_sweep(const GrowthProfile& growth, double c,
                                     const std::vector<double>& R_list, const PeriodicSpec& spec,
                                     GridDensity density, double tol = kDefaultEigenTol);

}  // namespace kppfront
