#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace kppfront {

/// Boundary condition on the lateral (y) edges of the strip.
enum class BoundaryKind { Neumann, Dirichlet, PeriodicY };

/// Closure of the truncated x1 ends. Dirichlet is the production setting;
/// Periodic exists for closed-box validation runs.
enum class EndKind { Dirichlet, Periodic };

std::string_view to_string(BoundaryKind kind);
BoundaryKind parse_boundary_kind(std::string_view text);

/// Uniform 1D node layout along one coordinate.
///
///   Dirichlet: n interior nodes, h = length/(n+1), node(i) = origin + (i+1)h
///   Neumann:   n nodes including both walls, h = length/(n-1), mirror ghosts
///   Periodic:  n nodes, h = length/n, node(i) = origin + i h
struct Axis {
  enum class Closure { Dirichlet, Neumann, Periodic };

  double origin = 0.0;
  double length = 1.0;
  int n = 0;
  double h = 0.0;
  Closure closure = Closure::Dirichlet;

  static Axis make(double origin, double length, int n, Closure closure);

  double node(int i) const;
  /// Trapezoidal quadrature weight in units of h.
  double weight(int i) const;
};

/// Rectangle [-X, X] x [0, H] with y-fastest node ordering.
class Grid {
public:
  static Grid build(double X, double H, int nx, int ny, BoundaryKind lateral,
                    EndKind ends = EndKind::Dirichlet);

  const Axis& x_axis() const { return x_; }
  const Axis& y_axis() const { return y_; }

  double X() const { return 0.5 * x_.length; }
  double H() const { return y_.length; }
  int nx() const { return x_.n; }
  int ny() const { return y_.n; }
  double hx() const { return x_.h; }
  double hy() const { return y_.h; }
  BoundaryKind lateral() const { return lateral_; }
  EndKind ends() const { return ends_; }

  std::size_t size() const { return static_cast<std::size_t>(x_.n) * y_.n; }
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * y_.n + j; }
  double x(int i) const { return x_.node(i); }
  double y(int j) const { return y_.node(j); }
  /// Area element of node (i, j) for quadrature.
  double cell_area(int i, int j) const;
  /// Row index closest to mid-height.
  int mid_row() const;

  bool operator==(const Grid& other) const;

private:
  Grid(Axis x, Axis y, BoundaryKind lateral, EndKind ends)
      : x_(x), y_(y), lateral_(lateral), ends_(ends) {}

  Axis x_;
  Axis y_;
  BoundaryKind lateral_;
  EndKind ends_;
};

/// Scalar function sampled on a Grid.
class Field {
public:
  explicit Field(Grid grid);
  Field(Grid grid, std::vector<double> values);
  Field(Grid grid, double constant);

  template <class Fn>
  static Field sample(const Grid& grid, Fn&& fn) {
    Field out(grid);
    for (int i = 0; i < grid.nx(); ++i)
      for (int j = 0; j < grid.ny(); ++j) out.at(i, j) = fn(grid.x(i), grid.y(j));
    return out;
  }

  const Grid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  std::vector<double>& data() { return values_; }
  const std::vector<double>& data() const { return values_; }

  double& at(int i, int j) { return values_[grid_.index(i, j)]; }
  double at(int i, int j) const { return values_[grid_.index(i, j)]; }
  std::size_t size() const { return values_.size(); }

  bool finite() const;
  double min() const;
  double max() const;

  Field& operator*=(double s);
  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);

private:
  Grid grid_;
  std::vector<double> values_;
};

Field operator*(double s, Field f);
Field operator+(Field a, const Field& b);
Field operator-(Field a, const Field& b);

enum class NormKind { Sup, L1, L2 };

double norm(const Field& field, NormKind kind);
/// Pointwise distance between two fields on the same grid.
double distance(const Field& a, const Field& b, NormKind kind);

enum class Side { Left, Right };

struct TailSample {
  double x;
  double value;
};

/// Samples along the mid-height row with x1 in [a, b], increasing in x1.
/// Throws InvalidArgument when a >= b or the window leaves [-X, X].
std::vector<TailSample> tail_slice(const Field& field, double a, double b);
std::vector<TailSample> tail_slice(const Field& field, int row, double a, double b);

/// sup over |x1| >= (1 - outer_fraction) X divided by the global sup.
double outer_sup_ratio(const Field& field, double outer_fraction = 0.1);
/// Effective-infinity acceptance of a truncated solution.
bool effectively_decayed(const Field& field, double outer_fraction = 0.1,
                         double threshold = 1e-6);

}  // namespace kppfront
