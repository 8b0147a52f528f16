#include "kppfront/domain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "kppfront/error.hpp"

namespace kppfront {

std::string_view to_string(BoundaryKind kind) {
  switch (kind) {
    case BoundaryKind::Neumann: return "neumann";
    case BoundaryKind::Dirichlet: return "dirichlet";
    case BoundaryKind::PeriodicY: return "periodic";
  }
  return "unknown";
}

BoundaryKind parse_boundary_kind(std::string_view text) {
  if (text == "neumann") return BoundaryKind::Neumann;
  if (text == "dirichlet") return BoundaryKind::Dirichlet;
  if (text == "periodic" || text == "periodic_y") return BoundaryKind::PeriodicY;
  throw InvalidArgument("unknown boundary kind '" + std::string(text) + "'");
}

Axis Axis::make(double origin, double length, int n, Closure closure) {
  if (!(length > 0.0)) throw InvalidArgument("axis length must be positive");
  if (n < 3) throw InvalidArgument("axis needs at least 3 nodes");
  Axis a;
  a.origin = origin;
  a.length = length;
  a.n = n;
  a.closure = closure;
  switch (closure) {
    case Closure::Dirichlet: a.h = length / (n + 1); break;
    case Closure::Neumann: a.h = length / (n - 1); break;
    case Closure::Periodic: a.h = length / n; break;
  }
  return a;
}

double Axis::node(int i) const {
  if (closure == Closure::Dirichlet) return origin + (i + 1) * h;
  return origin + i * h;
}

double Axis::weight(int i) const {
  if (closure == Closure::Neumann && (i == 0 || i == n - 1)) return 0.5;
  return 1.0;
}

Grid Grid::build(double X, double H, int nx, int ny, BoundaryKind lateral, EndKind ends) {
  if (!(X > 0.0) || !(H > 0.0)) throw InvalidArgument("grid dimensions X and H must be positive");
  if (nx < 3 || ny < 3) throw InvalidArgument("grid needs nx >= 3 and ny >= 3");
  const auto xc = ends == EndKind::Dirichlet ? Axis::Closure::Dirichlet : Axis::Closure::Periodic;
  Axis::Closure yc = Axis::Closure::Dirichlet;
  if (lateral == BoundaryKind::Neumann) yc = Axis::Closure::Neumann;
  if (lateral == BoundaryKind::PeriodicY) yc = Axis::Closure::Periodic;
  return Grid(Axis::make(-X, 2.0 * X, nx, xc), Axis::make(0.0, H, ny, yc), lateral, ends);
}

double Grid::cell_area(int i, int j) const {
  return x_.h * x_.weight(i) * y_.h * y_.weight(j);
}

int Grid::mid_row() const {
  const double target = 0.5 * y_.length;
  int best = 0;
  for (int j = 1; j < y_.n; ++j)
    if (std::abs(y(j) - target) < std::abs(y(best) - target) - 1e-12) best = j;
  return best;
}

bool Grid::operator==(const Grid& o) const {
  return x_.n == o.x_.n && y_.n == o.y_.n && x_.h == o.x_.h && y_.h == o.y_.h &&
         x_.origin == o.x_.origin && y_.origin == o.y_.origin && lateral_ == o.lateral_ &&
         ends_ == o.ends_;
}

Field::Field(Grid grid) : grid_(grid), values_(grid.size(), 0.0) {}

Field::Field(Grid grid, double constant) : grid_(grid), values_(grid.size(), constant) {}

Field::Field(Grid grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) throw InvalidArgument("field size does not match grid");
}

bool Field::finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

double Field::min() const { return *std::min_element(values_.begin(), values_.end()); }
double Field::max() const { return *std::max_element(values_.begin(), values_.end()); }

Field& Field::operator*=(double s) {
  for (auto& v : values_) v *= s;
  return *this;
}

Field& Field::operator+=(const Field& other) {
  if (!(other.grid_ == grid_)) throw InvalidArgument("fields live on different grids");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  if (!(other.grid_ == grid_)) throw InvalidArgument("fields live on different grids");
  for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
  return *this;
}

Field operator*(double s, Field f) { return f *= s; }
Field operator+(Field a, const Field& b) { return a += b; }
Field operator-(Field a, const Field& b) { return a -= b; }

double norm(const Field& field, NormKind kind) {
  const Grid& g = field.grid();
  double acc = 0.0;
  switch (kind) {
    case NormKind::Sup:
      for (double v : field.values()) acc = std::max(acc, std::abs(v));
      return acc;
    case NormKind::L1:
      for (int i = 0; i < g.nx(); ++i)
        for (int j = 0; j < g.ny(); ++j) acc += g.cell_area(i, j) * std::abs(field.at(i, j));
      return acc;
    case NormKind::L2:
      for (int i = 0; i < g.nx(); ++i)
        for (int j = 0; j < g.ny(); ++j) acc += g.cell_area(i, j) * field.at(i, j) * field.at(i, j);
      return std::sqrt(acc);
  }
  return acc;
}

double distance(const Field& a, const Field& b, NormKind kind) { return norm(a - b, kind); }

std::vector<TailSample> tail_slice(const Field& field, int row, double a, double b) {
  const Grid& g = field.grid();
  const double tol = 1e-12 * g.X();
  if (!(a < b)) throw InvalidArgument("tail window must satisfy a < b");
  if (a < -g.X() - tol || b > g.X() + tol) throw InvalidArgument("tail window leaves the grid");
  if (row < 0 || row >= g.ny()) throw InvalidArgument("tail row out of range");
  std::vector<TailSample> out;
  for (int i = 0; i < g.nx(); ++i) {
    const double x = g.x(i);
    if (x >= a - tol && x <= b + tol) out.push_back({x, field.at(i, row)});
  }
  return out;
}

std::vector<TailSample> tail_slice(const Field& field, double a, double b) {
  return tail_slice(field, field.grid().mid_row(), a, b);
}

double outer_sup_ratio(const Field& field, double outer_fraction) {
  const Grid& g = field.grid();
  const double cut = (1.0 - outer_fraction) * g.X();
  double outer = 0.0;
  double total = 0.0;
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny(); ++j) {
      const double v = std::abs(field.at(i, j));
      total = std::max(total, v);
      if (std::abs(g.x(i)) >= cut) outer = std::max(outer, v);
    }
  return total > 0.0 ? outer / total : 0.0;
}

bool effectively_decayed(const Field& field, double outer_fraction, double threshold) {
  return outer_sup_ratio(field, outer_fraction) < threshold;
}

}  // namespace kppfront
