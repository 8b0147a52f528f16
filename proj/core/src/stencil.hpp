#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "kppfront/domain.hpp"

namespace kppfront {

using StencilRow = std::vector<std::pair<int, double>>;

// Neighbour index along an axis, or -1 when it falls on a Dirichlet boundary.
inline int neighbour(const Axis& a, int i, int step) {
  int k = i + step;
  if (a.closure == Axis::Closure::Periodic) return (k % a.n + a.n) % a.n;
  if (k < 0 || k >= a.n) {
    if (a.closure == Axis::Closure::Neumann) return i - step;  // mirror ghost
    return -1;
  }
  return k;
}

// d^2/dz^2 with the axis closure, literal form (mirror ghosts double the inward coupling).
inline std::vector<StencilRow> second_difference(const Axis& a) {
  const double w = 1.0 / (a.h * a.h);
  std::vector<StencilRow> rows(a.n);
  for (int i = 0; i < a.n; ++i) {
    rows[i].push_back({i, -2.0 * w});
    for (int step : {-1, 1}) {
      const int k = neighbour(a, i, step);
      if (k >= 0) rows[i].push_back({k, w});
    }
  }
  return rows;
}

// Similar form D S D^{-1} of the Neumann stencil with D = diag(sqrt(weight)); identical
// to the literal form for the other closures.
inline std::vector<StencilRow> symmetric_second_difference(const Axis& a) {
  auto rows = second_difference(a);
  if (a.closure != Axis::Closure::Neumann) return rows;
  for (int i = 0; i < a.n; ++i)
    for (auto& [k, v] : rows[i])
      if (k != i) v *= std::sqrt(a.weight(i) / a.weight(k));
  return rows;
}

// Central d/dz. A mirror ghost makes the wall derivative vanish.
inline std::vector<StencilRow> first_difference(const Axis& a) {
  const double w = 0.5 / a.h;
  std::vector<StencilRow> rows(a.n);
  for (int i = 0; i < a.n; ++i) {
    const int lo = neighbour(a, i, -1);
    const int hi = neighbour(a, i, 1);
    if (a.closure == Axis::Closure::Neumann && (i == 0 || i == a.n - 1)) continue;
    if (hi >= 0) rows[i].push_back({hi, w});
    if (lo >= 0) rows[i].push_back({lo, -w});
  }
  return rows;
}

}  // namespace kppfront
