#pragma once

// Independent reference computations. Nothing here calls into the library's
// assembly or solvers: stencils are written out by hand and solved densely.

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <random>

#include "kppfront/domain.hpp"

namespace oracle {

/// Adaptive Simpson on [a, b].
inline double simpson(const std::function<double(double)>& f, double a, double b, double eps, int depth = 40) {
  auto rule = [&](double l, double r, double fl, double fm, double fr) { return (r - l) / 6.0 * (fl + 4.0 * fm + fr); };
  std::function<double(double, double, double, double, double, double, double, int)> rec =
      [&](double l, double r, double fl, double fm, double fr, double whole, double e, int d) {
        const double m = 0.5 * (l + r);
        const double lm = 0.5 * (l + m), rm = 0.5 * (m + r);
        const double flm = f(lm), frm = f(rm);
        const double left = rule(l, m, fl, flm, fm), right = rule(m, r, fm, frm, fr);
        if (d <= 0 || std::abs(left + right - whole) <= 15.0 * e) return left + right + (left + right - whole) / 15.0;
        return rec(l, m, fl, flm, fm, left, 0.5 * e, d - 1) + rec(m, r, fm, frm, fr, right, 0.5 * e, d - 1);
      };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return rec(a, b, fa, fm, fb, rule(a, b, fa, fm, fb), eps, depth);
}

/// Dense Delta_h + c d_h written node by node: central differences, Dirichlet
/// ends in x (or wrap when periodic_x), lateral closure per grid.
inline Eigen::MatrixXd dense_generator(const kppfront::Grid& g, double c, bool periodic_x = false) {
  const int nx = g.nx(), ny = g.ny();
  const double hx = g.hx(), hy = g.hy();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nx * ny, nx * ny);
  auto id = [&](int i, int j) { return i * ny + j; };
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) {
      const int k = id(i, j);
      // x direction
      A(k, k) -= 2.0 / (hx * hx);
      for (int s : {-1, 1}) {
        int ii = i + s;
        if (periodic_x) ii = (ii + nx) % nx;
        if (ii < 0 || ii >= nx) continue;
        A(k, id(ii, j)) += 1.0 / (hx * hx) + s * c / (2.0 * hx);
      }
      // y direction
      A(k, k) -= 2.0 / (hy * hy);
      for (int s : {-1, 1}) {
        int jj = j + s;
        switch (g.lateral()) {
          case kppfront::BoundaryKind::Dirichlet:
            if (jj < 0 || jj >= ny) continue;
            break;
          case kppfront::BoundaryKind::Neumann:
            if (jj < 0) jj = 1;
            if (jj >= ny) jj = ny - 2;
            break;
          case kppfront::BoundaryKind::PeriodicY:
            jj = (jj + ny) % ny;
            break;
        }
        A(k, id(i, jj)) += 1.0 / (hy * hy);
      }
    }
  return A;
}

inline std::vector<double> random_values(std::size_t n, double lo, double hi, std::mt19937& rng) {
  std::uniform_real_distribution<double> d(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

}  // namespace oracle
