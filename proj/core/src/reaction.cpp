#include "kppfront/reaction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kppfront/error.hpp"

namespace kppfront {

namespace {

double reduce_time(double t, const std::optional<double>& period) {
  if (!period) return t;
  double r = std::fmod(t, *period);
  if (r < 0.0) r += *period;
  return r;
}

}  // namespace

GrowthProfile GrowthProfile::autonomous(std::function<double(double, double)> rate, double bound) {
  GrowthProfile p;
  p.rate_ = [rate = std::move(rate)](double, double x, double y) { return rate(x, y); };
  p.bound_ = bound;
  return p;
}

GrowthProfile GrowthProfile::periodic(Rate rate, double period, double bound) {
  if (!(period > 0.0)) throw InvalidArgument("period must be positive");
  GrowthProfile p;
  p.rate_ = std::move(rate);
  p.period_ = period;
  p.bound_ = bound;
  return p;
}

double GrowthProfile::at(double t, double x, double y) const {
  return rate_(reduce_time(t, period_), x, y);
}

GrowthProfile& GrowthProfile::with_limits(Limit left, Limit right) {
  left_ = std::move(left);
  right_ = std::move(right);
  return *this;
}

GrowthProfile GrowthProfile::frozen(double t0) const {
  GrowthProfile p = *this;
  const double t = reduce_time(t0, period_);
  p.rate_ = [rate = rate_, t](double, double x, double y) { return rate(t, x, y); };
  p.period_.reset();
  return p;
}

Reaction::Reaction(std::string name, Fn f, Fn df, double saturation, GrowthProfile linearization)
    : name_(std::move(name)),
      f_(std::move(f)),
      df_(std::move(df)),
      saturation_(saturation),
      linear_(std::move(linearization)) {
  if (!(saturation_ > 0.0)) throw InvalidArgument("saturation level must be positive");
}

double Reaction::reduce(double t) const { return reduce_time(t, linear_.period()); }

double Reaction::at(double t, double x, double y, double s) const { return f_(reduce(t), x, y, s); }

double Reaction::ds(double t, double x, double y, double s) const {
  const double tr = reduce(t);
  if (df_) return df_(tr, x, y, s);
  const double h = 1e-6 * (1.0 + std::abs(s));
  return (f_(tr, x, y, s + h) - f_(tr, x, y, s - h)) / (2.0 * h);
}

Reaction make_logistic(std::string name, GrowthProfile profile) {
  auto f = [p = profile](double t, double x, double y, double s) { return p.at(t, x, y) * s - s * s; };
  auto df = [p = profile](double t, double x, double y, double s) { return p.at(t, x, y) - 2.0 * s; };
  const double S = std::max(profile.bound(), 1.0);
  return Reaction(std::move(name), f, df, S, std::move(profile));
}

double illustration_mu(double alpha, double y) { return y <= alpha ? 1.0 : -1.0; }

Reaction make_illustration(double alpha, double L, double theta) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("illustration alpha must lie in (0, 1)");
  if (!(L >= 0.0)) throw InvalidArgument("illustration L must be nonnegative");
  auto rho = [L, theta](double x) { return std::abs(x) <= L ? 2.0 : theta; };
  const double bound = std::max(2.0, std::abs(theta)) + 1.0;
  GrowthProfile r = GrowthProfile::autonomous(
      [rho, alpha](double x, double y) { return rho(x) + illustration_mu(alpha, y); }, bound);
  auto lim = [alpha, theta](double y) { return theta + illustration_mu(alpha, y); };
  r.with_limits(lim, lim);
  auto f = [r](double, double x, double y, double s) { return r(x, y) * s - s * s; };
  auto df = [r](double, double x, double y, double s) { return r(x, y) - 2.0 * s; };
  return Reaction("illustration", f, df, std::max(2.0, theta) + 1.0, r);
}

Reaction make_compact_favorable(double m, double m_prime, double L, double K) {
  if (!(m > 0.0 && m_prime > 0.0 && L > 0.0 && K > 0.0))
    throw InvalidArgument("compact-favorable parameters must be positive");
  auto inside = [L](double x) { return x >= 0.0 && x <= L; };
  GrowthProfile r = GrowthProfile::autonomous(
      [=](double x, double) { return inside(x) ? m_prime : -m; }, std::max(m, m_prime));
  r.with_limits([m](double) { return -m; }, [m](double) { return -m; });
  auto f = [=](double, double x, double, double s) {
    return inside(x) ? s * m_prime * (1.0 - s / K) : -s * m;
  };
  auto df = [=](double, double x, double, double s) {
    return inside(x) ? m_prime * (1.0 - 2.0 * s / K) : -m;
  };
  return Reaction("compact_favorable", f, df, K, r);
}

Reaction make_well(double left_floor, double right_floor, double depth, double width) {
  if (!(width > 0.0)) throw InvalidArgument("well width must be positive");
  auto rate = [=](double x, double) {
    return left_floor + (right_floor - left_floor) / (1.0 + std::exp(-x)) +
           depth * std::exp(-(x / width) * (x / width));
  };
  const double bound = std::max(std::abs(left_floor), std::abs(right_floor)) + std::abs(depth);
  GrowthProfile r = GrowthProfile::autonomous(rate, bound);
  r.with_limits([left_floor](double) { return left_floor; },
                [right_floor](double) { return right_floor; });
  return make_logistic("well", std::move(r));
}

double penalization_rate(int n) {
  if (n < 0) throw InvalidArgument("penalization index must be nonnegative");
  return -std::ldexp(1.0, n);
}

Reaction make_penalized(const Reaction& base, int n, double strip_margin) {
  if (!(strip_margin >= 0.0)) throw InvalidArgument("strip margin must be nonnegative");
  const double rho = penalization_rate(n);
  auto in_strip = [strip_margin](double y) {
    // Nodes within rounding of y = margin or y = margin + 1 count as outside.
    const double yb = y - strip_margin;
    return yb > 1e-9 && yb < 1.0 - 1e-9;
  };
  const GrowthProfile& lin = base.linearization();
  auto rate = [lin, rho, in_strip, strip_margin](double t, double x, double y) {
    return in_strip(y) ? lin.at(t, x, y - strip_margin) : rho;
  };
  const double bound = std::max(lin.bound(), -rho);
  GrowthProfile r = lin.time_periodic() ? GrowthProfile::periodic(rate, *lin.period(), bound)
                                        : GrowthProfile::autonomous(
                                              [rate](double x, double y) { return rate(0.0, x, y); },
                                              bound);
  if (lin.left_limit() && lin.right_limit()) {
    auto wrap = [in_strip, strip_margin, rho](GrowthProfile::Limit inner) {
      return [=](double y) { return in_strip(y) ? inner(y - strip_margin) : rho; };
    };
    r.with_limits(wrap(lin.left_limit()), wrap(lin.right_limit()));
  }
  auto f = [base, rho, in_strip, strip_margin](double t, double x, double y, double s) {
    return in_strip(y) ? base.at(t, x, y - strip_margin, s) : rho * s - s * s;
  };
  auto df = [base, rho, in_strip, strip_margin](double t, double x, double y, double s) {
    return in_strip(y) ? base.ds(t, x, y - strip_margin, s) : rho - 2.0 * s;
  };
  return Reaction(base.name() + "_penalized", f, df, base.saturation(), r);
}

Reaction make_time_periodic(const GrowthProfile& r0, double amplitude, double period) {
  if (!(period > 0.0)) throw InvalidArgument("period must be positive");
  const double w = 2.0 * std::numbers::pi / period;
  auto rate = [r0, amplitude, w](double t, double x, double y) {
    return r0(x, y) + amplitude * std::cos(w * t);
  };
  GrowthProfile r = GrowthProfile::periodic(rate, period, r0.bound() + std::abs(amplitude));
  if (r0.left_limit() && r0.right_limit()) r.with_limits(r0.left_limit(), r0.right_limit());
  auto f = [r](double t, double x, double y, double s) { return r.at(t, x, y) * s - s * s; };
  auto df = [r](double t, double x, double y, double s) { return r.at(t, x, y) - 2.0 * s; };
  return Reaction("time_periodic", f, df, std::max(r.bound(), 1.0), r);
}

}  // namespace kppfront
