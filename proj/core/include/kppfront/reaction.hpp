#pragma once

#include <functional>
#include <optional>
#include <string>

namespace kppfront {

/// Zero-order growth rate r(t, x1, y) = f_s(t, x1, y, 0).
///
/// Autonomous profiles ignore t. Time-periodic profiles reduce t modulo the
/// period before evaluating, so r(t + T, .) == r(t, .) up to the rounding of
/// t + T itself.
class GrowthProfile {
public:
  using Rate = std::function<double(double t, double x, double y)>;
  using Limit = std::function<double(double y)>;

  GrowthProfile() = default;

  static GrowthProfile autonomous(std::function<double(double x, double y)> rate, double bound);
  static GrowthProfile periodic(Rate rate, double period, double bound);

  double operator()(double x, double y) const { return rate_(0.0, x, y); }
  double at(double t, double x, double y) const;

  bool time_periodic() const { return period_.has_value(); }
  std::optional<double> period() const { return period_; }
  /// Upper bound on sup |r| over space and time.
  double bound() const { return bound_; }

  /// Declared limits of r as x1 -> -inf (alpha) and x1 -> +inf (beta), when known.
  const Limit& left_limit() const { return left_; }
  const Limit& right_limit() const { return right_; }
  GrowthProfile& with_limits(Limit left, Limit right);

  /// Same profile at a frozen time (the autonomous slice t = t0).
  GrowthProfile frozen(double t0) const;

private:
  Rate rate_ = [](double, double, double) { return 0.0; };
  std::optional<double> period_;
  double bound_ = 0.0;
  Limit left_;
  Limit right_;
};

/// KPP nonlinearity f(t, x1, y, s) together with its linearization at s = 0
/// and a saturation level S such that f(., s) <= 0 for s >= S.
class Reaction {
public:
  using Fn = std::function<double(double t, double x, double y, double s)>;

  Reaction(std::string name, Fn f, Fn df, double saturation, GrowthProfile linearization);

  const std::string& name() const { return name_; }
  double operator()(double x, double y, double s) const { return f_(0.0, x, y, s); }
  double at(double t, double x, double y, double s) const;
  /// d f / d s; analytic when provided, else central difference with step 1e-6 (1 + |s|).
  double ds(double t, double x, double y, double s) const;
  bool has_analytic_derivative() const { return static_cast<bool>(df_); }

  double saturation() const { return saturation_; }
  const GrowthProfile& linearization() const { return linear_; }
  bool time_periodic() const { return linear_.time_periodic(); }
  std::optional<double> period() const { return linear_.period(); }

private:
  std::string name_;
  Fn f_;
  Fn df_;
  double saturation_;
  GrowthProfile linear_;
  double reduce(double t) const;
};

/// f = r s - s^2 for an arbitrary growth profile; S = max(bound of r, 1).
Reaction make_logistic(std::string name, GrowthProfile profile);

/// Mixed environment f_{alpha,L} = (rho_L(x1) + mu_alpha(y)) s - s^2 on the unit strip with
/// rho_L = 2 on [-L, L] and theta outside, mu_alpha = 1 on [0, alpha] and -1 above.
/// Step functions are closed on the favorable side.
Reaction make_illustration(double alpha, double L, double theta);
/// Cross-sectional part mu_alpha(y) of the illustration profile.
double illustration_mu(double alpha, double y);

/// f = -m s outside [0, L]; f = m' s (1 - s/K) on [0, L]; constant in y.
Reaction make_compact_favorable(double m, double m_prime, double L, double K);

/// f = r s - s^2 with r(x1) = left + (right - left) / (1 + e^{-x1}) + depth e^{-(x1/width)^2}.
/// The limits are attained exponentially fast on both sides.
Reaction make_well(double left_floor, double right_floor, double depth, double width);

/// Penalization rate rho_n = -2^n.
double penalization_rate(int n);

/// Extends a reaction defined on the strip 0 < y < 1 to [0, 1 + 2 margin] (strip shifted up by
/// margin). Inside the open strip F_n equals the base; elsewhere F_n = rho_n s - s^2.
Reaction make_penalized(const Reaction& base, int n, double strip_margin);

/// f = (r0(x) + amplitude cos(2 pi t / T)) s - s^2.
Reaction make_time_periodic(const GrowthProfile& r0, double amplitude, double period);

}  // namespace kppfront
