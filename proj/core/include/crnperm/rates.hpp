#pragma once

#include <string>
#include <variant>
#include <vector>

namespace crnperm {

/// Closed interval [lo, hi] of rate values.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double v) const { return lo <= v && v <= hi; }
};

/// Per-reaction rate intervals, indexed like ReactionNetwork::reactions().
using RateBounds = std::vector<Interval>;

struct ConstantRate {
  double value = 1.0;
};

/// center * (1 + frac * sin(omega * tau + phase)), 0 <= frac < 1.
struct SinusoidalRate {
  double center = 1.0;
  double frac = 0.0;
  double omega = 1.0;
  double phase = 0.0;
};

/// Right-continuous step function; times[0] == 0, strictly increasing.
struct PiecewiseRate {
  std::vector<double> times;
  std::vector<double> values;
};

/// A positive time-varying rate from one of the closed-form families whose
/// range over tau >= 0 is known analytically.
class RateFunction {
 public:
  using Family = std::variant<ConstantRate, SinusoidalRate, PiecewiseRate>;

  RateFunction() : family_(ConstantRate{}) {}
  explicit RateFunction(Family family);

  static RateFunction constant(double value) { return RateFunction(ConstantRate{value}); }

  double operator()(double tau) const;

  /// Exact infimum and supremum over tau >= 0.
  Interval range() const;

  const Family& family() const { return family_; }
  bool is_constant() const;

  /// Canonical text in the network document grammar.
  std::string to_string() const;

  friend bool operator==(const RateFunction& a, const RateFunction& b);

 private:
  Family family_;
};

/// Rates for every reaction of a network together with the global bound
/// epsilon <= kappa(tau) <= 1/epsilon, checked at construction.
class RateSchedule {
 public:
  RateSchedule() = default;
  RateSchedule(double epsilon, std::vector<RateFunction> rates);

  static RateSchedule constant(double epsilon, const std::vector<double>& values);

  double epsilon() const { return epsilon_; }
  std::size_t size() const { return rates_.size(); }
  const RateFunction& rate(std::size_t reaction) const { return rates_.at(reaction); }
  const std::vector<RateFunction>& rates() const { return rates_; }

  std::vector<double> rates_at(double tau) const;

  /// Analytic per-reaction extremes over all tau.
  RateBounds bounds() const;

  friend bool operator==(const RateSchedule& a, const RateSchedule& b) = default;

 private:
  double epsilon_ = 0.5;
  std::vector<RateFunction> rates_;
};

/// [epsilon, 1/epsilon] for each of `reactions` reactions.
RateBounds epsilon_box(std::size_t reactions, double epsilon);

/// Parses a rate specification: `2`, `sin(center=2, frac=0.5, omega=1, phase=0)`
/// or `pw(t0=0:2, t1=10:8)`. Throws Error(kDomain) with a message on failure.
RateFunction parse_rate(const std::string& text);

}  // namespace crnperm
