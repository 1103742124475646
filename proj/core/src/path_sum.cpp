#include <algorithm>
#include <cmath>
#include <limits>

#include "crnperm/certify.hpp"
#include "crnperm/error.hpp"

namespace crnperm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kGolden = 0.6180339887498949;

// Supremum of G_{p-1}(nu) - exp(lambda - e^nu) over the inner variable
// u = exp(-e^nu). The inner stage is unimodal in nu; -inf plateaus come from
// u e^lambda overflowing, which only happens at the small-nu end.
double inner_stage(int p, double lambda);

double G(int p, double lambda) {
  if (lambda == -kInf) return 0.0;
  if (p == 1) return -std::exp(lambda);
  if (p == 2) return lambda >= 0.0 ? -lambda - 1.0 : -std::exp(lambda);
  return inner_stage(p, lambda);
}

double inner_stage(int p, double lambda) {
  auto phi = [&](double nu) {
    const double penalty = std::exp(lambda - std::exp(nu));
    return G(p - 1, nu) - penalty;
  };
  double lo = -40.0;
  double hi = std::max(5.0, std::log(std::max(lambda, 1.0)) + 5.0);
  double a = hi - kGolden * (hi - lo);
  double b = lo + kGolden * (hi - lo);
  double fa = phi(a);
  double fb = phi(b);
  while (hi - lo > 1e-10 * std::max(1.0, std::abs(hi))) {
    // Ties at -inf: the maximizer lies to the right.
    if (fa > fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - kGolden * (hi - lo);
      fa = phi(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + kGolden * (hi - lo);
      fb = phi(b);
    }
  }
  // u = 1 endpoint: every earlier ratio 1, value log w_p.
  const double boundary = -std::exp(lambda);
  return std::max({fa, fb, boundary});
}

}  // namespace

double path_sum_sup_loglog(int p, double lambda) {
  if (p < 1) throw_domain("path_sum_sup: p must be at least 1");
  if (std::isnan(lambda)) throw_domain("path_sum_sup: lambda is NaN");
  return G(p, lambda);
}

double path_sum_sup(int p, double w_p) {
  if (p < 1) throw_domain("path_sum_sup: p must be at least 1");
  if (!(w_p > 0.0 && w_p <= 1.0)) throw_domain("path_sum_sup: w_p must lie in (0, 1]");
  const double log_w = std::log(w_p);
  if (p == 1) return log_w;
  if (p == 2) return log_w <= -1.0 ? -std::log(-log_w) - 1.0 : log_w;
  if (w_p == 1.0) return 0.0;
  return G(p, std::log(-log_w));
}

double path_sum_sup_grid(int p, double w_p, int points_per_axis) {
  if (p < 1 || p > 3) throw_domain("grid oracle supports p = 1, 2, 3");
  if (!(w_p > 0.0 && w_p <= 1.0)) throw_domain("path_sum_sup: w_p must lie in (0, 1]");
  if (points_per_axis < 2) throw_domain("grid needs at least two points");
  // Log-spaced grid on [1e-12, 1] plus a linear grid on (0, 1].
  std::vector<double> grid;
  for (int k = 0; k < points_per_axis; ++k) {
    grid.push_back(std::pow(10.0, -12.0 * k / (points_per_axis - 1)));
    grid.push_back(static_cast<double>(k + 1) / points_per_axis);
  }
  const double log_w = std::log(w_p);
  if (p == 1) return log_w;
  double best = -kInf;
  if (p == 2) {
    for (double w1 : grid) best = std::max(best, std::log(w1) + w1 * log_w);
    return best;
  }
  for (double w1 : grid) {
    for (double w2 : grid) best = std::max(best, std::log(w1) + w1 * std::log(w2) + w2 * log_w);
  }
  return best;
}

}  // namespace crnperm
