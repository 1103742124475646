#include "crnperm/lyapunov.hpp"

#include <algorithm>
#include <cmath>

#include "crnperm/dynamics.hpp"
#include "crnperm/error.hpp"

namespace crnperm {

FaceSet::FaceSet(std::vector<int> species, int n) : species_(std::move(species)), n_(n) {
  std::sort(species_.begin(), species_.end());
  if (species_.empty()) throw_domain("face set W must be nonempty");
  if (std::adjacent_find(species_.begin(), species_.end()) != species_.end()) throw_domain("face set has repeats");
  if (species_.front() < 0 || species_.back() >= n) throw_domain("face set index out of range");
  for (int s = 0, k = 0; s < n; ++s) {
    if (k < static_cast<int>(species_.size()) && species_[static_cast<std::size_t>(k)] == s) {
      ++k;
    } else {
      complement_.push_back(s);
    }
  }
}

FaceSet FaceSet::all(int n) {
  std::vector<int> s(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) s[static_cast<std::size_t>(i)] = i;
  return FaceSet(std::move(s), n);
}

bool FaceSet::contains(int s) const { return std::binary_search(species_.begin(), species_.end(), s); }

namespace {

// x (log(x / c) - 1) + c with 0 log 0 = 0.
double entropy_term(double x, double c) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw_domain("Lyapunov argument must be nonnegative");
  if (x == 0.0) return c;
  return x * (std::log(x / c) - 1.0) + c;
}

void require_closure(const Eigen::VectorXd& x, Eigen::Index n) {
  if (x.size() != n) throw_domain("state has wrong dimension");
}

// g evaluated from log z; rates per reaction.
double g_from_log(const ReactionNetwork& network, std::span<const double> rates, const Eigen::VectorXd& log_z) {
  double sum = 0.0;
  const auto& reactions = network.reactions();
  for (std::size_t r = 0; r < reactions.size(); ++r) {
    const int i = reactions[r].source;
    const int j = reactions[r].target;
    sum += rates[r] * std::exp(log_z(i)) * (log_z(j) - log_z(i));
  }
  return sum;
}

double log_sum_exp(const Eigen::VectorXd& v) {
  const double top = v.maxCoeff();
  return top + std::log((v.array() - top).exp().sum());
}

void require_rates(const ReactionNetwork& network, std::size_t count) {
  if (static_cast<int>(count) != network.num_reactions()) throw_domain("rate vector has wrong length");
}

// Gradient-weighted per-reaction coefficients x^{y_i} <grad, y_j - y_i>.
Eigen::VectorXd reaction_coefficients(const ReactionNetwork& network, const Eigen::VectorXd& x,
                                      const Eigen::VectorXd& gradient) {
  const Eigen::VectorXd logs = monomial_log_values(network, x);
  Eigen::VectorXd out(network.num_reactions());
  for (int r = 0; r < network.num_reactions(); ++r) {
    const auto& reaction = network.reactions()[static_cast<std::size_t>(r)];
    out(r) = std::exp(logs(reaction.source)) * gradient.dot(network.reaction_vector(r));
  }
  return out;
}

Eigen::VectorXd centered_gradient(const Eigen::VectorXd& x, const Eigen::VectorXd& center, const FaceSet* mask) {
  if (center.size() != x.size()) throw_domain("center has wrong dimension");
  require_positive(center, "center");
  Eigen::VectorXd grad = (x.array() / center.array()).log().matrix();
  if (mask) {
    for (int s : mask->complement()) grad(s) = 0.0;
  }
  return grad;
}

Eigen::VectorXd face_gradient(const Eigen::VectorXd& x, const FaceSet& W) {
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(x.size());
  for (int s : W.species()) grad(s) = std::log(x(s));
  return grad;
}

double sup_over(const Eigen::VectorXd& coefficients, const RateBounds& bounds) {
  double sum = 0.0;
  for (Eigen::Index r = 0; r < coefficients.size(); ++r) {
    const auto& b = bounds[static_cast<std::size_t>(r)];
    sum += coefficients(r) * (coefficients(r) > 0.0 ? b.hi : b.lo);
  }
  return sum;
}

void check_face(const ReactionNetwork& network, const FaceSet& W) {
  if (W.ambient() != network.num_species()) throw_domain("face set built for a different species count");
}

}  // namespace

double V(const Eigen::VectorXd& x) {
  double sum = 0.0;
  for (Eigen::Index s = 0; s < x.size(); ++s) sum += entropy_term(x(s), 1.0);
  return sum;
}

double V_W(const Eigen::VectorXd& x, const FaceSet& W) {
  require_closure(x, W.ambient());
  double sum = 0.0;
  for (int s : W.species()) sum += entropy_term(x(s), 1.0);
  return sum;
}

double V_centered(const Eigen::VectorXd& x, const Eigen::VectorXd& center, const FaceSet* mask) {
  require_closure(x, center.size());
  require_positive(center, "center");
  double sum = 0.0;
  for (Eigen::Index s = 0; s < x.size(); ++s) {
    if (mask && !mask->contains(static_cast<int>(s))) continue;
    sum += entropy_term(x(s), center(s));
  }
  return sum;
}

double g(const ReactionNetwork& network, std::span<const double> rates, const Eigen::VectorXd& z) {
  require_rates(network, rates.size());
  if (z.size() != network.num_complexes()) throw_domain("simplex point has wrong dimension");
  require_positive(z, "simplex point");
  if (std::abs(z.sum() - 1.0) > 1e-12) throw_domain("simplex point must sum to 1");
  return g_from_log(network, rates, z.array().log().matrix());
}

double g(const ReactionNetwork& network, const RateSchedule& schedule, double tau, const Eigen::VectorXd& z) {
  const auto rates = schedule.rates_at(tau);
  return g(network, rates, z);
}

double g_sup(const ReactionNetwork& network, const RateBounds& bounds, const Eigen::VectorXd& z) {
  require_rates(network, bounds.size());
  if (z.size() != network.num_complexes()) throw_domain("simplex point has wrong dimension");
  require_positive(z, "simplex point");
  const Eigen::VectorXd log_z = z.array().log().matrix();
  double sum = 0.0;
  for (std::size_t r = 0; r < bounds.size(); ++r) {
    const auto& reaction = network.reactions()[r];
    const double c = z(reaction.source) * (log_z(reaction.target) - log_z(reaction.source));
    sum += c * (c > 0.0 ? bounds[r].hi : bounds[r].lo);
  }
  return sum;
}

double V_dot(const ReactionNetwork& network, std::span<const double> rates, const Eigen::VectorXd& x) {
  return x.array().log().matrix().dot(vector_field(network, rates, x));
}

double V_dot(const ReactionNetwork& network, const RateSchedule& schedule, double tau, const Eigen::VectorXd& x) {
  const auto rates = schedule.rates_at(tau);
  return V_dot(network, rates, x);
}

double V_centered_dot(const ReactionNetwork& network, std::span<const double> rates, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& center, const FaceSet* mask) {
  const Eigen::VectorXd f = vector_field(network, rates, x);
  return centered_gradient(x, center, mask).dot(f);
}

double V_W_dot(const ReactionNetwork& network, std::span<const double> rates, const Eigen::VectorXd& x,
               const FaceSet& W) {
  check_face(network, W);
  const Eigen::VectorXd f = vector_field(network, rates, x);
  return face_gradient(x, W).dot(f);
}

double V_W_dot_sup(const ReactionNetwork& network, const RateBounds& bounds, const Eigen::VectorXd& x,
                   const FaceSet& W) {
  check_face(network, W);
  require_rates(network, bounds.size());
  return sup_over(reaction_coefficients(network, x, face_gradient(x, W)), bounds);
}

double V_centered_dot_sup(const ReactionNetwork& network, const RateBounds& bounds, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& center, const FaceSet* mask) {
  require_rates(network, bounds.size());
  return sup_over(reaction_coefficients(network, x, centered_gradient(x, center, mask)), bounds);
}

double V_dot_factorized(const ReactionNetwork& network, std::span<const double> rates, const Eigen::VectorXd& x) {
  require_rates(network, rates.size());
  const Eigen::VectorXd logs = monomial_log_values(network, x);
  const double lse = log_sum_exp(logs);
  const Eigen::VectorXd log_z = logs.array() - lse;
  return std::exp(lse) * g_from_log(network, rates, log_z);
}

double V_W_dot_factorized(const ReactionNetwork& network, std::span<const double> rates, const Eigen::VectorXd& x,
                          const FaceSet& W) {
  check_face(network, W);
  require_rates(network, rates.size());
  require_positive(x, "state");
  const Eigen::MatrixXd& Y = network.complexes();
  const int m = network.num_complexes();
  Eigen::VectorXd logs_w = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd logs_wc = Eigen::VectorXd::Zero(m);
  for (int s = 0; s < network.num_species(); ++s) {
    Eigen::VectorXd& target = W.contains(s) ? logs_w : logs_wc;
    target += std::log(x(s)) * Y.row(s).transpose();
  }
  std::vector<double> kappa_bar(rates.size());
  for (std::size_t r = 0; r < rates.size(); ++r) {
    kappa_bar[r] = rates[r] * std::exp(logs_wc(network.reactions()[r].source));
  }
  const double lse = log_sum_exp(logs_w);
  const Eigen::VectorXd log_z = logs_w.array() - lse;
  return std::exp(lse) * g_from_log(network, kappa_bar, log_z);
}

}  // namespace crnperm
