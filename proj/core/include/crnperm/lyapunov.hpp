#pragma once

#include <Eigen/Core>
#include <span>
#include <vector>

#include "crnperm/network.hpp"
#include "crnperm/rates.hpp"

namespace crnperm {

/// Nonempty set W of species indices (0-based, sorted, unique).
class FaceSet {
 public:
  FaceSet(std::vector<int> species, int n);

  static FaceSet all(int n);

  const std::vector<int>& species() const { return species_; }
  /// W^c in increasing order.
  const std::vector<int>& complement() const { return complement_; }
  int ambient() const { return n_; }
  bool contains(int s) const;
  std::size_t size() const { return species_.size(); }

  friend bool operator==(const FaceSet&, const FaceSet&) = default;

 private:
  std::vector<int> species_;
  std::vector<int> complement_;
  int n_ = 0;
};

/// sum_s [x_s (log x_s - 1) + 1] on the closed orthant (0 log 0 = 0).
double V(const Eigen::VectorXd& x);

/// The same sum restricted to s in W.
double V_W(const Eigen::VectorXd& x, const FaceSet& W);

/// sum_s [x_s (log(x_s / c_s) - 1) + c_s] over all species, or over `mask`
/// when given (the center still has length n; masked-out entries are unused).
double V_centered(const Eigen::VectorXd& x, const Eigen::VectorXd& center, const FaceSet* mask = nullptr);

/// g(z) = sum_{(i,j)} kappa_ij z_i (log z_j - log z_i) for z in the open simplex.
/// Throws Error(kDomain) if z is not strictly positive or does not sum to 1.
double g(const ReactionNetwork& network, std::span<const double> rates, const Eigen::VectorXd& z);
double g(const ReactionNetwork& network, const RateSchedule& schedule, double tau, const Eigen::VectorXd& z);

/// Supremum of g over kappa in the given per-reaction intervals.
double g_sup(const ReactionNetwork& network, const RateBounds& bounds, const Eigen::VectorXd& z);

/// <log x, f(x)>.
double V_dot(const ReactionNetwork& network, std::span<const double> rates, const Eigen::VectorXd& x);
double V_dot(const ReactionNetwork& network, const RateSchedule& schedule, double tau, const Eigen::VectorXd& x);

/// sum_s log(x_s / c_s) f_s(x), restricted to `mask` when given.
double V_centered_dot(const ReactionNetwork& network, std::span<const double> rates, const Eigen::VectorXd& x,
                      const Eigen::VectorXd& center, const FaceSet* mask = nullptr);

/// sum_{s in W} log x_s f_s(x).
double V_W_dot(const ReactionNetwork& network, std::span<const double> rates, const Eigen::VectorXd& x,
               const FaceSet& W);

/// Supremum of V_W_dot over kappa in `bounds`; each reaction contributes its
/// own extreme since V_W_dot is linear in kappa.
double V_W_dot_sup(const ReactionNetwork& network, const RateBounds& bounds, const Eigen::VectorXd& x,
                   const FaceSet& W);

/// Same, for the centered function (optionally masked).
double V_centered_dot_sup(const ReactionNetwork& network, const RateBounds& bounds, const Eigen::VectorXd& x,
                          const Eigen::VectorXd& center, const FaceSet* mask = nullptr);

/// Right-hand side of the factorization V_dot = (sum_k x^{y_k}) g(z(x)).
double V_dot_factorized(const ReactionNetwork& network, std::span<const double> rates, const Eigen::VectorXd& x);

/// Right-hand side of the projected factorization
/// V_W_dot = (sum_k x_W^{y^k_W}) gbar(zbar), with kappa_bar = kappa x_{W^c}^{y^i_{W^c}}.
double V_W_dot_factorized(const ReactionNetwork& network, std::span<const double> rates, const Eigen::VectorXd& x,
                          const FaceSet& W);

}  // namespace crnperm
