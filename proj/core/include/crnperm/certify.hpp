#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "crnperm/lyapunov.hpp"
#include "crnperm/network.hpp"
#include "crnperm/rates.hpp"

namespace crnperm {

// ---------------------------------------------------------------------------
// Path sums

/// sup over 0 < w_1..w_{p-1} <= 1 of sum_{i=1}^p w_{i-1} log w_i, w_0 = 1,
/// for fixed w_p in (0, 1].
double path_sum_sup(int p, double w_p);

/// The same supremum with w_p given as lambda = log(-log w_p), which keeps
/// tower-small w_p representable. lambda = -inf means w_p = 1.
double path_sum_sup_loglog(int p, double lambda);

/// Brute-force grid maximization, used to cross-check path_sum_sup for p <= 3.
double path_sum_sup_grid(int p, double w_p, int points_per_axis);

// ---------------------------------------------------------------------------
// delta

enum class DeltaMode { kConstructive, kEmpirical };

const char* to_string(DeltaMode mode);

struct DeltaConfig {
  /// Samples of {min z <= delta} per ladder rung (empirical mode) or for
  /// validation.
  std::uint64_t samples = 100'000;
  std::uint64_t seed = 0;
  int workers = 1;
  /// Bisection steps on log(-log delta) in empirical mode.
  int max_halvings = 60;
};

struct DeltaEstimate {
  DeltaMode mode = DeltaMode::kEmpirical;
  /// delta itself; 0 when it underflows double precision.
  double delta = 0.0;
  /// log delta (may be -inf when delta is tower-small).
  double log_delta = 0.0;
  /// log(-log delta): finite even when delta is tower-small.
  double log_neg_log_delta = 0.0;
  /// Constructive mode: log(-log a_p) for p = 1..m-1.
  std::vector<double> a_log_neg_log;
  /// The target bound (-mK - |R|/eps)/eps of the constructive mode.
  double path_bound = 0.0;
};

struct DeltaValidation {
  std::uint64_t samples = 0;
  std::uint64_t violations = 0;
  /// Largest sup_kappa g seen (should be <= -K).
  double worst_g = 0.0;
  /// log z of the worst sample.
  Eigen::VectorXd worst_log_z;
};

/// Threshold with g <= -K whenever min z <= delta, uniformly over rates
/// in [eps, 1/eps]. Throws Error(kDomain) unless the network is weakly
/// reversible with a single linkage class.
DeltaEstimate estimate_delta(const ReactionNetwork& network, double epsilon, double K, DeltaMode mode,
                             const DeltaConfig& config = {});

/// Samples z in the open simplex with min z <= delta (in log coordinates, so
/// tower-small delta is handled) and checks sup_kappa g <= -K.
DeltaValidation validate_delta(const ReactionNetwork& network, const RateBounds& bounds, double K,
                               double log_neg_log_delta, const DeltaConfig& config);

// ---------------------------------------------------------------------------
// Psi and the Birch point

struct BasisReactions {
  /// Reaction indices, increasing.
  std::vector<int> reactions;
  /// n x dim S matrix of the corresponding difference vectors.
  Eigen::MatrixXd vectors;

  int dimension() const { return static_cast<int>(reactions.size()); }
};

/// Greedy scan in input order keeping reactions that raise the rank.
BasisReactions select_basis_reactions(const ReactionNetwork& network);

/// Psi(x)_k = x^{y_j} / x^{y_i} for the k-th basis reaction (i, j).
Eigen::VectorXd psi(const ReactionNetwork& network, const BasisReactions& basis, const Eigen::VectorXd& x);

struct PsiInverseConfig {
  int max_iterations = 200;
  double tolerance = 1e-10;
};

/// The unique x in (p + S) cap R^n_+ with Psi(x) = target, by damped Newton on
/// the strictly convex h(x) = sum x_s (log x_s - mu_s - 1) over x = p + B v.
/// Throws Error(kNumeric) on non-convergence.
Eigen::VectorXd psi_inverse(const ReactionNetwork& network, const BasisReactions& basis,
                            const Eigen::VectorXd& class_point, const Eigen::VectorXd& target,
                            const PsiInverseConfig& config = {});

// ---------------------------------------------------------------------------
// M and the cube check

/// max(1/delta - 1, 2), nudged up so that 1/(M+1) <= delta holds in floating point.
double compute_M(double delta);

struct CubeCheckReport {
  std::uint64_t samples = 0;
  std::uint64_t failures = 0;
  /// max over samples of (min z - delta); <= 0 means every sample passed.
  double worst_margin = -1.0;
  Eigen::VectorXd worst_state;
  bool passed() const { return samples > 0 && failures == 0; }
};

/// Samples targets outside [1/M, M]^dim S, maps them into the class by
/// psi_inverse and checks min z <= delta.
CubeCheckReport min_z_outside_cube_check(const ReactionNetwork& network, const BasisReactions& basis,
                                         const Eigen::VectorXd& class_point, double M, double delta,
                                         std::uint64_t samples, std::uint64_t seed = 0);

// ---------------------------------------------------------------------------
// Projection onto a face

/// Species W, complexes y_W (duplicates kept), same reactions. Throws
/// Error(kDomain) when all projected complexes coincide.
ReactionNetwork projected_network(const ReactionNetwork& network, const FaceSet& W);

struct ProjectedBounds {
  /// Interval of kappa_bar for each reaction.
  RateBounds per_reaction;
  /// Largest eps_bar with eps_bar <= kappa_bar <= 1/eps_bar for every reaction.
  double epsilon_bar = 0.0;
};

/// Bounds on kappa_bar = kappa x_{W^c}^{y^i_{W^c}} over kappa in [eps, 1/eps]
/// and x_{W^c} in `box` (one interval per species of W^c, in order).
ProjectedBounds projected_rate_bounds(const ReactionNetwork& network, const RateSchedule& schedule,
                                      const FaceSet& W, const std::vector<Interval>& box);

/// The same with explicit per-reaction rate intervals instead of [eps, 1/eps].
ProjectedBounds projected_rate_bounds(const ReactionNetwork& network, const RateBounds& rates, const FaceSet& W,
                                      const std::vector<Interval>& box);

}  // namespace crnperm
