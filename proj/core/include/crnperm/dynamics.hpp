#pragma once

#include <Eigen/Core>
#include <span>
#include <string>
#include <vector>

#include "crnperm/error.hpp"
#include "crnperm/network.hpp"
#include "crnperm/rates.hpp"

namespace crnperm {

/// Throws Error(kDomain) unless every coordinate of x is finite and > 0.
void require_positive(const Eigen::VectorXd& x, const char* what);

/// <y_i, log x> for every complex i. x must be strictly positive.
Eigen::VectorXd monomial_log_values(const ReactionNetwork& network, const Eigen::VectorXd& x);

/// Softmax of the monomial logs: z_i = x^{y_i} / sum_k x^{y_k}.
Eigen::VectorXd normalized_monomials(const ReactionNetwork& network, const Eigen::VectorXd& x);

/// Log of the normalized monomials; finite even when z_i underflows.
Eigen::VectorXd log_normalized_monomials(const ReactionNetwork& network, const Eigen::VectorXd& x);

/// sum_{(i,j)} kappa_ij x^{y_i} (y_j - y_i) with rates given per reaction.
/// Throws Error(kNumeric) on a non-finite result.
Eigen::VectorXd vector_field(const ReactionNetwork& network, std::span<const double> rates, const Eigen::VectorXd& x);

Eigen::VectorXd vector_field(const ReactionNetwork& network, const RateSchedule& schedule, double tau,
                             const Eigen::VectorXd& x);

/// Vector field on the closed orthant using 0^0 = 1; a zero coordinate raised
/// to a negative power is a domain error.
Eigen::VectorXd vector_field_closure(const ReactionNetwork& network, std::span<const double> rates,
                                     const Eigen::VectorXd& x);

struct IntegratorConfig {
  double rtol = 1e-8;
  double atol = 1e-10;
  /// A proposed state with any coordinate at or below this is rejected.
  double positivity_floor = 1e-300;
  /// 0 picks an initial step from the horizon.
  double initial_step = 0.0;
  long max_steps = 5'000'000;
  /// Output times in (0, t_end]; when empty `num_samples` evenly spaced
  /// times are used (including tau = 0).
  std::vector<double> sample_times;
  int num_samples = 101;
};

struct IntegrationDiagnostics {
  long accepted_steps = 0;
  long rejected_steps = 0;
  long positivity_rejections = 0;
  long evaluations = 0;
  /// max over samples and conservation vectors v of |<v, x(tau) - x(0)>|.
  double conservation_drift = 0.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::VectorXd> states;
  IntegrationDiagnostics diagnostics;
};

class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double last_time, Eigen::VectorXd last_state)
      : Error(ErrorKind::kIntegration, what), last_time_(last_time), last_state_(std::move(last_state)) {}

  double last_time() const { return last_time_; }
  const Eigen::VectorXd& last_state() const { return last_state_; }

 private:
  double last_time_;
  Eigen::VectorXd last_state_;
};

/// Dormand-Prince 5(4) with dense output. Positivity is enforced by rejecting
/// and halving any step whose stages or result leave the open orthant.
Trajectory integrate(const ReactionNetwork& network, const RateSchedule& schedule, const Eigen::VectorXd& x0,
                     double t_end, const IntegratorConfig& config = {});

/// CSV with header `tau,<species...>`, 17 significant digits, diagnostics as
/// trailing `#` comment lines.
std::string trajectory_csv(const ReactionNetwork& network, const Trajectory& trajectory);

struct ProbeConfig {
  double t_end = 200.0;
  double tail_fraction = 0.25;
  IntegratorConfig integrator;
  int workers = 1;
};

struct ProbeMember {
  Eigen::VectorXd start;
  bool ok = false;
  std::string error;
  /// Over the tail window: smallest coordinate and largest max-norm.
  double tail_min = 0.0;
  double tail_max = 0.0;
  double conservation_drift = 0.0;
};

struct PermanenceReport {
  std::vector<ProbeMember> members;
  double min_of_mins = 0.0;
  double max_of_maxes = 0.0;
  int failures = 0;
};

/// Integrates each start (all in one stoichiometric class) and summarizes the
/// tail window [(1 - tail_fraction) t_end, t_end]. Integration failures are
/// recorded per member.
PermanenceReport permanence_probe(const ReactionNetwork& network, const RateSchedule& schedule,
                                  const std::vector<Eigen::VectorXd>& starts, const ProbeConfig& config);

}  // namespace crnperm
