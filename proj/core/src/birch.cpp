#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "crnperm/certify.hpp"
#include "crnperm/dynamics.hpp"
#include "crnperm/error.hpp"
#include "crnperm/sampling.hpp"

namespace crnperm {

BasisReactions select_basis_reactions(const ReactionNetwork& network) {
  BasisReactions out;
  const Eigen::MatrixXd vectors = network.reaction_matrix();
  out.reactions = greedy_independent_columns(vectors);
  out.vectors.resize(network.num_species(), static_cast<Eigen::Index>(out.reactions.size()));
  for (std::size_t k = 0; k < out.reactions.size(); ++k) {
    out.vectors.col(static_cast<Eigen::Index>(k)) = vectors.col(out.reactions[k]);
  }
  return out;
}

Eigen::VectorXd psi(const ReactionNetwork& network, const BasisReactions& basis, const Eigen::VectorXd& x) {
  if (x.size() != network.num_species()) throw_domain("state has wrong dimension");
  require_positive(x, "state");
  return (basis.vectors.transpose() * x.array().log().matrix()).array().exp().matrix();
}

namespace {

double entropy(const Eigen::VectorXd& x, const Eigen::VectorXd& mu) {
  return (x.array() * (x.array().log() - mu.array() - 1.0)).sum();
}

}  // namespace

Eigen::VectorXd psi_inverse(const ReactionNetwork& network, const BasisReactions& basis,
                            const Eigen::VectorXd& class_point, const Eigen::VectorXd& target,
                            const PsiInverseConfig& config) {
  const Eigen::MatrixXd& B = basis.vectors;
  if (class_point.size() != network.num_species()) throw_domain("class point has wrong dimension");
  if (target.size() != B.cols()) throw_domain("target has wrong dimension");
  require_positive(class_point, "class point");
  require_positive(target, "target");
  if (B.cols() == 0) return class_point;

  // Minimum-norm mu with B^T mu = log target.
  const Eigen::MatrixXd gram = B.transpose() * B;
  const Eigen::LDLT<Eigen::MatrixXd> gram_ldlt(gram);
  const Eigen::VectorXd mu = B * gram_ldlt.solve(target.array().log().matrix());
  const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(B).householderQ() *
                            Eigen::MatrixXd::Identity(B.rows(), B.cols());

  // x is updated in place rather than recomputed as p + B v, which keeps small
  // coordinates relatively accurate far out in the class.
  Eigen::VectorXd x = class_point;
  double residual = 0.0;
  for (int iter = 0; iter <= config.max_iterations; ++iter) {
    const Eigen::VectorXd gap = x.array().log().matrix() - mu;
    residual = (Q.transpose() * gap).norm();
    const double scale = std::max(1.0, x.array().log().abs().maxCoeff());
    if (residual < config.tolerance * scale) return x;
    if (iter == config.max_iterations) break;

    const Eigen::VectorXd grad = B.transpose() * gap;
    const Eigen::MatrixXd hess = B.transpose() * x.cwiseInverse().asDiagonal() * B;
    const Eigen::VectorXd step = -hess.ldlt().solve(grad);
    const double slope = grad.dot(step);
    const double h0 = entropy(x, mu);
    // Near the minimum the decrease in h drops below rounding; take the pure
    // Newton step there.
    const bool local = -slope <= 1e-10 * (1.0 + std::abs(h0));
    double alpha = 1.0;
    bool moved = false;
    for (int halving = 0; halving < 80; ++halving, alpha *= 0.5) {
      const Eigen::VectorXd x_new = x + alpha * (B * step);
      if ((x_new.array() <= 0.0).any()) continue;
      if (local || entropy(x_new, mu) <= h0 + 1e-4 * alpha * slope || halving > 60) {
        x = x_new;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  throw Error(ErrorKind::kNumeric,
              "psi_inverse: Newton did not converge (residual " + std::to_string(residual) + ")");
}

double compute_M(double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw_domain("compute_M: delta must lie in (0, 1)");
  double M = std::max(1.0 / delta - 1.0, 2.0);
  while (1.0 / (M + 1.0) > delta) M = std::nextafter(M, HUGE_VAL);
  return M;
}

CubeCheckReport min_z_outside_cube_check(const ReactionNetwork& network, const BasisReactions& basis,
                                         const Eigen::VectorXd& class_point, double M, double delta,
                                         std::uint64_t samples, std::uint64_t seed) {
  if (!(M > 1.0) || !std::isfinite(M)) throw_domain("cube check: M must exceed 1");
  const int d = basis.dimension();
  if (d == 0) throw_domain("cube check: stoichiometric subspace is trivial");
  const double log_M = std::log(M);
  const QuasiRandom sequence(d + 3, seed);
  CubeCheckReport report;
  report.worst_margin = -HUGE_VAL;
  for (std::uint64_t i = 0; i < samples; ++i) {
    const Eigen::VectorXd u = sequence.point(i);
    Eigen::VectorXd log_t(d);
    for (int k = 0; k < d; ++k) log_t(k) = (2.0 * u(3 + k) - 1.0) * 2.0 * log_M;
    // Force one coordinate outside [-log M, log M].
    const int k0 = std::min(d - 1, static_cast<int>(u(0) * d));
    const double out = log_M * (1.0 + 1e-9) + 20.0 * u(2) * u(2);
    log_t(k0) = u(1) < 0.5 ? -out : out;
    ++report.samples;
    Eigen::VectorXd x;
    try {
      x = psi_inverse(network, basis, class_point, log_t.array().exp().matrix());
    } catch (const Error&) {
      ++report.failures;
      continue;
    }
    const double margin = normalized_monomials(network, x).minCoeff() - delta;
    if (margin > delta * 1e-9) ++report.failures;
    if (margin > report.worst_margin) {
      report.worst_margin = margin;
      report.worst_state = x;
    }
  }
  return report;
}

}  // namespace crnperm
