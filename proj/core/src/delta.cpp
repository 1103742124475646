#include <algorithm>
#include <cmath>
#include <limits>

#include "crnperm/certify.hpp"
#include "crnperm/error.hpp"
#include "crnperm/sampling.hpp"

namespace crnperm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// sup over kappa of g, from log z; z_i = 0 terms vanish (z log z -> 0) and a
// zero target under a positive source gives -inf.
double g_sup_log(const ReactionNetwork& network, const RateBounds& bounds, const Eigen::VectorXd& log_z) {
  double sum = 0.0;
  for (std::size_t r = 0; r < bounds.size(); ++r) {
    const auto& reaction = network.reactions()[r];
    const double li = log_z(reaction.source);
    const double lj = log_z(reaction.target);
    if (li == -kInf) continue;
    if (lj == -kInf) return -kInf;
    const double c = std::exp(li) * (lj - li);
    sum += c * (c > 0.0 ? bounds[r].hi : bounds[r].lo);
  }
  return sum;
}

double log_sum_exp(const Eigen::VectorXd& v) {
  const double top = v.maxCoeff();
  return top + std::log((v.array() - top).exp().sum());
}

// Quasi-random point of {z in the open simplex : min z <= delta}, in log
// coordinates. One coordinate is pinned at or below delta; the rest carry a
// multi-scale Dirichlet-like split of the remaining mass.
Eigen::VectorXd sample_log_z(int m, double log_delta, const Eigen::VectorXd& u) {
  Eigen::VectorXd log_z(m);
  const int k0 = std::min(m - 1, static_cast<int>(u(0) * m));
  const double depth = 10.0 * u(1) * u(1);
  log_z(k0) = log_delta - depth;
  const double cap = std::isfinite(log_delta) ? std::min(-log_delta, 700.0) : 700.0;
  Eigen::VectorXd weights(m - 1);
  for (int k = 0, idx = 0; k < m; ++k) {
    if (k == k0) continue;
    const double scale = u(2 + 2 * k);
    const double expo = -std::log(std::max(u(3 + 2 * k), 1e-300));
    weights(idx++) = -scale * scale * scale * cap + std::log(std::max(expo, 1e-300));
  }
  const double rest = std::log1p(-std::exp(log_z(k0)));
  const double lse = log_sum_exp(weights);
  for (int k = 0, idx = 0; k < m; ++k) {
    if (k == k0) continue;
    log_z(k) = rest + weights(idx++) - lse;
  }
  return log_z;
}

void require_delta_hypotheses(const ReactionNetwork& network) {
  if (!is_single_linkage_class(network)) {
    throw_domain("delta requires a weakly reversible network with a single linkage class");
  }
}

}  // namespace

const char* to_string(DeltaMode mode) { return mode == DeltaMode::kConstructive ? "constructive" : "empirical"; }

DeltaValidation validate_delta(const ReactionNetwork& network, const RateBounds& bounds, double K,
                               double log_neg_log_delta, const DeltaConfig& config) {
  if (bounds.size() != static_cast<std::size_t>(network.num_reactions())) throw_domain("rate bounds size mismatch");
  const int m = network.num_complexes();
  const double log_delta = -std::exp(log_neg_log_delta);
  const QuasiRandom sequence(2 + 2 * m, config.seed);

  const int blocks = block_count(config.samples, config.workers);
  std::vector<DeltaValidation> partial(static_cast<std::size_t>(blocks));
  for_each_block(config.samples, config.workers, [&](int block, std::uint64_t begin, std::uint64_t end) {
    DeltaValidation& out = partial[static_cast<std::size_t>(block)];
    out.worst_g = -kInf;
    for (std::uint64_t i = begin; i < end; ++i) {
      const Eigen::VectorXd log_z = sample_log_z(m, log_delta, sequence.point(i));
      const double value = g_sup_log(network, bounds, log_z);
      ++out.samples;
      if (!(value <= -K)) ++out.violations;
      if (value > out.worst_g || out.worst_log_z.size() == 0) {
        out.worst_g = value;
        out.worst_log_z = log_z;
      }
    }
  });

  DeltaValidation total;
  total.worst_g = -kInf;
  for (const auto& part : partial) {
    total.samples += part.samples;
    total.violations += part.violations;
    if (part.worst_log_z.size() > 0 && (part.worst_g > total.worst_g || total.worst_log_z.size() == 0)) {
      total.worst_g = part.worst_g;
      total.worst_log_z = part.worst_log_z;
    }
  }
  return total;
}

DeltaEstimate estimate_delta(const ReactionNetwork& network, double epsilon, double K, DeltaMode mode,
                             const DeltaConfig& config) {
  if (!(K > 0.0) || !std::isfinite(K)) throw_domain("K must be positive");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw_domain("epsilon must lie in (0, 1)");
  require_delta_hypotheses(network);
  const int m = network.num_complexes();
  const double reactions = network.num_reactions();

  DeltaEstimate est;
  est.mode = mode;
  est.path_bound = (-m * K - reactions / epsilon) / epsilon;

  if (mode == DeltaMode::kEmpirical) {
    // Bisection on lambda = log(-log delta): delta is often far below the
    // smallest double, so the search spans every lambda up to log(DBL_MAX).
    const RateBounds bounds = epsilon_box(network.num_reactions(), epsilon);
    const auto passes = [&](double lambda) {
      return validate_delta(network, bounds, K, lambda, config).violations == 0;
    };
    const double lambda_max = std::log(std::numeric_limits<double>::max());
    double lo = std::log(std::log(2.0));
    double hi = lo;
    if (!passes(lo)) {
      hi = lo + 1.0;
      while (!passes(hi)) {
        lo = hi;
        if (hi >= lambda_max) {
          throw Error(ErrorKind::kCertification,
                      "empirical delta: violations remain at -log delta = DBL_MAX");
        }
        hi = std::min(2.0 * hi + 1.0, lambda_max);
      }
      for (int it = 0; it < config.max_halvings && hi - lo > 1e-3; ++it) {
        const double mid = 0.5 * (lo + hi);
        (passes(mid) ? hi : lo) = mid;
      }
    }
    est.log_neg_log_delta = hi;
    est.log_delta = -std::exp(hi);
    est.delta = std::exp(est.log_delta);
    return est;
  }

  // Constructive: for each path length p the smallest lambda_p = log(-log a_p)
  // with path_sum_sup <= bound for all w_p <= a_p (the sup is monotone in w_p).
  const double bound = est.path_bound;
  double worst = -kInf;
  for (int p = 1; p <= m - 1; ++p) {
    double hi = 1.0;
    while (path_sum_sup_loglog(p, hi) > bound) {
      hi *= 2.0;
      if (!std::isfinite(hi) || hi > 1e300) {
        throw Error(ErrorKind::kNumeric, "constructive delta: a_" + std::to_string(p) +
                                             " is below the log-log representable range");
      }
    }
    double lo = -50.0;
    if (path_sum_sup_loglog(p, lo) <= bound) {
      hi = lo;
    } else {
      for (int it = 0; it < 2000 && hi - lo > 1e-12 * std::max(1.0, std::abs(hi)); ++it) {
        double mid = 0.5 * (lo + hi);
        if (lo > 1.0 && hi > 4.0 * lo) mid = std::sqrt(lo * hi);
        if (path_sum_sup_loglog(p, mid) <= bound) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
    }
    est.a_log_neg_log.push_back(hi);
    worst = std::max(worst, hi);
  }
  // delta = min(a_p) / m, so -log delta = exp(worst) + log m.
  est.log_neg_log_delta = worst + std::log1p(std::log(static_cast<double>(m)) * std::exp(-worst));
  est.log_delta = -(std::exp(worst) + std::log(static_cast<double>(m)));
  est.delta = std::exp(est.log_delta);
  return est;
}

}  // namespace crnperm
