#include "crnperm/witness.hpp"

#include <algorithm>
#include <cmath>

#include "crnperm/dynamics.hpp"
#include "crnperm/error.hpp"
#include "crnperm/sampling.hpp"

namespace crnperm {

const char* to_string(Regime regime) {
  switch (regime) {
    case Regime::kNearOrigin:
      return "near-origin";
    case Regime::kNearInfinity:
      return "near-infinity";
    case Regime::kNearPoint:
      return "near-point";
  }
  return "?";
}

Regime parse_regime(const std::string& text) {
  if (text == "near-origin") return Regime::kNearOrigin;
  if (text == "near-infinity") return Regime::kNearInfinity;
  if (text == "near-point") return Regime::kNearPoint;
  throw_domain("unknown regime '" + text + "' (expected near-origin, near-infinity or near-point)");
}

Witness find_positive_vdot(const ReactionNetwork& network, const RateSchedule& schedule,
                           const Eigen::VectorXd& center, Regime regime, const std::optional<Eigen::VectorXd>& target,
                           const FaceSet* mask, const WitnessConfig& config,
                           const std::optional<Eigen::VectorXd>& class_point) {
  const int n = network.num_species();
  if (center.size() != n) throw_domain("center has wrong dimension");
  require_positive(center, "center");
  if (config.decades < 1) throw_domain("need at least one decade");
  const Eigen::VectorXd p = class_point.value_or(center);
  if (p.size() != n) throw_domain("class point has wrong dimension");
  require_positive(p, "class point");

  Eigen::VectorXd anchor = p;
  if (regime == Regime::kNearOrigin) anchor = Eigen::VectorXd::Zero(n);
  if (regime == Regime::kNearPoint) {
    if (!target || target->size() != n) throw_domain("near-point regime needs a target of length n");
    if ((target->array() < 0.0).any()) throw_domain("target must be nonnegative");
    anchor = *target;
  }

  const Eigen::MatrixXd Q = stoichiometric_structure(network).orthonormal;
  const Eigen::MatrixXd P = Q * Q.transpose();
  Witness result;
  if (regime != Regime::kNearInfinity) {
    const Eigen::VectorXd off = (anchor - p) - P * (anchor - p);
    if (off.norm() > 1e-9 * (1.0 + p.norm())) {
      result.note = "target is not in the closure of the class";
      return result;
    }
  }

  const RateBounds bounds = schedule.bounds();
  const std::uint64_t per_scale = std::max<std::uint64_t>(1, config.budget / config.decades);
  const QuasiRandom sequence(2 * n + 1, config.seed);
  constexpr double kSpread = 13.815510557964274;  // log(1e6)

  for (int k = 1; k <= config.decades; ++k) {
    ScaleResult sr;
    sr.scale = regime == Regime::kNearInfinity ? std::pow(10.0, k) : std::pow(10.0, -k);
    const int blocks = block_count(per_scale, config.workers);
    std::vector<ScaleResult> partial(static_cast<std::size_t>(blocks));
    std::vector<std::uint64_t> evals(static_cast<std::size_t>(blocks), 0);
    for_each_block(per_scale, config.workers, [&](int block, std::uint64_t begin, std::uint64_t end) {
      ScaleResult& best = partial[static_cast<std::size_t>(block)];
      for (std::uint64_t i = begin; i < end; ++i) {
        const Eigen::VectorXd u = sequence.point(static_cast<std::uint64_t>(k - 1) * per_scale + i);
        // Half the candidates use log-spread magnitudes so that coordinates
        // can approach the target at different rates.
        const bool spread = u(2 * n) < 0.5;
        Eigen::VectorXd raw(n);
        for (int s = 0; s < n; ++s) {
          const double mag = spread ? std::exp(-kSpread * u(s)) : u(s) + 1e-3;
          const bool free_sign = regime == Regime::kNearPoint && anchor(s) > 0.0;
          raw(s) = free_sign ? (u(n + s) < 0.5 ? -mag : mag) : mag;
        }
        Eigen::VectorXd d = P * raw;
        if (d.norm() < 1e-300) continue;
        d /= d.norm();
        const Eigen::VectorXd x = anchor + sr.scale * d;
        if (!((x.array() > 0.0).all())) continue;
        ++evals[static_cast<std::size_t>(block)];
        const double value = V_centered_dot_sup(network, bounds, x, center, mask);
        if (value > best.best_vdot) {
          best.best_vdot = value;
          best.best_x = x;
        }
      }
    });
    for (std::size_t b = 0; b < partial.size(); ++b) {
      result.evaluations += evals[b];
      if (partial[b].best_x.size() > 0 && partial[b].best_vdot > sr.best_vdot) {
        sr.best_vdot = partial[b].best_vdot;
        sr.best_x = partial[b].best_x;
      }
    }
    sr.found = sr.best_vdot > 0.0;
    if (sr.found && (!result.found || sr.best_vdot > result.vdot)) {
      result.found = true;
      result.vdot = sr.best_vdot;
      result.x = sr.best_x;
      result.scale = sr.scale;
    }
    result.per_scale.push_back(std::move(sr));
  }
  return result;
}

}  // namespace crnperm
