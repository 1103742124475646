#include <algorithm>
#include <cmath>

#include "crnperm/certify.hpp"
#include "crnperm/error.hpp"

namespace crnperm {

ReactionNetwork projected_network(const ReactionNetwork& network, const FaceSet& W) {
  if (W.ambient() != network.num_species()) throw_domain("face set built for a different species count");
  const auto& rows = W.species();
  Eigen::MatrixXd Y(static_cast<Eigen::Index>(rows.size()), network.num_complexes());
  std::vector<std::string> species;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    Y.row(static_cast<Eigen::Index>(k)) = network.complexes().row(rows[k]);
    species.push_back(network.species()[static_cast<std::size_t>(rows[k])]);
  }
  bool distinct = false;
  for (Eigen::Index i = 1; i < Y.cols() && !distinct; ++i) distinct = Y.col(i) != Y.col(0);
  if (!distinct) throw_domain("projection onto W collapses every complex to the same point");
  return ReactionNetwork(std::move(species), std::move(Y), network.reactions());
}

ProjectedBounds projected_rate_bounds(const ReactionNetwork& network, const RateBounds& rates, const FaceSet& W,
                                      const std::vector<Interval>& box) {
  if (W.ambient() != network.num_species()) throw_domain("face set built for a different species count");
  if (rates.size() != static_cast<std::size_t>(network.num_reactions())) throw_domain("rate bounds size mismatch");
  const auto& rest = W.complement();
  if (box.size() != rest.size()) throw_domain("box needs one interval per species outside W");
  for (const auto& iv : box) {
    if (!(iv.lo > 0.0) || !(iv.hi >= iv.lo) || !std::isfinite(iv.hi)) {
      throw_domain("box must be strictly positive and bounded");
    }
  }
  ProjectedBounds out;
  out.epsilon_bar = HUGE_VAL;
  for (int r = 0; r < network.num_reactions(); ++r) {
    const int i = network.reactions()[static_cast<std::size_t>(r)].source;
    // Monotone in each coordinate: log-linear with exponent e.
    double log_lo = 0.0, log_hi = 0.0;
    for (std::size_t k = 0; k < rest.size(); ++k) {
      const double e = network.complexes()(rest[k], i);
      const double a = e * std::log(box[k].lo);
      const double b = e * std::log(box[k].hi);
      log_lo += std::min(a, b);
      log_hi += std::max(a, b);
    }
    const Interval iv{rates[static_cast<std::size_t>(r)].lo * std::exp(log_lo),
                      rates[static_cast<std::size_t>(r)].hi * std::exp(log_hi)};
    out.per_reaction.push_back(iv);
    out.epsilon_bar = std::min({out.epsilon_bar, iv.lo, 1.0 / iv.hi});
  }
  return out;
}

ProjectedBounds projected_rate_bounds(const ReactionNetwork& network, const RateSchedule& schedule,
                                      const FaceSet& W, const std::vector<Interval>& box) {
  return projected_rate_bounds(network, epsilon_box(static_cast<std::size_t>(network.num_reactions()),
                                                    schedule.epsilon()),
                               W, box);
}

}  // namespace crnperm
