#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crnperm/lyapunov.hpp"
#include "crnperm/network.hpp"
#include "crnperm/rates.hpp"

namespace crnperm {

enum class Regime { kNearOrigin, kNearInfinity, kNearPoint };

const char* to_string(Regime regime);

/// Parses "near-origin", "near-infinity" or "near-point".
Regime parse_regime(const std::string& text);

struct WitnessConfig {
  /// Candidate evaluations in total, split evenly over the scales.
  std::uint64_t budget = 24'000;
  std::uint64_t seed = 0;
  int workers = 1;
  /// Decades searched: 10^-1..10^-k toward the target, or 10^1..10^k outward.
  int decades = 6;
};

struct ScaleResult {
  double scale = 0.0;
  bool found = false;
  double best_vdot = -HUGE_VAL;
  Eigen::VectorXd best_x;
};

struct Witness {
  bool found = false;
  Eigen::VectorXd x;
  double vdot = -HUGE_VAL;
  double scale = 0.0;
  std::vector<ScaleResult> per_scale;
  std::uint64_t evaluations = 0;
  /// Set when the regime target is not in the closure of the searched class.
  std::string note;
};

/// Searches the class of `class_point` (default: the center) for a point where
/// the centered Horn-Jackson derivative, maximized over kappa in the schedule
/// bounds, is positive. `target` is used by kNearPoint; `mask` restricts the
/// function to a subset of species.
Witness find_positive_vdot(const ReactionNetwork& network, const RateSchedule& schedule,
                           const Eigen::VectorXd& center, Regime regime,
                           const std::optional<Eigen::VectorXd>& target = std::nullopt,
                           const FaceSet* mask = nullptr, const WitnessConfig& config = {},
                           const std::optional<Eigen::VectorXd>& class_point = std::nullopt);

}  // namespace crnperm
