#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crnperm/certify.hpp"
#include "crnperm/network.hpp"
#include "crnperm/region.hpp"
#include "crnperm/witness.hpp"

namespace crnperm {

struct CertifyOptions {
  double K = 1.0;
  DeltaMode delta_mode = DeltaMode::kConstructive;
  DeltaConfig delta;
  RegionConfig region;
};

struct CertificateReport {
  std::string network;
  int linkage_classes = 0;
  bool weakly_reversible = false;
  int dimension = 0;
  double epsilon = 0.0;
  double K = 0.0;
  /// Absent when the network violates the single-linkage-class hypothesis.
  std::optional<DeltaEstimate> delta;
  std::optional<double> M;
  std::uint64_t seed = 0;
  TrappingRegion region;

  bool passed() const { return region.complete && region.hypothesis_violations.empty(); }
};

/// delta and M (when the hypotheses hold), then build_trapping_region.
CertificateReport certify_network(const std::string& name, const ReactionNetwork& network,
                                  const RateSchedule& schedule, const Eigen::VectorXd& class_point,
                                  const CertifyOptions& options);

/// Pretty-printed JSON; byte-stable for identical inputs.
std::string certificate_json(const CertificateReport& report, const ReactionNetwork& network);

/// Linkage classes, weak reversibility, dim S and the conservation basis.
std::string analysis_json(const std::string& name, const ReactionNetwork& network);

std::string witness_json(const std::string& name, const ReactionNetwork& network, const Witness& witness,
                         const Eigen::VectorXd& center, Regime regime, std::uint64_t seed);

}  // namespace crnperm
