#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <vector>

#include "crnperm/lyapunov.hpp"
#include "crnperm/network.hpp"
#include "crnperm/rates.hpp"

namespace crnperm {

enum class LevelKind {
  kOuter,  // {x in P : V(x) >= c}, c > n
  kShell,  // {x in P : V_W(x) >= c, max x_W <= 1} near a face with zero set W
};

/// Where a level region lives. For kOuter only `class_point` and `subspace`
/// are used; for kShell rays start at `face_points` and, for positive
/// dimensional faces, may also move along `face_tangent`.
struct LevelGeometry {
  LevelKind kind = LevelKind::kOuter;
  FaceSet W = FaceSet::all(1);
  Eigen::VectorXd class_point;
  /// Orthonormal basis of S (columns).
  Eigen::MatrixXd subspace;
  std::vector<Eigen::VectorXd> face_points;
  /// Orthonormal basis of the face directions S cap {v_W = 0}.
  Eigen::MatrixXd face_tangent;
  /// Tube half-width around the face in the W^c coordinates (inf: none).
  double omega = HUGE_VAL;
};

struct LevelConfig {
  std::uint64_t samples = 4000;
  std::uint64_t seed = 0;
  int workers = 1;
};

struct LevelEvidence {
  double c = 0.0;
  bool passed = false;
  /// Samples that landed in the region.
  std::uint64_t samples = 0;
  std::uint64_t attempts = 0;
  std::uint64_t seed = 0;
  /// Largest sampled sup_kappa of the derivative, and where.
  double worst_vdot = -HUGE_VAL;
  Eigen::VectorXd worst_point;
};

/// Samples the region {level function >= c} and checks that the supremum of
/// its time derivative over kappa in `bounds` is negative at every sample.
/// Throws Error(kCertification) when no sample lands in the region.
LevelEvidence certify_level(const ReactionNetwork& network, const RateBounds& bounds, const LevelGeometry& geometry,
                            double c, const LevelConfig& config = {});

struct LadderConfig {
  /// Outer: c = (n + 1) 2^k for k = 0..rungs-1.
  /// Shell: c = |W| (1 - 2^-k) for k = 1..rungs.
  int rungs = 40;
};

struct LevelSearch {
  bool found = false;
  double c = 0.0;
  /// Evidence of the passing rung, or of the last rung tried.
  LevelEvidence evidence;
  /// Every rung tried, in order.
  std::vector<LevelEvidence> history;
};

/// Walks the geometric ladder and returns the first level that certifies.
LevelSearch find_level(const ReactionNetwork& network, const RateBounds& bounds, const LevelGeometry& geometry,
                       const LevelConfig& config = {}, const LadderConfig& ladder = {});

/// Points of P = (p + S) cap R^n_+ along random rays from p; used by samplers.
Eigen::VectorXd random_class_point(const Eigen::VectorXd& class_point, const Eigen::MatrixXd& subspace,
                                   const Eigen::VectorXd& uniforms);

/// Largest t >= 0 with x + t d >= 0 (inf when d >= 0).
double positivity_limit(const Eigen::VectorXd& x, const Eigen::VectorXd& d);

}  // namespace crnperm
