#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "crnperm/certify.hpp"
#include "crnperm/dynamics.hpp"
#include "crnperm/levels.hpp"
#include "crnperm/lyapunov.hpp"
#include "crnperm/network.hpp"

namespace crnperm {

/// A face of the closed class: the points of (p + S) cap R^n_{>=0} whose zero
/// set is exactly W.
struct Face {
  FaceSet W = FaceSet::all(1);
  int dimension = 0;
  /// A point of the relative interior.
  Eigen::VectorXd point;
};

/// All faces with nonempty W, ordered by dimension, then by W.
std::vector<Face> enumerate_faces(const ReactionNetwork& network, const Eigen::VectorXd& class_point);

/// True when (p + S) cap R^n_+ is unbounded.
bool class_is_unbounded(const ReactionNetwork& network);

/// Human-readable support, e.g. "{X, Y}".
std::string describe_species(const ReactionNetwork& network, const std::vector<int>& species);

struct Shell {
  Face face;
  double c = 0.0;
  double omega = 0.0;
  bool passed = false;
  ProjectedBounds projected_bounds;
  LevelEvidence evidence;
  int rungs_tried = 0;
};

struct VerificationReport {
  int trajectories = 0;
  int entered = 0;
  int exit_events = 0;
  int integration_failures = 0;
  /// Entry time per trajectory (negative when it never entered).
  std::vector<double> entry_times;
  double max_conservation_drift = 0.0;
  bool passed() const { return trajectories > 0 && entered == trajectories && exit_events == 0 && integration_failures == 0; }
};

struct TrappingRegion {
  Eigen::VectorXd class_point;
  bool unbounded = false;
  /// Outer threshold for V; absent when the class is bounded.
  std::optional<double> outer_level;
  std::optional<LevelEvidence> outer_evidence;
  bool outer_passed = true;
  std::vector<Shell> shells;
  std::optional<VerificationReport> verification;
  /// Violated hypotheses of the construction (the build still runs, as a diagnostic).
  std::vector<std::string> hypothesis_violations;
  /// Empty on success; otherwise "outer" or the failing face, e.g. "face {X, Y} (dim 0)".
  std::string failure;
  /// "origin", "infinity", "vertex", "boundary-face".
  std::string failure_regime;
  bool complete = false;

  /// In P (assumed), below the outer level and outside every shell.
  bool contains(const Eigen::VectorXd& x) const;
};

struct RegionConfig {
  LevelConfig level;
  LadderConfig ladder;
  /// Sampled relative-interior points per positive-dimensional face.
  int face_samples = 64;
  /// Fixed tube width; <= 0 picks half the smallest W^c coordinate over face samples.
  double omega = 0.0;
  /// Certify the outer level even when the class is bounded.
  bool force_outer = false;
  bool verify = true;
  int verify_trajectories = 100;
  double verify_t_end = 200.0;
  int verify_samples = 2001;
  /// Starts always included in the verification ensemble (must lie in P).
  std::vector<Eigen::VectorXd> extra_starts;
  IntegratorConfig integrator;
};

/// Face-by-face construction of a trapping region: outer level (unbounded
/// classes), then one shell per face in order of dimension, then simulation
/// of an ensemble of trajectories. Never throws for a failed level; the
/// failure is recorded in the result.
TrappingRegion build_trapping_region(const ReactionNetwork& network, const RateSchedule& schedule,
                                     const Eigen::VectorXd& class_point, const RegionConfig& config = {});

/// Simulates `starts` and counts entries into and exits from the region.
VerificationReport verify_trapping_region(const ReactionNetwork& network, const RateSchedule& schedule,
                                          const TrappingRegion& region, const std::vector<Eigen::VectorXd>& starts,
                                          double t_end, int samples, const IntegratorConfig& integrator = {},
                                          int workers = 1);

/// `count` starts in the class of p: the extras first, then quasi-random points.
std::vector<Eigen::VectorXd> class_starts(const ReactionNetwork& network, const Eigen::VectorXd& class_point,
                                          int count, const std::vector<Eigen::VectorXd>& extras,
                                          std::uint64_t seed);

}  // namespace crnperm
