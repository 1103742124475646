#pragma once

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "crnperm/lyapunov.hpp"
#include "crnperm/network.hpp"

namespace crnperm {

struct StructuralFacts {
  int linkage_classes = 0;
  bool weakly_reversible = false;
  int dimension = 0;
};

/// Expected result of build_trapping_region on the entry's default class.
struct ExpectedOutcome {
  bool passes = false;
  /// Failure regime as reported by TrappingRegion::failure_regime; empty on pass.
  std::string regime;
};

enum class OracleKind {
  kNone,
  kCubicOrigin,    // cubic chain plus 4X <-> 4X + Y
  kCubicInfinity,  // cubic chain plus 0 <-> Y
  kComplexBalanced,
};

struct CorpusEntry {
  std::string name;
  std::string document;
  StructuralFacts facts;
  OracleKind oracle = OracleKind::kNone;
  /// Species the Horn-Jackson function of the oracle runs over.
  std::optional<FaceSet> oracle_mask;
  std::vector<Eigen::VectorXd> equilibria;
  /// Equilibria on the boundary of the orthant, as representative points.
  std::vector<Eigen::VectorXd> boundary_equilibria;
  /// Default class point used for certification.
  Eigen::VectorXd class_point;
  ExpectedOutcome expected;

  bool has_oracle() const { return oracle != OracleKind::kNone; }
};

std::vector<std::string> corpus_names();

/// Looks up a built-in entry. If CRNPERM_CORPUS_DIR is set and holds
/// <name>.crn, that file supplies the document text. Throws Error(kNotFound).
CorpusEntry corpus_get(const std::string& name);

/// Bundled document text, byte for byte.
const std::string& corpus_document(const std::string& name);

/// The factored derivative of the centered Horn-Jackson function in the
/// reference closed form for the example. `center` has length n; for the complex-balanced
/// example only the X and Y entries are read. Throws Error(kDomain) without an oracle.
double oracle_vdot(const CorpusEntry& entry, const Eigen::VectorXd& x, const Eigen::VectorXd& center);

/// The same factored form with the cubic chain's first term doubled, which is
/// what expanding grad V . f gives for the two cubic-chain examples. Equal to
/// oracle_vdot for the complex-balanced example.
double oracle_vdot_expanded(const CorpusEntry& entry, const Eigen::VectorXd& x, const Eigen::VectorXd& center);

}  // namespace crnperm
