#pragma once

#include <Eigen/Core>
#include <string>
#include <string_view>
#include <vector>

#include "crnperm/rates.hpp"

namespace crnperm {

/// Directed reaction between two complexes (0-based complex indices).
struct Reaction {
  int source = 0;
  int target = 0;

  friend bool operator==(const Reaction&, const Reaction&) = default;
};

/// Species, complex matrix Y (n x m, one column per complex, negative entries
/// allowed) and the reaction digraph on complexes.
///
/// Construction enforces: m >= 2 with at least two distinct columns, reaction
/// endpoints in range, no self loops and no repeated (source, target) pair.
class ReactionNetwork {
 public:
  ReactionNetwork(std::vector<std::string> species, Eigen::MatrixXd complexes, std::vector<Reaction> reactions,
                  std::vector<std::string> complex_labels = {});

  int num_species() const { return static_cast<int>(species_.size()); }
  int num_complexes() const { return static_cast<int>(complexes_.cols()); }
  int num_reactions() const { return static_cast<int>(reactions_.size()); }

  const std::vector<std::string>& species() const { return species_; }
  const Eigen::MatrixXd& complexes() const { return complexes_; }
  const std::vector<Reaction>& reactions() const { return reactions_; }
  const std::vector<std::string>& complex_labels() const { return labels_; }

  /// y_target - y_source for reaction r.
  Eigen::VectorXd reaction_vector(int r) const;

  /// n x |R| matrix whose columns are the reaction vectors.
  Eigen::MatrixXd reaction_matrix() const;

  /// Index of a species by name, or -1.
  int species_index(std::string_view name) const;

  friend bool operator==(const ReactionNetwork& a, const ReactionNetwork& b);

 private:
  std::vector<std::string> species_;
  Eigen::MatrixXd complexes_;
  std::vector<Reaction> reactions_;
  std::vector<std::string> labels_;
};

/// A parsed network document: the network plus the rate of every reaction.
struct NetworkDocument {
  ReactionNetwork network;
  RateSchedule schedule;
};

/// Parses the line-oriented network format:
///
///   species X Y Z
///   eps 0.125
///   complex 3 X                       (optional: declares a complex)
///   3 X -> 2 X + Y : 2
///   2 X + Y <-> X + 2 Y : 1, sin(center=1, frac=0.5, omega=1, phase=0)
///
/// Complexes are identified by their whitespace-normalized text, so `2 X + Y`
/// and `Y + 2 X` are distinct complexes with equal columns. Throws ParseError.
NetworkDocument parse_network(std::string_view text);

/// Canonical document text; parse_network(to_document(d)) reproduces d.
std::string to_document(const ReactionNetwork& network, const RateSchedule& schedule);

/// Weakly connected components of the complex digraph, each sorted, ordered by
/// smallest member.
std::vector<std::vector<int>> linkage_classes(const ReactionNetwork& network);

/// Strongly connected components (Tarjan), each sorted, ordered by smallest member.
std::vector<std::vector<int>> strong_components(const ReactionNetwork& network);

bool is_weakly_reversible(const ReactionNetwork& network);

/// One linkage class that is strongly connected.
bool is_single_linkage_class(const ReactionNetwork& network);

/// Relative pivot tolerance for all rank decisions.
inline constexpr double kRankTolerance = 1e-10;

struct StoichiometricStructure {
  /// Columns: the reaction vectors kept by greedy elimination, in input order.
  Eigen::MatrixXd basis;
  /// Reaction indices whose vectors form `basis`.
  std::vector<int> basis_reactions;
  /// Orthonormal basis of S (columns), spanning the same space as `basis`.
  Eigen::MatrixXd orthonormal;
  /// Orthonormal basis of the orthogonal complement of S (columns).
  Eigen::MatrixXd conservation_basis;

  int dimension() const { return static_cast<int>(basis.cols()); }
};

StoichiometricStructure stoichiometric_structure(const ReactionNetwork& network);

/// Greedy rank-revealing scan: indices of the columns of `vectors` that raise
/// the rank, in order. `orthonormal` receives an orthonormal basis of their span.
std::vector<int> greedy_independent_columns(const Eigen::MatrixXd& vectors, Eigen::MatrixXd* orthonormal = nullptr);

/// Orthonormal basis of the orthogonal complement of span(orthonormal) in R^n.
/// Each vector's first nonzero entry is positive.
Eigen::MatrixXd orthogonal_complement(const Eigen::MatrixXd& orthonormal, int n);

}  // namespace crnperm
