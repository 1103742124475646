#include "crnperm/network.hpp"

#include <Eigen/QR>
#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "crnperm/error.hpp"

namespace crnperm {

ReactionNetwork::ReactionNetwork(std::vector<std::string> species, Eigen::MatrixXd complexes,
                                 std::vector<Reaction> reactions, std::vector<std::string> complex_labels)
    : species_(std::move(species)),
      complexes_(std::move(complexes)),
      reactions_(std::move(reactions)),
      labels_(std::move(complex_labels)) {
  const int n = num_species();
  const int m = num_complexes();
  if (n < 1) throw_domain("a network needs at least one species");
  if (complexes_.rows() != n) throw_domain("complex matrix must have one row per species");
  if (!complexes_.allFinite()) throw_domain("complex coefficients must be finite");
  if (m < 2) throw_domain("a network needs at least two complexes");
  bool distinct = false;
  for (int j = 1; j < m && !distinct; ++j) distinct = complexes_.col(j) != complexes_.col(0);
  if (!distinct) throw_domain("a network needs at least two distinct complexes");

  std::set<std::pair<int, int>> seen;
  for (const Reaction& r : reactions_) {
    if (r.source < 0 || r.source >= m || r.target < 0 || r.target >= m) {
      throw_domain("reaction references a complex outside 1.." + std::to_string(m));
    }
    if (r.source == r.target) throw_domain("reaction with identical source and target complex");
    if (!seen.insert({r.source, r.target}).second) {
      throw_domain("duplicate reaction " + std::to_string(r.source + 1) + " -> " + std::to_string(r.target + 1));
    }
  }
  if (labels_.empty()) {
    for (int j = 0; j < m; ++j) {
      std::string label;
      for (int s = 0; s < n; ++s) {
        const double c = complexes_(s, j);
        if (c == 0.0) continue;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", c);
        if (!label.empty()) label += " + ";
        label += (c == 1.0 ? std::string() : std::string(buf) + " ") + species_[s];
      }
      labels_.push_back(label.empty() ? "0" : label);
    }
  } else if (static_cast<int>(labels_.size()) != m) {
    throw_domain("complex label count does not match complex count");
  }
}

Eigen::VectorXd ReactionNetwork::reaction_vector(int r) const {
  const Reaction& rx = reactions_.at(static_cast<std::size_t>(r));
  return complexes_.col(rx.target) - complexes_.col(rx.source);
}

Eigen::MatrixXd ReactionNetwork::reaction_matrix() const {
  Eigen::MatrixXd out(num_species(), num_reactions());
  for (int r = 0; r < num_reactions(); ++r) out.col(r) = reaction_vector(r);
  return out;
}

int ReactionNetwork::species_index(std::string_view name) const {
  const auto it = std::find(species_.begin(), species_.end(), name);
  return it == species_.end() ? -1 : static_cast<int>(it - species_.begin());
}

bool operator==(const ReactionNetwork& a, const ReactionNetwork& b) {
  return a.species_ == b.species_ && a.complexes_.rows() == b.complexes_.rows() &&
         a.complexes_.cols() == b.complexes_.cols() && a.complexes_ == b.complexes_ &&
         a.reactions_ == b.reactions_ && a.labels_ == b.labels_;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

bool is_identifier(const std::string& s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

// Splits at commas that are not nested in parentheses.
std::vector<std::string> split_top_level(const std::string& s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == sep && depth == 0) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

class DocumentParser {
 public:
  NetworkDocument parse(std::string_view text) {
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t nl = text.find('\n', pos);
      if (nl == std::string_view::npos) nl = text.size();
      ++line_no;
      std::string_view raw = text.substr(pos, nl - pos);
      if (const auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
      const std::string line = trim(raw);
      if (!line.empty()) {
        try {
          handle_line(line, line_no);
        } catch (const ParseError&) {
          throw;
        } catch (const Error& e) {
          throw ParseError(line_no, e.what());
        }
      }
      pos = nl + 1;
    }
    if (!have_species_) throw ParseError(line_no, "missing 'species' declaration");
    if (!have_eps_) throw ParseError(line_no, "missing 'eps' declaration");

    const int n = static_cast<int>(species_.size());
    const int m = static_cast<int>(columns_.size());
    Eigen::MatrixXd Y = Eigen::MatrixXd::Zero(n, m);
    for (int j = 0; j < m; ++j) Y.col(j) = columns_[static_cast<std::size_t>(j)];
    if (m < 2) throw ParseError(line_no, "fewer than two distinct complexes");
    bool distinct = false;
    for (int j = 1; j < m && !distinct; ++j) distinct = Y.col(j) != Y.col(0);
    if (!distinct) throw ParseError(line_no, "fewer than two distinct complexes");
    try {
      ReactionNetwork network(species_, std::move(Y), reactions_, labels_);
      RateSchedule schedule(eps_, rates_);
      return NetworkDocument{std::move(network), std::move(schedule)};
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
  }

 private:
  void handle_line(const std::string& line, int line_no) {
    const auto words = split_words(line);
    if (words[0] == "species") {
      if (have_species_) throw ParseError(line_no, "duplicate 'species' declaration");
      if (words.size() < 2) throw ParseError(line_no, "'species' needs at least one name");
      for (std::size_t i = 1; i < words.size(); ++i) {
        if (!is_identifier(words[i])) throw ParseError(line_no, "invalid species name '" + words[i] + "'");
        if (std::find(species_.begin(), species_.end(), words[i]) != species_.end()) {
          throw ParseError(line_no, "species '" + words[i] + "' declared twice");
        }
        species_.push_back(words[i]);
      }
      have_species_ = true;
      return;
    }
    if (!have_species_) throw ParseError(line_no, "expected 'species' declaration first");
    if (words[0] == "eps") {
      if (have_eps_) throw ParseError(line_no, "duplicate 'eps' declaration");
      if (words.size() != 2) throw ParseError(line_no, "'eps' takes exactly one value");
      eps_ = parse_number(words[1], line_no);
      if (!(eps_ > 0.0 && eps_ < 1.0)) throw ParseError(line_no, "eps must lie in (0, 1)");
      have_eps_ = true;
      return;
    }
    if (words[0] == "complex") {
      complex_index(trim(std::string_view(line).substr(7)), line_no);
      return;
    }
    if (!have_eps_) throw ParseError(line_no, "expected 'eps' declaration before reactions");
    handle_reaction(line, line_no);
  }

  void handle_reaction(const std::string& line, int line_no) {
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw ParseError(line_no, "reaction needs ': <rate>'");
    const std::string lhs_rhs = line.substr(0, colon);
    const std::string rate_text = trim(std::string_view(line).substr(colon + 1));

    const bool reversible = lhs_rhs.find("<->") != std::string::npos;
    const std::string arrow = reversible ? "<->" : "->";
    const auto at = lhs_rhs.find(arrow);
    if (at == std::string::npos) throw ParseError(line_no, "syntax error: expected '->' or '<->'");
    if (lhs_rhs.find("->", at + arrow.size()) != std::string::npos) {
      throw ParseError(line_no, "syntax error: more than one arrow");
    }
    const int a = complex_index(trim(std::string_view(lhs_rhs).substr(0, at)), line_no);
    const int b = complex_index(trim(std::string_view(lhs_rhs).substr(at + arrow.size())), line_no);

    const auto rate_parts = split_top_level(rate_text, ',');
    if (reversible) {
      if (rate_parts.size() != 2) throw ParseError(line_no, "reversible reaction needs 'k_fwd, k_bwd'");
      add_reaction(a, b, rate_parts[0], line_no);
      add_reaction(b, a, rate_parts[1], line_no);
    } else {
      if (rate_parts.size() != 1) throw ParseError(line_no, "irreversible reaction takes one rate");
      add_reaction(a, b, rate_parts[0], line_no);
    }
  }

  void add_reaction(int source, int target, const std::string& rate_text, int line_no) {
    if (source == target) throw ParseError(line_no, "reaction with identical source and target complex");
    for (const Reaction& r : reactions_) {
      if (r.source == source && r.target == target) {
        throw ParseError(line_no, "duplicate reaction " + labels_[static_cast<std::size_t>(source)] + " -> " +
                                      labels_[static_cast<std::size_t>(target)]);
      }
    }
    RateFunction rate;
    try {
      rate = parse_rate(rate_text);
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
    const Interval range = rate.range();
    if (range.lo < eps_ * (1.0 - 1e-12) || range.hi > (1.0 / eps_) * (1.0 + 1e-12)) {
      throw ParseError(line_no, "rate bound violation: '" + rate_text + "' leaves [eps, 1/eps]");
    }
    reactions_.push_back({source, target});
    rates_.push_back(std::move(rate));
  }

  // Parses `c1 S1 + c2 S2 + ...` or `0`; returns the complex index, adding a
  // new complex when the normalized text is new.
  int complex_index(const std::string& text, int line_no) {
    if (text.empty()) throw ParseError(line_no, "empty complex");
    Eigen::VectorXd column = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(species_.size()));
    std::string label;
    if (text == "0") {
      label = "0";
    } else {
      const auto terms = split_top_level(text, '+');
      for (const std::string& term : terms) {
        if (term.empty()) throw ParseError(line_no, "syntax error in complex '" + text + "'");
        double coefficient = 1.0;
        std::string coeff_text;
        std::string name = term;
        const char first = term[0];
        if (std::isdigit(static_cast<unsigned char>(first)) || first == '-' || first == '.') {
          const char* begin = term.data();
          const char* end = term.data() + term.size();
          auto [ptr, ec] = std::from_chars(begin, end, coefficient);
          if (ec != std::errc() || !std::isfinite(coefficient)) {
            throw ParseError(line_no, "invalid coefficient in '" + term + "'");
          }
          coeff_text = std::string(begin, ptr);
          name = trim(std::string_view(ptr, static_cast<std::size_t>(end - ptr)));
        }
        if (!is_identifier(name)) throw ParseError(line_no, "syntax error in complex term '" + term + "'");
        const auto it = std::find(species_.begin(), species_.end(), name);
        if (it == species_.end()) throw ParseError(line_no, "unknown species '" + name + "'");
        column(it - species_.begin()) += coefficient;
        if (!label.empty()) label += " + ";
        label += coeff_text.empty() ? name : coeff_text + " " + name;
      }
    }
    const auto found = index_by_label_.find(label);
    if (found != index_by_label_.end()) return found->second;
    const int idx = static_cast<int>(columns_.size());
    columns_.push_back(column);
    labels_.push_back(label);
    index_by_label_.emplace(label, idx);
    return idx;
  }

  static double parse_number(const std::string& s, int line_no) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw ParseError(line_no, "invalid number '" + s + "'");
    return v;
  }

  std::vector<std::string> species_;
  bool have_species_ = false;
  bool have_eps_ = false;
  double eps_ = 0.5;
  std::vector<Eigen::VectorXd> columns_;
  std::vector<std::string> labels_;
  std::map<std::string, int> index_by_label_;
  std::vector<Reaction> reactions_;
  std::vector<RateFunction> rates_;
};

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

NetworkDocument parse_network(std::string_view text) { return DocumentParser{}.parse(text); }

std::string to_document(const ReactionNetwork& network, const RateSchedule& schedule) {
  if (static_cast<int>(schedule.size()) != network.num_reactions()) {
    throw_domain("schedule size does not match reaction count");
  }
  std::string out = "species";
  for (const auto& s : network.species()) out += " " + s;
  out += "\neps " + format_number(schedule.epsilon()) + "\n";
  for (const auto& label : network.complex_labels()) out += "complex " + label + "\n";
  const auto& labels = network.complex_labels();
  for (int r = 0; r < network.num_reactions(); ++r) {
    const Reaction& rx = network.reactions()[static_cast<std::size_t>(r)];
    out += labels[static_cast<std::size_t>(rx.source)] + " -> " + labels[static_cast<std::size_t>(rx.target)] +
           " : " + schedule.rate(static_cast<std::size_t>(r)).to_string() + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Graph structure

namespace {

int find_root(std::vector<int>& parent, int v) {
  while (parent[static_cast<std::size_t>(v)] != v) {
    parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
    v = parent[static_cast<std::size_t>(v)];
  }
  return v;
}

std::vector<std::vector<int>> group_and_sort(const std::vector<int>& label, int count) {
  std::vector<std::vector<int>> groups(static_cast<std::size_t>(count));
  for (std::size_t v = 0; v < label.size(); ++v) groups[static_cast<std::size_t>(label[v])].push_back(static_cast<int>(v));
  std::erase_if(groups, [](const auto& g) { return g.empty(); });
  std::sort(groups.begin(), groups.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return groups;
}

}  // namespace

std::vector<std::vector<int>> linkage_classes(const ReactionNetwork& network) {
  const int m = network.num_complexes();
  std::vector<int> parent(static_cast<std::size_t>(m));
  std::iota(parent.begin(), parent.end(), 0);
  for (const Reaction& r : network.reactions()) {
    const int a = find_root(parent, r.source);
    const int b = find_root(parent, r.target);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
  std::vector<int> label(static_cast<std::size_t>(m));
  for (int v = 0; v < m; ++v) label[static_cast<std::size_t>(v)] = find_root(parent, v);
  return group_and_sort(label, m);
}

std::vector<std::vector<int>> strong_components(const ReactionNetwork& network) {
  const int m = network.num_complexes();
  std::vector<std::vector<int>> succ(static_cast<std::size_t>(m));
  for (const Reaction& r : network.reactions()) succ[static_cast<std::size_t>(r.source)].push_back(r.target);

  // Iterative Tarjan.
  std::vector<int> index(static_cast<std::size_t>(m), -1), low(static_cast<std::size_t>(m), 0);
  std::vector<int> comp(static_cast<std::size_t>(m), -1);
  std::vector<bool> on_stack(static_cast<std::size_t>(m), false);
  std::vector<int> stack;
  std::vector<std::pair<int, std::size_t>> call;
  int counter = 0;
  int components = 0;
  for (int root = 0; root < m; ++root) {
    if (index[static_cast<std::size_t>(root)] != -1) continue;
    call.emplace_back(root, 0);
    while (!call.empty()) {
      auto& [v, edge] = call.back();
      const auto vs = static_cast<std::size_t>(v);
      if (edge == 0 && index[vs] == -1) {
        index[vs] = low[vs] = counter++;
        stack.push_back(v);
        on_stack[vs] = true;
      }
      if (edge < succ[vs].size()) {
        const int w = succ[vs][edge++];
        const auto ws = static_cast<std::size_t>(w);
        if (index[ws] == -1) {
          call.emplace_back(w, 0);
        } else if (on_stack[ws]) {
          low[vs] = std::min(low[vs], index[ws]);
        }
        continue;
      }
      if (low[vs] == index[vs]) {
        int w = -1;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[static_cast<std::size_t>(w)] = false;
          comp[static_cast<std::size_t>(w)] = components;
        } while (w != v);
        ++components;
      }
      const int finished = v;
      call.pop_back();
      if (!call.empty()) {
        const auto parent = static_cast<std::size_t>(call.back().first);
        low[parent] = std::min(low[parent], low[static_cast<std::size_t>(finished)]);
      }
    }
  }
  return group_and_sort(comp, components);
}

bool is_weakly_reversible(const ReactionNetwork& network) {
  // Every strong component lies inside one weak component, so equal counts
  // means each weak component is a single strong component.
  return strong_components(network).size() == linkage_classes(network).size();
}

bool is_single_linkage_class(const ReactionNetwork& network) {
  return linkage_classes(network).size() == 1 && is_weakly_reversible(network);
}

// ---------------------------------------------------------------------------
// Linear structure

std::vector<int> greedy_independent_columns(const Eigen::MatrixXd& vectors, Eigen::MatrixXd* orthonormal) {
  const Eigen::Index n = vectors.rows();
  Eigen::MatrixXd q(n, 0);
  std::vector<int> kept;
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    const Eigen::VectorXd v = vectors.col(c);
    const double norm = v.norm();
    if (norm == 0.0) continue;
    Eigen::VectorXd r = v;
    for (int pass = 0; pass < 2; ++pass) r -= q * (q.transpose() * r);
    const double rn = r.norm();
    if (rn > kRankTolerance * norm) {
      q.conservativeResize(n, q.cols() + 1);
      q.col(q.cols() - 1) = r / rn;
      kept.push_back(static_cast<int>(c));
    }
  }
  if (orthonormal) *orthonormal = std::move(q);
  return kept;
}

Eigen::MatrixXd orthogonal_complement(const Eigen::MatrixXd& orthonormal, int n) {
  const auto d = orthonormal.cols();
  if (d == 0) return Eigen::MatrixXd::Identity(n, n);
  if (d >= n) return Eigen::MatrixXd(n, 0);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(orthonormal);
  const Eigen::MatrixXd full = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd comp = full.rightCols(n - d);
  for (Eigen::Index c = 0; c < comp.cols(); ++c) {
    for (Eigen::Index s = 0; s < n; ++s) {
      if (std::abs(comp(s, c)) > 1e-12) {
        if (comp(s, c) < 0.0) comp.col(c) *= -1.0;
        break;
      }
    }
  }
  return comp;
}

StoichiometricStructure stoichiometric_structure(const ReactionNetwork& network) {
  StoichiometricStructure out;
  const Eigen::MatrixXd reactions = network.reaction_matrix();
  out.basis_reactions = greedy_independent_columns(reactions, &out.orthonormal);
  out.basis.resize(network.num_species(), static_cast<Eigen::Index>(out.basis_reactions.size()));
  for (std::size_t k = 0; k < out.basis_reactions.size(); ++k) {
    out.basis.col(static_cast<Eigen::Index>(k)) = reactions.col(out.basis_reactions[k]);
  }
  out.conservation_basis = orthogonal_complement(out.orthonormal, network.num_species());
  return out;
}

}  // namespace crnperm
