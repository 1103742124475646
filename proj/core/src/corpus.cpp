#include "crnperm/corpus.hpp"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "corpus_data.hpp"
#include "crnperm/error.hpp"

namespace crnperm {
namespace {

Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double value : values) v(i++) = value;
  return v;
}

const std::map<std::string, std::string>& bundled() {
  static const std::map<std::string, std::string> docs = [] {
    std::map<std::string, std::string> out;
    for (const auto& d : detail::bundled_documents()) out.emplace(std::string(d.name), std::string(d.text));
    return out;
  }();
  return docs;
}

std::optional<std::string> override_text(const std::string& name) {
  const char* dir = std::getenv("CRNPERM_CORPUS_DIR");
  if (dir == nullptr || *dir == '\0') return std::nullopt;
  const std::filesystem::path path = std::filesystem::path(dir) / (name + ".crn");
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// (y - x/2)(y - x)(y - 2x)
double cubic_factor(double x, double y) { return (y - 0.5 * x) * (y - x) * (y - 2.0 * x); }

double evaluate(const CorpusEntry& entry, const Eigen::VectorXd& x, const Eigen::VectorXd& c, double chain_weight) {
  if (!entry.has_oracle()) throw_domain("corpus entry '" + entry.name + "' has no closed-form oracle");
  const Eigen::Index n = entry.oracle == OracleKind::kComplexBalanced ? 3 : 2;
  if (x.size() != n || c.size() != n) throw_domain("oracle point and center must have length " + std::to_string(n));
  if (!((x.array() > 0.0).all())) throw_domain("oracle point must be strictly positive");
  if (!((c.head(2).array() > 0.0).all())) throw_domain("oracle center must be strictly positive");
  const double lx = std::log(x(0) / c(0));
  const double ly = std::log(x(1) / c(1));
  switch (entry.oracle) {
    case OracleKind::kCubicOrigin:
      return -chain_weight * cubic_factor(x(0), x(1)) * (ly - lx) + std::pow(x(0), 4) * (1.0 - x(1)) * ly;
    case OracleKind::kCubicInfinity:
      return -chain_weight * cubic_factor(x(0), x(1)) * (ly - lx) + (1.0 - x(1)) * ly;
    case OracleKind::kComplexBalanced: {
      const double X = x(0), Y = x(1), Z = x(2);
      return (X - Y * Z) * (ly - lx) + (X * X - Y * Y * Y) * (3.0 * ly - 2.0 * lx);
    }
    case OracleKind::kNone:
      break;
  }
  throw_domain("corpus entry has no closed-form oracle");
}

}  // namespace

std::vector<std::string> corpus_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : bundled()) names.push_back(name);
  return names;
}

const std::string& corpus_document(const std::string& name) {
  const auto it = bundled().find(name);
  if (it == bundled().end()) throw Error(ErrorKind::kNotFound, "unknown corpus entry '" + name + "'");
  return it->second;
}

CorpusEntry corpus_get(const std::string& name) {
  CorpusEntry e;
  e.name = name;
  e.document = override_text(name).value_or(corpus_document(name));
  if (name == "cubic-chain") {
    e.facts = {1, true, 1};
    e.equilibria = {vec({1, 1}), vec({2, 1}), vec({1, 2}), vec({0.5, 0.5})};
    e.class_point = vec({1, 1});
    e.expected = {true, ""};
  } else if (name == "example-7.1") {
    e.facts = {2, true, 2};
    e.oracle = OracleKind::kCubicOrigin;
    e.equilibria = {vec({1, 1})};
    e.boundary_equilibria = {vec({0, 0})};
    e.class_point = vec({1, 1});
    e.expected = {false, "origin"};
  } else if (name == "example-7.2") {
    e.facts = {2, true, 2};
    e.oracle = OracleKind::kCubicInfinity;
    e.equilibria = {vec({1, 1})};
    e.class_point = vec({1, 1});
    e.expected = {false, "infinity"};
  } else if (name == "example-7.3") {
    e.facts = {2, true, 3};
    e.oracle = OracleKind::kComplexBalanced;
    e.oracle_mask = FaceSet({0, 1}, 3);
    e.equilibria = {vec({1, 1, 1})};
    e.boundary_equilibria = {vec({0, 0, 0}), vec({0, 0, 1}), vec({0, 0, 5})};
    e.class_point = vec({1, 1, 1});
    e.expected = {false, "boundary-face"};
  }
  return e;
}

double oracle_vdot(const CorpusEntry& entry, const Eigen::VectorXd& x, const Eigen::VectorXd& center) {
  return evaluate(entry, x, center, 1.0);
}

double oracle_vdot_expanded(const CorpusEntry& entry, const Eigen::VectorXd& x, const Eigen::VectorXd& center) {
  return evaluate(entry, x, center, 2.0);
}

}  // namespace crnperm
