#pragma once

#include <Eigen/Core>
#include <random>
#include <string>

#include "crnperm/corpus.hpp"
#include "crnperm/network.hpp"

namespace test {

inline crnperm::NetworkDocument corpus_doc(const std::string& name) {
  return crnperm::parse_network(crnperm::corpus_get(name).document);
}

inline const char* const kCorpus[] = {"cubic-chain", "example-7.1", "example-7.2", "example-7.3"};

// Log-uniform vector in [lo, hi]^n.
inline Eigen::VectorXd log_uniform(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = std::exp(u(rng));
  return v;
}

inline Eigen::VectorXd uniform(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

inline Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

}  // namespace test
