#include <doctest.h>

#include <cmath>
#include <random>

#include "crnperm/dynamics.hpp"
#include "crnperm/lyapunov.hpp"
#include "crnperm/region.hpp"
#include "support.hpp"

using namespace crnperm;
using test::vec;

TEST_CASE("V, V_W, V_centered on hand values") {
  CHECK(V(vec({1, 1, 1})) == 0.0);
  CHECK(V(vec({0, 0, 0})) == 3.0);
  CHECK(V(vec({std::exp(1.0)})) == doctest::Approx(1.0));
  const FaceSet xy({0, 1}, 3);
  CHECK(V_W(vec({0, 0, 5}), xy) == 2.0);
  CHECK(V_W(vec({1, 1, 7}), xy) == 0.0);
  CHECK(V_W(vec({0.3, 2, 7}), FaceSet::all(3)) == V(vec({0.3, 2, 7})));
  CHECK(V_centered(vec({0.4, 2}), vec({0.4, 2})) == 0.0);
  CHECK(V_centered(vec({0, 0}), vec({1, 1})) == 2.0);
  CHECK(V_centered(vec({0.3, 2}), vec({1, 1})) == doctest::Approx(V(vec({0.3, 2}))));
}

TEST_CASE("nonnegativity on closure points") {
  std::mt19937_64 rng(11);
  std::bernoulli_distribution zero(0.2);
  for (int t = 0; t < 10000; ++t) {
    Eigen::VectorXd x = test::log_uniform(rng, 3, 1e-6, 1e3);
    for (int s = 0; s < 3; ++s)
      if (zero(rng)) x(s) = 0.0;
    const Eigen::VectorXd c = test::log_uniform(rng, 3, 0.1, 10);
    CHECK(V(x) >= 0.0);
    CHECK(V_W(x, FaceSet({0, 2}, 3)) >= 0.0);
    CHECK(V_centered(x, c) >= 0.0);
  }
}

TEST_CASE("FaceSet validation") {
  CHECK_THROWS_AS(FaceSet({}, 3), Error);
  CHECK_THROWS_AS(FaceSet({3}, 3), Error);
  const FaceSet w({2, 0}, 4);
  CHECK(w.species() == std::vector<int>{0, 2});
  CHECK(w.complement() == std::vector<int>{1, 3});
}

TEST_CASE("g on hand values") {
  const auto pair = parse_network("species X Y\neps 0.5\nX <-> Y : 1, 1\n").network;
  const std::vector<double> ones{1.0, 1.0};
  CHECK(g(pair, ones, vec({0.9, 0.1})) == doctest::Approx(0.8 * std::log(1.0 / 9)).epsilon(1e-12));
  CHECK(g(pair, ones, vec({0.5, 0.5})) == 0.0);
  CHECK_THROWS_AS(g(pair, ones, vec({0.6, 0.6})), Error);
  CHECK_THROWS_AS(g(pair, ones, vec({1.0, 0.0})), Error);
  for (const char* name : test::kCorpus) {
    const auto doc = test::corpus_doc(name);
    const int m = doc.network.num_complexes();
    CHECK(g(doc.network, doc.schedule, 3.0, Eigen::VectorXd::Constant(m, 1.0 / m)) == doctest::Approx(0.0).scale(1e-15));
  }
  const auto cc = test::corpus_doc("cubic-chain");
  const Eigen::VectorXd x = vec({2, 1});
  const double gv = g(cc.network, cc.schedule, 0.0, normalized_monomials(cc.network, vec({4, 1})));
  CHECK(gv < 0.0);
  (void)x;
}

TEST_CASE("V_dot at equilibria and the factorization at (4,1)") {
  const auto doc71 = test::corpus_doc("example-7.1");
  CHECK(std::abs(V_dot(doc71.network, doc71.schedule, 0.0, vec({1, 1}))) < 1e-12);
  const auto cc = test::corpus_doc("cubic-chain");
  const auto rates = cc.schedule.rates_at(0.0);
  const Eigen::VectorXd x = vec({4, 1});
  const double lhs = V_dot(cc.network, rates, x);
  Eigen::VectorXd L = monomial_log_values(cc.network, x);
  const double rhs = L.array().exp().sum() * g(cc.network, rates, normalized_monomials(cc.network, x));
  CHECK(test::rel_err(lhs, rhs) < 1e-9);
  CHECK(test::rel_err(lhs, V_dot_factorized(cc.network, rates, x)) < 1e-9);
}

TEST_CASE("centered derivative spot values") {
  const auto d71 = test::corpus_doc("example-7.1");
  const auto d72 = test::corpus_doc("example-7.2");
  const auto r71 = d71.schedule.rates_at(0.0);
  const auto r72 = d72.schedule.rates_at(0.0);
  CHECK(V_centered_dot(d71.network, r71, vec({0.01, 0.015}), vec({1, 1})) > 0.0);
  CHECK(V_centered_dot(d72.network, r72, vec({10, 15}), vec({1, 1})) > 0.0);
  CHECK(V_centered_dot(d71.network, r71, vec({0.7, 3}), vec({0.7, 3})) == 0.0);
}

TEST_CASE("factorization identity on random states and schedules") {
  std::mt19937_64 rng(13);
  for (const char* name : test::kCorpus) {
    const auto doc = test::corpus_doc(name);
    const int n = doc.network.num_species();
    for (int t = 0; t < 1000; ++t) {
      const Eigen::VectorXd x = test::log_uniform(rng, n, 1e-3, 1e3);
      const Eigen::VectorXd k = test::log_uniform(rng, doc.network.num_reactions(), doc.schedule.epsilon(),
                                                  1.0 / doc.schedule.epsilon());
      const std::vector<double> rates(k.data(), k.data() + k.size());
      const double lhs = V_dot(doc.network, rates, x);
      const double rhs = V_dot_factorized(doc.network, rates, x);
      CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(std::abs(lhs), std::abs(rhs)) + 1e-300);
    }
  }
}

TEST_CASE("projected factorization for every face") {
  std::mt19937_64 rng(17);
  for (const char* name : test::kCorpus) {
    const auto entry = corpus_get(name);
    const auto doc = parse_network(entry.document);
    const int n = doc.network.num_species();
    for (const Face& face : enumerate_faces(doc.network, entry.class_point)) {
      for (int t = 0; t < 200; ++t) {
        const Eigen::VectorXd x = test::log_uniform(rng, n, 1e-3, 1e3);
        const Eigen::VectorXd k = test::log_uniform(rng, doc.network.num_reactions(), doc.schedule.epsilon(),
                                                    1.0 / doc.schedule.epsilon());
        const std::vector<double> rates(k.data(), k.data() + k.size());
        const double lhs = V_W_dot(doc.network, rates, x, face.W);
        const double rhs = V_W_dot_factorized(doc.network, rates, x, face.W);
        CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(std::abs(lhs), std::abs(rhs)) + 1e-300);
      }
    }
  }
  const auto d73 = test::corpus_doc("example-7.3");
  const auto r = d73.schedule.rates_at(0.0);
  const FaceSet xy({0, 1}, 3);
  const Eigen::VectorXd x = vec({0.1, 0.1, 1.0});
  CHECK(test::rel_err(V_W_dot(d73.network, r, x, xy), V_W_dot_factorized(d73.network, r, x, xy)) < 1e-9);
  CHECK(V_W_dot(d73.network, r, vec({1, 1, 4}), xy) == 0.0);
  CHECK(V_W_dot(d73.network, r, x, FaceSet::all(3)) == doctest::Approx(V_dot(d73.network, r, x)));
}

TEST_CASE("sup over rate bounds dominates every sampled rate vector") {
  std::mt19937_64 rng(19);
  const auto doc = test::corpus_doc("example-7.1");
  const auto bounds = epsilon_box(8, doc.schedule.epsilon());
  const FaceSet w({0, 1}, 2);
  for (int t = 0; t < 200; ++t) {
    const Eigen::VectorXd x = test::log_uniform(rng, 2, 1e-3, 10);
    const double sup = V_W_dot_sup(doc.network, bounds, x, w);
    for (int j = 0; j < 10; ++j) {
      const Eigen::VectorXd k = test::uniform(rng, 8, 0.125, 8.0);
      const std::vector<double> rates(k.data(), k.data() + k.size());
      CHECK(V_W_dot(doc.network, rates, x, w) <= sup + 1e-12 * std::abs(sup));
    }
    const Eigen::VectorXd z = normalized_monomials(doc.network, x);
    const double gs = g_sup(doc.network, bounds, z);
    const Eigen::VectorXd k = test::uniform(rng, 8, 0.125, 8.0);
    CHECK(g(doc.network, std::vector<double>(k.data(), k.data() + 8), z) <= gs + 1e-12);
  }
}
