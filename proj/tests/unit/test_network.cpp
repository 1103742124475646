#include <doctest.h>

#include <Eigen/QR>
#include <numeric>
#include <random>

#include "crnperm/error.hpp"
#include "crnperm/network.hpp"
#include "support.hpp"

using namespace crnperm;

TEST_CASE("parse: example 7.1 has n=2, m=6 and 8 reactions") {
  const auto doc = test::corpus_doc("example-7.1");
  CHECK(doc.network.num_species() == 2);
  CHECK(doc.network.num_complexes() == 6);
  CHECK(doc.network.num_reactions() == 8);
  const auto rates = doc.schedule.rates_at(0.0);
  CHECK(rates == std::vector<double>{2, 8, 1, 1, 8, 2, 1, 1});
}

TEST_CASE("parse: example 7.3 has n=3, m=5 and 5 reactions") {
  const auto doc = test::corpus_doc("example-7.3");
  CHECK(doc.network.num_species() == 3);
  CHECK(doc.network.num_complexes() == 5);
  CHECK(doc.network.num_reactions() == 5);
}

TEST_CASE("parse errors carry a line number") {
  SUBCASE("single complex and no reactions") {
    CHECK_THROWS_AS(parse_network("species X\neps 0.5\ncomplex 3 X\n"), ParseError);
  }
  SUBCASE("unknown species") {
    try {
      parse_network("species X Y\neps 0.5\nX -> Q : 1\n");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.line() == 3);
    }
  }
  SUBCASE("duplicate reaction") {
    CHECK_THROWS_AS(parse_network("species X Y\neps 0.5\nX -> Y : 1\nX -> Y : 1\n"), ParseError);
  }
  SUBCASE("self loop") {
    CHECK_THROWS_AS(parse_network("species X Y\neps 0.5\nX -> X : 1\n"), ParseError);
  }
  SUBCASE("rate outside [eps, 1/eps]") {
    CHECK_THROWS_AS(parse_network("species X Y\neps 0.5\nX -> Y : 3\n"), ParseError);
    CHECK_THROWS_AS(parse_network("species X Y\neps 0.5\nX -> Y : sin(center=1, frac=0.6, omega=1, phase=0)\n"),
                    ParseError);
  }
  SUBCASE("garbage") {
    CHECK_THROWS_AS(parse_network("species X\nfoo\n"), ParseError);
  }
}

TEST_CASE("parse: negative coefficients and the zero complex") {
  const auto doc = parse_network("species X Y\neps 0.5\n-1 X + Y -> 0 : 1\n0 -> Y : 1\n");
  CHECK(doc.network.num_complexes() == 3);
  CHECK(doc.network.complexes()(0, 0) == -1.0);
  CHECK(doc.network.complexes().col(1).isZero());
}

TEST_CASE("linkage classes") {
  CHECK(linkage_classes(test::corpus_doc("example-7.1").network) ==
        std::vector<std::vector<int>>{{0, 1, 2, 3}, {4, 5}});
  CHECK(linkage_classes(test::corpus_doc("cubic-chain").network).size() == 1);
  const auto net73 = test::corpus_doc("example-7.3").network;
  const auto classes = linkage_classes(net73);
  REQUIRE(classes.size() == 2);
  CHECK(classes[0] == std::vector<int>{0, 1, 2});  // X, Y, Y + Z
  CHECK(classes[1] == std::vector<int>{3, 4});     // 2 X, 3 Y
}

TEST_CASE("isolated complexes form singleton classes") {
  const auto doc = parse_network("species X Y\neps 0.5\ncomplex 2 Y\nX -> Y : 1\n");
  CHECK(linkage_classes(doc.network) == std::vector<std::vector<int>>{{0}, {1, 2}});
}

TEST_CASE("weak reversibility") {
  CHECK(is_weakly_reversible(test::corpus_doc("example-7.1").network));
  CHECK(is_weakly_reversible(test::corpus_doc("example-7.3").network));
  CHECK_FALSE(is_weakly_reversible(parse_network("species X Y\neps 0.5\n3 X -> 2 X + Y : 1\n").network));
  CHECK(is_single_linkage_class(test::corpus_doc("cubic-chain").network));
  CHECK_FALSE(is_single_linkage_class(test::corpus_doc("example-7.1").network));
  CHECK_FALSE(is_single_linkage_class(test::corpus_doc("example-7.3").network));
}

TEST_CASE("reversible random networks are weakly reversible; classes partition the complexes") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 2 + static_cast<int>(rng() % 7);
    Eigen::MatrixXd Y(2, m);
    for (int i = 0; i < m; ++i) Y.col(i) << static_cast<double>(i), static_cast<double>(i % 3);
    std::vector<Reaction> rs;
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        if (rng() % 3 == 0) {
          rs.push_back({i, j});
          rs.push_back({j, i});
        }
    const ReactionNetwork net({"X", "Y"}, Y, rs);
    CHECK(is_weakly_reversible(net));
    std::vector<int> seen;
    for (const auto& c : linkage_classes(net)) {
      CHECK_FALSE(c.empty());
      seen.insert(seen.end(), c.begin(), c.end());
    }
    std::sort(seen.begin(), seen.end());
    std::vector<int> all(static_cast<std::size_t>(m));
    std::iota(all.begin(), all.end(), 0);
    CHECK(seen == all);
  }
}

TEST_CASE("stoichiometric structure") {
  SUBCASE("example 7.1: dim 2, no conservation law") {
    const auto st = stoichiometric_structure(test::corpus_doc("example-7.1").network);
    CHECK(st.dimension() == 2);
    CHECK(st.conservation_basis.cols() == 0);
  }
  SUBCASE("cubic chain: dim 1, conservation along (1,1)") {
    const auto st = stoichiometric_structure(test::corpus_doc("cubic-chain").network);
    CHECK(st.dimension() == 1);
    REQUIRE(st.conservation_basis.cols() == 1);
    const double r = std::sqrt(0.5);
    CHECK(st.conservation_basis(0, 0) == doctest::Approx(r).epsilon(1e-14));
    CHECK(st.conservation_basis(1, 0) == doctest::Approx(r).epsilon(1e-14));
  }
  SUBCASE("residual invariants on every corpus network") {
    for (const char* name : test::kCorpus) {
      const auto net = test::corpus_doc(name).network;
      const auto st = stoichiometric_structure(net);
      CHECK(st.dimension() + st.conservation_basis.cols() == net.num_species());
      for (int r = 0; r < net.num_reactions(); ++r) {
        const Eigen::VectorXd v = net.reaction_vector(r);
        const Eigen::VectorXd coeff = st.basis.colPivHouseholderQr().solve(v);
        CHECK((st.basis * coeff - v).norm() < 1e-10);
        if (st.conservation_basis.cols() > 0) CHECK((st.conservation_basis.transpose() * v).norm() < 1e-10);
      }
    }
  }
  SUBCASE("example 7.3 is full-dimensional") {
    CHECK(stoichiometric_structure(test::corpus_doc("example-7.3").network).dimension() == 3);
  }
}

TEST_CASE("document round trip") {
  for (const char* name : test::kCorpus) {
    const auto doc = test::corpus_doc(name);
    const auto again = parse_network(to_document(doc.network, doc.schedule));
    CHECK(again.network == doc.network);
    CHECK(again.schedule == doc.schedule);
  }
  const auto timed = parse_network(
      "species X Y\neps 0.25\nX <-> Y : sin(center=1, frac=0.5, omega=2, phase=0.1), pw(t0=0:2, t1=10:0.5)\n");
  CHECK(parse_network(to_document(timed.network, timed.schedule)).schedule == timed.schedule);
}
