#include <doctest.h>

#include <cmath>
#include <random>

#include "crnperm/certify.hpp"
#include "crnperm/dynamics.hpp"
#include "crnperm/error.hpp"
#include "support.hpp"

using namespace crnperm;
using test::vec;

TEST_CASE("path sums: closed cases") {
  CHECK(path_sum_sup(1, 0.5) == std::log(0.5));
  CHECK(path_sum_sup(2, std::exp(-4.0)) == doctest::Approx(-(1.0 + std::log(4.0))).epsilon(1e-10));
  CHECK(path_sum_sup(2, 1.0) == doctest::Approx(0.0).scale(1e-12));
  CHECK_THROWS_AS(path_sum_sup(0, 0.5), Error);
  CHECK_THROWS_AS(path_sum_sup(2, 0.0), Error);
  CHECK_THROWS_AS(path_sum_sup(2, 1.5), Error);
}

TEST_CASE("path sums agree with the grid oracle for p <= 3") {
  for (int p = 1; p <= 3; ++p) {
    for (double w : {0.9, 0.5, 0.1, 1e-2, 1e-4}) {
      const double exact = path_sum_sup(p, w);
      const double grid = path_sum_sup_grid(p, w, 400);
      CHECK(grid <= exact + 1e-9);
      CHECK(exact - grid < 1e-2 * std::max(1.0, std::abs(exact)));
    }
  }
}

TEST_CASE("path sums decrease along w = 10^-k and diverge") {
  for (int p = 1; p <= 4; ++p) {
    double prev = path_sum_sup(p, 1.0);
    for (int k = 1; k <= 12; ++k) {
      const double v = path_sum_sup(p, std::pow(10.0, -k));
      CHECK(v < prev);
      prev = v;
    }
  }
  CHECK(path_sum_sup_loglog(1, std::log(2000.0)) == doctest::Approx(-2000.0));
  CHECK(path_sum_sup_loglog(2, 1e3) < -1e3);
  CHECK(path_sum_sup_loglog(3, 1e6) < path_sum_sup_loglog(3, 1e5));
}

TEST_CASE("constructive and empirical delta on the cubic chain") {
  const auto cc = test::corpus_doc("cubic-chain");
  const auto c = estimate_delta(cc.network, 0.125, 1.0, DeltaMode::kConstructive);
  CHECK(c.a_log_neg_log.size() == 3);
  CHECK(std::isfinite(c.log_neg_log_delta));
  const auto c2 = estimate_delta(cc.network, 0.125, 2.0, DeltaMode::kConstructive);
  CHECK(c2.log_neg_log_delta >= c.log_neg_log_delta);

  DeltaConfig cfg;
  cfg.samples = 20'000;
  const auto v = validate_delta(cc.network, epsilon_box(6, 0.125), 1.0, c.log_neg_log_delta, cfg);
  CHECK(v.violations == 0);

  // A mild rate box keeps the empirical threshold representable.
  const auto mild = parse_network("species X Y\neps 0.5\n3 X <-> 2 X + Y : 1, 1\n2 X + Y <-> X + 2 Y : 1, 1\n"
                                  "X + 2 Y <-> 3 Y : 1, 1\n");
  const auto e = estimate_delta(mild.network, 0.5, 0.1, DeltaMode::kEmpirical, cfg);
  CHECK(e.mode == DeltaMode::kEmpirical);
  CHECK(validate_delta(mild.network, epsilon_box(6, 0.5), 0.1, e.log_neg_log_delta, cfg).violations == 0);

  CHECK_THROWS_AS(estimate_delta(test::corpus_doc("example-7.1").network, 0.125, 1.0, DeltaMode::kConstructive), Error);
  CHECK_THROWS_AS(estimate_delta(cc.network, 0.125, 0.0, DeltaMode::kConstructive), Error);
}

TEST_CASE("basis reactions and psi") {
  const auto cc = test::corpus_doc("cubic-chain").network;
  const auto b = select_basis_reactions(cc);
  CHECK(b.reactions == std::vector<int>{0});
  CHECK(psi(cc, b, vec({1, 1}))(0) == 1.0);
  CHECK(psi(cc, b, vec({0.5, 1.5}))(0) == doctest::Approx(3.0));
  const auto n71 = test::corpus_doc("example-7.1").network;
  CHECK(select_basis_reactions(n71).reactions == std::vector<int>{0, 6});
}

TEST_CASE("psi_inverse: hand cases and round trips") {
  const auto cc = test::corpus_doc("cubic-chain").network;
  const auto b = select_basis_reactions(cc);
  CHECK((psi_inverse(cc, b, vec({1, 1}), vec({1})) - vec({1, 1})).norm() < 1e-12);
  CHECK((psi_inverse(cc, b, vec({1, 1}), vec({3})) - vec({0.5, 1.5})).norm() < 1e-8);

  std::mt19937_64 rng(23);
  for (const char* name : test::kCorpus) {
    const auto entry = corpus_get(name);
    const auto net = parse_network(entry.document).network;
    const auto basis = select_basis_reactions(net);
    const auto st = stoichiometric_structure(net);
    for (int t = 0; t < 300; ++t) {
      // A random state of the class of p.
      const Eigen::VectorXd x = test::log_uniform(rng, net.num_species(), 0.05, 5.0);
      const Eigen::VectorXd p = x;  // the class of x itself
      const Eigen::VectorXd back = psi_inverse(net, basis, p, psi(net, basis, x));
      CHECK((back - x).norm() <= 1e-8 * std::max(1.0, x.norm()));
      const Eigen::VectorXd target = test::log_uniform(rng, basis.dimension(), 1e-2, 1e2);
      const Eigen::VectorXd y = psi_inverse(net, basis, entry.class_point, target);
      CHECK((psi(net, basis, y) - target).norm() <= 1e-8 * std::max(1.0, target.norm()));
      if (st.conservation_basis.cols() > 0)
        CHECK((st.conservation_basis.transpose() * (y - entry.class_point)).norm() < 1e-9);
    }
  }
  CHECK_THROWS_AS(psi_inverse(cc, b, vec({1, 1}), vec({-1})), Error);
}

TEST_CASE("compute_M") {
  CHECK(compute_M(0.1) == doctest::Approx(9.0));
  CHECK(compute_M(0.25) == 3.0);
  CHECK(compute_M(0.5) == 2.0);
  for (double d : {0.1, 0.3, 1e-5, 1.0 / 3, 1e-300}) CHECK(1.0 / (compute_M(d) + 1.0) <= d);
  CHECK_THROWS_AS(compute_M(0.0), Error);
  CHECK_THROWS_AS(compute_M(1.0), Error);
}

TEST_CASE("cube check outside [1/M, M]") {
  const auto cc = test::corpus_doc("cubic-chain").network;
  const auto b = select_basis_reactions(cc);
  for (double delta : {0.1, 1e-3}) {
    const double M = compute_M(delta);
    const auto r = min_z_outside_cube_check(cc, b, vec({1, 1}), M, delta, 2000, 0);
    CHECK(r.passed());
    CHECK(r.worst_margin <= 0.0);
    CHECK(min_z_outside_cube_check(cc, b, vec({1, 1}), 4 * M, delta, 500, 1).passed());
  }
  const auto n73 = test::corpus_doc("example-7.3").network;
  CHECK(min_z_outside_cube_check(n73, select_basis_reactions(n73), vec({1, 1, 1}), 99.0, 0.01, 500).passed());
}

TEST_CASE("projected networks") {
  const auto n73 = test::corpus_doc("example-7.3").network;
  const auto p = projected_network(n73, FaceSet({0, 1}, 3));
  CHECK(p.num_species() == 2);
  CHECK(p.num_reactions() == 5);
  Eigen::MatrixXd expected(2, 5);
  expected << 1, 0, 0, 2, 0, 0, 1, 1, 0, 3;
  CHECK(p.complexes() == expected);
  CHECK(projected_network(n73, FaceSet::all(3)).complexes() == n73.complexes());

  const auto cc = test::corpus_doc("cubic-chain").network;
  const auto py = projected_network(cc, FaceSet({1}, 2));
  CHECK(py.complexes() == (Eigen::MatrixXd(1, 4) << 0, 1, 2, 3).finished());
}

TEST_CASE("projected rate bounds") {
  const auto doc = test::corpus_doc("example-7.3");
  const double eps = doc.schedule.epsilon();
  const FaceSet xy({0, 1}, 3);
  const auto unit = projected_rate_bounds(doc.network, doc.schedule, xy, {Interval{1.0, 1.0}});
  for (const auto& b : unit.per_reaction) {
    CHECK(b.lo == doctest::Approx(eps));
    CHECK(b.hi == doctest::Approx(1.0 / eps));
  }
  const auto boxed = projected_rate_bounds(doc.network, doc.schedule, xy, {Interval{0.5, 2.0}});
  // Reaction 2 is Y + Z -> X.
  CHECK(boxed.per_reaction[2].lo == doctest::Approx(0.5 * eps));
  CHECK(boxed.per_reaction[2].hi == doctest::Approx(2.0 / eps));
  CHECK(boxed.per_reaction[0].lo == doctest::Approx(eps));
  CHECK(boxed.epsilon_bar == doctest::Approx(0.5 * eps));
  CHECK_THROWS_AS(projected_rate_bounds(doc.network, doc.schedule, xy, {Interval{0.0, 2.0}}), Error);
}
