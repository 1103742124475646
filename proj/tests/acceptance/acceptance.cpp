// Prints one PASS/FAIL line per acceptance criterion. Exit status is nonzero
// when any criterion fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include "crnperm/certify.hpp"
#include "crnperm/corpus.hpp"
#include "crnperm/dynamics.hpp"
#include "crnperm/lyapunov.hpp"
#include "crnperm/region.hpp"
#include "crnperm/witness.hpp"

using namespace crnperm;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

const char* const kCorpus[] = {"cubic-chain", "example-7.1", "example-7.2", "example-7.3"};

NetworkDocument load(const std::string& name) { return parse_network(corpus_get(name).document); }

Eigen::VectorXd vec(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

Eigen::VectorXd log_uniform(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = std::exp(u(rng));
  return v;
}

Eigen::VectorXd uniform(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

// A random schedule inside [eps, 1/eps]: constants and sinusoids.
RateSchedule random_schedule(std::mt19937_64& rng, std::size_t reactions, double eps) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<RateFunction> rates;
  for (std::size_t r = 0; r < reactions; ++r) {
    const double lo = std::log(eps) * 0.9, hi = -lo;
    const double center = std::exp(lo + (hi - lo) * u(rng));
    if (u(rng) < 0.5) {
      rates.push_back(RateFunction::constant(center));
    } else {
      const double room = std::min(1.0 - eps / center, 1.0 / (eps * center) - 1.0);
      rates.push_back(RateFunction(SinusoidalRate{center, 0.9 * room * u(rng), 0.1 + 3.0 * u(rng), 6.0 * u(rng)}));
    }
  }
  return RateSchedule(eps, rates);
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// -----------------------------------------------------------------------------

Outcome structural() {
  const auto n71 = load("example-7.1").network;
  const auto n73 = load("example-7.3").network;
  const auto cc = load("cubic-chain").network;
  const auto c71 = linkage_classes(n71).size(), c73 = linkage_classes(n73).size(), ccc = linkage_classes(cc).size();
  const int d71 = stoichiometric_structure(n71).dimension(), dcc = stoichiometric_structure(cc).dimension();
  const bool ok = c71 == 2 && is_weakly_reversible(n71) && d71 == 2 && c73 == 2 && is_weakly_reversible(n73) &&
                  ccc == 1 && is_single_linkage_class(cc) && dcc == 1;
  std::ostringstream s;
  s << "7.1: classes=" << c71 << " wr=" << is_weakly_reversible(n71) << " dimS=" << d71 << "; 7.3: classes=" << c73
    << " wr=" << is_weakly_reversible(n73) << "; cubic-chain: classes=" << ccc << " dimS=" << dcc;
  return {ok, s.str()};
}

Outcome factorization() {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> tau(0.0, 100.0);
  double worst = 0.0;
  for (const char* name : kCorpus) {
    const auto doc = load(name);
    for (int t = 0; t < 1000; ++t) {
      const auto sched = random_schedule(rng, doc.schedule.size(), doc.schedule.epsilon());
      const double tt = tau(rng);
      const Eigen::VectorXd x = log_uniform(rng, doc.network.num_species(), 1e-3, 1e3);
      const double lhs = V_dot(doc.network, sched, tt, x);
      const Eigen::VectorXd z = normalized_monomials(doc.network, x);
      const double total = monomial_log_values(doc.network, x).array().exp().sum();
      const double rhs = total * g(doc.network, sched, tt, z);
      worst = std::max(worst, rel(lhs, rhs));
    }
  }
  return {worst < 1e-9, "max relative error " + fmt("%.2e", worst) + " over 4x1000 samples"};
}

Outcome projected_factorization() {
  std::mt19937_64 rng(3);
  double worst = 0.0;
  int faces = 0;
  for (const char* name : kCorpus) {
    const auto entry = corpus_get(name);
    const auto doc = parse_network(entry.document);
    for (const Face& face : enumerate_faces(doc.network, entry.class_point)) {
      ++faces;
      for (int t = 0; t < 1000; ++t) {
        const auto sched = random_schedule(rng, doc.schedule.size(), doc.schedule.epsilon());
        const auto rates = sched.rates_at(std::uniform_real_distribution<double>(0, 100)(rng));
        const Eigen::VectorXd x = log_uniform(rng, doc.network.num_species(), 1e-3, 1e3);
        worst = std::max(worst, rel(V_W_dot(doc.network, rates, x, face.W),
                                    V_W_dot_factorized(doc.network, rates, x, face.W)));
      }
    }
  }
  return {worst < 1e-9, "max relative error " + fmt("%.2e", worst) + " over " + std::to_string(faces) +
                            " faces x 1000 samples"};
}

Outcome closed_form() {
  std::mt19937_64 rng(4);
  bool ok = true;
  std::ostringstream s;
  for (const char* name : {"example-7.1", "example-7.2", "example-7.3"}) {
    const auto e = corpus_get(name);
    const auto doc = parse_network(e.document);
    const auto rates = doc.schedule.rates_at(0.0);
    const FaceSet* mask = e.oracle_mask ? &*e.oracle_mask : nullptr;
    const int n = doc.network.num_species();
    double worst = 0.0, worst_expanded = 0.0;
    for (int t = 0; t < 1000; ++t) {
      const Eigen::VectorXd x = uniform(rng, n, 0.01, 10);
      const Eigen::VectorXd c = uniform(rng, n, 0.1, 10);
      const double generic = V_centered_dot(doc.network, rates, x, c, mask);
      worst = std::max(worst, std::abs(oracle_vdot(e, x, c) - generic) / (1.0 + std::abs(generic)));
      worst_expanded =
          std::max(worst_expanded, std::abs(oracle_vdot_expanded(e, x, c) - generic) / (1.0 + std::abs(generic)));
    }
    ok = ok && worst < 1e-9;
    s << name << " reference " << fmt("%.1e", worst) << " (doubled cubic term " << fmt("%.1e", worst_expanded) << "); ";
  }
  s << "reference 7.1/7.2 forms halve the cubic-chain term";
  return {ok, s.str()};
}

Outcome counterexamples() {
  std::ostringstream s;
  bool ok = true;
  const auto d71 = load("example-7.1"), d72 = load("example-7.2"), d73 = load("example-7.3");
  const auto w71 = find_positive_vdot(d71.network, d71.schedule, vec({1, 1}), Regime::kNearOrigin);
  const bool a = w71.found && w71.vdot > 0 && w71.x.maxCoeff() < 0.1;
  const auto w72 = find_positive_vdot(d72.network, d72.schedule, vec({1, 1}), Regime::kNearInfinity);
  const bool b = w72.found && w72.vdot > 0 && w72.x.minCoeff() > 100;
  const FaceSet xy({0, 1}, 3);
  const auto w73 =
      find_positive_vdot(d73.network, d73.schedule, vec({1, 1, 1}), Regime::kNearPoint, vec({0, 0, 1}), &xy);
  const bool c = w73.found && w73.vdot > 0 && (w73.x - vec({0, 0, 1})).norm() <= 0.1 + 1e-12;
  s << "witnesses 7.1:" << (a ? "yes" : "no") << " 7.2:" << (b ? "yes" : "no") << " 7.3:" << (c ? "yes" : "no");
  ok = a && b && c;

  // Spot values: the library's derivative against the reference closed forms.
  const auto e71 = corpus_get("example-7.1"), e72 = corpus_get("example-7.2");
  const double v71 = V_centered_dot(d71.network, d71.schedule.rates_at(0), vec({0.01, 0.015}), vec({1, 1}));
  const double v72 = V_centered_dot(d72.network, d72.schedule.rates_at(0), vec({10, 15}), vec({1, 1}));
  const double o71 = oracle_vdot(e71, vec({0.01, 0.015}), vec({1, 1}));
  const double o72 = oracle_vdot(e72, vec({10, 15}), vec({1, 1}));
  const bool spot = std::abs(v71 - o71) <= 0.01 * std::abs(o71) && std::abs(v72 - o72) <= 0.01 * std::abs(o72);
  s << "; spot V(0.01,0.015)=" << fmt("%.3e", v71) << " vs reference " << fmt("%.3e", o71) << ", V(10,15)="
    << fmt("%.2f", v72) << " vs reference " << fmt("%.2f", o72);
  return {ok && spot, s.str()};
}

Outcome path_sums() {
  bool ok = true;
  for (double w : {1.0, 0.5, 1e-3, 1e-300}) ok = ok && path_sum_sup(1, w) == std::log(w);
  const double two = path_sum_sup(2, std::exp(-4.0));
  ok = ok && std::abs(two + 1.0 + std::log(4.0)) < 1e-8;
  bool decreasing = true;
  for (int p = 1; p <= 4; ++p) {
    double prev = path_sum_sup(p, 1.0);
    for (int k = 1; k <= 12; ++k) {
      const double v = path_sum_sup(p, std::pow(10.0, -k));
      decreasing = decreasing && v < prev;
      prev = v;
    }
  }
  // Continue the decades in log-log form: w = 10^-k has lambda = log(k log 10).
  int k1 = 0;
  for (int k = 13; k < 100000 && k1 == 0; ++k)
    if (path_sum_sup_loglog(1, std::log(k * std::log(10.0))) < -1e3) k1 = k;
  double lambda2 = 0.0;
  while (path_sum_sup_loglog(2, lambda2) >= -1e3) lambda2 += 1.0;
  const double p2 = path_sum_sup_loglog(2, lambda2);
  const double p3 = path_sum_sup_loglog(3, std::log(std::numeric_limits<double>::max()));
  ok = ok && decreasing && k1 > 0;
  std::ostringstream s;
  s << "p=2 at e^-4: " << fmt("%.10f", two) << "; strictly decreasing for p=1..4, k=1..12: " << (decreasing ? "yes" : "no")
    << "; below -1e3 for p=1 at k=" << k1 << ", for p=2 at -log w=e^" << fmt("%.0f", lambda2) << " (" << fmt("%.1f", p2) << ")"
    << "; p=3 reaches only " << fmt("%.2f", p3) << " at the largest representable -log w";
  return {ok, s.str()};
}

Outcome delta_pipeline() {
  const auto cc = load("cubic-chain");
  const auto est = estimate_delta(cc.network, 0.125, 1.0, DeltaMode::kConstructive);
  DeltaConfig cfg;
  cfg.samples = 100'000;
  const auto val = validate_delta(cc.network, epsilon_box(cc.network.num_reactions(), 0.125), 1.0,
                                  est.log_neg_log_delta, cfg);
  std::ostringstream s;
  s << "constructive log(-log delta)=" << fmt("%.4g", est.log_neg_log_delta) << ", sampler violations "
    << val.violations << "/" << val.samples << " (worst g " << fmt("%.3g", val.worst_g) << ")";
  bool ok = val.violations == 0;
  if (est.delta > 0.0) {
    const double M = compute_M(est.delta);
    const auto cube = min_z_outside_cube_check(cc.network, select_basis_reactions(cc.network), vec({1, 1}), M,
                                               est.delta, 10'000);
    ok = ok && 1.0 / (M + 1.0) <= est.delta && cube.passed();
    s << "; M=" << fmt("%.4g", M) << ", cube check failures " << cube.failures << "/" << cube.samples;
  } else {
    ok = false;
    s << "; delta underflows to 0, so M = 1/delta - 1 and the cube [1/M, M] are not representable in double";
  }
  return {ok, s.str()};
}

Outcome psi_bijectivity() {
  std::mt19937_64 rng(8);
  double worst_state = 0.0, worst_target = 0.0;
  for (const char* name : kCorpus) {
    const auto e = corpus_get(name);
    const auto net = parse_network(e.document).network;
    const auto basis = select_basis_reactions(net);
    for (int t = 0; t < 1000; ++t) {
      const Eigen::VectorXd x = log_uniform(rng, net.num_species(), 0.05, 5.0);
      const Eigen::VectorXd back = psi_inverse(net, basis, x, psi(net, basis, x));
      worst_state = std::max(worst_state, (back - x).norm() / std::max(1.0, x.norm()));
      const Eigen::VectorXd target = log_uniform(rng, basis.dimension(), 1e-2, 1e2);
      const Eigen::VectorXd y = psi_inverse(net, basis, e.class_point, target);
      worst_target = std::max(worst_target, (psi(net, basis, y) - target).norm() / std::max(1.0, target.norm()));
    }
  }
  const auto cc = load("cubic-chain").network;
  const double hand = (psi_inverse(cc, select_basis_reactions(cc), vec({1, 1}), vec({3})) - vec({0.5, 1.5})).norm();
  std::ostringstream s;
  s << "state round trip " << fmt("%.1e", worst_state) << ", target round trip " << fmt("%.1e", worst_target)
    << ", psi_inverse(3) error " << fmt("%.1e", hand);
  return {worst_state < 1e-8 && worst_target < 1e-8 && hand < 1e-8, s.str()};
}

Outcome trapping_region() {
  const auto cc = load("cubic-chain");
  const RateSchedule sinusoidal(0.125, {parse_rate("sin(center=2, frac=0.5, omega=0.7, phase=0)"),
                                        parse_rate("sin(center=6, frac=0.3333, omega=1.3, phase=1)"),
                                        parse_rate("sin(center=1, frac=0.5, omega=2.1, phase=2)"),
                                        parse_rate("sin(center=1, frac=0.5, omega=0.4, phase=3)"),
                                        parse_rate("sin(center=6, frac=0.3333, omega=1.7, phase=4)"),
                                        parse_rate("sin(center=2, frac=0.5, omega=0.9, phase=5)")});
  bool ok = true;
  std::ostringstream s;
  for (const auto& [label, sched] : {std::pair<const char*, RateSchedule>{"constant", cc.schedule},
                                     std::pair<const char*, RateSchedule>{"sinusoidal", sinusoidal}}) {
    RegionConfig cfg;
    cfg.verify_trajectories = 100;
    cfg.extra_starts = {vec({1.99, 0.01}), vec({0.01, 1.99})};
    const auto region = build_trapping_region(cc.network, sched, vec({1, 1}), cfg);
    int vertex_shells = 0;
    for (const auto& sh : region.shells) vertex_shells += sh.passed && sh.face.dimension == 0;
    const bool here = region.complete && region.shells.size() == 2 && vertex_shells == 2 && region.verification &&
                      region.verification->passed() && region.verification->max_conservation_drift < 1e-6;
    ok = ok && here;
    s << label << ": shells " << vertex_shells << "/" << region.shells.size();
    if (region.verification) {
      const auto& v = *region.verification;
      double last = 0.0;
      for (double t : v.entry_times) last = std::max(last, t);
      s << ", entered " << v.entered << "/" << v.trajectories << " (latest " << fmt("%.3g", last) << "), exits "
        << v.exit_events << ", drift " << fmt("%.1e", v.max_conservation_drift);
    } else {
      s << ", not verified (" << region.failure << ")";
    }
    s << "; ";
  }
  return {ok, s.str()};
}

Outcome negative_controls() {
  RegionConfig cfg;
  cfg.verify = false;
  std::ostringstream s;
  bool ok = true;
  const struct {
    const char* name;
    const char* failure;
    const char* regime;
  } cases[] = {{"example-7.1", "face {X, Y} (dim 0)", "origin"},
               {"example-7.2", "outer level", "infinity"},
               {"example-7.3", "face {X, Y} (dim 1)", "boundary-face"}};
  for (const auto& c : cases) {
    const auto e = corpus_get(c.name);
    const auto doc = parse_network(e.document);
    const auto region = build_trapping_region(doc.network, doc.schedule, e.class_point, cfg);
    const bool here = !region.complete && region.failure == c.failure && region.failure_regime == c.regime;
    ok = ok && here;
    s << c.name << " fails at " << region.failure << " [" << region.failure_regime << "]; ";
  }
  ProbeConfig probe;
  for (const char* name : {"example-7.1", "example-7.2"}) {
    const auto doc = load(name);
    const auto rep = permanence_probe(doc.network, doc.schedule, {vec({0.05, 3.0}), vec({3.0, 0.05}), vec({0.5, 0.5})},
                                      probe);
    ok = ok && rep.failures == 0 && rep.min_of_mins > 0.0;
    s << name << " tail min " << fmt("%.3g", rep.min_of_mins) << "; ";
  }
  return {ok, s.str()};
}

}  // namespace

int main() {
  const struct {
    int id;
    const char* title;
    double budget;
    std::function<Outcome()> run;
  } criteria[] = {
      {1, "structural facts", 1.0, structural},
      {2, "factorization identity", 10.0, factorization},
      {3, "projected factorization", 30.0, projected_factorization},
      {4, "closed-form oracles", 10.0, closed_form},
      {5, "counterexample reproduction", 30.0, counterexamples},
      {6, "path-sum oracle", 5.0, path_sums},
      {7, "delta/M pipeline", 60.0, delta_pipeline},
      {8, "Psi bijectivity", 10.0, psi_bijectivity},
      {9, "trapping region", 120.0, trapping_region},
      {10, "negative controls", 120.0, negative_controls},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool pass = out.pass && secs < c.budget;
    if (!pass) ++failed;
    std::printf("[%s] %2d %s: %s (%.2f s, budget %.0f s)\n", pass ? "PASS" : "FAIL", c.id, c.title,
                out.detail.c_str(), secs, c.budget);
    std::fflush(stdout);
  }
  std::printf("%d of 10 criteria passed\n", 10 - failed);
  return failed == 0 ? 0 : 1;
}
