// crnperm: structural analysis, simulation, trapping-region certification and
// Lyapunov counterexample search for mass-action networks.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "crnperm/corpus.hpp"
#include "crnperm/dynamics.hpp"
#include "crnperm/error.hpp"
#include "crnperm/report.hpp"
#include "crnperm/witness.hpp"

namespace {

using namespace crnperm;

enum Exit { kOk = 0, kDomain = 1, kParse = 2, kIntegration = 3, kCertification = 4, kNoWitness = 5 };

struct Input {
  std::string name;
  NetworkDocument doc;
  std::optional<CorpusEntry> entry;
};

Input load(const std::string& spec) {
  constexpr std::string_view scheme = "corpus:";
  if (spec.rfind(scheme, 0) == 0) {
    CorpusEntry entry = corpus_get(spec.substr(scheme.size()));
    return {entry.name, parse_network(entry.document), entry};
  }
  std::ifstream in(spec, std::ios::binary);
  if (!in) throw Error(ErrorKind::kNotFound, "cannot open '" + spec + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return {spec, parse_network(buf.str()), std::nullopt};
}

Eigen::VectorXd parse_vector(const std::string& text, int n, const char* what) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw_domain(std::string(what) + ": '" + item + "' is not a number");
    }
  }
  if (static_cast<int>(values.size()) != n) {
    throw_domain(std::string(what) + " needs " + std::to_string(n) + " comma-separated values");
  }
  return Eigen::Map<Eigen::VectorXd>(values.data(), n);
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::kNotFound, "cannot write '" + path + "'");
  out << text;
}

int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::kParse:
      return kParse;
    case ErrorKind::kIntegration:
      return kIntegration;
    case ErrorKind::kCertification:
      return kCertification;
    default:
      return kDomain;
  }
}

struct Options {
  std::string input;
  std::string out;
  std::string x0;
  std::string center;
  std::string target;
  std::string mask;
  std::string regime = "near-origin";
  std::string delta_mode = "constructive";
  double t_end = 200.0;
  double rtol = 1e-8;
  double atol = 1e-10;
  double K = 1.0;
  int samples = 0;
  std::uint64_t seed = 0;
  int workers = 1;
  int trajectories = 100;
  bool force_outer = false;
};

int run_analyze(const Options& o) {
  const Input in = load(o.input);
  emit(analysis_json(in.name, in.doc.network), o.out);
  return kOk;
}

int run_simulate(const Options& o) {
  const Input in = load(o.input);
  const int n = in.doc.network.num_species();
  if (o.x0.empty()) throw_domain("simulate needs --x0");
  IntegratorConfig cfg;
  cfg.rtol = o.rtol;
  cfg.atol = o.atol;
  if (o.samples > 0) cfg.num_samples = o.samples;
  const Trajectory tr = integrate(in.doc.network, in.doc.schedule, parse_vector(o.x0, n, "--x0"), o.t_end, cfg);
  std::fprintf(stderr, "conservation_drift=%.3e accepted_steps=%ld rejected_steps=%ld\n",
               tr.diagnostics.conservation_drift, tr.diagnostics.accepted_steps, tr.diagnostics.rejected_steps);
  emit(trajectory_csv(in.doc.network, tr), o.out);
  return kOk;
}

int run_certify(const Options& o) {
  const Input in = load(o.input);
  const int n = in.doc.network.num_species();
  Eigen::VectorXd p;
  if (!o.x0.empty()) {
    p = parse_vector(o.x0, n, "--x0");
  } else if (in.entry) {
    p = in.entry->class_point;
  } else {
    throw_domain("certify needs a class point (--x0)");
  }
  CertifyOptions opt;
  opt.K = o.K;
  if (o.delta_mode == "empirical") {
    opt.delta_mode = DeltaMode::kEmpirical;
  } else if (o.delta_mode != "constructive") {
    throw_domain("--delta-mode must be constructive or empirical");
  }
  opt.delta.seed = o.seed;
  opt.delta.workers = o.workers;
  opt.region.level.seed = o.seed;
  opt.region.level.workers = o.workers;
  if (o.samples > 0) opt.region.level.samples = static_cast<std::uint64_t>(o.samples);
  opt.region.force_outer = o.force_outer;
  opt.region.verify_trajectories = o.trajectories;
  opt.region.verify_t_end = o.t_end;
  opt.region.integrator.rtol = o.rtol;
  opt.region.integrator.atol = o.atol;
  std::fprintf(stderr, "seed=%llu\n", static_cast<unsigned long long>(o.seed));
  const CertificateReport report = certify_network(in.name, in.doc.network, in.doc.schedule, p, opt);
  emit(certificate_json(report, in.doc.network), o.out);
  return report.passed() ? kOk : kCertification;
}

int run_counterexample(const Options& o) {
  const Input in = load(o.input);
  const ReactionNetwork& net = in.doc.network;
  const int n = net.num_species();
  const Eigen::VectorXd center = o.center.empty() ? Eigen::VectorXd::Ones(n) : parse_vector(o.center, n, "--center");
  const Regime regime = parse_regime(o.regime);
  std::optional<Eigen::VectorXd> target;
  if (!o.target.empty()) target = parse_vector(o.target, n, "--target");
  std::optional<FaceSet> mask;
  if (!o.mask.empty()) {
    std::vector<int> species;
    std::stringstream ss(o.mask);
    std::string item;
    while (std::getline(ss, item, ',')) {
      const int idx = net.species_index(item);
      if (idx < 0) throw_domain("--mask: unknown species '" + item + "'");
      species.push_back(idx);
    }
    mask = FaceSet(species, n);
  } else if (in.entry && in.entry->oracle_mask) {
    mask = in.entry->oracle_mask;
  }
  std::optional<Eigen::VectorXd> class_point;
  if (!o.x0.empty()) class_point = parse_vector(o.x0, n, "--x0");
  WitnessConfig cfg;
  cfg.seed = o.seed;
  cfg.workers = o.workers;
  if (o.samples > 0) cfg.budget = static_cast<std::uint64_t>(o.samples);
  std::fprintf(stderr, "seed=%llu\n", static_cast<unsigned long long>(o.seed));
  const Witness w = find_positive_vdot(net, in.doc.schedule, center, regime, target, mask ? &*mask : nullptr, cfg,
                                       class_point);
  emit(witness_json(in.name, net, w, center, regime, o.seed), o.out);
  return w.found ? kOk : kNoWitness;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Permanence certificates for mass-action reaction networks"};
  app.require_subcommand(1);
  Options o;
  const std::string input_help = "network file, or corpus:<name> for a built-in example";

  auto* analyze = app.add_subcommand("analyze", "linkage classes, weak reversibility and dim S as JSON");
  analyze->add_option("input", o.input, input_help)->required();
  analyze->add_option("--out", o.out, "output path (default stdout)");

  auto* simulate = app.add_subcommand("simulate", "integrate the ODE and write a CSV trajectory");
  simulate->add_option("input", o.input, input_help)->required();
  simulate->add_option("--x0", o.x0, "initial state a,b,...")->required();
  simulate->add_option("--t-end", o.t_end, "horizon")->capture_default_str();
  simulate->add_option("--rtol", o.rtol, "relative tolerance")->capture_default_str();
  simulate->add_option("--atol", o.atol, "absolute tolerance")->capture_default_str();
  simulate->add_option("--samples", o.samples, "output rows (default 101)");
  simulate->add_option("--out", o.out, "output path (default stdout)");

  auto* certify = app.add_subcommand("certify", "build and verify a trapping region; JSON report");
  certify->add_option("input", o.input, input_help)->required();
  certify->add_option("--x0", o.x0, "class point (default: the corpus entry's)");
  certify->add_option("--K", o.K, "decay constant for delta")->capture_default_str();
  certify->add_option("--delta-mode", o.delta_mode, "constructive or empirical")->capture_default_str();
  certify->add_option("--samples", o.samples, "samples per level certification (default 4000)");
  certify->add_option("--seed", o.seed, "quasi-random seed")->capture_default_str();
  certify->add_option("--workers", o.workers, "worker threads")->capture_default_str();
  certify->add_option("--t-end", o.t_end, "verification horizon")->capture_default_str();
  certify->add_option("--trajectories", o.trajectories, "verification trajectories")->capture_default_str();
  certify->add_option("--rtol", o.rtol, "integrator relative tolerance")->capture_default_str();
  certify->add_option("--atol", o.atol, "integrator absolute tolerance")->capture_default_str();
  certify->add_flag("--force-outer", o.force_outer, "certify an outer level even on bounded classes");
  certify->add_option("--out", o.out, "output path (default stdout)");

  auto* counter = app.add_subcommand("counterexample", "search for a point where the Horn-Jackson function increases");
  counter->add_option("input", o.input, input_help)->required();
  counter->add_option("--center", o.center, "center of the Horn-Jackson function (default all ones)");
  counter->add_option("--regime", o.regime, "near-origin, near-infinity or near-point")->capture_default_str();
  counter->add_option("--target", o.target, "target point for near-point");
  counter->add_option("--mask", o.mask, "species the function runs over, e.g. X,Y");
  counter->add_option("--x0", o.x0, "point fixing the stoichiometric class (default: the center)");
  counter->add_option("--samples", o.samples, "evaluation budget (default 24000)");
  counter->add_option("--seed", o.seed, "quasi-random seed")->capture_default_str();
  counter->add_option("--workers", o.workers, "worker threads")->capture_default_str();
  counter->add_option("--out", o.out, "output path (default stdout)");

  auto* corpus = app.add_subcommand("corpus", "built-in example networks");
  corpus->require_subcommand(1);
  std::string export_name;
  auto* corpus_export = corpus->add_subcommand("export", "print a built-in network document");
  corpus_export->add_option("name", export_name, "corpus entry")->required();
  corpus_export->add_option("--out", o.out, "output path (default stdout)");
  auto* corpus_list = corpus->add_subcommand("list", "list built-in networks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kDomain;
  }

  try {
    if (*analyze) return run_analyze(o);
    if (*simulate) return run_simulate(o);
    if (*certify) return run_certify(o);
    if (*counter) return run_counterexample(o);
    if (*corpus_export) {
      emit(corpus_document(export_name), o.out);
      return kOk;
    }
    if (*corpus_list) {
      for (const auto& name : corpus_names()) std::cout << name << "\n";
      return kOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomain;
  }
  return kOk;
}
