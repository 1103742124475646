#include "crnperm/report.hpp"

#include <cmath>

#include "json.hpp"

namespace crnperm {
namespace {

using nlohmann::ordered_json;

// Non-finite values become strings so the output stays valid JSON.
ordered_json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

ordered_json vector_json(const Eigen::VectorXd& v) {
  ordered_json a = ordered_json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v(i)));
  return a;
}

ordered_json names(const ReactionNetwork& net, const std::vector<int>& species) {
  ordered_json a = ordered_json::array();
  for (int s : species) a.push_back(net.species()[static_cast<std::size_t>(s)]);
  return a;
}

ordered_json evidence_json(const LevelEvidence& e) {
  ordered_json j;
  j["c"] = number(e.c);
  j["passed"] = e.passed;
  j["samples"] = e.samples;
  j["attempts"] = e.attempts;
  j["seed"] = e.seed;
  j["worst_vdot"] = number(e.worst_vdot);
  j["worst_point"] = vector_json(e.worst_point);
  return j;
}

ordered_json structural_json(const ReactionNetwork& net) {
  ordered_json j;
  const auto classes = linkage_classes(net);
  j["classes"] = classes.size();
  j["weak_reversibility"] = is_weakly_reversible(net);
  const auto st = stoichiometric_structure(net);
  j["dimS"] = st.dimension();
  ordered_json partition = ordered_json::array();
  for (const auto& cls : classes) {
    ordered_json members = ordered_json::array();
    for (int c : cls) members.push_back(net.complex_labels().empty() ? ordered_json(c) : ordered_json(net.complex_labels()[static_cast<std::size_t>(c)]));
    partition.push_back(members);
  }
  j["linkage_classes"] = partition;
  ordered_json conservation = ordered_json::array();
  for (Eigen::Index k = 0; k < st.conservation_basis.cols(); ++k) conservation.push_back(vector_json(st.conservation_basis.col(k)));
  j["conservation_basis"] = conservation;
  return j;
}

}  // namespace

CertificateReport certify_network(const std::string& name, const ReactionNetwork& network,
                                  const RateSchedule& schedule, const Eigen::VectorXd& class_point,
                                  const CertifyOptions& options) {
  CertificateReport r;
  r.network = name;
  r.linkage_classes = static_cast<int>(linkage_classes(network).size());
  r.weakly_reversible = is_weakly_reversible(network);
  r.dimension = stoichiometric_structure(network).dimension();
  r.epsilon = schedule.epsilon();
  r.K = options.K;
  r.seed = options.region.level.seed;
  if (is_single_linkage_class(network)) {
    r.delta = estimate_delta(network, schedule.epsilon(), options.K, options.delta_mode, options.delta);
    if (r.delta->delta > 0.0) r.M = compute_M(r.delta->delta);
  }
  r.region = build_trapping_region(network, schedule, class_point, options.region);
  return r;
}

std::string certificate_json(const CertificateReport& r, const ReactionNetwork& net) {
  ordered_json j;
  j["network"] = r.network;
  j["seed"] = r.seed;
  j["structural"] = {{"classes", r.linkage_classes}, {"weak_reversibility", r.weakly_reversible}, {"dimS", r.dimension}};

  ordered_json constants;
  constants["epsilon"] = number(r.epsilon);
  constants["K"] = number(r.K);
  if (r.delta) {
    constants["delta"] = number(r.delta->delta);
    constants["log_neg_log_delta"] = number(r.delta->log_neg_log_delta);
    constants["delta_mode"] = to_string(r.delta->mode);
  } else {
    constants["delta"] = nullptr;
    constants["delta_mode"] = nullptr;
  }
  constants["M"] = r.M ? number(*r.M) : ordered_json(nullptr);
  j["constants"] = constants;
  j["class_point"] = vector_json(r.region.class_point);
  j["class_unbounded"] = r.region.unbounded;

  if (r.region.outer_evidence) {
    ordered_json outer = evidence_json(*r.region.outer_evidence);
    outer["level"] = r.region.outer_level ? number(*r.region.outer_level) : ordered_json(nullptr);
    j["outer_level"] = outer;
  } else {
    j["outer_level"] = nullptr;
  }

  ordered_json shells = ordered_json::array();
  for (const Shell& s : r.region.shells) {
    ordered_json sj;
    sj["face_support"] = names(net, s.face.W.complement());
    sj["W"] = names(net, s.face.W.species());
    sj["face_dimension"] = s.face.dimension;
    sj["c"] = number(s.c);
    sj["omega"] = number(s.omega);
    sj["passed"] = s.passed;
    sj["epsilon_bar"] = number(s.projected_bounds.epsilon_bar);
    sj["worst_vdot"] = number(s.evidence.worst_vdot);
    sj["worst_point"] = vector_json(s.evidence.worst_point);
    sj["samples"] = s.evidence.samples;
    sj["seed"] = s.evidence.seed;
    sj["rungs_tried"] = s.rungs_tried;
    shells.push_back(sj);
  }
  j["shells"] = shells;

  if (r.region.verification) {
    const auto& v = *r.region.verification;
    ordered_json times = ordered_json::array();
    for (double t : v.entry_times) times.push_back(number(t));
    j["verification"] = {{"trajectories", v.trajectories},
                         {"entered", v.entered},
                         {"exit_events", v.exit_events},
                         {"integration_failures", v.integration_failures},
                         {"max_conservation_drift", number(v.max_conservation_drift)},
                         {"entry_times", times}};
  } else {
    j["verification"] = nullptr;
  }

  ordered_json verdict;
  verdict["result"] = r.passed() ? "pass" : "fail";
  ordered_json violations = ordered_json::array();
  for (const auto& h : r.region.hypothesis_violations) violations.push_back(h);
  verdict["hypothesis_violations"] = violations;
  if (!r.region.failure.empty()) {
    verdict["failure"] = r.region.failure;
    verdict["regime"] = r.region.failure_regime;
    // The worst sample of the failing level is a point where the derivative is not negative.
    const LevelEvidence* e = nullptr;
    if (!r.region.outer_passed && r.region.outer_evidence) e = &*r.region.outer_evidence;
    for (const Shell& s : r.region.shells)
      if (!s.passed && e == nullptr) e = &s.evidence;
    if (e != nullptr && e->worst_point.size() > 0)
      verdict["witness"] = {{"x", vector_json(e->worst_point)}, {"vdot_sup", number(e->worst_vdot)}};
  }
  j["verdict"] = verdict;
  return j.dump(2) + "\n";
}

std::string analysis_json(const std::string& name, const ReactionNetwork& net) {
  ordered_json j;
  j["network"] = name;
  j["species"] = net.species();
  j["complexes"] = net.num_complexes();
  j["reactions"] = net.num_reactions();
  j["structural"] = structural_json(net);
  return j.dump(2) + "\n";
}

std::string witness_json(const std::string& name, const ReactionNetwork& net, const Witness& w,
                         const Eigen::VectorXd& center, Regime regime, std::uint64_t seed) {
  ordered_json j;
  j["network"] = name;
  j["seed"] = seed;
  j["regime"] = to_string(regime);
  j["center"] = vector_json(center);
  j["species"] = net.species();
  j["found"] = w.found;
  j["evaluations"] = w.evaluations;
  if (!w.note.empty()) j["note"] = w.note;
  if (w.found) {
    j["witness"] = {{"x", vector_json(w.x)}, {"vdot_sup", number(w.vdot)}, {"scale", number(w.scale)}};
  } else {
    j["witness"] = nullptr;
  }
  ordered_json scales = ordered_json::array();
  for (const auto& s : w.per_scale) {
    ordered_json sj = {{"scale", number(s.scale)}, {"found", s.found}, {"best_vdot", number(s.best_vdot)}};
    sj["best_x"] = vector_json(s.best_x);
    scales.push_back(sj);
  }
  j["scales"] = scales;
  return j.dump(2) + "\n";
}

}  // namespace crnperm
