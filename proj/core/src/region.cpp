#include "crnperm/region.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "crnperm/error.hpp"
#include "crnperm/sampling.hpp"
#include "linprog.hpp"

namespace crnperm {

namespace {

constexpr double kFaceSlack = 1e-9;

Eigen::MatrixXd rows_of(const Eigen::MatrixXd& M, const std::vector<int>& rows) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), M.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = M.row(rows[k]);
  return out;
}

// Orthonormal basis of {v in span(B) : v_W = 0}, B orthonormal.
Eigen::MatrixXd face_tangent(const Eigen::MatrixXd& B, const std::vector<int>& W) {
  const Eigen::Index d = B.cols();
  if (d == 0) return Eigen::MatrixXd(B.rows(), 0);
  const Eigen::MatrixXd BW = rows_of(B, W);
  if (BW.rows() == 0) return B;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(BW, Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k) {
    if (sv(k) > kRankTolerance * std::max(1.0, sv(0))) ++rank;
  }
  const Eigen::MatrixXd kernel = svd.matrixV().rightCols(d - rank);
  return B * kernel;
}

// Maximizes t subject to x = p + B a, x_W = 0, x_{W^c} >= t, t <= 1.
std::optional<std::pair<Eigen::VectorXd, double>> face_lp(const Eigen::MatrixXd& B, const Eigen::VectorXd& p,
                                                          const std::vector<int>& W, const std::vector<int>& Wc) {
  const int n = static_cast<int>(p.size());
  const int d = static_cast<int>(B.cols());
  const int nc = static_cast<int>(Wc.size());
  const int vars = 2 * d + 1 + nc + 1;
  const int t_col = 2 * d;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + 1, vars);
  Eigen::VectorXd b(n + 1);
  int row = 0;
  for (int s : W) {
    A.block(row, 0, 1, d) = B.row(s);
    A.block(row, d, 1, d) = -B.row(s);
    b(row++) = -p(s);
  }
  for (int k = 0; k < nc; ++k) {
    const int s = Wc[static_cast<std::size_t>(k)];
    A.block(row, 0, 1, d) = B.row(s);
    A.block(row, d, 1, d) = -B.row(s);
    A(row, t_col) = -1.0;
    A(row, t_col + 1 + k) = -1.0;
    b(row++) = -p(s);
  }
  A(row, t_col) = 1.0;
  A(row, vars - 1) = 1.0;
  b(row) = 1.0;
  Eigen::VectorXd c = Eigen::VectorXd::Zero(vars);
  c(t_col) = -1.0;
  const auto sol = detail::solve_standard_lp(A, b, c);
  if (!sol) return std::nullopt;
  const Eigen::VectorXd a = sol->head(d) - sol->segment(d, d);
  Eigen::VectorXd x = p + B * a;
  for (int s : W) x(s) = 0.0;
  return std::make_pair(x, (*sol)(t_col));
}

bool in_shell(const Eigen::VectorXd& x, const FaceSet& W, double c) {
  double top = 0.0;
  for (int s : W.species()) top = std::max(top, x(s));
  return top <= 1.0 && V_W(x, W) > c;
}

std::string regime_for(const Face& face, int n) {
  if (face.dimension == 0) return static_cast<int>(face.W.size()) == n ? "origin" : "vertex";
  return "boundary-face";
}

}  // namespace

std::string describe_species(const ReactionNetwork& network, const std::vector<int>& species) {
  std::string out = "{";
  for (std::size_t k = 0; k < species.size(); ++k) {
    if (k) out += ", ";
    out += network.species()[static_cast<std::size_t>(species[k])];
  }
  return out + "}";
}

std::vector<Face> enumerate_faces(const ReactionNetwork& network, const Eigen::VectorXd& class_point) {
  const int n = network.num_species();
  if (n > 20) throw_domain("face enumeration supports at most 20 species");
  if (class_point.size() != n) throw_domain("class point has wrong dimension");
  require_positive(class_point, "class point");
  const Eigen::MatrixXd B = stoichiometric_structure(network).orthonormal;
  std::vector<Face> faces;
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> W, Wc;
    for (int s = 0; s < n; ++s) ((mask >> s) & 1u ? W : Wc).push_back(s);
    const auto lp = face_lp(B, class_point, W, Wc);
    if (!lp || !(lp->second > kFaceSlack)) continue;
    Face face{FaceSet(W, n), static_cast<int>(face_tangent(B, W).cols()), lp->first};
    faces.push_back(std::move(face));
  }
  std::sort(faces.begin(), faces.end(), [](const Face& a, const Face& b) {
    if (a.dimension != b.dimension) return a.dimension < b.dimension;
    return a.W.species() < b.W.species();
  });
  return faces;
}

bool class_is_unbounded(const ReactionNetwork& network) {
  const Eigen::MatrixXd B = stoichiometric_structure(network).orthonormal;
  const int n = static_cast<int>(B.rows());
  const int d = static_cast<int>(B.cols());
  if (d == 0) return false;
  // v = B a >= 0 with sum v = 1.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n + 1, 2 * d + n);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1);
  A.block(0, 0, n, d) = B;
  A.block(0, d, n, d) = -B;
  A.block(0, 2 * d, n, n) = -Eigen::MatrixXd::Identity(n, n);
  A.block(n, 0, 1, d) = B.colwise().sum();
  A.block(n, d, 1, d) = -B.colwise().sum();
  b(n) = 1.0;
  return detail::solve_standard_lp(A, b, Eigen::VectorXd::Zero(2 * d + n)).has_value();
}

bool TrappingRegion::contains(const Eigen::VectorXd& x) const {
  if (outer_level && V(x) > *outer_level) return false;
  for (const auto& shell : shells) {
    if (in_shell(x, shell.face.W, shell.c)) return false;
  }
  return true;
}

std::vector<Eigen::VectorXd> class_starts(const ReactionNetwork& network, const Eigen::VectorXd& class_point,
                                          int count, const std::vector<Eigen::VectorXd>& extras,
                                          std::uint64_t seed) {
  const Eigen::MatrixXd B = stoichiometric_structure(network).orthonormal;
  std::vector<Eigen::VectorXd> out;
  for (const auto& x : extras) {
    if (static_cast<int>(out.size()) >= count) break;
    require_positive(x, "start");
    out.push_back(x);
  }
  if (B.cols() == 0) {
    while (static_cast<int>(out.size()) < count) out.push_back(class_point);
    return out;
  }
  const QuasiRandom sequence(2 * static_cast<int>(B.cols()) + 1, seed);
  for (std::uint64_t i = 0; static_cast<int>(out.size()) < count; ++i) {
    out.push_back(random_class_point(class_point, B, sequence.point(i)));
  }
  return out;
}

VerificationReport verify_trapping_region(const ReactionNetwork& network, const RateSchedule& schedule,
                                          const TrappingRegion& region, const std::vector<Eigen::VectorXd>& starts,
                                          double t_end, int samples, const IntegratorConfig& integrator,
                                          int workers) {
  struct Outcome {
    bool ok = false;
    double entry = -1.0;
    int exits = 0;
    double drift = 0.0;
  };
  std::vector<Outcome> outcomes(starts.size());
  IntegratorConfig cfg = integrator;
  cfg.sample_times.clear();
  cfg.num_samples = samples;
  for_each_block(starts.size(), workers, [&](int, std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t i = begin; i < end; ++i) {
      Outcome& out = outcomes[i];
      try {
        const Trajectory traj = integrate(network, schedule, starts[i], t_end, cfg);
        bool inside = false;
        for (std::size_t k = 0; k < traj.times.size(); ++k) {
          const bool now = region.contains(traj.states[k]);
          if (out.entry < 0.0 && now) out.entry = traj.times[k];
          if (out.entry >= 0.0 && inside && !now) ++out.exits;
          inside = now;
        }
        out.drift = traj.diagnostics.conservation_drift;
        out.ok = true;
      } catch (const Error&) {
        out.ok = false;
      }
    }
  });
  VerificationReport report;
  report.trajectories = static_cast<int>(starts.size());
  for (const auto& out : outcomes) {
    if (!out.ok) {
      ++report.integration_failures;
      report.entry_times.push_back(-1.0);
      continue;
    }
    if (out.entry >= 0.0) ++report.entered;
    report.exit_events += out.exits;
    report.entry_times.push_back(out.entry);
    report.max_conservation_drift = std::max(report.max_conservation_drift, out.drift);
  }
  return report;
}

TrappingRegion build_trapping_region(const ReactionNetwork& network, const RateSchedule& schedule,
                                     const Eigen::VectorXd& class_point, const RegionConfig& config) {
  const int n = network.num_species();
  if (class_point.size() != n) throw_domain("class point has wrong dimension");
  require_positive(class_point, "class point");
  if (static_cast<int>(schedule.size()) != network.num_reactions()) throw_domain("schedule size mismatch");

  TrappingRegion region;
  region.class_point = class_point;
  if (linkage_classes(network).size() != 1) {
    region.hypothesis_violations.push_back("network has " + std::to_string(linkage_classes(network).size()) +
                                           " linkage classes");
  }
  if (!is_weakly_reversible(network)) region.hypothesis_violations.push_back("network is not weakly reversible");

  const Eigen::MatrixXd B = stoichiometric_structure(network).orthonormal;
  const RateBounds bounds = schedule.bounds();
  region.unbounded = class_is_unbounded(network);

  auto fail = [&](const std::string& what, const std::string& regime) {
    if (region.failure.empty()) {
      region.failure = what;
      region.failure_regime = regime;
    }
  };

  if (region.unbounded || config.force_outer) {
    LevelGeometry geo;
    geo.kind = LevelKind::kOuter;
    geo.W = FaceSet::all(n);
    geo.class_point = class_point;
    geo.subspace = B;
    const LevelSearch search = find_level(network, bounds, geo, config.level, config.ladder);
    region.outer_level = search.c;
    region.outer_evidence = search.evidence;
    region.outer_passed = search.found;
    if (!search.found) fail("outer level", "infinity");
  }

  std::uint64_t face_seed = config.level.seed;
  for (const Face& face : enumerate_faces(network, class_point)) {
    ++face_seed;
    const FaceSet& W = face.W;
    const Eigen::MatrixXd tangent = face_tangent(B, W.species());

    auto admissible = [&](const Eigen::VectorXd& x) {
      if (region.outer_level && V(x) > *region.outer_level) return false;
      for (const auto& earlier : region.shells) {
        if (in_shell(x, earlier.face.W, earlier.c)) return false;
      }
      return true;
    };

    std::vector<Eigen::VectorXd> points;
    if (admissible(face.point)) points.push_back(face.point);
    if (face.dimension > 0) {
      const QuasiRandom sequence(2 * static_cast<int>(tangent.cols()) + 1, face_seed);
      const double cap = 4.0 * std::max(1.0, face.point.cwiseAbs().maxCoeff());
      for (std::uint64_t i = 0; static_cast<int>(points.size()) < config.face_samples &&
                                i < 50 * static_cast<std::uint64_t>(config.face_samples);
           ++i) {
        const Eigen::VectorXd u = sequence.point(i);
        const Eigen::VectorXd dir = direction_in_span(tangent, u.head(2 * tangent.cols()));
        Eigen::VectorXd masked = dir;
        for (int s : W.species()) masked(s) = 0.0;
        const double reach = std::min(positivity_limit(face.point, masked) * 0.999, cap);
        Eigen::VectorXd x = face.point + u(2 * tangent.cols()) * reach * dir;
        for (int s : W.species()) x(s) = 0.0;
        if ((x.array() < 0.0).any()) continue;
        bool positive_off_face = true;
        for (int s : W.complement()) positive_off_face = positive_off_face && x(s) > 0.0;
        if (positive_off_face && admissible(x)) points.push_back(x);
      }
    }
    if (points.empty()) points.push_back(face.point);

    Shell shell;
    shell.face = face;
    double min_off = HUGE_VAL;
    for (const auto& x : points) {
      for (int s : W.complement()) min_off = std::min(min_off, x(s));
    }
    shell.omega = config.omega > 0.0 ? config.omega : (std::isfinite(min_off) ? 0.5 * min_off : HUGE_VAL);

    std::vector<Interval> box;
    for (int s : W.complement()) {
      double lo = HUGE_VAL, hi = 0.0;
      for (const auto& x : points) {
        lo = std::min(lo, x(s));
        hi = std::max(hi, x(s));
      }
      box.push_back({std::max(lo - shell.omega, 1e-300), hi + shell.omega});
    }
    shell.projected_bounds = projected_rate_bounds(network, bounds, W, box);

    LevelGeometry geo;
    geo.kind = LevelKind::kShell;
    geo.W = W;
    geo.class_point = class_point;
    geo.subspace = B;
    geo.face_points = points;
    geo.face_tangent = tangent;
    geo.omega = shell.omega;
    LevelConfig level = config.level;
    level.seed = config.level.seed + 7919 * face_seed;
    const LevelSearch search = find_level(network, bounds, geo, level, config.ladder);
    shell.c = search.c;
    shell.passed = search.found;
    shell.evidence = search.evidence;
    shell.rungs_tried = static_cast<int>(search.history.size());
    if (!search.found) {
      fail("face " + describe_species(network, W.species()) + " (dim " + std::to_string(face.dimension) + ")",
           regime_for(face, n));
    }
    region.shells.push_back(std::move(shell));
  }

  const bool levels_ok = region.failure.empty();
  if (levels_ok && config.verify && config.verify_trajectories > 0) {
    const auto starts =
        class_starts(network, class_point, config.verify_trajectories, config.extra_starts, config.level.seed + 1);
    region.verification = verify_trapping_region(network, schedule, region, starts, config.verify_t_end,
                                                 config.verify_samples, config.integrator, config.level.workers);
    if (!region.verification->passed()) fail("simulation verification", "verification");
  }
  region.complete = region.failure.empty() && region.hypothesis_violations.empty();
  return region;
}

}  // namespace crnperm
