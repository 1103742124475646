#include "crnperm/levels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "crnperm/error.hpp"
#include "crnperm/sampling.hpp"

namespace crnperm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int class_uniforms(const Eigen::MatrixXd& subspace) { return 2 * static_cast<int>(subspace.cols()) + 1; }

Eigen::VectorXd slice(const Eigen::VectorXd& u, int& offset, int count) {
  Eigen::VectorXd out = u.segment(offset, count);
  offset += count;
  return out;
}

struct Sample {
  bool valid = false;
  Eigen::VectorXd x;
};

Sample outer_sample(const LevelGeometry& geo, double c, const Eigen::VectorXd& u) {
  Sample out;
  const int d = static_cast<int>(geo.subspace.cols());
  const Eigen::VectorXd dir = direction_in_span(geo.subspace, u.head(2 * d));
  const Eigen::VectorXd& p = geo.class_point;
  const double t_pos = positivity_limit(p, dir);
  auto h = [&](double t) { return V(p + t * dir); };

  double t_c = 0.0;
  if (h(0.0) < c) {
    double t_hi;
    if (std::isfinite(t_pos)) {
      t_hi = t_pos * (1.0 - 1e-12);
      if (h(t_hi) < c) return out;
    } else {
      t_hi = 1.0;
      while (h(t_hi) < c) {
        t_hi *= 2.0;
        if (t_hi > 1e15) return out;
      }
    }
    double t_lo = 0.0;
    for (int it = 0; it < 200 && t_hi - t_lo > 1e-15 * t_hi; ++it) {
      const double mid = 0.5 * (t_lo + t_hi);
      (h(mid) >= c ? t_hi : t_lo) = mid;
    }
    t_c = t_hi;
  }
  const double scale = std::max(t_c, 1e-9 * (1.0 + p.norm()));
  double t_end = 1e3 * scale;
  if (std::isfinite(t_pos)) t_end = std::min(t_end, t_pos * (1.0 - 1e-9));
  double t = t_c;
  if (t_end > scale) t = scale * std::pow(t_end / scale, u(2 * d));
  t = std::max(t, t_c);
  out.x = p + t * dir;
  out.valid = (out.x.array() > 0.0).all() && V(out.x) >= c;
  return out;
}

Sample shell_sample(const LevelGeometry& geo, double c, const Eigen::VectorXd& u) {
  Sample out;
  int offset = 0;
  const auto& W = geo.W;
  const auto count = static_cast<int>(geo.face_points.size());
  const int pick = std::min(count - 1, static_cast<int>(u(offset++) * count));
  const Eigen::VectorXd& base = geo.face_points[static_cast<std::size_t>(pick)];

  const Eigen::VectorXd y =
      random_class_point(geo.class_point, geo.subspace, slice(u, offset, class_uniforms(geo.subspace)));
  Eigen::VectorXd inward = y - base;
  if (inward.norm() == 0.0) return out;
  inward /= inward.norm();

  const double family = u(offset++);
  const int dt = static_cast<int>(geo.face_tangent.cols());
  Eigen::VectorXd dir = inward;
  const Eigen::VectorXd tangent_u = slice(u, offset, 2 * std::max(dt, 1));
  const double eta = std::pow(10.0, -8.0 * u(offset++));
  if (dt > 0 && family < 0.5) {
    // Mostly along the face with a small inward component: reaches points
    // whose W coordinates are much smaller than their offset along the face.
    dir = direction_in_span(geo.face_tangent, tangent_u) + eta * inward;
  }
  const double depth = u(offset++);

  double t_lim = kInf;
  double max_w = 0.0;
  for (int s : W.species()) max_w = std::max(max_w, dir(s));
  if (!(max_w > 0.0)) return out;
  t_lim = std::min(t_lim, 1.0 / max_w);
  for (int s : W.complement()) {
    if (dir(s) < 0.0) t_lim = std::min(t_lim, base(s) / -dir(s) * (1.0 - 1e-9));
    if (std::isfinite(geo.omega) && dir(s) != 0.0) t_lim = std::min(t_lim, geo.omega / std::abs(dir(s)));
  }
  if (!(t_lim > 0.0) || !std::isfinite(t_lim)) return out;

  auto f = [&](double t) { return V_W(base + t * dir, W); };
  double t_top = t_lim;
  if (f(t_lim) < c) {
    // V_W decreases along the ray while x_W <= 1; bisect in log t.
    double lo = std::log(t_lim) - 700.0;
    double hi = std::log(t_lim);
    if (f(std::exp(lo)) < c) return out;
    for (int it = 0; it < 100; ++it) {
      const double mid = 0.5 * (lo + hi);
      (f(std::exp(mid)) >= c ? lo : hi) = mid;
    }
    t_top = std::exp(lo);
  }
  const double t = t_top * std::pow(10.0, -6.0 * depth);
  out.x = base + t * dir;
  out.valid = (out.x.array() > 0.0).all() && f(t) >= c;
  return out;
}

int uniforms_needed(const LevelGeometry& geo) {
  if (geo.kind == LevelKind::kOuter) return class_uniforms(geo.subspace);
  return 1 + class_uniforms(geo.subspace) + 1 + 2 * std::max(static_cast<int>(geo.face_tangent.cols()), 1) + 2;
}

void merge(LevelEvidence& into, const LevelEvidence& part) {
  into.samples += part.samples;
  into.attempts += part.attempts;
  if (part.worst_point.size() > 0 && (into.worst_point.size() == 0 || part.worst_vdot > into.worst_vdot)) {
    into.worst_vdot = part.worst_vdot;
    into.worst_point = part.worst_point;
  }
}

}  // namespace

double positivity_limit(const Eigen::VectorXd& x, const Eigen::VectorXd& d) {
  double t = kInf;
  for (Eigen::Index s = 0; s < x.size(); ++s) {
    if (d(s) < 0.0) t = std::min(t, x(s) / -d(s));
  }
  return t;
}

Eigen::VectorXd random_class_point(const Eigen::VectorXd& class_point, const Eigen::MatrixXd& subspace,
                                   const Eigen::VectorXd& uniforms) {
  const int d = static_cast<int>(subspace.cols());
  if (d == 0) return class_point;
  const Eigen::VectorXd dir = direction_in_span(subspace, uniforms.head(2 * d));
  const double reach = std::min(positivity_limit(class_point, dir) * 0.999,
                                4.0 * std::max(1.0, class_point.cwiseAbs().maxCoeff()));
  return class_point + uniforms(2 * d) * reach * dir;
}

LevelEvidence certify_level(const ReactionNetwork& network, const RateBounds& bounds, const LevelGeometry& geometry,
                            double c, const LevelConfig& config) {
  if (geometry.class_point.size() != network.num_species()) throw_domain("class point has wrong dimension");
  if (geometry.subspace.rows() != network.num_species()) throw_domain("subspace basis has wrong dimension");
  if (geometry.kind == LevelKind::kShell && geometry.face_points.empty()) throw_domain("shell needs face points");
  if (geometry.W.ambient() != network.num_species()) throw_domain("face set built for a different species count");

  const QuasiRandom sequence(uniforms_needed(geometry), config.seed);
  const int blocks = block_count(config.samples, config.workers);
  std::vector<LevelEvidence> partial(static_cast<std::size_t>(blocks));
  for_each_block(config.samples, config.workers, [&](int block, std::uint64_t begin, std::uint64_t end) {
    LevelEvidence& ev = partial[static_cast<std::size_t>(block)];
    for (std::uint64_t i = begin; i < end; ++i) {
      ++ev.attempts;
      const Eigen::VectorXd u = sequence.point(i);
      const Sample s = geometry.kind == LevelKind::kOuter ? outer_sample(geometry, c, u)
                                                          : shell_sample(geometry, c, u);
      if (!s.valid) continue;
      const double value = V_W_dot_sup(network, bounds, s.x, geometry.W);
      ++ev.samples;
      if (ev.worst_point.size() == 0 || value > ev.worst_vdot) {
        ev.worst_vdot = value;
        ev.worst_point = s.x;
      }
    }
  });

  LevelEvidence total;
  total.c = c;
  total.seed = config.seed;
  for (const auto& part : partial) merge(total, part);
  if (total.samples == 0) {
    throw Error(ErrorKind::kCertification, "level sampler hit the region in 0 of " +
                                               std::to_string(total.attempts) + " attempts");
  }
  total.passed = total.worst_vdot < 0.0;
  return total;
}

LevelSearch find_level(const ReactionNetwork& network, const RateBounds& bounds, const LevelGeometry& geometry,
                       const LevelConfig& config, const LadderConfig& ladder) {
  LevelSearch search;
  const double n = network.num_species();
  const double w = static_cast<double>(geometry.W.size());
  for (int k = 0; k < ladder.rungs; ++k) {
    const double c = geometry.kind == LevelKind::kOuter ? (n + 1.0) * std::ldexp(1.0, k)
                                                        : w * (1.0 - std::ldexp(1.0, -(k + 1)));
    LevelEvidence ev;
    try {
      ev = certify_level(network, bounds, geometry, c, config);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kCertification) throw;
      ev.c = c;
      ev.seed = config.seed;
      ev.passed = false;
    }
    search.history.push_back(ev);
    if (ev.passed) {
      search.found = true;
      search.c = c;
      search.evidence = ev;
      return search;
    }
  }
  // Report the most favourable failing rung that actually sampled something.
  for (auto it = search.history.rbegin(); it != search.history.rend(); ++it) {
    if (it->samples > 0) {
      search.evidence = *it;
      search.c = it->c;
      return search;
    }
  }
  if (!search.history.empty()) search.evidence = search.history.back();
  return search;
}

}  // namespace crnperm
