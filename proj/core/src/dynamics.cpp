#include "crnperm/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

namespace crnperm {

void require_positive(const Eigen::VectorXd& x, const char* what) {
  for (Eigen::Index s = 0; s < x.size(); ++s) {
    if (!(x(s) > 0.0) || !std::isfinite(x(s))) {
      throw_domain(std::string(what) + " must be strictly positive (coordinate " + std::to_string(s + 1) + ")");
    }
  }
}

namespace {

void require_size(const ReactionNetwork& network, const Eigen::VectorXd& x) {
  if (x.size() != network.num_species()) throw_domain("state has wrong dimension");
}

void require_rates(const ReactionNetwork& network, std::span<const double> rates) {
  if (static_cast<int>(rates.size()) != network.num_reactions()) throw_domain("rate vector has wrong length");
}

// Field evaluation without argument checks; reaction vectors precomputed.
void field_into(const ReactionNetwork& network, const Eigen::MatrixXd& reaction_vectors, std::span<const double> rates,
                const Eigen::VectorXd& log_x, Eigen::VectorXd& out) {
  const Eigen::VectorXd logs = network.complexes().transpose() * log_x;
  out.setZero(log_x.size());
  const auto& reactions = network.reactions();
  for (std::size_t r = 0; r < reactions.size(); ++r) {
    const double rate = rates[r] * std::exp(logs(reactions[r].source));
    out.noalias() += rate * reaction_vectors.col(static_cast<Eigen::Index>(r));
  }
}

}  // namespace

Eigen::VectorXd monomial_log_values(const ReactionNetwork& network, const Eigen::VectorXd& x) {
  require_size(network, x);
  require_positive(x, "state");
  return network.complexes().transpose() * x.array().log().matrix();
}

Eigen::VectorXd log_normalized_monomials(const ReactionNetwork& network, const Eigen::VectorXd& x) {
  const Eigen::VectorXd logs = monomial_log_values(network, x);
  const double top = logs.maxCoeff();
  const double log_sum = top + std::log((logs.array() - top).exp().sum());
  return logs.array() - log_sum;
}

Eigen::VectorXd normalized_monomials(const ReactionNetwork& network, const Eigen::VectorXd& x) {
  const Eigen::VectorXd logs = monomial_log_values(network, x);
  const Eigen::ArrayXd shifted = (logs.array() - logs.maxCoeff()).exp();
  return (shifted / shifted.sum()).matrix();
}

Eigen::VectorXd vector_field(const ReactionNetwork& network, std::span<const double> rates, const Eigen::VectorXd& x) {
  require_size(network, x);
  require_positive(x, "state");
  require_rates(network, rates);
  Eigen::VectorXd out;
  field_into(network, network.reaction_matrix(), rates, x.array().log().matrix(), out);
  if (!out.allFinite()) throw Error(ErrorKind::kNumeric, "vector field is not finite");
  return out;
}

Eigen::VectorXd vector_field(const ReactionNetwork& network, const RateSchedule& schedule, double tau,
                             const Eigen::VectorXd& x) {
  const auto rates = schedule.rates_at(tau);
  return vector_field(network, rates, x);
}

Eigen::VectorXd vector_field_closure(const ReactionNetwork& network, std::span<const double> rates,
                                     const Eigen::VectorXd& x) {
  require_size(network, x);
  require_rates(network, rates);
  for (Eigen::Index s = 0; s < x.size(); ++s) {
    if (!(x(s) >= 0.0) || !std::isfinite(x(s))) throw_domain("state must be nonnegative");
  }
  const Eigen::MatrixXd& Y = network.complexes();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(x.size());
  for (int r = 0; r < network.num_reactions(); ++r) {
    const int i = network.reactions()[static_cast<std::size_t>(r)].source;
    double monomial = 1.0;
    for (Eigen::Index s = 0; s < x.size(); ++s) {
      const double e = Y(s, i);
      if (e == 0.0) continue;
      if (x(s) == 0.0) {
        if (e < 0.0) throw_domain("negative exponent at a zero coordinate");
        monomial = 0.0;
        break;
      }
      monomial *= std::pow(x(s), e);
    }
    out += rates[static_cast<std::size_t>(r)] * monomial * network.reaction_vector(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dormand-Prince 5(4)

namespace {

namespace dp {
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200, e6 = 22.0 / 525,
                 e7 = -1.0 / 40;
// Continuous extension (Hairer, Norsett & Wanner, dopri5 contd5).
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;
}  // namespace dp

class Stepper {
 public:
  Stepper(const ReactionNetwork& network, const RateSchedule& schedule, const IntegratorConfig& config)
      : network_(network), schedule_(schedule), config_(config), reactions_(network.reaction_matrix()) {}

  // False when x is outside the open orthant (above the floor) or f is not finite.
  bool eval(double t, const Eigen::VectorXd& x, Eigen::VectorXd& out) {
    for (Eigen::Index s = 0; s < x.size(); ++s) {
      if (!(x(s) > config_.positivity_floor) || !std::isfinite(x(s))) return false;
    }
    rates_ = schedule_.rates_at(t);
    field_into(network_, reactions_, rates_, x.array().log().matrix(), out);
    ++evaluations;
    return out.allFinite();
  }

  long evaluations = 0;

 private:
  const ReactionNetwork& network_;
  const RateSchedule& schedule_;
  const IntegratorConfig& config_;
  Eigen::MatrixXd reactions_;
  std::vector<double> rates_;
};

std::vector<double> output_times(double t_end, const IntegratorConfig& config) {
  std::vector<double> out;
  if (config.sample_times.empty()) {
    const int count = std::max(config.num_samples, 2);
    out.reserve(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) out.push_back(t_end * k / (count - 1));
    out.back() = t_end;
    return out;
  }
  out.push_back(0.0);
  for (double t : config.sample_times) {
    if (!(t >= 0.0 && t <= t_end)) throw_domain("sample time outside [0, t_end]");
    if (t == 0.0) continue;
    if (!(t > out.back())) throw_domain("sample times must increase strictly");
    out.push_back(t);
  }
  return out;
}

}  // namespace

Trajectory integrate(const ReactionNetwork& network, const RateSchedule& schedule, const Eigen::VectorXd& x0,
                     double t_end, const IntegratorConfig& config) {
  require_size(network, x0);
  require_positive(x0, "initial state");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw_domain("t_end must be positive");
  if (static_cast<int>(schedule.size()) != network.num_reactions()) throw_domain("schedule size mismatch");
  if (!(config.rtol > 0.0) || !(config.atol > 0.0)) throw_domain("tolerances must be positive");

  const std::vector<double> outputs = output_times(t_end, config);
  const Eigen::MatrixXd conservation = stoichiometric_structure(network).conservation_basis;
  const Eigen::VectorXd invariants0 = conservation.transpose() * x0;

  Trajectory traj;
  Stepper stepper(network, schedule, config);
  auto& diag = traj.diagnostics;

  auto record = [&](double t, const Eigen::VectorXd& x) {
    traj.times.push_back(t);
    traj.states.push_back(x);
    if (conservation.cols() > 0) {
      const double drift = (conservation.transpose() * x - invariants0).cwiseAbs().maxCoeff();
      diag.conservation_drift = std::max(diag.conservation_drift, drift);
    }
  };

  std::size_t next_out = 0;
  double t = 0.0;
  Eigen::VectorXd y = x0;
  Eigen::VectorXd k1, k2, k3, k4, k5, k6, k7, tmp, y_new, err;
  if (!stepper.eval(0.0, y, k1)) throw IntegrationError("non-finite derivative at the initial state", 0.0, y);
  while (next_out < outputs.size() && outputs[next_out] <= 0.0) record(0.0, y), ++next_out;

  auto scale_of = [&](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    return (config.atol + config.rtol * a.cwiseAbs().cwiseMax(b.cwiseAbs()).array()).matrix();
  };

  double h = config.initial_step;
  if (!(h > 0.0)) {
    const Eigen::ArrayXd sc = scale_of(y, y).array();
    const double d0 = std::sqrt((y.array() / sc).square().mean());
    const double d1 = std::sqrt((k1.array() / sc).square().mean());
    h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h = std::min(h, 0.1 * t_end);
  }
  const double h_min = 1e-14 * t_end;

  while (t < t_end) {
    if (diag.accepted_steps + diag.rejected_steps >= config.max_steps) {
      throw IntegrationError("step budget exhausted", t, y);
    }
    h = std::min(h, t_end - t);
    if (h < h_min && t + h < t_end) throw IntegrationError("integration stalled: step size underflow", t, y);

    using namespace dp;
    bool positive = true;
    tmp = y + h * a21 * k1;
    positive = positive && stepper.eval(t + c2 * h, tmp, k2);
    if (positive) {
      tmp = y + h * (a31 * k1 + a32 * k2);
      positive = stepper.eval(t + c3 * h, tmp, k3);
    }
    if (positive) {
      tmp = y + h * (a41 * k1 + a42 * k2 + a43 * k3);
      positive = stepper.eval(t + c4 * h, tmp, k4);
    }
    if (positive) {
      tmp = y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
      positive = stepper.eval(t + c5 * h, tmp, k5);
    }
    if (positive) {
      tmp = y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
      positive = stepper.eval(t + h, tmp, k6);
    }
    if (positive) {
      y_new = y + h * (a71 * k1 + a73 * k3 + a74 * k4 + a75 * k5 + a76 * k6);
      positive = stepper.eval(t + h, y_new, k7);
    }
    if (!positive) {
      ++diag.rejected_steps;
      ++diag.positivity_rejections;
      h *= 0.5;
      if (h < h_min) throw IntegrationError("integration stalled: step size underflow", t, y);
      continue;
    }

    err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    const double err_norm = std::sqrt((err.array() / scale_of(y, y_new).array()).square().mean());
    if (!(err_norm <= 1.0)) {
      ++diag.rejected_steps;
      const double factor = std::isfinite(err_norm) ? std::max(0.2, 0.9 * std::pow(err_norm, -0.2)) : 0.2;
      h *= factor;
      continue;
    }

    // Dense output for requested times inside (t, t + h].
    const double t_new = (t_end - (t + h) < 1e-12 * t_end) ? t_end : t + h;
    std::vector<std::pair<double, Eigen::VectorXd>> pending;
    bool dense_ok = true;
    if (next_out < outputs.size() && outputs[next_out] <= t_new) {
      const Eigen::VectorXd ydiff = y_new - y;
      const Eigen::VectorXd bspl = h * k1 - ydiff;
      const Eigen::VectorXd r4 = ydiff - h * k7 - bspl;
      const Eigen::VectorXd r5 = h * (d1 * k1 + d3 * k3 + d4 * k4 + d5 * k5 + d6 * k6 + d7 * k7);
      for (std::size_t k = next_out; k < outputs.size() && outputs[k] <= t_new; ++k) {
        Eigen::VectorXd x;
        if (outputs[k] >= t_new) {
          x = y_new;
        } else {
          const double theta = (outputs[k] - t) / h;
          const double theta1 = 1.0 - theta;
          x = y + theta * (ydiff + theta1 * (bspl + theta * (r4 + theta1 * r5)));
        }
        if ((x.array() <= config.positivity_floor).any() || !x.allFinite()) {
          dense_ok = false;
          break;
        }
        pending.emplace_back(outputs[k], std::move(x));
      }
    }
    if (!dense_ok) {
      ++diag.rejected_steps;
      ++diag.positivity_rejections;
      h *= 0.5;
      continue;
    }

    ++diag.accepted_steps;
    for (auto& [time, x] : pending) record(time, x), ++next_out;
    t = t_new;
    y = y_new;
    k1 = k7;
    const double factor = err_norm == 0.0 ? 5.0 : std::min(5.0, std::max(0.2, 0.9 * std::pow(err_norm, -0.2)));
    h *= factor;
  }
  diag.evaluations = stepper.evaluations;
  return traj;
}

std::string trajectory_csv(const ReactionNetwork& network, const Trajectory& trajectory) {
  std::string out = "tau";
  for (const auto& s : network.species()) out += "," + s;
  out += "\n";
  char buf[64];
  for (std::size_t k = 0; k < trajectory.times.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g", trajectory.times[k]);
    out += buf;
    for (Eigen::Index s = 0; s < trajectory.states[k].size(); ++s) {
      std::snprintf(buf, sizeof buf, ",%.17g", trajectory.states[k](s));
      out += buf;
    }
    out += "\n";
  }
  const auto& d = trajectory.diagnostics;
  out += "# accepted_steps=" + std::to_string(d.accepted_steps) + "\n";
  out += "# rejected_steps=" + std::to_string(d.rejected_steps) + "\n";
  out += "# positivity_rejections=" + std::to_string(d.positivity_rejections) + "\n";
  out += "# evaluations=" + std::to_string(d.evaluations) + "\n";
  std::snprintf(buf, sizeof buf, "%.17g", d.conservation_drift);
  out += std::string("# conservation_drift=") + buf + "\n";
  return out;
}

// ---------------------------------------------------------------------------

PermanenceReport permanence_probe(const ReactionNetwork& network, const RateSchedule& schedule,
                                  const std::vector<Eigen::VectorXd>& starts, const ProbeConfig& config) {
  if (starts.empty()) throw_domain("permanence probe needs at least one start");
  if (!(config.tail_fraction > 0.0 && config.tail_fraction <= 1.0)) throw_domain("tail_fraction must lie in (0, 1]");
  const Eigen::MatrixXd conservation = stoichiometric_structure(network).conservation_basis;
  for (const auto& x : starts) {
    require_size(network, x);
    require_positive(x, "start");
    if (conservation.cols() == 0) continue;
    const Eigen::VectorXd a = conservation.transpose() * starts.front();
    const Eigen::VectorXd b = conservation.transpose() * x;
    if ((a - b).cwiseAbs().maxCoeff() > 1e-8 * (1.0 + a.cwiseAbs().maxCoeff())) {
      throw_domain("permanence probe starts must share one stoichiometric class");
    }
  }

  PermanenceReport report;
  report.members.resize(starts.size());
  const double tail_start = (1.0 - config.tail_fraction) * config.t_end;

  auto run = [&](std::size_t idx) {
    ProbeMember& member = report.members[idx];
    member.start = starts[idx];
    try {
      const Trajectory traj = integrate(network, schedule, starts[idx], config.t_end, config.integrator);
      member.tail_min = std::numeric_limits<double>::infinity();
      member.tail_max = 0.0;
      for (std::size_t k = 0; k < traj.times.size(); ++k) {
        if (traj.times[k] < tail_start) continue;
        member.tail_min = std::min(member.tail_min, traj.states[k].minCoeff());
        member.tail_max = std::max(member.tail_max, traj.states[k].maxCoeff());
      }
      member.conservation_drift = traj.diagnostics.conservation_drift;
      member.ok = true;
    } catch (const Error& e) {
      member.ok = false;
      member.error = e.what();
    }
  };

  const auto workers = static_cast<std::size_t>(std::max(1, config.workers));
  if (workers == 1) {
    for (std::size_t i = 0; i < starts.size(); ++i) run(i);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < starts.size(); i += workers) run(i);
      });
    }
    for (auto& th : pool) th.join();
  }

  report.min_of_mins = std::numeric_limits<double>::infinity();
  report.max_of_maxes = 0.0;
  for (const auto& m : report.members) {
    if (!m.ok) {
      ++report.failures;
      continue;
    }
    report.min_of_mins = std::min(report.min_of_mins, m.tail_min);
    report.max_of_maxes = std::max(report.max_of_maxes, m.tail_max);
  }
  return report;
}

}  // namespace crnperm
