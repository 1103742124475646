#include "crnperm/rates.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>

#include "crnperm/error.hpp"

namespace crnperm {

namespace {

// Relative slack used when comparing declared extremes against [eps, 1/eps].
constexpr double kBoundSlack = 1e-12;

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

double parse_double(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  double value = 0.0;
  const auto* begin = t.data();
  const auto* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || t.empty()) {
    throw_domain("invalid number '" + t + "' in " + what);
  }
  if (!std::isfinite(value)) throw_domain("non-finite number in " + what);
  return value;
}

// Splits "a=1, b=2" into ordered key/value pairs.
std::vector<std::pair<std::string, std::string>> parse_arguments(const std::string& body,
                                                                 const std::string& what) {
  std::vector<std::pair<std::string, std::string>> out;
  std::size_t start = 0;
  while (start <= body.size()) {
    std::size_t comma = body.find(',', start);
    if (comma == std::string::npos) comma = body.size();
    const std::string item = trim(std::string_view(body).substr(start, comma - start));
    if (!item.empty()) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) throw_domain("expected key=value in " + what + ", got '" + item + "'");
      out.emplace_back(trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
    } else if (comma != body.size() || start != comma) {
      throw_domain("empty argument in " + what);
    }
    start = comma + 1;
  }
  return out;
}

}  // namespace

RateFunction::RateFunction(Family family) : family_(std::move(family)) {
  if (const auto* c = std::get_if<ConstantRate>(&family_)) {
    if (!(c->value > 0.0) || !std::isfinite(c->value)) throw_domain("constant rate must be positive");
  } else if (const auto* s = std::get_if<SinusoidalRate>(&family_)) {
    if (!(s->center > 0.0) || !std::isfinite(s->center)) throw_domain("sin: center must be positive");
    if (!(s->frac >= 0.0 && s->frac < 1.0)) throw_domain("sin: frac must lie in [0, 1)");
    if (!std::isfinite(s->omega) || !std::isfinite(s->phase)) throw_domain("sin: non-finite parameter");
  } else {
    const auto& p = std::get<PiecewiseRate>(family_);
    if (p.times.empty() || p.times.size() != p.values.size()) throw_domain("pw: need at least one breakpoint");
    if (p.times.front() != 0.0) throw_domain("pw: first breakpoint must be at time 0");
    for (std::size_t i = 1; i < p.times.size(); ++i) {
      if (!(p.times[i] > p.times[i - 1])) throw_domain("pw: breakpoint times must increase strictly");
    }
    for (double v : p.values) {
      if (!(v > 0.0) || !std::isfinite(v)) throw_domain("pw: values must be positive");
    }
  }
}

double RateFunction::operator()(double tau) const {
  return std::visit(
      [tau](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ConstantRate>) {
          return f.value;
        } else if constexpr (std::is_same_v<T, SinusoidalRate>) {
          return f.center * (1.0 + f.frac * std::sin(f.omega * tau + f.phase));
        } else {
          const auto it = std::upper_bound(f.times.begin(), f.times.end(), tau);
          const auto idx = it == f.times.begin() ? 0 : static_cast<std::size_t>(it - f.times.begin()) - 1;
          return f.values[idx];
        }
      },
      family_);
}

Interval RateFunction::range() const {
  return std::visit(
      [](const auto& f) -> Interval {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ConstantRate>) {
          return {f.value, f.value};
        } else if constexpr (std::is_same_v<T, SinusoidalRate>) {
          if (f.omega == 0.0 || f.frac == 0.0) {
            const double v = f.center * (1.0 + f.frac * std::sin(f.phase));
            return {v, v};
          }
          // sin attains both +1 and -1 on any half-line of length 2*pi/|omega|.
          return {f.center * (1.0 - f.frac), f.center * (1.0 + f.frac)};
        } else {
          const auto [lo, hi] = std::minmax_element(f.values.begin(), f.values.end());
          return {*lo, *hi};
        }
      },
      family_);
}

bool RateFunction::is_constant() const {
  const Interval r = range();
  return r.lo == r.hi;
}

std::string RateFunction::to_string() const {
  return std::visit(
      [](const auto& f) -> std::string {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ConstantRate>) {
          return format_number(f.value);
        } else if constexpr (std::is_same_v<T, SinusoidalRate>) {
          return "sin(center=" + format_number(f.center) + ", frac=" + format_number(f.frac) +
                 ", omega=" + format_number(f.omega) + ", phase=" + format_number(f.phase) + ")";
        } else {
          std::string out = "pw(";
          for (std::size_t i = 0; i < f.times.size(); ++i) {
            if (i) out += ", ";
            out += "t" + std::to_string(i) + "=" + format_number(f.times[i]) + ":" + format_number(f.values[i]);
          }
          return out + ")";
        }
      },
      family_);
}

bool operator==(const RateFunction& a, const RateFunction& b) {
  if (a.family_.index() != b.family_.index()) return false;
  return std::visit(
      [&b](const auto& fa) -> bool {
        using T = std::decay_t<decltype(fa)>;
        const auto& fb = std::get<T>(b.family_);
        if constexpr (std::is_same_v<T, ConstantRate>) {
          return fa.value == fb.value;
        } else if constexpr (std::is_same_v<T, SinusoidalRate>) {
          return fa.center == fb.center && fa.frac == fb.frac && fa.omega == fb.omega && fa.phase == fb.phase;
        } else {
          return fa.times == fb.times && fa.values == fb.values;
        }
      },
      a.family_);
}

RateSchedule::RateSchedule(double epsilon, std::vector<RateFunction> rates)
    : epsilon_(epsilon), rates_(std::move(rates)) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw_domain("epsilon must lie in (0, 1)");
  for (std::size_t r = 0; r < rates_.size(); ++r) {
    const Interval range = rates_[r].range();
    if (range.lo < epsilon * (1.0 - kBoundSlack) || range.hi > (1.0 / epsilon) * (1.0 + kBoundSlack)) {
      throw_domain("rate of reaction " + std::to_string(r + 1) + " ranges over [" + format_number(range.lo) +
                   ", " + format_number(range.hi) + "], outside [eps, 1/eps] = [" + format_number(epsilon) +
                   ", " + format_number(1.0 / epsilon) + "]");
    }
  }
}

RateSchedule RateSchedule::constant(double epsilon, const std::vector<double>& values) {
  std::vector<RateFunction> rates;
  rates.reserve(values.size());
  for (double v : values) rates.push_back(RateFunction::constant(v));
  return RateSchedule(epsilon, std::move(rates));
}

std::vector<double> RateSchedule::rates_at(double tau) const {
  std::vector<double> out(rates_.size());
  for (std::size_t r = 0; r < rates_.size(); ++r) out[r] = rates_[r](tau);
  return out;
}

RateBounds RateSchedule::bounds() const {
  RateBounds out;
  out.reserve(rates_.size());
  for (const auto& f : rates_) out.push_back(f.range());
  return out;
}

RateBounds epsilon_box(std::size_t reactions, double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw_domain("epsilon must lie in (0, 1)");
  return RateBounds(reactions, Interval{epsilon, 1.0 / epsilon});
}

RateFunction parse_rate(const std::string& raw) {
  const std::string text = trim(raw);
  if (text.empty()) throw_domain("empty rate specification");
  const auto open = text.find('(');
  if (open == std::string::npos) return RateFunction::constant(parse_double(text, "constant rate"));
  if (text.back() != ')') throw_domain("unterminated rate specification '" + text + "'");
  const std::string name = trim(text.substr(0, open));
  const std::string body = text.substr(open + 1, text.size() - open - 2);
  const auto args = parse_arguments(body, name);

  if (name == "sin") {
    SinusoidalRate s{.center = 1.0, .frac = 0.0, .omega = 1.0, .phase = 0.0};
    std::map<std::string, double*> slots{{"center", &s.center}, {"frac", &s.frac}, {"omega", &s.omega},
                                         {"phase", &s.phase}};
    bool have_center = false;
    for (const auto& [key, value] : args) {
      const auto it = slots.find(key);
      if (it == slots.end()) throw_domain("sin: unknown parameter '" + key + "'");
      *it->second = parse_double(value, "sin(" + key + ")");
      have_center |= key == "center";
    }
    if (!have_center) throw_domain("sin: missing center");
    return RateFunction(s);
  }
  if (name == "pw") {
    PiecewiseRate p;
    for (std::size_t i = 0; i < args.size(); ++i) {
      const auto& [key, value] = args[i];
      if (key != "t" + std::to_string(i)) throw_domain("pw: expected key t" + std::to_string(i) + ", got '" + key + "'");
      const auto colon = value.find(':');
      if (colon == std::string::npos) throw_domain("pw: expected time:value in " + key);
      p.times.push_back(parse_double(value.substr(0, colon), "pw time"));
      p.values.push_back(parse_double(value.substr(colon + 1), "pw value"));
    }
    return RateFunction(std::move(p));
  }
  throw_domain("unknown rate family '" + name + "'");
}

}  // namespace crnperm
