#include "crnperm/sampling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

#include "crnperm/error.hpp"

namespace crnperm {

QuasiRandom::QuasiRandom(int dim, std::uint64_t seed) : seed_(seed) {
  if (dim < 1) throw_domain("quasi-random dimension must be positive");
  // phi_d: positive root of x^(d+1) = x + 1.
  double phi = 2.0;
  for (int it = 0; it < 64; ++it) phi = std::pow(1.0 + phi, 1.0 / (dim + 1));
  alpha_.resize(static_cast<std::size_t>(dim));
  double a = 1.0;
  for (auto& value : alpha_) {
    a /= phi;
    value = a;
  }
  std::mt19937_64 engine(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  shift_.resize(alpha_.size());
  for (auto& value : shift_) value = uniform(engine);
}

Eigen::VectorXd QuasiRandom::point(std::uint64_t index) const {
  Eigen::VectorXd out(dim());
  const auto k = static_cast<double>(index + 1);
  for (int d = 0; d < dim(); ++d) {
    const double raw = shift_[static_cast<std::size_t>(d)] + k * alpha_[static_cast<std::size_t>(d)];
    out(d) = raw - std::floor(raw);
  }
  return out;
}

Eigen::VectorXd gaussian_from_uniform(const Eigen::VectorXd& u) {
  const Eigen::Index k = u.size() / 2;
  Eigen::VectorXd out(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    const double u1 = std::max(u(2 * i), 1e-300);
    out(i) = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u(2 * i + 1));
  }
  return out;
}

Eigen::VectorXd direction_in_span(const Eigen::MatrixXd& basis, const Eigen::VectorXd& u) {
  Eigen::VectorXd coeff = gaussian_from_uniform(u);
  if (coeff.size() != basis.cols()) throw_domain("direction_in_span: wrong number of uniforms");
  if (coeff.norm() < 1e-12) coeff.setOnes();
  Eigen::VectorXd d = basis * coeff;
  return d / d.norm();
}

// Fixed block count, independent of the worker count, so per-block
// reductions give identical results however many threads run them.
int block_count(std::uint64_t count, int /*workers*/) {
  return static_cast<int>(std::min<std::uint64_t>(count, 64));
}

void for_each_block(std::uint64_t count, int workers,
                    const std::function<void(int, std::uint64_t, std::uint64_t)>& fn) {
  const int blocks = block_count(count, workers);
  auto bounds = [&](int b) {
    return std::pair<std::uint64_t, std::uint64_t>(count * static_cast<std::uint64_t>(b) / blocks,
                                                   count * static_cast<std::uint64_t>(b + 1) / blocks);
  };
  if (workers <= 1 || blocks <= 1) {
    for (int b = 0; b < blocks; ++b) fn(b, bounds(b).first, bounds(b).second);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  const int threads = std::min(workers, blocks);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int b = next++; b < blocks; b = next++) fn(b, bounds(b).first, bounds(b).second);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace crnperm
