#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <functional>
#include <vector>

namespace crnperm {

/// Additive-recurrence low-discrepancy sequence (Roberts' R_d) with a
/// seed-derived Cranley-Patterson rotation. point(i) depends only on
/// (dim, seed, i), so disjoint index blocks can be generated independently.
class QuasiRandom {
 public:
  QuasiRandom(int dim, std::uint64_t seed);

  int dim() const { return static_cast<int>(alpha_.size()); }
  std::uint64_t seed() const { return seed_; }

  /// Point i in [0, 1)^dim.
  Eigen::VectorXd point(std::uint64_t index) const;

 private:
  std::vector<double> alpha_;
  std::vector<double> shift_;
  std::uint64_t seed_;
};

/// Maps a uniform point of [0,1)^(2k) to k standard normals (Box-Muller).
Eigen::VectorXd gaussian_from_uniform(const Eigen::VectorXd& u);

/// Unit vector in span(basis) from 2 * basis.cols() uniforms.
Eigen::VectorXd direction_in_span(const Eigen::MatrixXd& basis, const Eigen::VectorXd& u);

/// Splits [0, count) into contiguous blocks and calls fn(block, begin, end)
/// for each, on up to `workers` threads. Blocks are numbered in index order.
void for_each_block(std::uint64_t count, int workers,
                    const std::function<void(int block, std::uint64_t begin, std::uint64_t end)>& fn);

/// Number of blocks for_each_block will use.
int block_count(std::uint64_t count, int workers);

}  // namespace crnperm
