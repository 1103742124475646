#include "linprog.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace crnperm::detail {

namespace {

constexpr double kPivotTol = 1e-11;

// Tableau rows 0..m-1 are constraints, last column is the rhs. Objective row
// holds reduced costs; minimizes.
struct Tableau {
  Eigen::MatrixXd t;
  std::vector<int> basis;

  int rows() const { return static_cast<int>(t.rows()) - 1; }
  int cols() const { return static_cast<int>(t.cols()) - 1; }

  void pivot(int r, int c) {
    t.row(r) /= t(r, c);
    for (int i = 0; i < t.rows(); ++i) {
      if (i != r && t(i, c) != 0.0) t.row(i) -= t(i, c) * t.row(r);
    }
    basis[static_cast<std::size_t>(r)] = c;
  }

  // Returns false when unbounded. `allowed` limits entering columns.
  bool run(int allowed) {
    const int obj = rows();
    for (int iter = 0; iter < 10000; ++iter) {
      int enter = -1;
      for (int j = 0; j < allowed; ++j) {
        if (t(obj, j) < -kPivotTol) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < obj; ++i) {
        if (t(i, enter) > kPivotTol) {
          const double ratio = t(i, cols()) / t(i, enter);
          if (ratio < best - 1e-14 ||
              (std::abs(ratio - best) <= 1e-14 && leave >= 0 &&
               basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    return true;
  }
};

}  // namespace

std::optional<Eigen::VectorXd> solve_standard_lp(const Eigen::MatrixXd& A_in, const Eigen::VectorXd& b_in,
                                                 const Eigen::VectorXd& c) {
  const int m = static_cast<int>(A_in.rows());
  const int n = static_cast<int>(A_in.cols());
  Eigen::MatrixXd A = A_in;
  Eigen::VectorXd b = b_in;
  for (int i = 0; i < m; ++i) {
    if (b(i) < 0) {
      A.row(i) *= -1.0;
      b(i) *= -1.0;
    }
  }

  // Phase one: artificials n..n+m-1.
  Tableau tab;
  tab.t = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
  tab.t.topLeftCorner(m, n) = A;
  tab.t.block(0, n, m, m).setIdentity();
  tab.t.topRightCorner(m, 1) = b;
  tab.basis.resize(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    tab.basis[static_cast<std::size_t>(i)] = n + i;
    tab.t.row(m) -= tab.t.row(i);
  }
  tab.t.block(m, n, 1, m).setZero();
  tab.run(n + m);
  const double scale = 1.0 + b.cwiseAbs().sum();
  if (-tab.t(m, n + m) > 1e-9 * scale) return std::nullopt;

  // Drive remaining artificials out of the basis where possible.
  for (int i = 0; i < m; ++i) {
    if (tab.basis[static_cast<std::size_t>(i)] < n) continue;
    for (int j = 0; j < n; ++j) {
      if (std::abs(tab.t(i, j)) > 1e-9) {
        tab.pivot(i, j);
        break;
      }
    }
  }

  // Phase two on the original objective; artificial columns are frozen.
  tab.t.row(m).setZero();
  tab.t.block(m, 0, 1, n) = c.transpose();
  for (int i = 0; i < m; ++i) {
    const int bj = tab.basis[static_cast<std::size_t>(i)];
    if (bj < n && tab.t(m, bj) != 0.0) tab.t.row(m) -= tab.t(m, bj) * tab.t.row(i);
  }
  if (!tab.run(n)) return std::nullopt;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < m; ++i) {
    const int bj = tab.basis[static_cast<std::size_t>(i)];
    if (bj < n) x(bj) = tab.t(i, n + m);
  }
  return x;
}

}  // namespace crnperm::detail
