#pragma once

#include <Eigen/Core>
#include <optional>

namespace crnperm::detail {

/// Dense two-phase simplex (Bland's rule) for
///   minimize c^T x  subject to  A x = b, x >= 0.
/// Returns nullopt when infeasible; unbounded problems also give nullopt.
/// Intended for the handful of variables arising from face enumeration.
std::optional<Eigen::VectorXd> solve_standard_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                                 const Eigen::VectorXd& c);

}  // namespace crnperm::detail
