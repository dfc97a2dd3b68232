#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace irx {

struct SurrogateFit {
  std::vector<double> weights;  // one per design column
  double intercept = 0.0;
  std::size_t sample_count = 0;
  double residual_norm = 0.0;   // sqrt(sum_i w_i r_i^2)
  bool min_norm = false;        // lambda = 0 and the design was rank deficient
};

/// Minimizes sum_i w_i (y_i - beta.x_i - beta0)^2 + lambda |beta|^2 with an
/// unpenalized intercept. Solved on weighted-centered normal equations with
/// a Cholesky factorization; with lambda = 0 and a singular system the
/// minimum-norm solution is returned and `min_norm` is set.
SurrogateFit fit_weighted_ridge(const Eigen::MatrixXd& design,
                                std::span<const double> targets,
                                std::span<const double> sample_weights,
                                double lambda);

}  // namespace irx
