#include "irx/surrogate.hpp"

#include <cmath>

#include "irx/error.hpp"

namespace irx {

SurrogateFit fit_weighted_ridge(const Eigen::MatrixXd& design,
                                std::span<const double> targets,
                                std::span<const double> sample_weights,
                                double lambda) {
  const auto rows = design.rows();
  const auto cols = design.cols();
  if (rows < 1 || static_cast<std::size_t>(rows) != targets.size() ||
      targets.size() != sample_weights.size())
    throw InvalidArgument("ridge: design rows, targets and weights must agree");
  if (!(lambda >= 0.0)) throw InvalidArgument("ridge: lambda must be >= 0");

  Eigen::Map<const Eigen::VectorXd> y(targets.data(), rows);
  Eigen::Map<const Eigen::VectorXd> w(sample_weights.data(), rows);
  if ((w.array() < 0.0).any())
    throw InvalidArgument("ridge: sample weights must be >= 0");
  const double w_sum = w.sum();
  if (!(w_sum > 0.0)) throw InvalidArgument("ridge: all sample weights are zero");

  const Eigen::RowVectorXd x_mean = (w.transpose() * design) / w_sum;
  const double y_mean = w.dot(y) / w_sum;
  const Eigen::MatrixXd xc = design.rowwise() - x_mean;
  const Eigen::VectorXd yc = y.array() - y_mean;

  const Eigen::MatrixXd xtw = xc.transpose() * w.asDiagonal();
  Eigen::MatrixXd gram = xtw * xc;
  gram.diagonal().array() += lambda;
  const Eigen::VectorXd rhs = xtw * yc;

  SurrogateFit fit;
  fit.sample_count = static_cast<std::size_t>(rows);
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(cols);
  if (cols > 0) {
    bool solved = false;
    if (lambda > 0.0) {
      Eigen::LLT<Eigen::MatrixXd> llt(gram);
      if (llt.info() == Eigen::Success) {
        beta = llt.solve(rhs);
        solved = true;
      }
    } else {
      Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(gram);
      if (cod.rank() == cols) {
        Eigen::LLT<Eigen::MatrixXd> llt(gram);
        if (llt.info() == Eigen::Success) {
          beta = llt.solve(rhs);
          solved = true;
        }
      }
      if (!solved) {
        beta = cod.solve(rhs);
        fit.min_norm = true;
        solved = true;
      }
    }
    if (!solved) throw Error("ridge: normal equations are not positive definite");
  }

  fit.weights.assign(beta.data(), beta.data() + cols);
  fit.intercept = y_mean - x_mean.dot(beta);
  const Eigen::VectorXd resid =
      (y - design * beta).array() - fit.intercept;
  fit.residual_norm = std::sqrt((w.array() * resid.array().square()).sum());
  return fit;
}

}  // namespace irx
