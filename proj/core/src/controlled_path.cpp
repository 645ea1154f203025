#include "roughlab/controlled_path.hpp"

#include <cmath>
#include <stdexcept>

namespace roughlab {

ControlledPath::ControlledPath(std::shared_ptr<const RoughPath> base,
                               Eigen::MatrixXd z_values,
                               std::vector<Eigen::MatrixXd> gubinelli_derivative)
    : base_(std::move(base)),
      z_values_(std::move(z_values)),
      deriv_(std::move(gubinelli_derivative)) {
  if (!base_) throw std::invalid_argument("ControlledPath: null base");
  const int n = base_->n_points();
  const int d = base_->dim();
  if (z_values_.rows() != n) {
    throw std::domain_error("ControlledPath: values do not match the base grid");
  }
  if (static_cast<int>(deriv_.size()) != n) {
    throw std::domain_error("ControlledPath: need one derivative per node");
  }
  const int m = static_cast<int>(z_values_.cols());
  for (const auto& g : deriv_) {
    if (g.rows() != m || g.cols() != d) {
      throw std::domain_error("ControlledPath: derivative must be m x d");
    }
  }
}

Eigen::VectorXd ControlledPath::remainder(int i, int j) const {
  return (z_values_.row(j) - z_values_.row(i)).transpose() -
         deriv_[i] * base_->increment(i, j);
}

double ControlledPath::remainder_norm(double two_gamma) const {
  const int n = n_points();
  const double dt = grid().spacing();
  double best = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      best = std::max(best,
                      remainder(i, j).norm() / std::pow(dt * (j - i), two_gamma));
    }
  }
  return best;
}

double ControlledPath::derivative_sup_norm() const {
  double best = 0.0;
  for (const auto& g : deriv_) best = std::max(best, g.norm());
  return best;
}

double ControlledPath::derivative_holder_norm(double gamma) const {
  const int n = n_points();
  const double dt = grid().spacing();
  double best = 0.0;
  for (int i = 0; i + 1 < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      best = std::max(best, (deriv_[j] - deriv_[i]).norm() /
                                std::pow(dt * (j - i), gamma));
    }
  }
  return best;
}

double ControlledPath::controlled_norm(double gamma) const {
  return value(0).norm() + derivative_sup_norm() + derivative_holder_norm(gamma) +
         remainder_norm(2.0 * gamma);
}

RemainderField::RemainderField(const ControlledPath& z)
    : n_(z.n_points()), m_(z.dim()), flat_(n_ * n_, m_) {
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      flat_.row(i * n_ + j) = z.remainder(i, j).transpose();
    }
  }
}

Eigen::VectorXd RemainderField::operator()(int i, int j) const {
  return flat_.row(i * n_ + j).transpose();
}

ControlledPath identity_controlled(std::shared_ptr<const RoughPath> base) {
  const int n = base->n_points();
  const int d = base->dim();
  Eigen::MatrixXd z = base->path().values();
  std::vector<Eigen::MatrixXd> deriv(n, Eigen::MatrixXd::Identity(d, d));
  return ControlledPath(std::move(base), std::move(z), std::move(deriv));
}

ControlledPath compose(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& psi,
    const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& dpsi,
    const ControlledPath& z) {
  const int n = z.n_points();
  Eigen::VectorXd first = psi(z.value(0));
  Eigen::MatrixXd values(n, first.size());
  std::vector<Eigen::MatrixXd> deriv(n);
  values.row(0) = first.transpose();
  deriv[0] = dpsi(z.value(0)) * z.derivative(0);
  for (int i = 1; i < n; ++i) {
    const Eigen::VectorXd zi = z.value(i);
    values.row(i) = psi(zi).transpose();
    deriv[i] = dpsi(zi) * z.derivative(i);
  }
  return ControlledPath(z.base_ptr(), std::move(values), std::move(deriv));
}

}  // namespace roughlab
