#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "roughlab/rough_path.hpp"

namespace roughlab {

// A path (Z, Z') controlled by a reference rough path X: increments of Z are
// locally Z'_s dX_{st} up to a remainder of order |t-s|^{2 gamma}. Values are
// m-vectors, the derivative at each node is an m x d matrix.
class ControlledPath {
public:
  ControlledPath(std::shared_ptr<const RoughPath> base, Eigen::MatrixXd z_values,
                 std::vector<Eigen::MatrixXd> gubinelli_derivative);

  const RoughPath& base() const { return *base_; }
  std::shared_ptr<const RoughPath> base_ptr() const { return base_; }
  const Grid& grid() const { return base_->grid(); }
  int n_points() const { return base_->n_points(); }
  int dim() const { return static_cast<int>(z_values_.cols()); }
  int noise_dim() const { return base_->dim(); }

  const Eigen::MatrixXd& values() const { return z_values_; }
  Eigen::VectorXd value(int i) const { return z_values_.row(i).transpose(); }
  const Eigen::MatrixXd& derivative(int i) const { return deriv_[i]; }

  // R^Z_{st} = dZ_{st} - Z'_s dX_{st}.
  Eigen::VectorXd remainder(int i, int j) const;

  // sup over node pairs of |R^Z_{st}| / |t-s|^{two_gamma}.
  double remainder_norm(double two_gamma) const;

  // sup / Holder norms of the derivative path (Frobenius magnitude).
  double derivative_sup_norm() const;
  double derivative_holder_norm(double gamma) const;

  // |Z(0)| + ||Z'||_inf + ||Z'||_gamma + ||R^Z||_{2 gamma}.
  double controlled_norm(double gamma) const;

  SampledPath value_path() const { return SampledPath(grid(), z_values_); }

private:
  std::shared_ptr<const RoughPath> base_;
  Eigen::MatrixXd z_values_;              // n x m
  std::vector<Eigen::MatrixXd> deriv_;    // n matrices, m x d
};

// Full two-parameter remainder array of a controlled path, materialized.
// r(i,j) is stored for all ordered node pairs; intended for tests and small n.
class RemainderField {
public:
  explicit RemainderField(const ControlledPath& z);
  Eigen::VectorXd operator()(int i, int j) const;
  int n_points() const { return n_; }

private:
  int n_;
  int m_;
  Eigen::MatrixXd flat_;  // (n*n) x m
};

// (X, I): the base path viewed as controlled by itself.
ControlledPath identity_controlled(std::shared_ptr<const RoughPath> base);

// Composition with a C^2 map psi: values psi(Z_t), derivative Dpsi(Z_t) Z'_t.
ControlledPath compose(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& psi,
                       const std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>& dpsi,
                       const ControlledPath& z);

}  // namespace roughlab
