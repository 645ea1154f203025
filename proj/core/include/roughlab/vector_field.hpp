#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace roughlab {

// A single vector field on R^n with first and second derivatives. Derivatives
// may be analytic or produced by central finite differences with step h_fd.
// hessian(z)[k] is the Hessian of component k.
class VectorField {
public:
  using Eval = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
  using Jac = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;
  using Hess = std::function<std::vector<Eigen::MatrixXd>(const Eigen::VectorXd&)>;

  VectorField(int dim, Eval eval, Jac jac = nullptr, Hess hess = nullptr,
              double h_fd = 1e-5);

  int dim() const { return dim_; }
  bool has_analytic_jacobian() const { return static_cast<bool>(jac_); }

  Eigen::VectorXd operator()(const Eigen::VectorXd& z) const { return eval_(z); }
  Eigen::MatrixXd jacobian(const Eigen::VectorXd& z) const;
  std::vector<Eigen::MatrixXd> hessian(const Eigen::VectorXd& z) const;

  double fd_step() const { return h_fd_; }

  // Affine fields advertise their (A, b); brackets of affine fields then stay
  // exact at every nesting depth.
  bool is_affine() const { return affine_; }
  const Eigen::MatrixXd& affine_matrix() const { return affine_a_; }
  const Eigen::VectorXd& affine_offset() const { return affine_b_; }

private:
  friend VectorField affine_field(Eigen::VectorXd b, Eigen::MatrixXd A);

  int dim_;
  Eval eval_;
  Jac jac_;
  Hess hess_;
  double h_fd_;
  bool affine_ = false;
  Eigen::MatrixXd affine_a_;
  Eigen::VectorXd affine_b_;
};

// Affine field z -> b + A z. Closed under Lie bracketing, with exact
// derivatives at every nesting depth.
VectorField affine_field(Eigen::VectorXd b, Eigen::MatrixXd A);
VectorField constant_field(Eigen::VectorXd b);

// The drift V_0 and driving fields V_1..V_d of dZ = V_0 dt + sum V_i dX^i.
class VectorFieldSystem {
public:
  VectorFieldSystem(VectorField drift, std::vector<VectorField> driving);

  int dim_state() const { return drift_.dim(); }
  int dim_noise() const { return static_cast<int>(driving_.size()); }

  const VectorField& drift() const { return drift_; }
  const VectorField& driving(int i) const { return driving_[i]; }  // 1-based i in math, 0-based here

  // n x d matrix whose columns are V_1(z), ..., V_d(z).
  Eigen::MatrixXd driving_matrix(const Eigen::VectorXd& z) const;

  // Max deviation between supplied Jacobians and fresh central differences
  // over the probe points; used to validate analytic derivatives.
  double jacobian_consistency(const std::vector<Eigen::VectorXd>& probes) const;

private:
  VectorField drift_;
  std::vector<VectorField> driving_;
};

// Built-in systems.
VectorFieldSystem make_ou_system(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C);

// State (B_1..B_d, W_{ij} for i<j lexicographic); driving fields reproduce
// path components plus antisymmetrized second-level integrals.
VectorFieldSystem make_levy_system(int d);
int levy_state_dim(int d);
int levy_area_index(int d, int i, int j);  // index of W_{ij}, i < j

struct LangevinParams {
  int dim = 1;             // dimension of q (state is (q, p), noise enters p)
  double kappa = 1.0;      // quadratic coefficient of the potential
  double bump_amp = 0.5;   // amplitude of the smooth bounded bump
  double bump_sigma = 1.0; // width of the bump
};
// dq = p dt, dp = -grad V(q) dt - p dt + dB; V(q) = kappa|q|^2/2 + bump.
VectorFieldSystem make_langevin_system(const LangevinParams& params);
double langevin_potential(const LangevinParams& params, const Eigen::VectorXd& q);
Eigen::VectorXd langevin_grad_potential(const LangevinParams& params,
                                        const Eigen::VectorXd& q);

// Polynomial systems from the documented text format:
//   # vfs n=<n> d=<d>
//   V<j> <component> <coeff> <e_1> ... <e_n>
// declaring one monomial (coeff * prod z_i^{e_i}) of component <component>
// (0-based) of field V_j (j = 0 is the drift). Lines starting with '#' after
// the header are comments.
VectorFieldSystem read_vector_field_system(std::istream& is);
VectorFieldSystem read_vector_field_system_file(const std::string& path);

// Named built-in or file path.
VectorFieldSystem load_system(const std::string& name_or_file);

}  // namespace roughlab
