#include "roughlab/vector_field.hpp"

#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "roughlab/errors.hpp"

namespace roughlab {

VectorField::VectorField(int dim, Eval eval, Jac jac, Hess hess, double h_fd)
    : dim_(dim), eval_(std::move(eval)), jac_(std::move(jac)),
      hess_(std::move(hess)), h_fd_(h_fd) {
  if (dim_ < 1) throw std::invalid_argument("VectorField: dim must be positive");
  if (!eval_) throw std::invalid_argument("VectorField: evaluator required");
}

Eigen::MatrixXd VectorField::jacobian(const Eigen::VectorXd& z) const {
  if (jac_) return jac_(z);
  const int n = dim_;
  Eigen::MatrixXd out(n, n);
  Eigen::VectorXd zp = z, zm = z;
  for (int j = 0; j < n; ++j) {
    zp(j) = z(j) + h_fd_;
    zm(j) = z(j) - h_fd_;
    out.col(j) = (eval_(zp) - eval_(zm)) / (2.0 * h_fd_);
    zp(j) = z(j);
    zm(j) = z(j);
  }
  return out;
}

std::vector<Eigen::MatrixXd> VectorField::hessian(const Eigen::VectorXd& z) const {
  if (hess_) return hess_(z);
  const int n = dim_;
  // Central second differences of the evaluator.
  std::vector<Eigen::MatrixXd> out(n, Eigen::MatrixXd::Zero(n, n));
  const double h = std::sqrt(h_fd_);  // larger step: second differences lose precision
  const Eigen::VectorXd f0 = eval_(z);
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      Eigen::VectorXd second(n);
      if (a == b) {
        Eigen::VectorXd zp = z, zm = z;
        zp(a) += h;
        zm(a) -= h;
        second = (eval_(zp) - 2.0 * f0 + eval_(zm)) / (h * h);
      } else {
        Eigen::VectorXd zpp = z, zpm = z, zmp = z, zmm = z;
        zpp(a) += h; zpp(b) += h;
        zpm(a) += h; zpm(b) -= h;
        zmp(a) -= h; zmp(b) += h;
        zmm(a) -= h; zmm(b) -= h;
        second = (eval_(zpp) - eval_(zpm) - eval_(zmp) + eval_(zmm)) / (4.0 * h * h);
      }
      for (int k = 0; k < n; ++k) {
        out[k](a, b) = second(k);
        out[k](b, a) = second(k);
      }
    }
  }
  return out;
}

VectorField affine_field(Eigen::VectorXd b, Eigen::MatrixXd A) {
  const int n = static_cast<int>(b.size());
  if (A.rows() != n || A.cols() != n) {
    throw std::invalid_argument("affine_field: A must be n x n");
  }
  auto eval = [b, A](const Eigen::VectorXd& z) -> Eigen::VectorXd {
    return b + A * z;
  };
  auto jac = [A](const Eigen::VectorXd&) { return A; };
  auto hess = [n](const Eigen::VectorXd&) {
    return std::vector<Eigen::MatrixXd>(n, Eigen::MatrixXd::Zero(n, n));
  };
  VectorField out(n, eval, jac, hess);
  out.affine_ = true;
  out.affine_a_ = std::move(A);
  out.affine_b_ = std::move(b);
  return out;
}

VectorField constant_field(Eigen::VectorXd b) {
  const int n = static_cast<int>(b.size());
  return affine_field(std::move(b), Eigen::MatrixXd::Zero(n, n));
}

VectorFieldSystem::VectorFieldSystem(VectorField drift,
                                     std::vector<VectorField> driving)
    : drift_(std::move(drift)), driving_(std::move(driving)) {
  if (driving_.empty()) {
    throw std::invalid_argument("VectorFieldSystem: need at least one driving field");
  }
  for (const auto& v : driving_) {
    if (v.dim() != drift_.dim()) {
      throw std::invalid_argument("VectorFieldSystem: dimension mismatch");
    }
  }
}

Eigen::MatrixXd VectorFieldSystem::driving_matrix(const Eigen::VectorXd& z) const {
  Eigen::MatrixXd out(dim_state(), dim_noise());
  for (int i = 0; i < dim_noise(); ++i) out.col(i) = driving_[i](z);
  return out;
}

double VectorFieldSystem::jacobian_consistency(
    const std::vector<Eigen::VectorXd>& probes) const {
  double worst = 0.0;
  auto check = [&](const VectorField& v) {
    VectorField fd(v.dim(), [&v](const Eigen::VectorXd& z) { return v(z); },
                   nullptr, nullptr, v.fd_step());
    for (const auto& z : probes) {
      worst = std::max(worst, (v.jacobian(z) - fd.jacobian(z)).norm());
    }
  };
  check(drift_);
  for (const auto& v : driving_) check(v);
  return worst;
}

VectorFieldSystem make_ou_system(const Eigen::MatrixXd& A, const Eigen::MatrixXd& C) {
  const int n = static_cast<int>(A.rows());
  if (A.cols() != n) throw std::invalid_argument("make_ou_system: A must be square");
  if (C.rows() != n) throw std::invalid_argument("make_ou_system: C rows must match A");
  std::vector<VectorField> driving;
  for (int k = 0; k < C.cols(); ++k) driving.push_back(constant_field(C.col(k)));
  return VectorFieldSystem(affine_field(Eigen::VectorXd::Zero(n), A),
                           std::move(driving));
}

int levy_state_dim(int d) { return d + d * (d - 1) / 2; }

int levy_area_index(int d, int i, int j) {
  if (!(0 <= i && i < j && j < d)) {
    throw std::invalid_argument("levy_area_index: need 0 <= i < j < d");
  }
  // pairs (0,1), (0,2), ..., (0,d-1), (1,2), ...
  return d + i * d - i * (i + 1) / 2 + (j - i - 1);
}

VectorFieldSystem make_levy_system(int d) {
  if (d < 2) throw std::invalid_argument("make_levy_system: need d >= 2");
  const int n = levy_state_dim(d);
  std::vector<VectorField> driving;
  for (int j = 0; j < d; ++j) {
    // V_j = e_j + sum_{i<j} f_{ij} x_i - sum_{i>j} f_{ji} x_i
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b(j) = 1.0;
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < j; ++i) A(levy_area_index(d, i, j), i) = 1.0;
    for (int i = j + 1; i < d; ++i) A(levy_area_index(d, j, i), i) = -1.0;
    driving.push_back(affine_field(std::move(b), std::move(A)));
  }
  return VectorFieldSystem(constant_field(Eigen::VectorXd::Zero(n)),
                           std::move(driving));
}

double langevin_potential(const LangevinParams& p, const Eigen::VectorXd& q) {
  const double q2 = q.squaredNorm();
  return 0.5 * p.kappa * q2 +
         p.bump_amp * std::exp(-q2 / (2.0 * p.bump_sigma * p.bump_sigma));
}

Eigen::VectorXd langevin_grad_potential(const LangevinParams& p,
                                        const Eigen::VectorXd& q) {
  const double s2 = p.bump_sigma * p.bump_sigma;
  const double e = std::exp(-q.squaredNorm() / (2.0 * s2));
  return p.kappa * q - (p.bump_amp / s2) * e * q;
}

VectorFieldSystem make_langevin_system(const LangevinParams& params) {
  const int m = params.dim;
  if (m < 1) throw std::invalid_argument("make_langevin_system: dim must be positive");
  const int n = 2 * m;
  const LangevinParams p = params;

  auto eval = [p, m, n](const Eigen::VectorXd& z) -> Eigen::VectorXd {
    const Eigen::VectorXd q = z.head(m);
    const Eigen::VectorXd mom = z.tail(m);
    Eigen::VectorXd out(n);
    out.head(m) = mom;
    out.tail(m) = -langevin_grad_potential(p, q) - mom;
    return out;
  };
  auto jac = [p, m, n](const Eigen::VectorXd& z) -> Eigen::MatrixXd {
    const Eigen::VectorXd q = z.head(m);
    const double s2 = p.bump_sigma * p.bump_sigma;
    const double e = std::exp(-q.squaredNorm() / (2.0 * s2));
    // Hess V = kappa I - (amp/s2) e (I - q q^T / s2)
    Eigen::MatrixXd hv = p.kappa * Eigen::MatrixXd::Identity(m, m) -
                         (p.bump_amp / s2) * e *
                             (Eigen::MatrixXd::Identity(m, m) -
                              q * q.transpose() / s2);
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
    out.topRightCorner(m, m) = Eigen::MatrixXd::Identity(m, m);
    out.bottomLeftCorner(m, m) = -hv;
    out.bottomRightCorner(m, m) = -Eigen::MatrixXd::Identity(m, m);
    return out;
  };

  VectorField drift(n, eval, jac);  // third derivative of V via FD when needed
  std::vector<VectorField> driving;
  for (int k = 0; k < m; ++k) {
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
    b(m + k) = 1.0;
    driving.push_back(constant_field(std::move(b)));
  }
  return VectorFieldSystem(std::move(drift), std::move(driving));
}

namespace {

// One monomial of a polynomial component.
struct Monomial {
  double coeff;
  Eigen::VectorXi exponents;
};

class PolynomialField {
public:
  PolynomialField(int n, std::vector<std::vector<Monomial>> comps)
      : n_(n), comps_(std::move(comps)) {}

  Eigen::VectorXd eval(const Eigen::VectorXd& z) const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n_);
    for (int k = 0; k < n_; ++k) {
      for (const auto& mono : comps_[k]) out(k) += mono.coeff * power(z, mono.exponents);
    }
    return out;
  }

  Eigen::MatrixXd jac(const Eigen::VectorXd& z) const {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n_, n_);
    for (int k = 0; k < n_; ++k) {
      for (const auto& mono : comps_[k]) {
        for (int a = 0; a < n_; ++a) {
          if (mono.exponents(a) == 0) continue;
          Eigen::VectorXi e = mono.exponents;
          e(a) -= 1;
          out(k, a) += mono.coeff * mono.exponents(a) * power(z, e);
        }
      }
    }
    return out;
  }

  std::vector<Eigen::MatrixXd> hess(const Eigen::VectorXd& z) const {
    std::vector<Eigen::MatrixXd> out(n_, Eigen::MatrixXd::Zero(n_, n_));
    for (int k = 0; k < n_; ++k) {
      for (const auto& mono : comps_[k]) {
        for (int a = 0; a < n_; ++a) {
          if (mono.exponents(a) == 0) continue;
          for (int b = 0; b < n_; ++b) {
            Eigen::VectorXi e = mono.exponents;
            e(a) -= 1;
            const int eb = e(b);
            if (eb == 0) continue;
            e(b) -= 1;
            out[k](a, b) += mono.coeff * mono.exponents(a) * eb * power(z, e);
          }
        }
      }
    }
    return out;
  }

private:
  static double power(const Eigen::VectorXd& z, const Eigen::VectorXi& e) {
    double out = 1.0;
    for (int i = 0; i < z.size(); ++i) {
      for (int r = 0; r < e(i); ++r) out *= z(i);
    }
    return out;
  }

  int n_;
  std::vector<std::vector<Monomial>> comps_;
};

VectorField polynomial_field(int n, std::vector<std::vector<Monomial>> comps) {
  auto poly = std::make_shared<PolynomialField>(n, std::move(comps));
  return VectorField(
      n, [poly](const Eigen::VectorXd& z) { return poly->eval(z); },
      [poly](const Eigen::VectorXd& z) { return poly->jac(z); },
      [poly](const Eigen::VectorXd& z) { return poly->hess(z); });
}

}  // namespace

VectorFieldSystem read_vector_field_system(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("# vfs", 0) != 0) {
    throw ConfigError("vfs: expected '# vfs n=<n> d=<d>' header");
  }
  auto field_of = [&line](const std::string& key) {
    const auto pos = line.find(key + "=");
    if (pos == std::string::npos) throw ConfigError("vfs: header missing " + key);
    return std::stoi(line.substr(pos + key.size() + 1));
  };
  const int n = field_of("n");
  const int d = field_of("d");
  if (n < 1 || d < 1) throw ConfigError("vfs: bad dimensions");

  std::vector<std::vector<std::vector<Monomial>>> fields(
      d + 1, std::vector<std::vector<Monomial>>(n));
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tag;
    int comp;
    Monomial mono;
    mono.exponents.resize(n);
    ls >> tag >> comp >> mono.coeff;
    for (int i = 0; i < n; ++i) ls >> mono.exponents(i);
    if (!ls || tag.size() < 2 || tag[0] != 'V') {
      throw ConfigError("vfs: malformed line: " + line);
    }
    const int j = std::stoi(tag.substr(1));
    if (j < 0 || j > d || comp < 0 || comp >= n) {
      throw ConfigError("vfs: field or component index out of range: " + line);
    }
    fields[j][comp].push_back(mono);
  }

  std::vector<VectorField> driving;
  for (int j = 1; j <= d; ++j) driving.push_back(polynomial_field(n, fields[j]));
  return VectorFieldSystem(polynomial_field(n, fields[0]), std::move(driving));
}

VectorFieldSystem read_vector_field_system_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("vfs: cannot open '" + path + "'");
  return read_vector_field_system(is);
}

VectorFieldSystem load_system(const std::string& name_or_file) {
  if (name_or_file == "ou") {
    Eigen::MatrixXd A(2, 2);
    A << 0.0, 1.0, -1.0, -1.0;
    Eigen::MatrixXd C(2, 1);
    C << 0.0, 1.0;
    return make_ou_system(A, C);
  }
  if (name_or_file == "levy") return make_levy_system(2);
  if (name_or_file == "langevin") return make_langevin_system(LangevinParams{});
  return read_vector_field_system_file(name_or_file);
}

}  // namespace roughlab
