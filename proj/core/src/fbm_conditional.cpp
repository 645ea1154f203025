#include "roughlab/fbm_conditional.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "roughlab/errors.hpp"
#include "roughlab/rng.hpp"

namespace roughlab {

namespace {

using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
constexpr double kQuadTol = 1e-10;
constexpr int kQuadDepth = 8;

void check_hurst_open(double hurst) {
  if (!(hurst > 0.0) || !(hurst < 1.0)) {
    throw std::domain_error("hurst must lie in (0,1)");
  }
}

}  // namespace

double alpha_h(double hurst) {
  check_hurst_open(hurst);
  // Var(alpha_H int_0^1 (1-r)^{H-1/2} dW_r) = alpha_H^2 / (2H) = 1.
  return std::sqrt(2.0 * hurst);
}

double gamma_h(double hurst) {
  check_hurst_open(hurst);
  return (hurst - 0.5) * alpha_h(hurst) * alpha_h(1.0 - hurst);
}

double kernel_g(double v, double hurst) {
  if (!(v > 0.0)) throw std::domain_error("kernel_g: v must be positive");
  check_hurst_open(hurst);
  const double H = hurst;
  if (std::abs(H - 0.5) < 1e-13) return v / (1.0 + v);

  // Cancelled form: the raw definition subtracts two terms that agree to
  // leading order as v -> 0. Writing phi(u) = (1-u)^{1/2-H} - 1 gives
  //   g(v) = v (1+v)^{H-3/2} + (H-3/2) v \int_0^1 (u+v)^{H-5/2} phi(u) du,
  // which is evaluated without cancellation. The integral is split so each
  // quadrature sees a flat integrand: [0, min(v, 1/2)] after linear scaling,
  // [v, 1/2] in log(u), and [1/2, 1] with the endpoint-flattening
  // substitution 1-u = xi^p, p (3/2-H) = 1 (the "-1" part of phi is a closed
  // form there).
  auto phi = [H](double u) { return std::pow(1.0 - u, 0.5 - H) - 1.0; };

  const double c = 0.5;
  const double m = std::min(v, c);
  double integral = 0.0;

  integral += GK::integrate(
      [&](double s) {
        const double u = m * s;
        return m * std::pow(u + v, H - 2.5) * phi(u);
      },
      0.0, 1.0, kQuadDepth, kQuadTol);

  if (m < c) {
    integral += GK::integrate(
        [&](double w) {
          const double u = std::exp(w);
          return u * std::pow(u + v, H - 2.5) * phi(u);
        },
        std::log(m), std::log(c), kQuadDepth, kQuadTol);
  }

  const double p = 2.0 / (3.0 - 2.0 * H);
  const double xi_c = std::pow(1.0 - c, 1.0 / p);
  integral += p * GK::integrate(
                      [&](double xi) {
                        return std::pow(1.0 + v - std::pow(xi, p), H - 2.5);
                      },
                      0.0, xi_c, kQuadDepth, kQuadTol);
  integral -= (std::pow(1.0 + v, H - 1.5) - std::pow(c + v, H - 1.5)) /
              (H - 1.5);

  return v * std::pow(1.0 + v, H - 1.5) + (H - 1.5) * v * integral;
}

namespace {

// Log-spaced lookup table for g(., H) with cubic Hermite interpolation.
// conditional_drift evaluates the kernel millions of times per window; the
// table keeps that cost flat while staying well inside the drift's
// quadrature tolerance. kernel_g itself always integrates directly.
class GKernelTable {
public:
  explicit GKernelTable(double hurst)
      : hurst_(hurst), x_lo_(std::log(1e-7)), x_hi_(std::log(1e7)) {
    const int n = 6000;
    dx_ = (x_hi_ - x_lo_) / (n - 1);
    y_.resize(n);
    for (int i = 0; i < n; ++i) y_[i] = kernel_g(std::exp(x_lo_ + i * dx_), hurst_);
  }

  double operator()(double v) const {
    const double x = std::log(v);
    if (x <= x_lo_) {
      // g ~ v^{H+1/2} to leading order below the table
      return y_.front() * std::pow(v / std::exp(x_lo_), hurst_ + 0.5);
    }
    if (x >= x_hi_) {
      // g ~ v^{H-1/2} above the table
      return y_.back() * std::pow(v / std::exp(x_hi_), hurst_ - 0.5);
    }
    const int n = static_cast<int>(y_.size());
    int i = static_cast<int>((x - x_lo_) / dx_);
    i = std::min(std::max(i, 1), n - 3);
    const double s = (x - x_lo_) / dx_ - i;
    const double y0 = y_[i], y1 = y_[i + 1];
    const double m0 = 0.5 * (y_[i + 1] - y_[i - 1]);
    const double m1 = 0.5 * (y_[i + 2] - y_[i]);
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * m0 +
           (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * m1;
  }

private:
  double hurst_;
  double x_lo_, x_hi_, dx_;
  std::vector<double> y_;
};

const GKernelTable& g_table(double hurst) {
  static std::mutex mu;
  static std::map<double, std::shared_ptr<GKernelTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(hurst);
  if (it == cache.end()) {
    it = cache.emplace(hurst, std::make_shared<GKernelTable>(hurst)).first;
  }
  return *it->second;
}

}  // namespace

namespace {

// Nodes/weights of the Gauss-Legendre rule on [-1, 1], by Newton iteration on
// the Legendre polynomial.
void gauss_legendre(int order, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  nodes.resize(order);
  weights.resize(order);
  for (int i = 0; i < order; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
  }
}

}  // namespace

SampledPath conditional_drift(const SampledPath& past, double hurst,
                              const Grid& grid, int quad_order) {
  check_hurst_open(hurst);
  if (quad_order < 2) throw std::domain_error("conditional_drift: quad_order >= 2");
  if (std::abs(past.grid().t1()) > 1e-12) {
    throw std::domain_error("conditional_drift: past must end at time 0");
  }
  if (past.value(past.n_points() - 1).norm() > 1e-12) {
    throw std::domain_error("conditional_drift: past must satisfy w-(0) = 0");
  }
  if (grid.t0() < -1e-12) {
    throw std::domain_error("conditional_drift: future grid must start at 0");
  }
  const int d = past.dim();
  const double gh = gamma_h(hurst);
  const GKernelTable& g = g_table(hurst);
  const int np = past.n_points();

  std::vector<double> gl_x, gl_w;
  gauss_legendre(quad_order, gl_x, gl_w);

  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(grid.n_points(), d);
  for (int i = 0; i < grid.n_points(); ++i) {
    const double t = grid.node(i);
    if (t <= 0.0) continue;
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(d);
    // Integrate cell by cell over the recorded horizon; w-(-r) is linear on
    // each cell. Contributions beyond the horizon are truncated to zero.
    for (int k = np - 1; k > 0; --k) {
      const double ra = -past.grid().node(k);      // nearer lag
      const double rb = -past.grid().node(k - 1);  // farther lag
      const Eigen::VectorXd wa = past.value(k);
      const Eigen::VectorXd wb = past.value(k - 1);
      const double half = 0.5 * (rb - ra);
      const double mid = 0.5 * (ra + rb);
      for (int qn = 0; qn < quad_order; ++qn) {
        const double r = mid + half * gl_x[qn];
        const double frac = (r - ra) / (rb - ra);
        const double kernel = g(t / r) / r * half * gl_w[qn];
        acc += kernel * (wa + frac * (wb - wa));
      }
    }
    out.row(i) = (gh * acc).transpose();
  }
  return SampledPath(grid, std::move(out));
}

NoiseRecord sample_conditional_future(const std::optional<SampledPath>& past,
                                      double hurst, const Grid& grid,
                                      std::uint64_t seed, int level,
                                      double gamma) {
  if (!(hurst > 1.0 / 3.0) || !(hurst < 0.5)) {
    throw std::domain_error("sample_conditional_future: hurst must lie in (1/3,1/2)");
  }
  if (level < 0) throw std::domain_error("sample_conditional_future: negative level");
  if (std::abs(grid.t0()) > 1e-12) {
    throw std::domain_error("sample_conditional_future: future grid must start at 0");
  }

  const Grid fine = grid.refined(level);
  const int nf = fine.n_steps();
  const double ds = fine.spacing();
  const double a_h = alpha_h(hurst);

  int d = past ? past->dim() : 1;

  GaussianStream gauss(substream_seed(seed, 7));
  Eigen::MatrixXd dw(nf, d);
  gauss.fill(dw);
  dw *= std::sqrt(ds);

  // Product-integration weights of the type-II kernel on the uniform fine
  // grid: cell [s_j, s_{j+1}] seen from node s_k depends only on k - j.
  std::vector<double> kappa(nf + 1, 0.0);
  const double e = hurst + 0.5;
  for (int k = 1; k <= nf; ++k) {
    kappa[k] = (std::pow(k * ds, e) - std::pow((k - 1) * ds, e)) / (e * ds);
  }

  Eigen::MatrixXd fine_values = Eigen::MatrixXd::Zero(fine.n_points(), d);
  for (int k = 1; k <= nf; ++k) {
    Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(d);
    for (int j = 0; j < k; ++j) acc += kappa[k - j] * dw.row(j);
    fine_values.row(k) = a_h * acc;
  }

  if (past) {
    const SampledPath drift = conditional_drift(*past, hurst, fine);
    fine_values += drift.values();
  }

  SampledPath fine_path(fine, std::move(fine_values));
  RoughPath coarse = lift_refined(fine_path, 1 << level, gamma);

  return NoiseRecord{hurst, past, std::move(dw), std::move(coarse), seed, level};
}

}  // namespace roughlab
