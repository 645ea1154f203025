#include "roughlab/fbm.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include <fftw3.h>

#include "roughlab/errors.hpp"
#include "roughlab/rng.hpp"

namespace roughlab {

namespace {

// Autocovariance of fractional Gaussian noise at lag k (unit-spaced), scaled
// afterwards by dt^{2H}.
double fgn_autocov(double hurst, int k) {
  const double h2 = 2.0 * hurst;
  const double kk = std::abs(static_cast<double>(k));
  return 0.5 * (std::pow(kk + 1.0, h2) - 2.0 * std::pow(kk, h2) +
                std::pow(std::abs(kk - 1.0), h2));
}

// Eigenvalues of the circulant extension of the increment covariance.
// Returns empty if any eigenvalue is meaningfully negative.
std::vector<double> circulant_eigenvalues(double hurst, int m) {
  const int big = 2 * m;
  std::vector<double> row(big);
  for (int k = 0; k <= m; ++k) row[k] = fgn_autocov(hurst, k);
  for (int k = m + 1; k < big; ++k) row[k] = row[big - k];

  std::vector<std::complex<double>> in(big), out(big);
  for (int k = 0; k < big; ++k) in[k] = row[k];
  fftw_plan plan = fftw_plan_dft_1d(
      big, reinterpret_cast<fftw_complex*>(in.data()),
      reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);

  std::vector<double> ev(big);
  for (int k = 0; k < big; ++k) {
    ev[k] = out[k].real();
    if (ev[k] < -1e-9) return {};
    ev[k] = std::max(ev[k], 0.0);
  }
  return ev;
}

// Davies-Harte synthesis of n_inc stationary increments (unit variance scale).
// Consumes normals from the stream in a fixed order.
std::vector<double> circulant_increments(const std::vector<double>& ev,
                                         int n_inc, GaussianStream& gauss) {
  const int big = static_cast<int>(ev.size());
  const int m = big / 2;
  std::vector<std::complex<double>> coef(big);
  coef[0] = std::sqrt(ev[0] / big) * gauss.next();
  coef[m] = std::sqrt(ev[m] / big) * gauss.next();
  for (int j = 1; j < m; ++j) {
    const double scale = std::sqrt(ev[j] / (2.0 * big));
    const double re = gauss.next();
    const double im = gauss.next();
    coef[j] = std::complex<double>(scale * re, scale * im);
    coef[big - j] = std::conj(coef[j]);
  }
  std::vector<std::complex<double>> out(big);
  fftw_plan plan = fftw_plan_dft_1d(
      big, reinterpret_cast<fftw_complex*>(coef.data()),
      reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD, FFTW_ESTIMATE);
  fftw_execute(plan);
  fftw_destroy_plan(plan);

  std::vector<double> inc(n_inc);
  for (int k = 0; k < n_inc; ++k) inc[k] = out[k].real();
  return inc;
}

// Dense Cholesky of the increment covariance; used when embedding fails.
std::vector<double> cholesky_increments(double hurst, int n_inc,
                                        GaussianStream& gauss) {
  Eigen::MatrixXd cov(n_inc, n_inc);
  for (int i = 0; i < n_inc; ++i) {
    for (int j = 0; j < n_inc; ++j) cov(i, j) = fgn_autocov(hurst, i - j);
  }
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success) {
    throw NumericalError(
        "sample_fbm: circulant embedding and Cholesky both failed (H=" +
        std::to_string(hurst) + ", n_inc=" + std::to_string(n_inc) + ")");
  }
  Eigen::VectorXd z(n_inc);
  gauss.fill(z);
  Eigen::VectorXd inc = llt.matrixL() * z;
  return std::vector<double>(inc.data(), inc.data() + n_inc);
}

}  // namespace

double fbm_covariance(double hurst, double a, double s, double t) {
  const double h2 = 2.0 * hurst;
  return 0.5 * (std::pow(std::abs(s - a), h2) + std::pow(std::abs(t - a), h2) -
                std::pow(std::abs(t - s), h2));
}

SampledPath sample_fbm(double hurst, const Grid& grid, std::uint64_t seed, int d,
                       FbmSynthesis method) {
  if (!(hurst > 0.0) || !(hurst < 1.0)) {
    throw std::domain_error("sample_fbm: hurst must lie in (0,1)");
  }
  if (d < 1) throw std::domain_error("sample_fbm: d must be positive");

  const int n_inc = grid.n_steps();
  const double scale = std::pow(grid.spacing(), hurst);

  std::vector<double> ev;
  if (method != FbmSynthesis::Cholesky) {
    ev = circulant_eigenvalues(hurst, n_inc);
    if (ev.empty() && method == FbmSynthesis::CirculantEmbedding) {
      throw NumericalError("sample_fbm: circulant embedding not nonnegative");
    }
  }

  GaussianStream gauss(seed);
  Eigen::MatrixXd values = Eigen::MatrixXd::Zero(grid.n_points(), d);
  for (int c = 0; c < d; ++c) {
    const std::vector<double> inc = ev.empty()
                                        ? cholesky_increments(hurst, n_inc, gauss)
                                        : circulant_increments(ev, n_inc, gauss);
    for (int i = 0; i < n_inc; ++i) {
      values(i + 1, c) = values(i, c) + scale * inc[i];
    }
  }
  return SampledPath(grid, std::move(values));
}

FbmSampler::FbmSampler(double hurst, Grid grid, std::uint64_t seed, int d,
                       FbmSynthesis method, int stencil)
    : hurst_(hurst), grid_(grid), seed_(seed), d_(d), stencil_(stencil) {
  levels_.emplace(0, sample_fbm(hurst, grid, substream_seed(seed, 0), d, method));
}

const SampledPath& FbmSampler::level(int l) {
  if (l < 0) throw std::domain_error("FbmSampler::level: negative level");
  auto it = levels_.find(l);
  if (it != levels_.end()) return it->second;
  const SampledPath& prev = level(l - 1);

  const Grid fine = grid_.refined(l);
  const int n_prev = prev.n_points();
  Eigen::MatrixXd values(fine.n_points(), d_);
  for (int i = 0; i < n_prev; ++i) values.row(2 * i) = prev.values().row(i);

  GaussianStream gauss(substream_seed(seed_, 1000 + l));
  const double a = grid_.t0();  // pinning time of the realization
  for (int i = 0; i + 1 < n_prev; ++i) {
    // Midpoint of cell i, conditioned on up to `stencil_` known level-(l-1)
    // nodes on each side. Truncation of the conditioning set is the only
    // approximation; coarse nodes are never altered.
    const int lo = std::max(0, i - stencil_ + 1);
    const int hi = std::min(n_prev - 1, i + stencil_);
    const int J = hi - lo + 1;
    const double tm = 0.5 * (prev.grid().node(i) + prev.grid().node(i + 1));

    Eigen::MatrixXd sigma(J, J);
    Eigen::VectorXd cvec(J);
    for (int p = 0; p < J; ++p) {
      const double tp = prev.grid().node(lo + p);
      cvec(p) = fbm_covariance(hurst_, a, tm, tp);
      for (int q = 0; q <= p; ++q) {
        const double tq = prev.grid().node(lo + q);
        sigma(p, q) = sigma(q, p) = fbm_covariance(hurst_, a, tp, tq);
      }
    }
    // The pinned node (value 0 at t=a) carries no information; regularize the
    // solve so its zero row/column is harmless.
    Eigen::LDLT<Eigen::MatrixXd> ldlt(sigma +
                                      1e-14 * Eigen::MatrixXd::Identity(J, J));
    const Eigen::VectorXd w = ldlt.solve(cvec);
    const double var_m = fbm_covariance(hurst_, a, tm, tm);
    const double cond_var = std::max(var_m - w.dot(cvec), 0.0);
    const double cond_sd = std::sqrt(cond_var);

    for (int c = 0; c < d_; ++c) {
      double mean = 0.0;
      for (int p = 0; p < J; ++p) mean += w(p) * prev.values()(lo + p, c);
      values(2 * i + 1, c) = mean + cond_sd * gauss.next();
    }
  }
  auto [ins, ok] = levels_.emplace(l, SampledPath(fine, std::move(values)));
  (void)ok;
  return ins->second;
}

RoughPath lift_fbm(FbmSampler& sampler, int level, double gamma) {
  if (level < 0) throw std::domain_error("lift_fbm: negative level");
  return lift_refined(sampler.level(level), 1 << level, gamma);
}

RoughPath lift_fbm(const SampledPath& path, int level, double gamma) {
  if (level < 0) throw std::domain_error("lift_fbm: negative level");
  // Linear midpoint insertion keeps every substep on the chord, so the
  // assembled tensors equal the piecewise-linear lift at any level.
  return lift_smooth(path, gamma);
}

}  // namespace roughlab
