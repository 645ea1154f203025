#pragma once

#include <vector>

#include <Eigen/Dense>

#include "roughlab/sampled_path.hpp"

namespace roughlab {

// A rough path over a uniform grid: node values X_{t_i} plus the second-level
// tensors. Only the per-step tensors A_k = area over [t_k, t_{k+1}] are
// stored; the tensor over [t_i, t_j] is reconstructed on demand through the
// additivity identity
//
//   area(s,t) = area(s,u) + area(u,t) + increment(s,u) * increment(u,t)^T ,
//
// which therefore holds by construction up to floating-point accumulation.
// Index convention: area(i,j)(a,b) integrates component a against component b
// (first index is the integrand).
class RoughPath {
public:
  RoughPath(SampledPath path, std::vector<Eigen::MatrixXd> step_areas, double gamma);

  const SampledPath& path() const { return path_; }
  const Grid& grid() const { return path_.grid(); }
  int dim() const { return path_.dim(); }
  int n_points() const { return path_.n_points(); }
  double gamma() const { return gamma_; }

  Eigen::VectorXd value(int i) const { return path_.value(i); }
  Eigen::VectorXd increment(int i, int j) const { return path_.increment(i, j); }

  const Eigen::MatrixXd& step_area(int k) const { return step_areas_[k]; }

  // Second-level tensor over [node(i), node(j)], i <= j. Cost O(j - i).
  Eigen::MatrixXd area(int i, int j) const;

  // sup over node pairs of |area(s,t)|_F / |t-s|^{two_gamma}.
  double area_norm(double two_gamma) const;

  // ||X||_gamma + ||area||_{2 gamma}.
  double rough_norm(double gamma) const;

  // Max over node triples s<u<t of the additivity defect
  // |area(s,t) - area(u,t) - area(s,u) - dX_{su} dX_{ut}^T|_F.
  // O(n^3); intended for validation at moderate grid sizes.
  double chen_defect() const;

  // Max over node pairs of |Sym(area(s,t)) - 0.5 dX dX^T|_F.
  double symmetry_defect() const;

  RoughPath restrict(int i0, int i1) const;

  RoughPath scaled(double a) const;  // X -> aX, area -> a^2 area

private:
  SampledPath path_;
  std::vector<Eigen::MatrixXd> step_areas_;  // n_points-1 tensors, d x d
  double gamma_;
};

// Canonical lift of a sampled path interpreted as piecewise linear: each step
// tensor is exactly 0.5 * dX dX^T.
RoughPath lift_smooth(const SampledPath& path, double gamma);

// Lift of a finer sampling onto the coarse grid obtained by keeping every
// `factor`-th node: coarse step tensors are assembled from the fine
// piecewise-linear lift. factor == 1 reduces to lift_smooth.
RoughPath lift_refined(const SampledPath& fine, int factor, double gamma);

// Translation by a bounded-variation path h on the same grid (h piecewise
// linear). Adds the cross and pure correction integrals, evaluated in closed
// form per step.
RoughPath translate(const RoughPath& rough, const SampledPath& h);

}  // namespace roughlab
