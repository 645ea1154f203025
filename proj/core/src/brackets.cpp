#include "roughlab/brackets.hpp"

#include <Eigen/SVD>

#include "roughlab/errors.hpp"

namespace roughlab {

Eigen::VectorXd lie_bracket(const VectorField& u, const VectorField& v,
                            const Eigen::VectorXd& z) {
  return v.jacobian(z) * u(z) - u.jacobian(z) * v(z);
}

namespace {

struct Tracked {
  VectorField field;
  int fd_depth;  // finite-difference nesting needed for this field's Jacobian
};

Tracked bracket_field(const Tracked& u, const Tracked& v) {
  if (u.field.is_affine() && v.field.is_affine()) {
    const Eigen::MatrixXd& au = u.field.affine_matrix();
    const Eigen::MatrixXd& av = v.field.affine_matrix();
    // [U, V](z) = (Av bu - Au bv) + (Av Au - Au Av) z
    return {affine_field(av * u.field.affine_offset() - au * v.field.affine_offset(),
                         av * au - au * av),
            0};
  }
  const int depth = std::max(u.fd_depth, v.fd_depth) + 1;
  if (depth > 3) {
    throw NumericalError(
        "BracketLadder: bracket nesting deeper than 3 needs analytic Jacobians "
        "(finite-difference noise would dominate)");
  }
  VectorField uf = u.field;
  VectorField vf = v.field;
  auto eval = [uf, vf](const Eigen::VectorXd& z) -> Eigen::VectorXd {
    return vf.jacobian(z) * uf(z) - uf.jacobian(z) * vf(z);
  };
  return {VectorField(u.field.dim(), eval), depth};
}

}  // namespace

BracketLadder::BracketLadder(const VectorFieldSystem& vfs, int max_level) {
  if (max_level < 0) throw std::invalid_argument("BracketLadder: negative level");
  const int d = vfs.dim_noise();

  const Tracked drift{vfs.drift(), 0};
  std::vector<Tracked> members;
  for (int k = 0; k < d; ++k) members.push_back({vfs.driving(k), 0});
  levels_.emplace_back();
  for (const auto& m : members) levels_.back().push_back(m.field);

  size_t new_begin = 0;
  for (int level = 1; level <= max_level; ++level) {
    const size_t prev_size = members.size();
    for (size_t ui = new_begin; ui < prev_size; ++ui) {
      const Tracked u = members[ui];
      for (int k = 0; k <= d; ++k) {
        const Tracked& vk = (k == 0) ? drift : members[k - 1];
        Tracked b = bracket_field(u, vk);
        fd_depth_ = std::max(fd_depth_, b.fd_depth);
        members.push_back(std::move(b));
      }
    }
    new_begin = prev_size;
    levels_.emplace_back();
    for (const auto& m : members) levels_.back().push_back(m.field);
  }
}

HormanderReport hormander_rank(const VectorFieldSystem& vfs,
                               const Eigen::VectorXd& z, int max_level,
                               double rank_tol) {
  const int n = vfs.dim_state();
  BracketLadder ladder(vfs, max_level);

  HormanderReport report;
  report.precision_warning = ladder.fd_depth() >= 3;

  for (int level = 0; level <= max_level; ++level) {
    const auto& fields = ladder.level(level);
    Eigen::MatrixXd span(n, fields.size());
    for (size_t j = 0; j < fields.size(); ++j) span.col(j) = fields[j](z);

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(span);
    const Eigen::VectorXd sv = svd.singularValues();
    const double smax = sv.size() ? sv(0) : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i) rank += (sv(i) > rank_tol * smax) ? 1 : 0;

    if (level == max_level) {
      report.rank = rank;
      report.sigma_max = smax;
      report.sigma_min = sv.size() ? sv(sv.size() - 1) : 0.0;
      report.n_fields = static_cast<int>(fields.size());
    }
    if (rank == n && !report.full_rank_level) {
      report.full_rank_level = level;
      // rank cannot drop when levels grow; finish the max_level stats only
      if (level == max_level) break;
    }
  }
  if (report.full_rank_level && report.rank < n) {
    // ladder is nested, so full rank at an earlier level persists
    report.rank = n;
  }
  return report;
}

}  // namespace roughlab
