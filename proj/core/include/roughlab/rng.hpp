#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace roughlab {

// Derives an independent stream seed from (master, index). Replicates seeded
// this way are independent of execution order, so Monte-Carlo loops can be
// reordered or parallelized without changing results.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index);

// Deterministic Gaussian source. Uses an explicit Box-Muller transform on a
// mt19937_64 stream; the byte-level behavior is pinned by this code rather
// than by the standard library's unspecified normal_distribution.
class GaussianStream {
public:
  explicit GaussianStream(std::uint64_t seed) : engine_(seed) {}

  double next();

  // Fills a buffer with iid standard normals.
  template <typename Derived>
  void fill(Eigen::MatrixBase<Derived>& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = next();
    }
  }

  double uniform();  // U(0,1), never exactly 0

  std::mt19937_64& engine() { return engine_; }

private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace roughlab
