#include "roughlab/grid.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace roughlab {

Grid::Grid(double t0, double t1, int n_points) : t0_(t0), t1_(t1), n_(n_points) {
  if (n_points < 2) {
    throw std::invalid_argument("Grid: need at least 2 nodes, got " +
                                std::to_string(n_points));
  }
  if (!(t1 > t0)) {
    throw std::invalid_argument("Grid: t1 must exceed t0");
  }
  dt_ = (t1 - t0) / (n_points - 1);
}

int Grid::index_of(double t) const {
  const double x = (t - t0_) / dt_;
  const int i = static_cast<int>(std::lround(x));
  if (i < 0 || i >= n_ || std::abs(x - i) > 0.25) {
    throw std::out_of_range("Grid::index_of: " + std::to_string(t) +
                            " is not a grid node");
  }
  return i;
}

bool Grid::operator==(const Grid& other) const {
  return n_ == other.n_ && t0_ == other.t0_ && t1_ == other.t1_;
}

Grid Grid::refined(int level) const {
  if (level < 0) throw std::domain_error("Grid::refined: negative level");
  return Grid(t0_, t1_, (n_ - 1) * (1 << level) + 1);
}

Grid Grid::subgrid(int i0, int i1) const {
  if (i0 < 0 || i1 >= n_ || i1 <= i0) {
    throw std::out_of_range("Grid::subgrid: bad node range");
  }
  return Grid(node(i0), node(i1), i1 - i0 + 1);
}

}  // namespace roughlab
