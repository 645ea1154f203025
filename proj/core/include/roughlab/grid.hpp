#pragma once

#include <cstdint>

namespace roughlab {

// Uniform time grid on [t0, t1] with n_points nodes (n_points >= 2).
class Grid {
public:
  Grid(double t0, double t1, int n_points);

  double t0() const { return t0_; }
  double t1() const { return t1_; }
  int n_points() const { return n_; }
  int n_steps() const { return n_ - 1; }
  double spacing() const { return dt_; }
  double length() const { return t1_ - t0_; }

  double node(int i) const { return t0_ + dt_ * i; }

  // Index of the node closest to t; throws if t is farther than half a step
  // from every node.
  int index_of(double t) const;

  bool operator==(const Grid& other) const;
  bool operator!=(const Grid& other) const { return !(*this == other); }

  // Grid with the same span and (n_points-1)*2^level + 1 nodes.
  Grid refined(int level) const;

  // Restriction to [node(i0), node(i1)].
  Grid subgrid(int i0, int i1) const;

private:
  double t0_;
  double t1_;
  int n_;
  double dt_;
};

}  // namespace roughlab
