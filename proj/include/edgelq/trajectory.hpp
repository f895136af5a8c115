#pragma once

#include <string>
#include <vector>

#include "edgelq/types.hpp"

namespace edgelq {

// Sampled time series for every node on a uniform grid. Controls are stored
// as issued at the sample time (an input issued at t reaches the plant at
// t + delay); rows beyond the issue window are zero.
struct Trajectory {
  enum class Provenance { closed_form, baseline, simulated };

  double t0 = 0.0;
  double step = 0.0;
  int count = 0;
  Provenance provenance = Provenance::simulated;

  // One matrix per node 0..N, each count x q.
  std::vector<Mat> pos;
  std::vector<Mat> vel;
  std::vector<Mat> ctrl;

  int nodes() const { return static_cast<int>(pos.size()); }
  double time(int k) const { return t0 + step * k; }

  // Control of one node at an arbitrary time, linearly interpolated between
  // samples; zero outside the grid (in particular for negative times).
  Vec control_at(int node, double t) const;
};

Trajectory make_trajectory(int nodes, int q, double t0, double step, int count,
                           Trajectory::Provenance provenance);

// Max absolute position/velocity deviation over the common grid. Throws if
// the grids differ.
double max_state_deviation(const Trajectory& a, const Trajectory& b);

const char* provenance_name(Trajectory::Provenance p);

}  // namespace edgelq
