#include "edgelq/trajectory.hpp"

#include <cmath>
#include <stdexcept>

namespace edgelq {

Vec Trajectory::control_at(int node, double t) const {
  const Mat& u = ctrl.at(node);
  const int q = static_cast<int>(u.cols());
  if (count == 0 || t < t0 - 1e-12) return Vec::Zero(q);
  const double s = (t - t0) / step;
  const int k = static_cast<int>(std::floor(s));
  if (k >= count - 1) {
    return t <= t0 + step * (count - 1) + 1e-12 ? Vec(u.row(count - 1))
                                                : Vec::Zero(q);
  }
  if (k < 0) return Vec(u.row(0));
  const double w = s - k;
  return Vec(u.row(k) * (1.0 - w) + u.row(k + 1) * w);
}

Trajectory make_trajectory(int nodes, int q, double t0, double step, int count,
                           Trajectory::Provenance provenance) {
  Trajectory traj;
  traj.t0 = t0;
  traj.step = step;
  traj.count = count;
  traj.provenance = provenance;
  traj.pos.assign(nodes, Mat::Zero(count, q));
  traj.vel.assign(nodes, Mat::Zero(count, q));
  traj.ctrl.assign(nodes, Mat::Zero(count, q));
  return traj;
}

double max_state_deviation(const Trajectory& a, const Trajectory& b) {
  if (a.nodes() != b.nodes() || a.count != b.count ||
      std::abs(a.step - b.step) > 1e-15 || std::abs(a.t0 - b.t0) > 1e-15) {
    throw std::invalid_argument("max_state_deviation: grid mismatch");
  }
  double dev = 0.0;
  for (int n = 0; n < a.nodes(); ++n) {
    dev = std::max(dev, (a.pos[n] - b.pos[n]).cwiseAbs().maxCoeff());
    dev = std::max(dev, (a.vel[n] - b.vel[n]).cwiseAbs().maxCoeff());
  }
  return dev;
}

const char* provenance_name(Trajectory::Provenance p) {
  switch (p) {
    case Trajectory::Provenance::closed_form:
      return "closed_form";
    case Trajectory::Provenance::baseline:
      return "baseline";
    case Trajectory::Provenance::simulated:
      return "simulated";
  }
  return "unknown";
}

}  // namespace edgelq
