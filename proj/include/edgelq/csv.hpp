#pragma once

#include <string>

#include "edgelq/trajectory.hpp"

namespace edgelq {

// Writes one row per (time, node) pair, times outermost, with the header
// t,agent,p1..pq,v1..vq,u1..uq. Values are printed with %.17g so a
// round-trip through text is exact for doubles.
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

// Reads a file produced by write_trajectory_csv. The grid must be uniform
// and complete; anything else raises std::runtime_error.
Trajectory read_trajectory_csv(const std::string& path);

}  // namespace edgelq
