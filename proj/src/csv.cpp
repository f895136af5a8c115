#include "edgelq/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace edgelq {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  return fields;
}

}  // namespace

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot open for writing: " + path);
  }
  const int q = traj.nodes() > 0 ? static_cast<int>(traj.pos[0].cols()) : 0;
  out << "t,agent";
  for (int j = 1; j <= q; ++j) out << ",p" << j;
  for (int j = 1; j <= q; ++j) out << ",v" << j;
  for (int j = 1; j <= q; ++j) out << ",u" << j;
  out << "\n";
  for (int k = 0; k < traj.count; ++k) {
    const std::string t_text = format_double(traj.time(k));
    for (int node = 0; node < traj.nodes(); ++node) {
      out << t_text << ',' << node;
      for (int j = 0; j < q; ++j) {
        out << ',' << format_double(traj.pos[node](k, j));
      }
      for (int j = 0; j < q; ++j) {
        out << ',' << format_double(traj.vel[node](k, j));
      }
      for (int j = 0; j < q; ++j) {
        out << ',' << format_double(traj.ctrl[node](k, j));
      }
      out << "\n";
    }
  }
  if (!out) {
    throw std::runtime_error("write failed: " + path);
  }
}

Trajectory read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open for reading: " + path);
  }
  std::string line;
  if (!std::getline(in, line)) {
    throw std::runtime_error("empty file: " + path);
  }
  const auto header = split_line(line);
  if (header.size() < 5 || header[0] != "t" || header[1] != "agent" ||
      (header.size() - 2) % 3 != 0) {
    throw std::runtime_error("unrecognized header in " + path);
  }
  const int q = static_cast<int>(header.size() - 2) / 3;

  struct Row {
    double t;
    int node;
    std::vector<double> values;
  };
  std::vector<Row> rows;
  int max_node = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split_line(line);
    if (fields.size() != header.size()) {
      throw std::runtime_error("ragged row in " + path);
    }
    Row row;
    row.t = std::stod(fields[0]);
    row.node = std::stoi(fields[1]);
    if (row.node < 0) {
      throw std::runtime_error("negative agent id in " + path);
    }
    for (size_t i = 2; i < fields.size(); ++i) {
      row.values.push_back(std::stod(fields[i]));
    }
    max_node = std::max(max_node, row.node);
    rows.push_back(std::move(row));
  }
  if (rows.empty() || max_node < 0) {
    throw std::runtime_error("no data rows in " + path);
  }
  const int nodes = max_node + 1;
  if (rows.size() % static_cast<size_t>(nodes) != 0) {
    throw std::runtime_error("incomplete node blocks in " + path);
  }
  const int count = static_cast<int>(rows.size()) / nodes;
  const double t0 = rows.front().t;
  const double step =
      count > 1 ? (rows.back().t - t0) / (count - 1) : 0.0;

  Trajectory traj = make_trajectory(nodes, q, t0, step, count,
                                    Trajectory::Provenance::simulated);
  for (int k = 0; k < count; ++k) {
    for (int node = 0; node < nodes; ++node) {
      const Row& row = rows[static_cast<size_t>(k * nodes + node)];
      if (row.node != node) {
        throw std::runtime_error("rows out of order in " + path);
      }
      if (std::abs(row.t - traj.time(k)) > 1e-9 * std::max(1.0, row.t)) {
        throw std::runtime_error("nonuniform time grid in " + path);
      }
      for (int j = 0; j < q; ++j) {
        traj.pos[node](k, j) = row.values[static_cast<size_t>(j)];
        traj.vel[node](k, j) = row.values[static_cast<size_t>(q + j)];
        traj.ctrl[node](k, j) = row.values[static_cast<size_t>(2 * q + j)];
      }
    }
  }
  return traj;
}

}  // namespace edgelq
