#pragma once

#include <string>
#include <vector>

#include "cppm/types.hpp"

namespace cppm {

/// Per-point output fields at one instant.
struct Snapshot {
  long step = 0;
  double time = 0.0;
  std::vector<Index> id;
  std::vector<Vec2> X, u, v;
  std::vector<double> omega;
  std::vector<Mat2> eps;
  std::vector<double> eq_plastic_shear;
  std::vector<double> plastic_volume;
  std::vector<double> eps_hat;
  std::vector<double> damage;
  std::vector<double> second_order_work;

  Index size() const { return id.size(); }
  void resize(Index n);
};

/// Column names of the snapshot CSV, in order.
const std::vector<std::string>& snapshot_columns();

}  // namespace cppm
