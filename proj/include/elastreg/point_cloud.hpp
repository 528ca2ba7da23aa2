#pragma once

#include "elastreg/types.hpp"

#include <string>
#include <vector>

namespace elastreg {

/// Observed intra-operative surface: an unordered set of 3D points.
struct PointCloud {
  std::vector<Vec3> points;

  void validate() const {
    if (points.empty()) throw ConfigError("point cloud is empty");
    for (const auto& p : points) {
      if (!p.allFinite()) throw ConfigError("point cloud has non-finite coordinates");
    }
  }
};

/// ASCII XYZ: one "x y z" triple per line, '#' comments allowed.
PointCloud read_xyz(const std::string& path);
void write_xyz(const std::string& path, const PointCloud& cloud);

/// Minimal ASCII PLY reader (vertex element with x, y, z properties).
PointCloud read_ply(const std::string& path);

/// Dispatch on extension: .ply goes to read_ply, everything else to read_xyz.
PointCloud read_point_cloud(const std::string& path);

}  // namespace elastreg
