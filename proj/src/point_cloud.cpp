#include "elastreg/point_cloud.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace elastreg {

PointCloud read_xyz(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open for reading: " + path);
  PointCloud cloud;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    Vec3 p;
    if (!(ls >> p.x())) continue;  // blank line
    if (!(ls >> p.y() >> p.z())) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected 'x y z'");
    }
    cloud.points.push_back(p);
  }
  cloud.validate();
  return cloud;
}

void write_xyz(const std::string& path, const PointCloud& cloud) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out.precision(17);
  for (const auto& p : cloud.points) {
    out << p.x() << " " << p.y() << " " << p.z() << "\n";
  }
}

PointCloud read_ply(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(in, line) || line.substr(0, 3) != "ply") {
    throw ConfigError(path + ": not a PLY file");
  }

  long vertex_count = -1;
  std::vector<std::string> vertex_props;
  std::string current_element;
  bool ascii = false;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (word == "format") {
      std::string fmt;
      ls >> fmt;
      ascii = (fmt == "ascii");
    } else if (word == "element") {
      std::string name;
      long count;
      ls >> name >> count;
      current_element = name;
      if (name == "vertex") vertex_count = count;
    } else if (word == "property" && current_element == "vertex") {
      std::string type, name;
      ls >> type >> name;
      vertex_props.push_back(name);
    } else if (word == "end_header") {
      break;
    }
  }
  if (!ascii) throw ConfigError(path + ": only ASCII PLY is supported");
  if (vertex_count <= 0) throw ConfigError(path + ": PLY file has no vertex element");

  const auto prop_index = [&](const std::string& name) {
    const auto it = std::find(vertex_props.begin(), vertex_props.end(), name);
    if (it == vertex_props.end()) throw ConfigError(path + ": PLY vertex lacks property " + name);
    return static_cast<int>(it - vertex_props.begin());
  };
  const int ix = prop_index("x"), iy = prop_index("y"), iz = prop_index("z");

  PointCloud cloud;
  cloud.points.reserve(vertex_count);
  std::vector<double> row(vertex_props.size());
  for (long i = 0; i < vertex_count; ++i) {
    for (double& v : row) {
      if (!(in >> v)) throw ConfigError(path + ": truncated PLY vertex data");
    }
    cloud.points.emplace_back(row[ix], row[iy], row[iz]);
  }
  cloud.validate();
  return cloud;
}

PointCloud read_point_cloud(const std::string& path) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".ply") return read_ply(path);
  return read_xyz(path);
}

}  // namespace elastreg
