#include "elastreg/mesh_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace elastreg {

namespace {

// Token stream that strips '#' comments.
class TokenReader {
 public:
  TokenReader(std::istream& in, std::string name) : in_(in), name_(std::move(name)) {}

  std::string next() {
    std::string tok;
    while (in_ >> tok) {
      if (tok[0] == '#') {
        std::string rest;
        std::getline(in_, rest);
        continue;
      }
      return tok;
    }
    throw ConfigError(name_ + ": unexpected end of file");
  }

  bool try_next(std::string& tok) {
    while (in_ >> tok) {
      if (tok[0] == '#') {
        std::string rest;
        std::getline(in_, rest);
        continue;
      }
      return true;
    }
    return false;
  }

  double number() {
    const std::string tok = next();
    size_t pos = 0;
    double v;
    try {
      v = std::stod(tok, &pos);
    } catch (const std::exception&) {
      throw ConfigError(name_ + ": expected a number, got '" + tok + "'");
    }
    if (pos != tok.size()) throw ConfigError(name_ + ": malformed number '" + tok + "'");
    return v;
  }

  long integer() {
    const std::string tok = next();
    size_t pos = 0;
    long v;
    try {
      v = std::stol(tok, &pos);
    } catch (const std::exception&) {
      throw ConfigError(name_ + ": expected an integer, got '" + tok + "'");
    }
    if (pos != tok.size()) throw ConfigError(name_ + ": malformed integer '" + tok + "'");
    return v;
  }

 private:
  std::istream& in_;
  std::string name_;
};

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open for writing: " + path);
  out.precision(17);
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open for reading: " + path);
  return in;
}

}  // namespace

TetMesh read_tet(std::istream& in, const std::string& name) {
  TokenReader tok(in, name);
  const long nv = tok.integer();
  if (nv <= 0) throw ConfigError(name + ": vertex count must be positive");
  std::vector<Vec3> vertices(nv);
  for (auto& v : vertices) {
    v.x() = tok.number();
    v.y() = tok.number();
    v.z() = tok.number();
  }
  const long nt = tok.integer();
  if (nt <= 0) throw ConfigError(name + ": tet count must be positive");
  std::vector<std::array<int, 4>> tets(nt);
  for (auto& t : tets) {
    for (int& i : t) i = static_cast<int>(tok.integer());
  }
  return TetMesh(std::move(vertices), std::move(tets));
}

TetMesh read_tet(const std::string& path) {
  auto in = open_in(path);
  return read_tet(in, path);
}

static void write_tet_impl(const std::string& path, const TetMesh& mesh, const VecX* u) {
  auto out = open_out(path);
  out << mesh.num_vertices() << "\n";
  for (int v = 0; v < mesh.num_vertices(); ++v) {
    Vec3 p = u ? mesh.deformed_vertex(v, *u) : mesh.vertices()[v];
    out << p.x() << " " << p.y() << " " << p.z() << "\n";
  }
  out << mesh.num_tets() << "\n";
  for (const auto& t : mesh.tets()) {
    out << t[0] << " " << t[1] << " " << t[2] << " " << t[3] << "\n";
  }
}

void write_tet(const std::string& path, const TetMesh& mesh) { write_tet_impl(path, mesh, nullptr); }

void write_tet(const std::string& path, const TetMesh& mesh, const VecX& displacement) {
  write_tet_impl(path, mesh, &displacement);
}

TetMesh read_vtk(const std::string& path) {
  auto in = open_in(path);
  std::string line;
  // Header: version line, title line, format line.
  if (!std::getline(in, line) || line.find("vtk") == std::string::npos) {
    throw ConfigError(path + ": not a legacy VTK file");
  }
  std::getline(in, line);  // title
  if (!std::getline(in, line)) throw ConfigError(path + ": truncated VTK header");
  std::string fmt = line;
  std::transform(fmt.begin(), fmt.end(), fmt.begin(), [](unsigned char c) { return std::toupper(c); });
  if (fmt.find("ASCII") == std::string::npos) {
    throw ConfigError(path + ": only ASCII VTK files are supported");
  }

  std::vector<Vec3> vertices;
  std::vector<std::array<int, 4>> tets;
  std::vector<std::vector<int>> cells;

  std::string word;
  while (in >> word) {
    if (word == "DATASET") {
      in >> word;
      if (word != "UNSTRUCTURED_GRID") {
        throw ConfigError(path + ": expected DATASET UNSTRUCTURED_GRID, got " + word);
      }
    } else if (word == "POINTS") {
      long n;
      std::string type;
      in >> n >> type;
      if (!in || n <= 0) throw ConfigError(path + ": bad POINTS header");
      vertices.resize(n);
      for (auto& v : vertices) {
        if (!(in >> v.x() >> v.y() >> v.z())) throw ConfigError(path + ": truncated POINTS");
      }
    } else if (word == "CELLS") {
      long n, total;
      in >> n >> total;
      if (!in || n < 0) throw ConfigError(path + ": bad CELLS header");
      cells.resize(n);
      for (auto& cell : cells) {
        int k;
        if (!(in >> k) || k <= 0) throw ConfigError(path + ": truncated CELLS");
        cell.resize(k);
        for (int& idx : cell) {
          if (!(in >> idx)) throw ConfigError(path + ": truncated CELLS");
        }
      }
    } else if (word == "CELL_TYPES") {
      long n;
      in >> n;
      if (!in || n != static_cast<long>(cells.size())) {
        throw ConfigError(path + ": CELL_TYPES count does not match CELLS");
      }
      for (long i = 0; i < n; ++i) {
        int type;
        if (!(in >> type)) throw ConfigError(path + ": truncated CELL_TYPES");
        if (type != 10) throw ConfigError(path + ": only cell type 10 (tetra) is supported");
        if (cells[i].size() != 4) throw ConfigError(path + ": tetra cell without 4 vertices");
        tets.push_back({cells[i][0], cells[i][1], cells[i][2], cells[i][3]});
      }
    } else {
      // Ignore trailing sections (POINT_DATA etc).
      std::getline(in, line);
    }
  }
  if (vertices.empty() || tets.empty()) {
    throw ConfigError(path + ": VTK file contains no tetrahedral grid");
  }
  return TetMesh(std::move(vertices), std::move(tets));
}

RegionLabels read_labels(const std::string& path, const TetMesh& mesh) {
  auto in = open_in(path);
  TokenReader tok(in, path);
  RegionLabels labels;
  std::string key;
  bool seen_matching = false, seen_loaded = false, seen_fixed = false;
  while (tok.try_next(key)) {
    std::vector<int>* dst = nullptr;
    if (key == "matching") {
      dst = &labels.matching;
      seen_matching = true;
    } else if (key == "loaded") {
      dst = &labels.loaded;
      seen_loaded = true;
    } else if (key == "fixed") {
      dst = &labels.fixed_vertices;
      seen_fixed = true;
    } else {
      throw ConfigError(path + ": unknown label array '" + key + "'");
    }
    const long count = tok.integer();
    if (count < 0) throw ConfigError(path + ": negative count for '" + key + "'");
    dst->resize(count);
    for (int& id : *dst) id = static_cast<int>(tok.integer());
  }
  if (!seen_matching || !seen_loaded || !seen_fixed) {
    throw ConfigError(path + ": label file must define matching, loaded and fixed");
  }
  labels.validate(mesh);
  return labels;
}

void write_labels(const std::string& path, const RegionLabels& labels) {
  auto out = open_out(path);
  auto dump = [&out](const char* key, const std::vector<int>& ids) {
    out << key << " " << ids.size() << "\n";
    for (size_t i = 0; i < ids.size(); ++i) {
      out << ids[i] << ((i + 1) % 16 == 0 || i + 1 == ids.size() ? "\n" : " ");
    }
  };
  dump("matching", labels.matching);
  dump("loaded", labels.loaded);
  dump("fixed", labels.fixed_vertices);
}

}  // namespace elastreg
