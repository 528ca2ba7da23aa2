#pragma once

#include "elastreg/tet_mesh.hpp"

#include <iosfwd>
#include <string>

namespace elastreg {

// Minimal ASCII tet-mesh format, documented in the README:
//   line 1:            <vertex count>
//   next nv lines:     x y z
//   next line:         <tet count>
//   next nt lines:     i0 i1 i2 i3      (0-based vertex indices)
// '#' starts a comment; blank lines are ignored.
TetMesh read_tet(const std::string& path);
TetMesh read_tet(std::istream& in, const std::string& name);
void write_tet(const std::string& path, const TetMesh& mesh);
void write_tet(const std::string& path, const TetMesh& mesh, const VecX& displacement);

/// Legacy VTK ASCII reader for DATASET UNSTRUCTURED_GRID with cell type 10.
TetMesh read_vtk(const std::string& path);

// Region label sidecar format:
//   matching <count> followed by that many triangle ids,
//   loaded <count> followed by that many triangle ids,
//   fixed <count> followed by that many vertex ids.
// Ids are whitespace-separated and may span lines; '#' starts a comment.
RegionLabels read_labels(const std::string& path, const TetMesh& mesh);
void write_labels(const std::string& path, const RegionLabels& labels);

}  // namespace elastreg
