#pragma once

#include "edg/mesh.hpp"

#include <iosfwd>
#include <string>

namespace edg {

/// Plain-text mesh format:
///
///     vertices N faces M triangles K
///     v x y            (N lines, 17 significant digits)
///     t i j k region   (K lines)
///     b i j kind       (M lines, one per boundary face)
///
/// `kind` is `dirichlet` or `neumann`. Reading back a written mesh
/// reproduces coordinates bit for bit.
void write_mesh(std::ostream& out, const Mesh& mesh);
Mesh read_mesh(std::istream& in);

void save_mesh(const std::string& path, const Mesh& mesh);
Mesh load_mesh(const std::string& path);

}  // namespace edg
