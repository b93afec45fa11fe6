#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "mpsf/immersion.hpp"
#include "mpsf/s2xs2.hpp"

namespace mpsf {

// Wavefront OBJ of the chart grid with vertices p(node) (3-vectors), two
// triangles per grid cell, numbers at 17 significant digits.
std::string grid_obj(const Chart& chart, const std::vector<Eigen::Vector3d>& vertices);

// OBJ meshes of an immersion: a single "<stem>.obj" when the ambient space has
// dimension <= 3, otherwise one "<stem>_factor<i>.obj" per factor whose
// ambient block has dimension <= 3 (blocks padded with zeros to 3 coordinates).
std::vector<std::pair<std::string, std::string>> immersion_objs(const ImmersionField& im, const std::string& stem);

// "iu,iv,x0,...": one row per node, full-precision ambient coordinates.
std::string immersion_csv(const ImmersionField& im);

// "iu,iv,C1,C2" and "iu,iv,labels".
std::string kahler_csv(const Chart& chart, const std::vector<std::array<double, 2>>& c);
std::string classification_csv(const Chart& chart, const std::vector<SurfaceLabels>& labels);

// Debug dump of the section matrices, node-major, each row-major. Not a
// stable format.
std::string parallel_frame_json(const ParallelFrame& frame);

// Writes `text` to `path` verbatim (binary mode), throwing std::runtime_error
// on I/O failure.
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace mpsf
