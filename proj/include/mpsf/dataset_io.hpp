#pragma once

#include <filesystem>
#include <string>

#include "mpsf/dataset.hpp"

namespace mpsf {

// JSON dataset documents:
//   {"version": 1,
//    "factors": [{"dim", "curvature"}, ...],
//    "chart": {"nu", "nv", "hu", "hv", "periodic_u", "periodic_v", "u0", "v0"},
//    "base_dim", "bundle_rank",
//    "fields": {"g", "B", "e_connection_u", "e_connection_v", "f_1", "h_1", "t_1", ...}}
// Each field is one flat array: nodes v-outer/u-inner, then (for B) the normal
// index, then matrix entries row-major. "u0"/"v0" are optional.
GeometricDataset parse_dataset(const std::string& text);
GeometricDataset load_dataset(const std::filesystem::path& path);

std::string dataset_to_json(const GeometricDataset& ds);
void save_dataset(const GeometricDataset& ds, const std::filesystem::path& path);

}  // namespace mpsf
