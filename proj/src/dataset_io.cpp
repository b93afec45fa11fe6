#include "mpsf/dataset_io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "mpsf/errors.hpp"
#include "mpsf/format.hpp"

namespace mpsf {

namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key))
    throw ValidationError(key, where + " is missing \"" + std::string(key) + "\"");
  return obj.at(key);
}

double number(const json& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  throw ValidationError(field, field + " must contain only numbers");
}

int integer(const json& j, const std::string& field) {
  if (!j.is_number_integer()) throw ValidationError(field, field + " must be an integer");
  return j.get<int>();
}

// Reads `count` consecutive rows x cols matrices from a flat array.
std::vector<Matrix> read_matrices(const json& fields, const std::string& name, size_t count, int rows, int cols) {
  const json& arr = require(fields, name.c_str(), "fields");
  if (!arr.is_array()) throw ValidationError(name, name + " must be an array");
  const size_t per = static_cast<size_t>(rows) * cols;
  if (arr.size() != count * per)
    throw ValidationError(name, name + " has " + std::to_string(arr.size()) + " entries, expected " +
                                    std::to_string(count * per));
  std::vector<Matrix> out(count, Matrix(rows, cols));
  size_t k = 0;
  for (size_t m = 0; m < count; ++m)
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) out[m](r, c) = number(arr[k++], name);
  return out;
}

void write_matrices(std::ostringstream& os, const std::string& name, const std::vector<const Matrix*>& ms, bool last) {
  os << "    \"" << name << "\": [";
  bool first = true;
  for (const Matrix* m : ms)
    for (int r = 0; r < m->rows(); ++r)
      for (int c = 0; c < m->cols(); ++c) {
        if (!first) os << ",";
        first = false;
        os << format_double((*m)(r, c));
      }
  os << "]" << (last ? "\n" : ",\n");
}

}  // namespace

GeometricDataset parse_dataset(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError("document", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ValidationError("document", "dataset document must be a JSON object");
  if (integer(require(doc, "version", "document"), "version") != 1)
    throw ValidationError("version", "unsupported dataset version");

  GeometricDataset ds;
  const json& factors = require(doc, "factors", "document");
  if (!factors.is_array() || factors.empty()) throw ValidationError("factors", "factors must be a non-empty array");
  std::vector<SpaceFormFactor> list;
  for (const json& f : factors)
    list.push_back({integer(require(f, "dim", "factor"), "dim"), number(require(f, "curvature", "factor"), "curvature")});
  try {
    ds.spec = MultiproductSpec(std::move(list));
  } catch (const std::invalid_argument& e) {
    throw ValidationError("factors", e.what());
  }

  const json& chart = require(doc, "chart", "document");
  ds.chart.nu = integer(require(chart, "nu", "chart"), "nu");
  ds.chart.nv = integer(require(chart, "nv", "chart"), "nv");
  ds.chart.hu = number(require(chart, "hu", "chart"), "hu");
  ds.chart.hv = number(require(chart, "hv", "chart"), "hv");
  auto flag = [&](const char* key) {
    const json& j = require(chart, key, "chart");
    if (!j.is_boolean()) throw ValidationError(key, std::string(key) + " must be a boolean");
    return j.get<bool>();
  };
  ds.chart.periodic_u = flag("periodic_u");
  ds.chart.periodic_v = flag("periodic_v");
  if (chart.contains("u0")) ds.chart.u0 = number(chart.at("u0"), "u0");
  if (chart.contains("v0")) ds.chart.v0 = number(chart.at("v0"), "v0");
  validate_chart(ds.chart);

  ds.base_dim = integer(require(doc, "base_dim", "document"), "base_dim");
  ds.bundle_rank = integer(require(doc, "bundle_rank", "document"), "bundle_rank");
  const int n = ds.base_dim, d = ds.bundle_rank;
  if (n < 1 || d < 0) throw ValidationError("base_dim", "base_dim must be >= 1 and bundle_rank >= 0");
  if (ds.spec.product_dim() != n + d)
    throw ValidationError("factors", "sum of factor dimensions is " + std::to_string(ds.spec.product_dim()) +
                                         " but base_dim + bundle_rank is " + std::to_string(n + d));

  const json& fields = require(doc, "fields", "document");
  const size_t nodes = ds.chart.num_nodes();
  ds.g = read_matrices(fields, "g", nodes, n, n);
  const auto flat_b = read_matrices(fields, "B", nodes * d, n, n);
  ds.B.assign(nodes, {});
  for (size_t k = 0; k < nodes; ++k) ds.B[k].assign(flat_b.begin() + k * d, flat_b.begin() + (k + 1) * d);
  ds.conn_u = read_matrices(fields, "e_connection_u", nodes, d, d);
  ds.conn_v = read_matrices(fields, "e_connection_v", nodes, d, d);
  for (int i = 0; i < ds.spec.num_factors(); ++i) {
    const std::string tag = "_" + std::to_string(i + 1);
    ds.f.push_back(read_matrices(fields, "f" + tag, nodes, n, n));
    ds.h.push_back(read_matrices(fields, "h" + tag, nodes, d, n));
    ds.t.push_back(read_matrices(fields, "t" + tag, nodes, d, d));
  }
  validate_dataset(ds);
  return ds;
}

GeometricDataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_dataset(buf.str());
}

std::string dataset_to_json(const GeometricDataset& ds) {
  std::ostringstream os;
  const Chart& c = ds.chart;
  os << "{\n  \"version\": 1,\n  \"factors\": [";
  for (int i = 0; i < ds.spec.num_factors(); ++i)
    os << (i ? ", " : "") << "{\"dim\": " << ds.spec.factor(i).dim
       << ", \"curvature\": " << format_double(ds.spec.factor(i).curvature) << "}";
  os << "],\n  \"chart\": {\"nu\": " << c.nu << ", \"nv\": " << c.nv << ", \"hu\": " << format_double(c.hu)
     << ", \"hv\": " << format_double(c.hv) << ", \"periodic_u\": " << (c.periodic_u ? "true" : "false")
     << ", \"periodic_v\": " << (c.periodic_v ? "true" : "false") << ", \"u0\": " << format_double(c.u0)
     << ", \"v0\": " << format_double(c.v0) << "},\n";
  os << "  \"base_dim\": " << ds.base_dim << ",\n  \"bundle_rank\": " << ds.bundle_rank << ",\n  \"fields\": {\n";

  auto ptrs = [](const std::vector<Matrix>& v) {
    std::vector<const Matrix*> out;
    for (const auto& m : v) out.push_back(&m);
    return out;
  };
  std::vector<const Matrix*> flat_b;
  for (const auto& node : ds.B)
    for (const auto& m : node) flat_b.push_back(&m);
  write_matrices(os, "g", ptrs(ds.g), false);
  write_matrices(os, "B", flat_b, false);
  write_matrices(os, "e_connection_u", ptrs(ds.conn_u), false);
  write_matrices(os, "e_connection_v", ptrs(ds.conn_v), ds.spec.num_factors() == 0);
  for (int i = 0; i < ds.spec.num_factors(); ++i) {
    const std::string tag = "_" + std::to_string(i + 1);
    write_matrices(os, "f" + tag, ptrs(ds.f[i]), false);
    write_matrices(os, "h" + tag, ptrs(ds.h[i]), false);
    write_matrices(os, "t" + tag, ptrs(ds.t[i]), i + 1 == ds.spec.num_factors());
  }
  os << "  }\n}\n";
  return os.str();
}

void save_dataset(const GeometricDataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << dataset_to_json(ds);
}

}  // namespace mpsf
