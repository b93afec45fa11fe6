#include "mpsf/export.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mpsf/format.hpp"

namespace mpsf {

std::string grid_obj(const Chart& chart, const std::vector<Eigen::Vector3d>& vertices) {
  std::ostringstream out;
  for (const Eigen::Vector3d& v : vertices)
    out << "v " << format_double(v.x()) << ' ' << format_double(v.y()) << ' ' << format_double(v.z()) << '\n';
  for (int iv = 0; iv + 1 < chart.nv; ++iv)
    for (int iu = 0; iu + 1 < chart.nu; ++iu) {
      const int a = chart.index(iu, iv) + 1, b = chart.index(iu + 1, iv) + 1;
      const int c = chart.index(iu + 1, iv + 1) + 1, d = chart.index(iu, iv + 1) + 1;
      out << "f " << a << ' ' << b << ' ' << c << "\nf " << a << ' ' << c << ' ' << d << '\n';
    }
  return out.str();
}

std::vector<std::pair<std::string, std::string>> immersion_objs(const ImmersionField& im, const std::string& stem) {
  auto block = [&](int offset, int dim) {
    std::vector<Eigen::Vector3d> verts;
    verts.reserve(im.points.size());
    for (const AmbientPoint& x : im.points) {
      Eigen::Vector3d v = Eigen::Vector3d::Zero();
      v.head(dim) = x.segment(offset, dim);
      verts.push_back(v);
    }
    return grid_obj(im.chart, verts);
  };
  std::vector<std::pair<std::string, std::string>> out;
  if (im.spec.ambient_dim() <= 3) {
    out.emplace_back(stem + ".obj", block(0, im.spec.ambient_dim()));
    return out;
  }
  for (int i = 0; i < im.spec.num_factors(); ++i)
    if (im.spec.ambient_dim(i) <= 3)
      out.emplace_back(stem + "_factor" + std::to_string(i + 1) + ".obj",
                       block(im.spec.ambient_offset(i), im.spec.ambient_dim(i)));
  return out;
}

std::string immersion_csv(const ImmersionField& im) {
  std::ostringstream out;
  out << "iu,iv";
  for (int c = 0; c < im.spec.ambient_dim(); ++c) out << ",x" << c;
  out << '\n';
  for (int k = 0; k < im.chart.num_nodes(); ++k) {
    const NodeIndex n = im.chart.node(k);
    out << n.iu << ',' << n.iv;
    for (int c = 0; c < im.points[k].size(); ++c) out << ',' << format_double(im.points[k](c));
    out << '\n';
  }
  return out.str();
}

std::string kahler_csv(const Chart& chart, const std::vector<std::array<double, 2>>& c) {
  std::ostringstream out;
  out << "iu,iv,C1,C2\n";
  for (int k = 0; k < chart.num_nodes(); ++k) {
    const NodeIndex n = chart.node(k);
    out << n.iu << ',' << n.iv << ',' << format_double(c[k][0]) << ',' << format_double(c[k][1]) << '\n';
  }
  return out.str();
}

std::string classification_csv(const Chart& chart, const std::vector<SurfaceLabels>& labels) {
  std::ostringstream out;
  out << "iu,iv,labels\n";
  for (int k = 0; k < chart.num_nodes(); ++k) {
    const NodeIndex n = chart.node(k);
    out << n.iu << ',' << n.iv << ',' << labels[k].text() << '\n';
  }
  return out.str();
}

std::string parallel_frame_json(const ParallelFrame& frame) {
  std::ostringstream out;
  out << "{\"base_node\": [" << frame.base.iu << ", " << frame.base.iv << "], \"rank\": " << frame.bundle.rank()
      << ",\n \"sections\": [";
  for (size_t k = 0; k < frame.sections.size(); ++k) {
    const Matrix& s = frame.sections[k];
    out << (k ? ",\n  [" : "\n  [");
    for (int r = 0; r < s.rows(); ++r)
      for (int c = 0; c < s.cols(); ++c) out << (r || c ? ", " : "") << json_number(s(r, c));
    out << "]";
  }
  out << "\n ]}\n";
  return out.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  f << text;
  if (!f) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace mpsf
