#include "mpsf/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <iostream>
#include <sstream>

#include "mpsf/compat.hpp"
#include "mpsf/dataset_io.hpp"
#include "mpsf/export.hpp"
#include "mpsf/family.hpp"
#include "mpsf/fixtures.hpp"
#include "mpsf/format.hpp"
#include "mpsf/s2xs2.hpp"

namespace mpsf::cli {

namespace {

// Labels below this block norm count as vanishing in the s2xs2 classification.
constexpr double kClassifyTolerance = 1e-6;

// Problems with the command line or the input data (exit code 3).
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) parts.push_back(part);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

double to_double(const std::string& s) {
  size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v)) throw std::invalid_argument("not a number: '" + s + "'");
  return v;
}

int to_int(const std::string& s) {
  size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw std::invalid_argument("not an integer: '" + s + "'");
  return v;
}

std::string node_json(NodeIndex n) { return "[" + std::to_string(n.iu) + ", " + std::to_string(n.iv) + "]"; }

struct Source {
  GeometricDataset dataset;
  std::optional<FixtureBundle> fixture;
  std::string label;
};

Source load_source(const RunConfig& cfg, const ToleranceProfile& profile) {
  if (cfg.input && cfg.fixture) throw InputError("give either --input or --fixture, not both");
  try {
    if (cfg.input) {
      if (cfg.grid) throw InputError("--grid applies to fixtures only");
      return {load_dataset(*cfg.input), std::nullopt, cfg.input->string()};
    }
    if (cfg.fixture) {
      const auto [nu, nv] = cfg.grid.value_or(std::pair{profile.grid, profile.grid});
      FixtureBundle fb = generate_fixture(*cfg.fixture, nu, nv);
      GeometricDataset ds = fb.dataset;
      return {std::move(ds), std::move(fb), *cfg.fixture};
    }
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
  throw InputError("no dataset: give --input <file> or --fixture <name>");
}

NodeIndex base_node(const RunConfig& cfg, const Chart& chart) {
  if (!cfg.base) return default_base_node(chart);
  const NodeIndex b = *cfg.base;
  if (b.iu < 0 || b.iu >= chart.nu || b.iv < 0 || b.iv >= chart.nv)
    throw InputError("--base " + std::to_string(b.iu) + "," + std::to_string(b.iv) + " is outside the " +
                     std::to_string(chart.nu) + "x" + std::to_string(chart.nv) + " grid");
  return b;
}

bool wants(const RunConfig& cfg, const std::string& format) { return cfg.exports.count(format) > 0; }

void prepare_output(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());
}

// Validation happens inside every pipeline; surface it as an input problem.
void validate_input(const GeometricDataset& ds) {
  try {
    validate_dataset(ds);
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
}

int run_check(const RunConfig& cfg, const ToleranceProfile& profile, std::ostream& log) {
  const Source src = load_source(cfg, profile);
  validate_input(src.dataset);
  const CompatReport report = compatibility_verdict(src.dataset, profile);
  prepare_output(cfg.out);
  write_file(cfg.out / "check_report.json", report.to_json() + "\n");
  log << "check " << src.label << ": " << (report.pass() ? "pass" : "fail");
  for (const std::string& name : report.failing()) log << " [" << name << "]";
  log << "\n";
  return report.pass() ? kPass : kVerdictFail;
}

int run_integrate(const RunConfig& cfg, const ToleranceProfile& profile, std::ostream& log) {
  const Source src = load_source(cfg, profile);
  validate_input(src.dataset);
  const NodeIndex base = base_node(cfg, src.dataset.chart);
  const CompatReport compat = compatibility_verdict(src.dataset, profile);
  const Reconstruction rec =
      reconstruct(src.dataset, base, src.fixture ? &src.fixture->ground_truth.points : nullptr, profile);
  const bool pass = compat.pass() && rec.verification.pass();

  prepare_output(cfg.out);
  if (wants(cfg, "obj"))
    for (const auto& [name, text] : immersion_objs(rec.immersion, "immersion")) write_file(cfg.out / name, text);
  if (wants(cfg, "csv")) write_file(cfg.out / "immersion.csv", immersion_csv(rec.immersion));
  if (wants(cfg, "json")) {
    std::ostringstream js;
    js << "{\n  \"base_node\": " << node_json(base) << ",\n"
       << "  \"compatibility\": " << compat.to_json(2) << ",\n"
       << "  \"verification\": " << rec.verification.to_json(2) << ",\n"
       << "  \"frame\": {\"sweep_discrepancy\": " << json_number(rec.frame.sweep_discrepancy)
       << ", \"gram_drift\": " << json_number(rec.frame.gram_drift)
       << ", \"eigenbundle_drift\": " << json_number(rec.frame.eigenbundle_drift)
       << ", \"deck_mismatch_u\": " << json_number(rec.frame.deck_mismatch_u)
       << ", \"deck_mismatch_v\": " << json_number(rec.frame.deck_mismatch_v)
       << ", \"flat_closure\": " << json_number(rec.immersion.flat_closure) << "},\n";
    if (rec.alignment) js << "  \"ground_truth_alignment\": " << json_number(rec.alignment->residual) << ",\n";
    js << "  \"verdict\": \"" << (pass ? "pass" : "fail") << "\"\n}\n";
    write_file(cfg.out / "verification.json", js.str());
  }
  log << "integrate " << src.label << ": compatibility " << (compat.pass() ? "pass" : "fail") << ", verification "
      << (rec.verification.pass() ? "pass" : "fail") << "\n";
  return pass ? kPass : kVerdictFail;
}

int run_family(const RunConfig& cfg, const ToleranceProfile& profile, std::ostream& log) {
  if (cfg.thetas.empty()) throw InputError("family needs a nonempty --theta list");
  const Source src = load_source(cfg, profile);
  validate_input(src.dataset);
  const NodeIndex base = base_node(cfg, src.dataset.chart);
  std::vector<FamilyMember> members;
  try {
    members = generate_family(src.dataset, cfg.thetas, base, profile);
  } catch (const ValidationError& e) {
    throw InputError(e.what());
  }

  prepare_output(cfg.out);
  bool pass = true;
  std::ostringstream js;
  js << "{\n  \"base_node\": " << node_json(base) << ",\n  \"members\": [";
  for (size_t k = 0; k < members.size(); ++k) {
    const FamilyMember& m = members[k];
    pass = pass && m.verification.pass();
    std::vector<std::string> files;
    if (wants(cfg, "obj"))
      for (const auto& [name, text] : immersion_objs(m.immersion, "family_" + std::to_string(k))) {
        write_file(cfg.out / name, text);
        files.push_back(name);
      }
    if (wants(cfg, "csv")) {
      const std::string name = "family_" + std::to_string(k) + ".csv";
      write_file(cfg.out / name, immersion_csv(m.immersion));
      files.push_back(name);
    }
    js << (k ? ",\n" : "\n") << "    {\"index\": " << k << ", \"theta\": " << json_number(m.theta)
       << ", \"trace_residual\": " << json_number(m.trace) << ", \"files\": [";
    for (size_t f = 0; f < files.size(); ++f) js << (f ? ", " : "") << "\"" << files[f] << "\"";
    js << "],\n     \"verification\": " << m.verification.to_json(5) << "}";
  }
  js << "\n  ],\n  \"verdict\": \"" << (pass ? "pass" : "fail") << "\"\n}\n";
  write_file(cfg.out / "manifest.json", js.str());
  log << "family " << src.label << ": " << members.size() << " members, " << (pass ? "pass" : "fail") << "\n";
  return pass ? kPass : kVerdictFail;
}

std::string stats_json(const std::vector<double>& v) {
  double lo = INFINITY, hi = -INFINITY, sum = 0;
  int n = 0;
  for (double x : v) {
    if (std::isnan(x)) continue;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
    sum += x;
    ++n;
  }
  if (n == 0) return "{\"min\": \"nan\", \"max\": \"nan\", \"mean\": \"nan\"}";
  return "{\"min\": " + json_number(lo) + ", \"max\": " + json_number(hi) + ", \"mean\": " + json_number(sum / n) +
         "}";
}

std::string stat_json(const ResidualStat& s) {
  return "{\"max\": " + json_number(s.max) + ", \"argmax_node\": " + node_json(s.argmax) +
         ", \"tolerance\": " + json_number(s.tolerance) + ", \"pass\": " + (s.pass() ? "true" : "false") + "}";
}

int run_s2xs2(const RunConfig& cfg, const ToleranceProfile& profile, std::ostream& log) {
  const Source src = load_source(cfg, profile);
  validate_input(src.dataset);
  try {
    require_s2xs2(src.dataset.spec);
  } catch (const std::invalid_argument& e) {
    throw InputError(e.what());
  }
  const GeometricDataset& ds = src.dataset;
  const Reconstruction rec = reconstruct(ds, base_node(cfg, ds.chart), nullptr, profile);
  const ComplexDecomposition cd = decompose_complex(rec.immersion, ds);
  const CompatReport relations = check_complex_relations(cd, ds, profile);
  const CompatReport dictionary = check_algebraic(dictionary_dataset(cd, ds), profile);
  const S2S2Curvature curv = gauss_curvature_s2s2(cd, ds, profile);
  const auto labels = classify_surface(cd, kClassifyTolerance);
  const auto kahler = kahler_functions(cd);

  double gap = 0, normal_gap = 0;
  NodeIndex gap_node, normal_node;
  for (int p = 0; p < ds.num_nodes(); ++p) {
    const double d = std::abs(curv.k_printed[p] - curv.k_general[p]);
    if (d > gap) gap = d, gap_node = ds.chart.node(p);
    const double e = std::abs(curv.normal_printed[p] - curv.normal_predicted[p]);
    if (e > normal_gap) normal_gap = e, normal_node = ds.chart.node(p);
  }
  const bool pass = relations.pass() && dictionary.pass() && curv.codazzi.pass() && curv.ricci.pass();

  prepare_output(cfg.out);
  if (wants(cfg, "csv")) {
    write_file(cfg.out / "classification.csv", classification_csv(ds.chart, labels));
    write_file(cfg.out / "kahler.csv", kahler_csv(ds.chart, kahler));
  }
  if (wants(cfg, "json")) {
    std::ostringstream js;
    js << "{\n  \"gauss\": {\"general\": " << stats_json(curv.k_general) << ",\n            \"printed\": "
       << stats_json(curv.k_printed) << ",\n            \"max_abs_discrepancy\": " << json_number(gap)
       << ", \"argmax_node\": " << node_json(gap_node) << "},\n"
       << "  \"normal_curvature\": {\"measured\": " << stats_json(curv.normal_measured)
       << ",\n                       \"predicted\": " << stats_json(curv.normal_predicted)
       << ",\n                       \"printed\": " << stats_json(curv.normal_printed)
       << ",\n                       \"printed_max_abs_discrepancy\": " << json_number(normal_gap)
       << ", \"argmax_node\": " << node_json(normal_node) << "},\n"
       << "  \"codazzi\": " << stat_json(curv.codazzi) << ",\n"
       << "  \"codazzi_identity_gap\": " << json_number(curv.codazzi_identity_gap) << ",\n"
       << "  \"ricci\": " << stat_json(curv.ricci) << ",\n"
       << "  \"complex_relations\": " << relations.to_json(2) << ",\n"
       << "  \"dictionary_algebraic\": " << dictionary.to_json(2) << ",\n"
       << "  \"verdict\": \"" << (pass ? "pass" : "fail") << "\"\n}\n";
    write_file(cfg.out / "k_discrepancy.json", js.str());
  }
  log << "s2xs2 " << src.label << ": labels at base " << labels[ds.chart.index(rec.frame.base.iu, rec.frame.base.iv)].text()
      << ", printed-vs-general K gap " << format_double(gap) << ", " << (pass ? "pass" : "fail") << "\n";
  return pass ? kPass : kVerdictFail;
}

int run_fixtures(const RunConfig& cfg, const ToleranceProfile& profile, std::ostream& log) {
  if (cfg.input) throw InputError("fixtures does not read --input");
  std::vector<std::string> names;
  if (cfg.fixture) {
    names.push_back(*cfg.fixture);
  } else {
    for (const FixtureInfo& f : list_fixtures()) names.push_back(f.name);
  }
  prepare_output(cfg.out);
  const auto [nu, nv] = cfg.grid.value_or(std::pair{profile.grid, profile.grid});
  for (const std::string& name : names) {
    FixtureBundle fb;
    try {
      fb = generate_fixture(name, nu, nv);
    } catch (const std::exception& e) {
      throw InputError(e.what());
    }
    if (wants(cfg, "json")) write_file(cfg.out / (name + ".json"), dataset_to_json(fb.dataset));
    if (wants(cfg, "csv")) write_file(cfg.out / (name + "_ground_truth.csv"), immersion_csv(fb.ground_truth));
    if (wants(cfg, "obj"))
      for (const auto& [file, text] : immersion_objs(fb.ground_truth, name + "_ground_truth"))
        write_file(cfg.out / file, text);
    log << "fixture " << name << " (" << nu << "x" << nv << ")\n";
  }
  return kPass;
}

}  // namespace

std::vector<double> parse_theta_list(const std::string& text) {
  std::vector<double> out;
  for (const std::string& part : split(text, ',')) out.push_back(to_double(part));
  if (out.empty()) throw std::invalid_argument("empty angle list");
  return out;
}

std::pair<int, int> parse_grid(const std::string& text) {
  const auto parts = split(text, 'x');
  if (parts.size() != 2) throw std::invalid_argument("grid must look like <Nu>x<Nv>, got '" + text + "'");
  const int nu = to_int(parts[0]), nv = to_int(parts[1]);
  if (nu < 5 || nv < 5) throw std::invalid_argument("grid needs at least 5 nodes per direction");
  return {nu, nv};
}

NodeIndex parse_base(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) throw std::invalid_argument("base must look like <iu>,<iv>, got '" + text + "'");
  return {to_int(parts[0]), to_int(parts[1])};
}

int run(const RunConfig& config, std::ostream& log, std::ostream& err) {
  try {
    ToleranceProfile profile;
    try {
      profile = ToleranceProfile::from_name(config.profile);
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
    for (const std::string& f : config.exports)
      if (f != "obj" && f != "csv" && f != "json") throw InputError("unknown export format '" + f + "'");
    if (config.subcommand == "check") return run_check(config, profile, log);
    if (config.subcommand == "integrate") return run_integrate(config, profile, log);
    if (config.subcommand == "family") return run_family(config, profile, log);
    if (config.subcommand == "s2xs2") return run_s2xs2(config, profile, log);
    if (config.subcommand == "fixtures") return run_fixtures(config, profile, log);
    throw InputError("unknown subcommand '" + config.subcommand + "'");
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kInputInvalid;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Compatibility checks and reconstruction of surfaces in products of space forms"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string input, fixture, grid, base, thetas;
  std::vector<std::string> exports;

  auto common = [&](CLI::App* sub, bool dataset) {
    sub->add_option("--out", cfg.out, "output directory")->capture_default_str();
    sub->add_option("--profile", cfg.profile, "tolerance profile")
        ->check(CLI::IsMember({"default", "strict"}))
        ->capture_default_str();
    sub->add_option("--fixture", fixture, "analytic fixture name instead of --input");
    sub->add_option("--grid", grid, "fixture grid, <Nu>x<Nv>");
    sub->add_option("--export", exports, "artifact formats (obj, csv, json)")
        ->check(CLI::IsMember({"obj", "csv", "json"}))
        ->delimiter(',');
    if (dataset) {
      sub->add_option("--input", input, "dataset JSON file");
      sub->add_option("--base", base, "base node <iu>,<iv>");
    }
  };
  common(app.add_subcommand("check", "compatibility verdict (check_report.json)"), true);
  common(app.add_subcommand("integrate", "reconstruct the immersion (OBJ/CSV, verification.json)"), true);
  CLI::App* fam = app.add_subcommand("family", "associated family (OBJ per angle, manifest.json)");
  common(fam, true);
  fam->add_option("--theta", thetas, "comma-separated angles in radians")->required();
  common(app.add_subcommand("s2xs2", "complex-structure analysis on S2 x S2 (CSV, k_discrepancy.json)"), true);
  common(app.add_subcommand("fixtures", "dump fixture datasets"), false);

  try {
    app.parse(argc, argv);
    cfg.subcommand = app.get_subcommands().front()->get_name();
    if (!input.empty()) cfg.input = input;
    if (!fixture.empty()) cfg.fixture = fixture;
    if (!grid.empty()) cfg.grid = parse_grid(grid);
    if (!base.empty()) cfg.base = parse_base(base);
    if (!thetas.empty()) cfg.thetas = parse_theta_list(thetas);
    if (!exports.empty()) cfg.exports = std::set<std::string>(exports.begin(), exports.end());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kInputInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputInvalid;
  }
  return run(cfg, std::cout, std::cerr);
}

}  // namespace mpsf::cli
