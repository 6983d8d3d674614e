#include "rotsym/pipeline.hpp"

#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>

#include "rotsym/wire.hpp"
#include "toml_lite.hpp"

namespace rotsym {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

double deg2rad(double d) { return d * M_PI / 180.0; }
double rad2deg(double r) { return r * 180.0 / M_PI; }

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw data_error("cannot open " + path.string() + " for writing");
  out << text;
}

fs::path ensure_out_dir(const std::string& dir) {
  if (dir.empty()) throw config_error("output directory is required");
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw config_error("cannot create output directory " + dir + ": " + ec.message());
  return p;
}

// ---------------------------------------------------------------------------
// Preset construction
// ---------------------------------------------------------------------------

PointSet random_point_set(int n_atoms, int dim, Rng& rng) {
  PointSet ps;
  ps.points.resize(n_atoms, dim);
  for (int i = 0; i < n_atoms; ++i) {
    for (int c = 0; c < dim; ++c) ps.points(i, c) = rng.uniform(-1.0, 1.0);
  }
  ps.labels.resize(n_atoms);
  for (int i = 0; i < n_atoms; ++i) ps.labels[i] = i % 3;
  return centered(ps);
}

Eigen::VectorXd one_hot_anchor(int class_index, int dim) {
  Eigen::VectorXd z = Eigen::VectorXd::Zero(dim);
  z(class_index % dim) = 1.0 + class_index / dim;  // stays separated past dim classes
  return z;
}

ClassSpec preset_class(const std::string& id, int class_index, Group group,
                       SymmetryModel model, std::uint64_t seed, const PresetConfig& pc) {
  Rng rng(derive_seed(seed, id + "/spec"));
  ClassSpec spec;
  spec.class_id = id;
  spec.model = std::move(model);
  spec.natural_pose = random_point_set(pc.n_atoms, group == Group::SO2 ? 2 : 3, rng);
  spec.canonical_offset = haar_pose(group, rng);
  spec.latent_anchor = one_hot_anchor(class_index, pc.latent_dim);
  spec.eps_shape = pc.eps_shape;
  spec.eps_latent = pc.eps_latent;
  spec.eps_pose = pc.eps_pose;
  return spec;
}

}  // namespace

std::vector<ClassSpec> make_mnist_analog(std::uint64_t seed, const PresetConfig& pc) {
  std::vector<ClassSpec> specs;
  for (int c = 0; c < 10; ++c) {
    const double half_width = deg2rad(c < 5 ? 60.0 : 90.0);
    specs.push_back(preset_class("digit" + std::to_string(c), c, Group::SO2,
                                 UniformArc2{half_width}, seed, pc));
  }
  return specs;
}

std::vector<ClassSpec> make_fashion_analog(std::uint64_t seed, const PresetConfig& pc) {
  std::vector<ClassSpec> specs;
  for (int c = 0; c < 10; ++c) {
    const double sigma = deg2rad(c < 3 ? 0.0 : (c < 6 ? 32.0 : 64.0));
    specs.push_back(preset_class("garment" + std::to_string(c), c, Group::SO2,
                                 WrappedGaussian2{sigma}, seed, pc));
  }
  return specs;
}

std::vector<ClassSpec> make_fisher_analog(std::uint64_t seed, const PresetConfig& pc) {
  std::vector<ClassSpec> specs;
  for (int c = 0; c < 30; ++c) {
    MatrixFisher3 f;
    f.F = Eigen::Vector3d(0.001, 0.001, 0.001).asDiagonal();
    f.F(c % 3, c % 3) = 100.0;
    char id[16];
    std::snprintf(id, sizeof(id), "mol%02d", c);
    specs.push_back(preset_class(id, c, Group::SO3, f, seed, pc));
  }
  return specs;
}

// ---------------------------------------------------------------------------
// Truth files and custom specs
// ---------------------------------------------------------------------------

namespace {

json point_set_to_json(const PointSet& ps) {
  json pts = json::array();
  for (Eigen::Index r = 0; r < ps.points.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < ps.points.cols(); ++c) row.push_back(ps.points(r, c));
    pts.push_back(std::move(row));
  }
  return json{{"points", pts}, {"labels", ps.labels}};
}

PointSet point_set_from_json(const json& j) {
  const auto& pts = j.at("points");
  PointSet ps;
  ps.points.resize((Eigen::Index)pts.size(), (Eigen::Index)pts.at(0).size());
  for (std::size_t r = 0; r < pts.size(); ++r) {
    for (std::size_t c = 0; c < pts[r].size(); ++c) {
      ps.points((Eigen::Index)r, (Eigen::Index)c) = pts[r][c].get<double>();
    }
  }
  ps.labels = j.at("labels").get<std::vector<int>>();
  return ps;
}

}  // namespace

void save_truth(const TruthInfo& truth, std::uint64_t seed, const fs::path& path) {
  json classes = json::array();
  for (const auto& s : truth.specs) {
    classes.push_back(json{{"id", s.class_id},
                           {"model", model_to_json(s.model)},
                           {"offset", pose_to_json(s.canonical_offset)},
                           {"anchor", std::vector<double>(s.latent_anchor.data(),
                                                          s.latent_anchor.data() + s.latent_anchor.size())},
                           {"natural_pose", point_set_to_json(s.natural_pose)},
                           {"eps_shape", s.eps_shape},
                           {"eps_latent", s.eps_latent},
                           {"eps_pose", s.eps_pose}});
  }
  const json j{{"classes", classes}, {"n_per_class", truth.n_per_class}, {"seed", seed}};
  write_text(path, j.dump(2) + "\n");
}

TruthInfo load_truth(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw data_error("cannot open truth file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw data_error("malformed truth file " + path.string() + ": " + e.what());
  }
  TruthInfo t;
  try {
  t.n_per_class = j.at("n_per_class").get<int>();
  for (const auto& c : j.at("classes")) {
    ClassSpec s;
    s.class_id = c.at("id").get<std::string>();
    s.model = model_from_json(c.at("model"));
    s.canonical_offset = pose_from_json(c.at("offset"));
    const auto anchor = c.at("anchor").get<std::vector<double>>();
    s.latent_anchor = Eigen::Map<const Eigen::VectorXd>(anchor.data(), (Eigen::Index)anchor.size());
    s.natural_pose = point_set_from_json(c.at("natural_pose"));
    s.eps_shape = c.at("eps_shape").get<double>();
    s.eps_latent = c.at("eps_latent").get<double>();
    s.eps_pose = c.at("eps_pose").get<double>();
    t.specs.push_back(std::move(s));
  }
  } catch (const json::exception& e) {
    throw data_error("malformed truth file " + path.string() + ": " + e.what());
  }
  return t;
}

namespace {

[[noreturn]] void spec_fail(const std::string& origin, const std::string& field,
                            const std::string& msg) {
  throw config_error(origin + ": " + field + ": " + msg);
}

// `where` is the diagnostic path prefix ("class[2]"); `key` is the key.
double get_number(const json& j, const std::string& origin, const std::string& where,
                  const std::string& key, std::optional<double> fallback = std::nullopt) {
  const std::string path = where.empty() ? key : where + "." + key;
  if (!j.contains(key)) {
    if (fallback) return *fallback;
    spec_fail(origin, path, "missing");
  }
  if (!j.at(key).is_number()) spec_fail(origin, path, "must be a number");
  return j.at(key).get<double>();
}

SymmetryModel parse_spec_model(const json& c, const std::string& origin,
                               const std::string& where, Group group) {
  if (!c.contains("family")) spec_fail(origin, where + ".family", "missing");
  const FamilyTag family = family_from_name(c.at("family").get<std::string>());
  if (family_group(family) != group) {
    spec_fail(origin, where + ".family", "family does not match the file-level group");
  }
  switch (family) {
    case FamilyTag::UniformArc: {
      const double a = deg2rad(get_number(c, origin, where, "half_width_deg"));
      if (a <= 0.0 || a > M_PI + 1e-12) {
        spec_fail(origin, where + ".half_width_deg", "must be in (0, 180]");
      }
      return UniformArc2{std::min(a, M_PI)};
    }
    case FamilyTag::WrappedGaussian: {
      const double s = deg2rad(get_number(c, origin, where, "sigma_deg"));
      if (s < 0.0) spec_fail(origin, where + ".sigma_deg", "must be >= 0");
      return WrappedGaussian2{s};
    }
    case FamilyTag::MatrixFisher: {
      if (!c.contains("F")) spec_fail(origin, where + ".F", "missing");
      const auto& rows = c.at("F");
      if (!rows.is_array() || rows.size() != 3) spec_fail(origin, where + ".F", "must be 3x3");
      MatrixFisher3 f;
      for (int i = 0; i < 3; ++i) {
        if (!rows[i].is_array() || rows[i].size() != 3) spec_fail(origin, where + ".F", "must be 3x3");
        for (int k = 0; k < 3; ++k) f.F(i, k) = rows[i][k].get<double>();
      }
      return f;
    }
  }
  spec_fail(origin, where, "unreachable");
}

}  // namespace

std::vector<ClassSpec> load_class_specs_toml(const fs::path& path, std::uint64_t seed,
                                             int* n_per_class_out) {
  const json doc = parse_toml_file(path);
  const std::string origin = path.string();
  if (!doc.contains("group")) spec_fail(origin, "group", "missing (\"so2\" or \"so3\")");
  const std::string group_str = doc.at("group").get<std::string>();
  if (group_str != "so2" && group_str != "so3") spec_fail(origin, "group", "must be so2 or so3");
  const Group group = group_str == "so2" ? Group::SO2 : Group::SO3;
  const int latent_dim = (int)get_number(doc, origin, "", "latent_dim", 32.0);
  if (latent_dim < 1) spec_fail(origin, "latent_dim", "must be >= 1");
  if (n_per_class_out) {
    *n_per_class_out = (int)get_number(doc, origin, "", "n_per_class", 500.0);
  }

  if (!doc.contains("class") || !doc.at("class").is_array() || doc.at("class").empty()) {
    spec_fail(origin, "class", "at least one [[class]] block is required");
  }
  std::vector<ClassSpec> specs;
  int index = 0;
  try {
  for (const auto& c : doc.at("class")) {
    const std::string where = "class[" + std::to_string(index) + "]";
    if (!c.contains("id")) spec_fail(origin, where + ".id", "missing");
    ClassSpec spec;
    spec.class_id = c.at("id").get<std::string>();
    Rng rng(derive_seed(seed, spec.class_id + "/spec"));
    spec.model = parse_spec_model(c, origin, where, group);

    const int n_atoms = (int)get_number(c, origin, where, "n_atoms", 8.0);
    if (n_atoms < 1) spec_fail(origin, where + ".n_atoms", "must be >= 1");
    spec.natural_pose = random_point_set(n_atoms, group == Group::SO2 ? 2 : 3, rng);

    if (group == Group::SO2 && c.contains("offset_deg")) {
      spec.canonical_offset = Rotation2(deg2rad(c.at("offset_deg").get<double>()));
    } else if (group == Group::SO3 && c.contains("offset_quat")) {
      const auto& q = c.at("offset_quat");
      if (!q.is_array() || q.size() != 4) spec_fail(origin, where + ".offset_quat", "must be [w,x,y,z]");
      spec.canonical_offset = Rotation3::from_quat(q[0].get<double>(), q[1].get<double>(),
                                                   q[2].get<double>(), q[3].get<double>());
    } else {
      spec.canonical_offset = haar_pose(group, rng);
    }

    if (c.contains("anchor")) {
      const auto a = c.at("anchor").get<std::vector<double>>();
      if ((int)a.size() != latent_dim) spec_fail(origin, where + ".anchor", "wrong dimension");
      spec.latent_anchor = Eigen::Map<const Eigen::VectorXd>(a.data(), (Eigen::Index)a.size());
    } else {
      spec.latent_anchor = one_hot_anchor(index, latent_dim);
    }
    spec.eps_shape = get_number(c, origin, where, "eps_shape", 0.0);
    spec.eps_latent = get_number(c, origin, where, "eps_latent", 0.02);
    spec.eps_pose = get_number(c, origin, where, "eps_pose", 0.0);
    specs.push_back(std::move(spec));
    ++index;
  }
  } catch (const json::exception& e) {
    throw config_error(origin + ": class[" + std::to_string(index) + "]: " + e.what());
  }
  return specs;
}

// ---------------------------------------------------------------------------
// cmd_gen
// ---------------------------------------------------------------------------

namespace {

struct GenOverrides {
  std::optional<int> n_per_class, latent_dim, n_atoms;
  std::optional<double> eps_pose, eps_latent, eps_shape;
};

GenOverrides parse_gen_overrides(const std::string& config_path) {
  GenOverrides o;
  if (config_path.empty()) return o;
  const json cfg = parse_toml_file(config_path);
  auto get_int = [&](const char* key) -> std::optional<int> {
    if (!cfg.contains(key)) return std::nullopt;
    return cfg.at(key).get<int>();
  };
  auto get_double = [&](const char* key) -> std::optional<double> {
    if (!cfg.contains(key)) return std::nullopt;
    return cfg.at(key).get<double>();
  };
  try {
    o.n_per_class = get_int("n_per_class");
    o.latent_dim = get_int("latent_dim");
    o.n_atoms = get_int("n_atoms");
    o.eps_pose = get_double("eps_pose");
    o.eps_latent = get_double("eps_latent");
    o.eps_shape = get_double("eps_shape");
  } catch (const json::exception& e) {
    throw config_error(config_path + ": " + e.what());
  }
  return o;
}

}  // namespace

std::string cmd_gen(const GenOptions& opts) {
  const fs::path out_dir = ensure_out_dir(opts.out_dir);
  const GenOverrides ov = parse_gen_overrides(opts.config_path);

  PresetConfig pc;
  if (opts.experiment == "fisher_analog") pc.n_per_class = 64;
  if (ov.n_per_class) pc.n_per_class = *ov.n_per_class;
  if (ov.latent_dim) pc.latent_dim = *ov.latent_dim;
  if (ov.n_atoms) pc.n_atoms = *ov.n_atoms;
  if (ov.eps_pose) pc.eps_pose = *ov.eps_pose;
  if (ov.eps_latent) pc.eps_latent = *ov.eps_latent;
  if (ov.eps_shape) pc.eps_shape = *ov.eps_shape;

  TruthInfo truth;
  truth.n_per_class = pc.n_per_class;
  if (opts.experiment == "mnist_analog") {
    truth.specs = make_mnist_analog(opts.seed, pc);
  } else if (opts.experiment == "fashion_analog") {
    truth.specs = make_fashion_analog(opts.seed, pc);
  } else if (opts.experiment == "fisher_analog") {
    truth.specs = make_fisher_analog(opts.seed, pc);
  } else if (opts.experiment == "custom") {
    if (opts.spec_path.empty()) throw config_error("custom experiment requires a spec file");
    int n_per_class = 0;
    truth.specs = load_class_specs_toml(opts.spec_path, opts.seed, &n_per_class);
    truth.n_per_class = ov.n_per_class ? *ov.n_per_class : n_per_class;
  } else {
    throw config_error("unknown experiment '" + opts.experiment + "'");
  }

  const Dataset dataset = generate_dataset(truth.specs, truth.n_per_class, opts.seed);
  save_dataset(dataset, out_dir / "dataset.jsonl");
  save_truth(truth, opts.seed, out_dir / "truth.json");

  return "gen experiment=" + opts.experiment + " classes=" + std::to_string(truth.specs.size()) +
         " samples=" + std::to_string(dataset.samples.size()) + " out=" +
         (out_dir / "dataset.jsonl").string();
}

// ---------------------------------------------------------------------------
// Shared run-option resolution
// ---------------------------------------------------------------------------

namespace {

struct Resolved {
  Dataset dataset;
  IndexConfig cfg;
  FamilyTag family = FamilyTag::UniformArc;
  int bins = 0;
};

Resolved resolve_run(const RunOptions& opts) {
  if (opts.data_path.empty()) throw config_error("a dataset file is required");
  Resolved r;
  r.dataset = load_dataset(opts.data_path);

  std::optional<int> cfg_k;
  std::optional<Metric> cfg_metric;
  std::optional<FamilyTag> cfg_family;
  std::optional<int> cfg_bins;
  if (!opts.config_path.empty()) {
    const json cfg = parse_toml_file(opts.config_path);
    try {
      if (cfg.contains("k")) cfg_k = cfg.at("k").get<int>();
      if (cfg.contains("metric")) cfg_metric = metric_from_name(cfg.at("metric").get<std::string>());
      if (cfg.contains("family")) cfg_family = family_from_name(cfg.at("family").get<std::string>());
      if (cfg.contains("bins")) cfg_bins = cfg.at("bins").get<int>();
    } catch (const json::exception& e) {
      throw config_error(opts.config_path + ": " + e.what());
    }
  }

  r.cfg.k = opts.k > 0 ? opts.k : cfg_k.value_or(25);
  if (r.cfg.k < 1) throw config_error("k must be >= 1");
  r.cfg.metric = opts.metric ? *opts.metric : cfg_metric.value_or(Metric::Cosine);
  const FamilyTag default_family =
      r.dataset.group == Group::SO2 ? FamilyTag::UniformArc : FamilyTag::MatrixFisher;
  r.family = opts.family ? *opts.family : cfg_family.value_or(default_family);
  if (family_group(r.family) != r.dataset.group) {
    throw config_error(std::string("family ") + family_name(r.family) +
                       " does not match the dataset group " + group_name(r.dataset.group));
  }
  r.bins = cfg_bins.value_or(r.dataset.group == Group::SO2 ? 72 : 36);
  return r;
}

std::vector<Pose> own_normalized_poses(const Dataset& d, const PseudoLabelTable& t,
                                       std::vector<std::size_t>* kept = nullptr) {
  std::vector<Pose> out;
  for (std::size_t i = 0; i < d.samples.size(); ++i) {
    if (!t.entries[i].ok()) continue;
    out.push_back(compose(d.samples[i].pose, inverse(*t.entries[i].gamma_hat)));
    if (kept) kept->push_back(i);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// cmd_normalize
// ---------------------------------------------------------------------------

std::string cmd_normalize(const RunOptions& opts) {
  const fs::path out_dir = ensure_out_dir(opts.out_dir);
  Resolved r = resolve_run(opts);
  const LatentIndex index(r.dataset);
  FrechetConfig fcfg;

  const PseudoLabelTable table = build_pseudo_labels(r.dataset, index, r.cfg, r.family, fcfg);
  save_table(table, out_dir / "table.jsonl");

  std::size_t failed = 0;
  for (const auto& e : table.entries) failed += e.ok() ? 0 : 1;

  std::vector<Pose> relative;
  relative.reserve(r.dataset.samples.size());
  for (const auto& s : r.dataset.samples) relative.push_back(s.pose);
  const std::vector<Pose> normalized = own_normalized_poses(r.dataset, table);
  write_histogram_csv(pose_histogram(relative, r.bins), (out_dir / "hist_relative.csv").string());
  write_histogram_csv(pose_histogram(normalized, r.bins), (out_dir / "hist_normalized.csv").string());

  const json report{{"n_samples", r.dataset.samples.size()},
                    {"n_failed", failed},
                    {"k", r.cfg.k},
                    {"metric", metric_name(r.cfg.metric)},
                    {"family", family_name(r.family)},
                    {"group", group_name(r.dataset.group)}};
  write_text(out_dir / "normalize_report.json", report.dump(2) + "\n");

  return "normalize n=" + std::to_string(r.dataset.samples.size()) +
         " failed=" + std::to_string(failed) + " family=" + family_name(r.family) +
         " k=" + std::to_string(r.cfg.k) + " out=" + (out_dir / "table.jsonl").string();
}

// ---------------------------------------------------------------------------
// cmd_estimate
// ---------------------------------------------------------------------------

std::string cmd_estimate(const RunOptions& opts) {
  const fs::path out_dir = ensure_out_dir(opts.out_dir);
  Resolved r = resolve_run(opts);
  if (opts.table_path.empty()) throw config_error("estimate requires a table file");
  const PseudoLabelTable table = load_table(opts.table_path);
  if (table.group != r.dataset.group) {
    throw config_error("table group does not match the dataset group");
  }
  const LatentIndex tidx = table_index(table);

  std::ofstream lines(out_dir / "estimates.jsonl");
  if (!lines) throw data_error("cannot open estimates.jsonl for writing");
  std::size_t failed = 0;
  std::optional<SymmetryModel> theta_sum;
  for (std::size_t i = 0; i < r.dataset.samples.size(); ++i) {
    json line{{"index", i}};
    try {
      const SymmetryModel theta = predict_theta(table, tidx, r.dataset.samples[i].z, r.cfg);
      const Pose gamma = predict_gamma(table, tidx, r.dataset.samples[i].z, r.cfg);
      line["theta"] = model_to_json(theta);
      line["gamma"] = pose_to_json(gamma);
      line["status"] = "ok";
      if (!theta_sum) {
        theta_sum = theta;
      } else if (const auto* u = std::get_if<UniformArc2>(&theta)) {
        std::get<UniformArc2>(*theta_sum).half_width += u->half_width;
      } else if (const auto* w = std::get_if<WrappedGaussian2>(&theta)) {
        std::get<WrappedGaussian2>(*theta_sum).sigma += w->sigma;
      } else {
        std::get<MatrixFisher3>(*theta_sum).F += std::get<MatrixFisher3>(theta).F;
      }
    } catch (const Error& e) {
      line["status"] = std::string("failed:") + e.what();
      ++failed;
    }
    lines << line.dump() << "\n";
  }

  json report{{"n_samples", r.dataset.samples.size()},
              {"n_failed", failed},
              {"k", r.cfg.k},
              {"family", family_name(table.family)}};
  const std::size_t ok_count = r.dataset.samples.size() - failed;
  if (theta_sum && ok_count > 0) {
    const double n = (double)ok_count;
    if (auto* u = std::get_if<UniformArc2>(&*theta_sum)) u->half_width /= n;
    if (auto* w = std::get_if<WrappedGaussian2>(&*theta_sum)) w->sigma /= n;
    if (auto* f = std::get_if<MatrixFisher3>(&*theta_sum)) f->F /= n;
    report["theta_mean"] = model_to_json(*theta_sum);
  }
  write_text(out_dir / "estimate_report.json", report.dump(2) + "\n");

  return "estimate n=" + std::to_string(r.dataset.samples.size()) +
         " failed=" + std::to_string(failed) + " out=" + (out_dir / "estimates.jsonl").string();
}

// ---------------------------------------------------------------------------
// cmd_eval
// ---------------------------------------------------------------------------

namespace {

// Class-level aggregation of per-sample estimates: entrywise average for
// theta, Frechet mean for gamma.
struct ClassAggregate {
  std::vector<std::size_t> sample_indices;
  std::vector<Pose> gammas;
  std::vector<SymmetryModel> thetas;
  std::vector<Pose> normalized;  // own pose times own inverse offset
};

SymmetryModel average_models(const std::vector<SymmetryModel>& ms) {
  const double n = (double)ms.size();
  if (const auto* u0 = std::get_if<UniformArc2>(&ms.front())) {
    (void)u0;
    double acc = 0.0;
    for (const auto& m : ms) acc += std::get<UniformArc2>(m).half_width;
    return UniformArc2{acc / n};
  }
  if (std::holds_alternative<WrappedGaussian2>(ms.front())) {
    double acc = 0.0;
    for (const auto& m : ms) acc += std::get<WrappedGaussian2>(m).sigma;
    return WrappedGaussian2{acc / n};
  }
  Eigen::Matrix3d acc = Eigen::Matrix3d::Zero();
  for (const auto& m : ms) acc += std::get<MatrixFisher3>(m).F;
  return MatrixFisher3{acc / n};
}

}  // namespace

std::string cmd_eval(const RunOptions& opts) {
  const fs::path out_dir = ensure_out_dir(opts.out_dir);
  Resolved r = resolve_run(opts);
  if (opts.table_path.empty()) throw config_error("eval requires a table file");
  if (opts.truth_path.empty()) throw config_error("eval requires a truth file");
  const PseudoLabelTable table = load_table(opts.table_path);
  if (table.entries.size() != r.dataset.samples.size()) {
    throw data_error("eval: table/dataset row count mismatch");
  }
  const TruthInfo truth = load_truth(opts.truth_path);

  std::map<std::string, const ClassSpec*> by_id;
  for (const auto& s : truth.specs) by_id[s.class_id] = &s;

  std::map<std::string, ClassAggregate> agg;
  for (std::size_t i = 0; i < r.dataset.samples.size(); ++i) {
    const Sample& s = r.dataset.samples[i];
    if (!by_id.count(s.class_id)) {
      throw data_error("eval: dataset class '" + s.class_id + "' missing from the truth file");
    }
    ClassAggregate& a = agg[s.class_id];
    a.sample_indices.push_back(i);
    const PseudoLabelEntry& e = table.entries[i];
    if (e.ok()) {
      a.gammas.push_back(*e.gamma_hat);
      a.thetas.push_back(*e.theta_hat);
      a.normalized.push_back(compose(s.pose, inverse(*e.gamma_hat)));
    }
  }

  EvalReport report;
  double theta_sum = 0.0, theta_sq = 0.0, gamma_sum = 0.0, w_sum = 0.0;
  std::size_t ok_classes = 0;
  for (auto& [class_id, a] : agg) {
    const ClassSpec& spec = *by_id.at(class_id);
    ClassReport cr;
    cr.class_id = class_id;
    cr.n = (int)a.sample_indices.size();
    if (a.thetas.empty()) {
      cr.status = "failed:no usable table entries";
      report.classes.push_back(cr);
      continue;
    }
    const SymmetryModel theta_hat = average_models(a.thetas);
    cr.theta_err = theta_error(theta_hat, spec.model);
    FrechetConfig fcfg;
    const Pose gamma_hat = frechet_mean(a.gammas, fcfg);
    cr.gamma_err_deg = rad2deg(distance(gamma_hat, spec.canonical_offset));

    // Empirical recovered distribution vs an equal-size reference sample
    // drawn from the true identity-centered model.
    const std::size_t cap = r.dataset.group == Group::SO3 ? 512 : 2000;
    std::vector<Pose> recovered = a.normalized;
    if (recovered.size() > cap) recovered.resize(cap);
    Rng ref_rng(derive_seed(opts.seed, class_id + "/ref"));
    const std::vector<Pose> reference =
        sample_poses(spec.model, (int)recovered.size(), ref_rng);
    cr.w1 = wasserstein_poses(recovered, reference);

    report.classes.push_back(cr);
    theta_sum += cr.theta_err;
    theta_sq += cr.theta_err * cr.theta_err;
    gamma_sum += cr.gamma_err_deg;
    w_sum += cr.w1;
    ++ok_classes;
  }
  if (ok_classes > 0) {
    report.theta_mae = theta_sum / (double)ok_classes;
    report.theta_mse = theta_sq / (double)ok_classes;
    report.gamma_mae_deg = gamma_sum / (double)ok_classes;
    report.mean_w1 = w_sum / (double)ok_classes;
  }

  json jclasses = json::array();
  for (const auto& c : report.classes) {
    jclasses.push_back(json{{"class", c.class_id},
                            {"n", c.n},
                            {"w1", c.w1},
                            {"theta_error", c.theta_err},
                            {"gamma_error_deg", c.gamma_err_deg},
                            {"status", c.status}});
  }
  const json jreport{{"classes", jclasses},
                     {"theta_mae", report.theta_mae},
                     {"theta_mse", report.theta_mse},
                     {"gamma_mae_deg", report.gamma_mae_deg},
                     {"mean_w1", report.mean_w1},
                     {"family", family_name(table.family)}};
  write_text(out_dir / "eval_report.json", jreport.dump(2) + "\n");

  std::vector<Pose> relative;
  relative.reserve(r.dataset.samples.size());
  for (const auto& s : r.dataset.samples) relative.push_back(s.pose);
  const std::vector<Pose> normalized = own_normalized_poses(r.dataset, table);
  write_histogram_csv(pose_histogram(relative, r.bins), (out_dir / "hist_relative.csv").string());
  write_histogram_csv(pose_histogram(normalized, r.bins), (out_dir / "hist_normalized.csv").string());

  return "eval classes=" + std::to_string(report.classes.size()) +
         " theta_mae=" + fmt("%.6g", report.theta_mae) +
         " gamma_mae_deg=" + fmt("%.6g", report.gamma_mae_deg) +
         " mean_w=" + fmt("%.6g", report.mean_w1) +
         " out=" + (out_dir / "eval_report.json").string();
}

// ---------------------------------------------------------------------------
// cmd_ood
// ---------------------------------------------------------------------------

std::string cmd_ood(const RunOptions& opts) {
  const fs::path out_dir = ensure_out_dir(opts.out_dir);
  Resolved r = resolve_run(opts);
  if (opts.table_path.empty()) throw config_error("ood requires a table file");
  const PseudoLabelTable table = load_table(opts.table_path);
  if (table.group != r.dataset.group) {
    throw config_error("table group does not match the dataset group");
  }

  const Dataset negatives = make_haar_negatives(r.dataset, opts.seed);
  const OodEval eval = evaluate_ood(r.dataset, negatives, table, r.cfg);
  write_scores_csv(eval, r.dataset, negatives, (out_dir / "ood_scores.csv").string());
  const json report{{"auc", eval.auc},
                    {"n_in", r.dataset.samples.size()},
                    {"n_out", negatives.samples.size()},
                    {"k", r.cfg.k}};
  write_text(out_dir / "ood_report.json", report.dump(2) + "\n");

  return "ood auc=" + fmt("%.6g", eval.auc) + " n_in=" + std::to_string(r.dataset.samples.size()) +
         " n_out=" + std::to_string(negatives.samples.size()) +
         " out=" + (out_dir / "ood_scores.csv").string();
}

// ---------------------------------------------------------------------------
// cmd_frechet
// ---------------------------------------------------------------------------

std::string cmd_frechet(const FrechetOptions& opts) {
  if (opts.poses_path.empty()) throw config_error("frechet requires a pose file");
  std::ifstream in(opts.poses_path);
  if (!in) throw data_error("cannot open pose file " + opts.poses_path);
  std::vector<Pose> poses;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      poses.push_back(pose_from_json(json::parse(line)));
    } catch (const json::exception& e) {
      throw data_error("pose file line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (poses.empty()) throw data_error("pose file is empty");

  FrechetConfig fcfg;
  std::string method = opts.method;
  if (method == "auto") {
    method = pose_group(poses.front()) == Group::SO2 ? "circular" : "fisher_mode";
  }
  if (method == "karcher") {
    fcfg.method = MeanMethod::Karcher;
  } else if (method == "fisher_mode") {
    fcfg.method = MeanMethod::FisherMode;
  } else if (method != "circular") {
    throw config_error("unknown method '" + opts.method + "'");
  }
  if (pose_group(poses.front()) == Group::SO2 && method != "circular") {
    throw config_error("method '" + method + "' applies to SO(3) pose files");
  }
  const Pose mean = frechet_mean(poses, fcfg);
  return "frechet n=" + std::to_string(poses.size()) + " method=" + method +
         " mean=" + pose_to_json(mean).dump();
}

}  // namespace rotsym
