#include "rotsym/normalize.hpp"

#include <fstream>
#include <nlohmann/json.hpp>

#include "rotsym/wire.hpp"

namespace rotsym {

using nlohmann::json;

NormalizationResult normalize_class(const Dataset& dataset, const LatentIndex& index,
                                    int x_index, const IndexConfig& cfg, FamilyTag family,
                                    const FrechetConfig& fcfg) {
  if (x_index < 0 || x_index >= (int)dataset.samples.size()) {
    throw data_error("normalize_class: sample index out of range");
  }
  if (index.size() != (int)dataset.samples.size()) {
    throw data_error("normalize_class: index/dataset size mismatch");
  }
  if (family_group(family) != dataset.group) {
    throw config_error("normalize_class: family group does not match the dataset group");
  }

  NormalizationResult out;
  out.neighbor_indices = index.query(dataset.samples[x_index].z, cfg);

  std::vector<Pose> neighbor_poses;
  neighbor_poses.reserve(out.neighbor_indices.size());
  for (int i : out.neighbor_indices) neighbor_poses.push_back(dataset.samples[i].pose);

  try {
    out.gamma_hat = frechet_mean(neighbor_poses, fcfg);
  } catch (const Error& e) {
    throw Error(e.code(), std::string("normalize_class at sample ") +
                              std::to_string(x_index) + ": " + e.what());
  }

  const Pose gamma_inv = inverse(out.gamma_hat);
  out.normalized_poses.reserve(neighbor_poses.size());
  double sq = 0.0;
  for (const auto& g : neighbor_poses) {
    out.normalized_poses.push_back(compose(g, gamma_inv));
    const double d = distance(g, out.gamma_hat);
    sq += d * d;
  }
  out.diagnostics.dispersion = sq / (double)neighbor_poses.size();

  // Residual Frechet gradient at gamma_hat: the norm of the mean log of
  // the normalized poses (circular mean angle on SO(2)).
  if (dataset.group == Group::SO2) {
    double c = 0.0, s = 0.0;
    for (const auto& p : out.normalized_poses) {
      c += std::cos(std::get<Rotation2>(p).angle);
      s += std::sin(std::get<Rotation2>(p).angle);
    }
    out.diagnostics.residual = std::abs(std::atan2(s, c));
  } else {
    Eigen::Vector3d t = Eigen::Vector3d::Zero();
    for (const auto& p : out.normalized_poses) t += so3_log(std::get<Rotation3>(p)).v.v;
    out.diagnostics.residual = (t / (double)out.normalized_poses.size()).norm();
  }

  try {
    out.theta_hat = fit(family, std::span<const Pose>(out.normalized_poses), &out.fit_info);
  } catch (const Error& e) {
    throw Error(e.code(), std::string("normalize_class at sample ") +
                              std::to_string(x_index) + ": " + e.what());
  }
  return out;
}

PseudoLabelTable build_pseudo_labels(const Dataset& dataset, const LatentIndex& index,
                                     const IndexConfig& cfg, FamilyTag family,
                                     const FrechetConfig& fcfg) {
  PseudoLabelTable table;
  table.group = dataset.group;
  table.latent_dim = dataset.latent_dim;
  table.family = family;
  table.entries.resize(dataset.samples.size());

  std::size_t failed = 0;
  std::string first_failure;
  for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
    PseudoLabelEntry& e = table.entries[i];
    e.z = dataset.samples[i].z;
    try {
      NormalizationResult r =
          normalize_class(dataset, index, (int)i, cfg, family, fcfg);
      e.gamma_hat = r.gamma_hat;
      e.theta_hat = r.theta_hat;
    } catch (const Error& err) {
      e.status = std::string("failed:") + err.what();
      if (first_failure.empty()) first_failure = err.what();
      ++failed;
    }
  }
  if (2 * failed > dataset.samples.size()) {
    throw degenerate_error("build_pseudo_labels: " + std::to_string(failed) + " of " +
                           std::to_string(dataset.samples.size()) +
                           " entries failed; first failure: " + first_failure);
  }
  return table;
}

void save_table(const PseudoLabelTable& t, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw data_error("save_table: cannot open " + path.string());
  for (const auto& e : t.entries) {
    json line;
    line["z"] = std::vector<double>(e.z.data(), e.z.data() + e.z.size());
    line["gamma_hat"] = e.gamma_hat ? pose_to_json(*e.gamma_hat) : json(nullptr);
    line["theta_hat"] = e.theta_hat ? model_to_json(*e.theta_hat) : json(nullptr);
    line["status"] = e.status;
    out << line.dump() << "\n";
  }
}

PseudoLabelTable load_table(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw data_error("load_table: cannot open " + path.string());
  PseudoLabelTable t;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      PseudoLabelEntry e;
      const auto zs = j.at("z").get<std::vector<double>>();
      e.z = Eigen::Map<const Eigen::VectorXd>(zs.data(), (Eigen::Index)zs.size());
      if (!j.at("gamma_hat").is_null()) e.gamma_hat = pose_from_json(j.at("gamma_hat"));
      if (!j.at("theta_hat").is_null()) e.theta_hat = model_from_json(j.at("theta_hat"));
      e.status = j.at("status").get<std::string>();
      t.entries.push_back(std::move(e));
    } catch (const json::exception& ex) {
      throw data_error("load_table: malformed entry at line " + std::to_string(line_no) +
                       ": " + ex.what());
    }
  }
  if (t.entries.empty()) throw data_error("load_table: empty table in " + path.string());
  t.latent_dim = (int)t.entries.front().z.size();
  for (const auto& e : t.entries) {
    if (e.ok() && e.theta_hat) {
      t.group = model_group(*e.theta_hat);
      t.family = model_family(*e.theta_hat);
      break;
    }
  }
  return t;
}

LatentIndex table_index(const PseudoLabelTable& table) {
  if (table.entries.empty()) throw data_error("table_index: empty table");
  Eigen::MatrixXd z((Eigen::Index)table.entries.size(), table.latent_dim);
  for (std::size_t i = 0; i < table.entries.size(); ++i) {
    z.row((Eigen::Index)i) = table.entries[i].z.transpose();
  }
  return LatentIndex(std::move(z));
}

namespace {

std::vector<const PseudoLabelEntry*> ok_neighbors(const PseudoLabelTable& table,
                                                  const LatentIndex& tidx,
                                                  const Eigen::VectorXd& z,
                                                  const IndexConfig& cfg) {
  std::vector<const PseudoLabelEntry*> out;
  for (int i : tidx.query(z, cfg)) {
    const PseudoLabelEntry& e = table.entries[i];
    if (e.ok()) out.push_back(&e);
  }
  if (out.empty()) {
    throw degenerate_error("predict: every table neighbor is a failed entry");
  }
  return out;
}

}  // namespace

SymmetryModel predict_theta(const PseudoLabelTable& table, const LatentIndex& tidx,
                            const Eigen::VectorXd& z, const IndexConfig& cfg) {
  const auto neigh = ok_neighbors(table, tidx, z, cfg);
  const double n = (double)neigh.size();
  switch (table.family) {
    case FamilyTag::UniformArc: {
      double acc = 0.0;
      for (const auto* e : neigh) acc += std::get<UniformArc2>(*e->theta_hat).half_width;
      return UniformArc2{acc / n};
    }
    case FamilyTag::WrappedGaussian: {
      double acc = 0.0;
      for (const auto* e : neigh) acc += std::get<WrappedGaussian2>(*e->theta_hat).sigma;
      return WrappedGaussian2{acc / n};
    }
    case FamilyTag::MatrixFisher: {
      Eigen::Matrix3d acc = Eigen::Matrix3d::Zero();
      for (const auto* e : neigh) acc += std::get<MatrixFisher3>(*e->theta_hat).F;
      return MatrixFisher3{acc / n};
    }
  }
  throw Error(ErrorCode::Internal, "predict_theta: unreachable");
}

Pose predict_gamma(const PseudoLabelTable& table, const LatentIndex& tidx,
                   const Eigen::VectorXd& z, const IndexConfig& cfg) {
  const auto neigh = ok_neighbors(table, tidx, z, cfg);
  std::vector<Pose> gammas;
  gammas.reserve(neigh.size());
  for (const auto* e : neigh) gammas.push_back(*e->gamma_hat);
  FrechetConfig fcfg;
  return frechet_mean(gammas, fcfg);
}

SymmetryModel predict_theta(const PseudoLabelTable& table, const Eigen::VectorXd& z,
                            const IndexConfig& cfg) {
  return predict_theta(table, table_index(table), z, cfg);
}

Pose predict_gamma(const PseudoLabelTable& table, const Eigen::VectorXd& z,
                   const IndexConfig& cfg) {
  return predict_gamma(table, table_index(table), z, cfg);
}

PointSet canonicalize(const Sample& sample, const PseudoLabelTable& table,
                      const IndexConfig& cfg, CanonicalDirection dir) {
  if (!sample.shape) throw data_error("canonicalize: sample carries no shape");
  const Pose lambda = predict_gamma(table, sample.z, cfg);
  const Pose g_abs = compose(sample.pose, inverse(lambda));
  if (dir == CanonicalDirection::FromNatural) {
    return apply_action(g_abs, *sample.shape);
  }
  return apply_action(inverse(g_abs), *sample.shape);
}

}  // namespace rotsym
