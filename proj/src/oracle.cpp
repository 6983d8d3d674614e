#include "rotsym/oracle.hpp"

#include <Eigen/SVD>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>

#include "rotsym/wire.hpp"

namespace rotsym {

using nlohmann::json;

PointSet centered(const PointSet& ps) {
  PointSet out = ps;
  out.points.rowwise() -= ps.points.colwise().mean();
  return out;
}

namespace {

void validate_specs(const std::vector<ClassSpec>& specs) {
  if (specs.empty()) throw config_error("generate_dataset: no class specs");
  std::set<std::string> ids;
  const Group group = pose_group(specs.front().canonical_offset);
  const Eigen::Index dim = specs.front().latent_anchor.size();
  for (const auto& s : specs) {
    if (!ids.insert(s.class_id).second) {
      throw config_error("generate_dataset: duplicate class_id '" + s.class_id + "'");
    }
    if (pose_group(s.canonical_offset) != group || model_group(s.model) != group) {
      throw config_error("generate_dataset: mixed groups across class specs");
    }
    if (s.latent_anchor.size() != dim) {
      throw config_error("generate_dataset: mixed latent dimensions");
    }
    if (s.eps_shape < 0 || s.eps_latent < 0 || s.eps_pose < 0) {
      throw config_error("generate_dataset: negative noise scale");
    }
    const int want_dim = group == Group::SO2 ? 2 : 3;
    if (s.natural_pose.size() < 1 || s.natural_pose.dim() != want_dim) {
      throw config_error("generate_dataset: natural pose must be a non-empty " +
                         std::to_string(want_dim) + "D point set");
    }
    if (!s.natural_pose.points.allFinite()) {
      throw config_error("generate_dataset: natural pose has non-finite coordinates");
    }
  }
  for (std::size_t i = 0; i < specs.size(); ++i) {
    for (std::size_t j = i + 1; j < specs.size(); ++j) {
      const double sep = (specs[i].latent_anchor - specs[j].latent_anchor).norm();
      const double eps = std::max(specs[i].eps_latent, specs[j].eps_latent);
      if (sep < 10.0 * eps) {
        throw config_error("generate_dataset: anchors of '" + specs[i].class_id + "' and '" +
                           specs[j].class_id + "' closer than 10x eps_latent");
      }
    }
  }
}

// Random rotation with geodesic angle at most eps, symmetric about the
// identity. Realizes the bounded pose deviation omega(eps').
Pose bounded_rotation(Group group, double eps, Rng& rng) {
  if (group == Group::SO2) return Rotation2(eps * (2.0 * rng.uniform() - 1.0));
  if (eps == 0.0) return Rotation3::identity();
  Eigen::Vector3d axis = rng.normal3();
  while (axis.norm() < 1e-12) axis = rng.normal3();
  axis.normalize();
  return Rotation3::about_axis(axis, eps * rng.uniform());
}

}  // namespace

Dataset generate_dataset(const std::vector<ClassSpec>& specs, int n_per_class,
                         std::uint64_t master_seed) {
  if (n_per_class < 1) throw config_error("generate_dataset: n_per_class must be >= 1");
  validate_specs(specs);

  Dataset out;
  out.group = pose_group(specs.front().canonical_offset);
  out.latent_dim = static_cast<int>(specs.front().latent_anchor.size());
  out.samples.reserve(specs.size() * n_per_class);

  for (const auto& spec : specs) {
    Rng rng(derive_seed(master_seed, spec.class_id));
    const PointSet natural = centered(spec.natural_pose);
    const std::vector<Pose> draws = sample_poses(spec.model, n_per_class, rng);
    for (int i = 0; i < n_per_class; ++i) {
      Sample s;
      s.class_id = spec.class_id;
      const Pose& g = draws[i];
      s.pose = compose(compose(g, spec.canonical_offset),
                       bounded_rotation(out.group, spec.eps_pose, rng));
      s.z = spec.latent_anchor;
      for (Eigen::Index k = 0; k < s.z.size(); ++k) s.z(k) += spec.eps_latent * rng.normal();
      PointSet shape = apply_action(g, natural);
      for (Eigen::Index r = 0; r < shape.points.rows(); ++r) {
        for (Eigen::Index c = 0; c < shape.points.cols(); ++c) {
          shape.points(r, c) += spec.eps_shape * (2.0 * rng.uniform() - 1.0);
        }
      }
      s.shape = std::move(shape);
      out.samples.push_back(std::move(s));
    }
  }
  return out;
}

namespace {

json shape_to_json(const PointSet& ps) {
  json pts = json::array();
  for (Eigen::Index r = 0; r < ps.points.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < ps.points.cols(); ++c) row.push_back(ps.points(r, c));
    pts.push_back(std::move(row));
  }
  return json{{"points", pts}, {"labels", ps.labels}};
}

PointSet shape_from_json(const json& j) {
  const auto& pts = j.at("points");
  if (!pts.is_array() || pts.empty()) throw data_error("shape: empty point list");
  const std::size_t dim = pts[0].size();
  if (dim != 2 && dim != 3) throw data_error("shape: points must be 2D or 3D");
  PointSet ps;
  ps.points.resize((Eigen::Index)pts.size(), (Eigen::Index)dim);
  for (std::size_t r = 0; r < pts.size(); ++r) {
    if (pts[r].size() != dim) throw data_error("shape: ragged point list");
    for (std::size_t c = 0; c < dim; ++c) ps.points((Eigen::Index)r, (Eigen::Index)c) = pts[r][c].get<double>();
  }
  if (j.contains("labels")) {
    ps.labels = j.at("labels").get<std::vector<int>>();
    if (ps.labels.size() != pts.size()) throw data_error("shape: label count mismatch");
  } else {
    ps.labels.assign(pts.size(), 0);
  }
  return ps;
}

}  // namespace

void save_dataset(const Dataset& d, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw data_error("save_dataset: cannot open " + path.string());
  for (const auto& s : d.samples) {
    json line{{"class", s.class_id}, {"pose", pose_to_json(s.pose)}};
    line["z"] = std::vector<double>(s.z.data(), s.z.data() + s.z.size());
    if (s.shape) line["shape"] = shape_to_json(*s.shape);
    out << line.dump() << "\n";
  }
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw data_error("load_dataset: cannot open " + path.string());
  Dataset out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
      Sample s;
      s.class_id = j.at("class").get<std::string>();
      s.pose = pose_from_json(j.at("pose"));
      const auto zs = j.at("z").get<std::vector<double>>();
      s.z = Eigen::Map<const Eigen::VectorXd>(zs.data(), (Eigen::Index)zs.size());
      if (!s.z.allFinite()) throw data_error("non-finite embedding");
      if (j.contains("shape") && !j.at("shape").is_null()) {
        s.shape = shape_from_json(j.at("shape"));
        if (!s.shape->points.allFinite()) throw data_error("non-finite shape coordinates");
      }
      out.samples.push_back(std::move(s));
    } catch (const Error&) {
      throw data_error("load_dataset: malformed sample at line " + std::to_string(line_no) +
                       " of " + path.string());
    } catch (const json::exception& e) {
      throw data_error("load_dataset: malformed sample at line " + std::to_string(line_no) +
                       " of " + path.string() + ": " + e.what());
    }
  }
  if (out.samples.empty()) throw data_error("load_dataset: empty dataset in " + path.string());
  out.group = pose_group(out.samples.front().pose);
  out.latent_dim = static_cast<int>(out.samples.front().z.size());
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    if (pose_group(out.samples[i].pose) != out.group) {
      throw data_error("load_dataset: mixed group tags at line " + std::to_string(i + 1));
    }
    if ((int)out.samples[i].z.size() != out.latent_dim) {
      throw data_error("load_dataset: mixed latent dimensions at line " + std::to_string(i + 1));
    }
  }
  return out;
}

Pose oracle_encode_pose(const ClassSpec& spec, const PointSet& shape) {
  const PointSet natural = centered(spec.natural_pose);
  const PointSet observed = centered(shape);
  if (observed.dim() != natural.dim() || observed.size() != natural.size()) {
    throw data_error("oracle_encode_pose: shape does not match the natural pose layout");
  }
  if (natural.dim() == 2) {
    // Closed-form planar alignment: angle of the complex cross-correlation.
    double c = 0.0, s = 0.0;
    for (int i = 0; i < natural.size(); ++i) {
      const double nx = natural.points(i, 0), ny = natural.points(i, 1);
      const double ox = observed.points(i, 0), oy = observed.points(i, 1);
      c += nx * ox + ny * oy;
      s += nx * oy - ny * ox;
    }
    return compose(Pose(Rotation2(std::atan2(s, c))), spec.canonical_offset);
  }
  // Kabsch: rotation minimizing |R * natural - observed|^2.
  const Eigen::Matrix3d h = observed.points.transpose() * natural.points;
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d u = svd.matrixU();
  const Eigen::Matrix3d v = svd.matrixV();
  if ((u * v.transpose()).determinant() < 0.0) u.col(2) *= -1.0;
  return compose(Pose(Rotation3::from_matrix(u * v.transpose())), spec.canonical_offset);
}

}  // namespace rotsym
