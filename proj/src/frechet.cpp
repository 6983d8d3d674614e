#include "rotsym/frechet.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace rotsym {

double resultant_length(std::span<const Rotation2> angles) {
  double c = 0.0, s = 0.0;
  for (const auto& a : angles) {
    c += std::cos(a.angle);
    s += std::sin(a.angle);
  }
  return std::sqrt(c * c + s * s) / static_cast<double>(angles.size());
}

Rotation2 frechet_mean_so2(std::span<const Rotation2> angles) {
  if (angles.empty()) throw data_error("frechet_mean_so2: empty input");
  double c = 0.0, s = 0.0;
  for (const auto& a : angles) {
    c += std::cos(a.angle);
    s += std::sin(a.angle);
  }
  const double n = static_cast<double>(angles.size());
  if (std::sqrt(c * c + s * s) / n < 1e-6) {
    throw degenerate_error("frechet_mean_so2: resultant length below 1e-6, centroid undefined");
  }
  return Rotation2(std::atan2(s, c));
}

namespace {

Eigen::Matrix3d mean_matrix(std::span<const Rotation3> rotations) {
  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  for (const auto& r : rotations) m += r.matrix();
  return m / static_cast<double>(rotations.size());
}

}  // namespace

Rotation3 frechet_mean_so3_fisher_mode(std::span<const Rotation3> rotations) {
  if (rotations.empty()) throw data_error("fisher_mode: empty input");
  const Eigen::Matrix3d m = mean_matrix(rotations);
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.singularValues()(2) < 1e-9) {
    throw degenerate_error("fisher_mode: mean matrix is near-singular, data too dispersed");
  }
  Eigen::Matrix3d u = svd.matrixU();
  Eigen::Matrix3d v = svd.matrixV();
  const double sign = (u * v.transpose()).determinant();
  if (sign < 0.0) u.col(2) *= -1.0;
  return Rotation3::from_matrix(u * v.transpose());
}

Rotation3 frechet_mean_so3_karcher(std::span<const Rotation3> rotations,
                                   const FrechetConfig& cfg, KarcherInfo* info) {
  if (rotations.empty()) throw data_error("karcher: empty input");
  if (cfg.tol <= 0.0 || cfg.max_iter < 1) throw config_error("karcher: invalid config");

  Rotation3 y;
  try {
    y = frechet_mean_so3_fisher_mode(rotations);
  } catch (const Error&) {
    y = rotations.front();
  }

  const double n = static_cast<double>(rotations.size());
  double residual = 0.0;
  for (int it = 0; it < cfg.max_iter; ++it) {
    const Rotation3 y_inv = inverse(y);
    Eigen::Vector3d t = Eigen::Vector3d::Zero();
    for (const auto& g : rotations) {
      t += so3_log(compose(y_inv, g)).v.v;
    }
    t /= n;
    residual = t.norm();
    if (info) {
      info->residual = residual;
      info->iterations = it + 1;
    }
    if (residual < cfg.tol) return y;
    y = compose(y, so3_exp(TangentVec3{t}));
  }
  throw KarcherNonConvergence(y, residual, cfg.max_iter);
}

Pose frechet_mean(std::span<const Pose> poses, const FrechetConfig& cfg) {
  if (poses.empty()) throw data_error("frechet_mean: empty input");
  const Group g = pose_group(poses.front());
  if (g == Group::SO2) {
    std::vector<Rotation2> rs;
    rs.reserve(poses.size());
    for (const auto& p : poses) rs.push_back(std::get<Rotation2>(p));
    return frechet_mean_so2(rs);
  }
  std::vector<Rotation3> rs;
  rs.reserve(poses.size());
  for (const auto& p : poses) rs.push_back(std::get<Rotation3>(p));
  if (cfg.method == MeanMethod::Karcher) return frechet_mean_so3_karcher(rs, cfg);
  return frechet_mean_so3_fisher_mode(rs);
}

}  // namespace rotsym
