#include "rotsym/group.hpp"

#include <algorithm>

namespace rotsym {

void Rotation3::canonicalize() {
  q_.normalize();
  const double* c = q_.coeffs().data();  // (x, y, z, w) in Eigen storage
  double w = c[3];
  bool flip = false;
  if (w < 0.0) {
    flip = true;
  } else if (w == 0.0) {
    if (c[0] != 0.0) {
      flip = c[0] < 0.0;
    } else if (c[1] != 0.0) {
      flip = c[1] < 0.0;
    } else {
      flip = c[2] < 0.0;
    }
  }
  if (flip) q_.coeffs() = -q_.coeffs();
}

Rotation3 Rotation3::from_quat(double w, double x, double y, double z) {
  double n = std::sqrt(w * w + x * x + y * y + z * z);
  if (!(std::abs(n - 1.0) < 1e-6)) {
    throw data_error("quaternion norm " + std::to_string(n) + " is not 1");
  }
  return Rotation3(Eigen::Quaterniond(w, x, y, z));
}

Rotation3 Rotation3::from_matrix(const Eigen::Matrix3d& m) {
  return Rotation3(Eigen::Quaterniond(m));
}

Rotation3 Rotation3::about_axis(const Eigen::Vector3d& axis, double angle) {
  const double n = axis.norm();
  if (!(n > 1e-12) || !std::isfinite(angle)) {
    throw data_error("about_axis: axis must be nonzero and the angle finite");
  }
  return Rotation3(Eigen::Quaterniond(Eigen::AngleAxisd(angle, axis / n)));
}

Rotation3 compose(const Rotation3& a, const Rotation3& b) {
  // Constructor renormalizes and fixes the hemisphere.
  return Rotation3(a.q_ * b.q_);
}

Rotation3 inverse(const Rotation3& a) { return Rotation3(a.q_.conjugate()); }

double distance(const Rotation3& a, const Rotation3& b) {
  // Stable form of 2 acos(|<qa, qb>|): with the quaternions aligned to a
  // nonnegative dot product, |qa - qb| = 2 sin(theta/4) and
  // |qa + qb| = 2 cos(theta/4), so theta = 4 atan2(|qa-qb|, |qa+qb|).
  // Accurate at both ends of [0, pi], unlike the acos form.
  Eigen::Vector4d qa = a.quat().coeffs(), qb = b.quat().coeffs();
  if (qa.dot(qb) < 0.0) qb = -qb;
  return 4.0 * std::atan2((qa - qb).norm(), (qa + qb).norm());
}

Rotation3 so3_exp(const TangentVec3& t) {
  const double theta = t.v.norm();
  if (theta > M_PI + 1e-9) {
    throw data_error("tangent vector norm exceeds pi");
  }
  const double half = 0.5 * theta;
  // sin(theta/2)/theta, with the Taylor branch near zero
  double k;
  if (theta < 1e-8) {
    k = 0.5 - theta * theta / 48.0;
  } else {
    k = std::sin(half) / theta;
  }
  return Rotation3::from_quat(std::cos(half), k * t.v.x(), k * t.v.y(), k * t.v.z());
}

LogResult so3_log(const Rotation3& r) {
  const Eigen::Quaterniond& q = r.quat();
  const Eigen::Vector3d vec(q.x(), q.y(), q.z());
  const double s = vec.norm();
  const double w = q.w();  // >= 0 by the hemisphere convention
  const double theta = 2.0 * std::atan2(s, w);

  LogResult out;
  if (s < 1e-12) {
    out.v.v = Eigen::Vector3d::Zero();
    return out;
  }
  out.v.v = vec * (theta / s);
  // Clamp tiny overshoot past pi from the atan2 rounding.
  double n = out.v.v.norm();
  if (n > M_PI) out.v.v *= M_PI / n;
  out.antipodal = w < 1e-9;
  return out;
}

Pose compose(const Pose& a, const Pose& b) {
  if (pose_group(a) != pose_group(b)) throw data_error("pose group mismatch in compose");
  if (auto* ra = std::get_if<Rotation2>(&a)) return compose(*ra, std::get<Rotation2>(b));
  return compose(std::get<Rotation3>(a), std::get<Rotation3>(b));
}

Pose inverse(const Pose& a) {
  if (auto* ra = std::get_if<Rotation2>(&a)) return inverse(*ra);
  return inverse(std::get<Rotation3>(a));
}

double distance(const Pose& a, const Pose& b) {
  if (pose_group(a) != pose_group(b)) throw data_error("pose group mismatch in distance");
  if (auto* ra = std::get_if<Rotation2>(&a)) return distance(*ra, std::get<Rotation2>(b));
  return distance(std::get<Rotation3>(a), std::get<Rotation3>(b));
}

Pose identity_pose(Group g) {
  if (g == Group::SO2) return Rotation2::identity();
  return Rotation3::identity();
}

PointSet apply_action(const Rotation2& g, const PointSet& x) {
  if (x.dim() != 2) throw data_error("SO(2) action on non-planar point set");
  const double c = std::cos(g.angle), s = std::sin(g.angle);
  Eigen::Matrix2d m;
  m << c, -s, s, c;
  PointSet out;
  out.points = x.points * m.transpose();
  out.labels = x.labels;
  return out;
}

PointSet apply_action(const Rotation3& g, const PointSet& x) {
  if (x.dim() != 3) throw data_error("SO(3) action on non-3D point set");
  PointSet out;
  out.points = x.points * g.matrix().transpose();
  out.labels = x.labels;
  return out;
}

PointSet apply_action(const Pose& g, const PointSet& x) {
  if (auto* r = std::get_if<Rotation2>(&g)) return apply_action(*r, x);
  return apply_action(std::get<Rotation3>(g), x);
}

Rotation2 haar_rotation2(Rng& rng) {
  return Rotation2(rng.uniform(-M_PI, M_PI));
}

Rotation3 haar_rotation3(Rng& rng) {
  // Normalized 4D standard Gaussian is uniform on S^3, hence Haar on SO(3).
  double w = rng.normal(), x = rng.normal(), y = rng.normal(), z = rng.normal();
  double n = std::sqrt(w * w + x * x + y * y + z * z);
  while (n < 1e-12) {
    w = rng.normal(); x = rng.normal(); y = rng.normal(); z = rng.normal();
    n = std::sqrt(w * w + x * x + y * y + z * z);
  }
  return Rotation3::from_quat(w / n, x / n, y / n, z / n);
}

Pose haar_pose(Group g, Rng& rng) {
  if (g == Group::SO2) return haar_rotation2(rng);
  return haar_rotation3(rng);
}

std::vector<Rotation2> sample_haar_so2(int n, Rng& rng) {
  if (n < 1) throw config_error("haar sample count must be >= 1");
  std::vector<Rotation2> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(haar_rotation2(rng));
  return out;
}

std::vector<Rotation3> sample_haar_so3(int n, Rng& rng) {
  if (n < 1) throw config_error("haar sample count must be >= 1");
  std::vector<Rotation3> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(haar_rotation3(rng));
  return out;
}

}  // namespace rotsym
