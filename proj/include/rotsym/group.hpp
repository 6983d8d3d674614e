#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <cmath>
#include <variant>
#include <vector>

#include "rotsym/error.hpp"
#include "rotsym/rng.hpp"

namespace rotsym {

enum class Group { SO2, SO3 };

inline const char* group_name(Group g) { return g == Group::SO2 ? "so2" : "so3"; }

// ---------------------------------------------------------------------------
// SO(2)
// ---------------------------------------------------------------------------

// Wraps an angle to the canonical interval (-pi, pi].
inline double wrap_angle(double a) {
  double w = std::remainder(a, 2.0 * M_PI);
  if (w <= -M_PI) w += 2.0 * M_PI;
  return w;
}

// Planar rotation stored as a wrapped angle in (-pi, pi].
struct Rotation2 {
  double angle = 0.0;

  Rotation2() = default;
  explicit Rotation2(double a) : angle(wrap_angle(a)) {}

  static Rotation2 identity() { return Rotation2{}; }
};

inline Rotation2 compose(const Rotation2& a, const Rotation2& b) {
  return Rotation2(a.angle + b.angle);
}

inline Rotation2 inverse(const Rotation2& a) { return Rotation2(-a.angle); }

// Geodesic distance, the arc length in [0, pi].
inline double distance(const Rotation2& a, const Rotation2& b) {
  return std::abs(wrap_angle(a.angle - b.angle));
}

// ---------------------------------------------------------------------------
// SO(3)
// ---------------------------------------------------------------------------

// 3D rotation stored as a unit quaternion with a fixed hemisphere: w > 0,
// or w == 0 and the first nonzero of (x, y, z) positive. The convention
// resolves the double cover, so value equality is well-defined.
class Rotation3 {
 public:
  Rotation3() : q_(1.0, 0.0, 0.0, 0.0) {}

  static Rotation3 identity() { return Rotation3(); }

  // Normalizes and canonicalizes. Throws if the norm is too far from 1
  // to be a plausible rotation (guards wire-format loads).
  static Rotation3 from_quat(double w, double x, double y, double z);

  static Rotation3 from_matrix(const Eigen::Matrix3d& m);

  static Rotation3 about_axis(const Eigen::Vector3d& axis, double angle);

  static Rotation3 rot_x(double a) { return about_axis(Eigen::Vector3d::UnitX(), a); }
  static Rotation3 rot_y(double a) { return about_axis(Eigen::Vector3d::UnitY(), a); }
  static Rotation3 rot_z(double a) { return about_axis(Eigen::Vector3d::UnitZ(), a); }

  const Eigen::Quaterniond& quat() const { return q_; }
  Eigen::Matrix3d matrix() const { return q_.toRotationMatrix(); }

 private:
  explicit Rotation3(const Eigen::Quaterniond& q) : q_(q) { canonicalize(); }
  void canonicalize();

  Eigen::Quaterniond q_;  // (w, x, y, z), unit, hemisphere-canonical

  friend Rotation3 compose(const Rotation3&, const Rotation3&);
  friend Rotation3 inverse(const Rotation3&);
};

Rotation3 compose(const Rotation3& a, const Rotation3& b);
Rotation3 inverse(const Rotation3& a);

// Bi-invariant geodesic angle in [0, pi].
double distance(const Rotation3& a, const Rotation3& b);

// Axis-angle tangent vector at the identity, |v| <= pi.
struct TangentVec3 {
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
};

Rotation3 so3_exp(const TangentVec3& t);

struct LogResult {
  TangentVec3 v;
  // Set when the rotation angle is (numerically) pi: the log is then only
  // unique up to sign and the hemisphere tie-break picked one branch.
  bool antipodal = false;
};

LogResult so3_log(const Rotation3& r);

// ---------------------------------------------------------------------------
// Poses (tagged SO(2)/SO(3) values used by datasets and pipelines)
// ---------------------------------------------------------------------------

using Pose = std::variant<Rotation2, Rotation3>;

inline Group pose_group(const Pose& p) {
  return std::holds_alternative<Rotation2>(p) ? Group::SO2 : Group::SO3;
}

Pose compose(const Pose& a, const Pose& b);
Pose inverse(const Pose& a);
double distance(const Pose& a, const Pose& b);
Pose identity_pose(Group g);

// ---------------------------------------------------------------------------
// Point sets and the group action
// ---------------------------------------------------------------------------

// A finite labeled point set; rows are points, dim is 2 or 3.
struct PointSet {
  Eigen::MatrixXd points;   // n x dim
  std::vector<int> labels;  // size n

  int dim() const { return static_cast<int>(points.cols()); }
  int size() const { return static_cast<int>(points.rows()); }
};

PointSet apply_action(const Rotation2& g, const PointSet& x);
PointSet apply_action(const Rotation3& g, const PointSet& x);
PointSet apply_action(const Pose& g, const PointSet& x);

// ---------------------------------------------------------------------------
// Haar sampling
// ---------------------------------------------------------------------------

std::vector<Rotation2> sample_haar_so2(int n, Rng& rng);
std::vector<Rotation3> sample_haar_so3(int n, Rng& rng);

Rotation2 haar_rotation2(Rng& rng);
Rotation3 haar_rotation3(Rng& rng);
Pose haar_pose(Group g, Rng& rng);

}  // namespace rotsym
