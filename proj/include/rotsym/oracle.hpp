#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rotsym/distributions.hpp"
#include "rotsym/group.hpp"

namespace rotsym {

// Synthetic class-pose world. Each class owns a natural pose (a point set
// centered at the origin), an identity-centered symmetry model, and an
// arbitrary canonical offset. Generated observations follow
//
//   pose  = g * offset * delta        g ~ model, |angle(delta)| <= eps_pose
//   z     = anchor + N(0, eps_latent^2 I)
//   shape = action(g, natural_pose) + coordinate noise in [-eps_shape, eps_shape]
//
// so with all eps = 0 the emitted poses are exactly the model draws
// right-translated by the offset.
struct ClassSpec {
  std::string class_id;
  PointSet natural_pose;         // centered at the origin on construction
  SymmetryModel model;           // identity-centered family
  Pose canonical_offset;         // the arbitrary canonical, Gamma_arb
  Eigen::VectorXd latent_anchor;
  double eps_shape = 0.0;
  double eps_latent = 0.0;
  double eps_pose = 0.0;  // radians
};

struct Sample {
  std::string class_id;  // evaluation only; the pipeline never reads it
  Eigen::VectorXd z;
  Pose pose;
  std::optional<PointSet> shape;
};

struct Dataset {
  std::vector<Sample> samples;
  Group group = Group::SO2;
  int latent_dim = 0;
};

// Validates anchor separation (>= 10x the larger eps_latent of any pair)
// and class-id uniqueness, then generates n_per_class samples per class.
// Classes draw from independently derived seeds, so output is
// order-independent and deterministic.
Dataset generate_dataset(const std::vector<ClassSpec>& specs, int n_per_class,
                         std::uint64_t master_seed);

// JSONL, one sample per line:
//   {"class":"..","z":[..],"pose":{..},"shape":{"points":[[..],..],"labels":[..]}}
void save_dataset(const Dataset& d, const std::filesystem::path& path);
Dataset load_dataset(const std::filesystem::path& path);

// The oracle's group function: recovers the pose of an arbitrary re-posed
// shape by least-squares alignment against the class's natural pose, then
// applies the canonical offset. Realizes an exactly equivariant psi.
Pose oracle_encode_pose(const ClassSpec& spec, const PointSet& shape);

// Centers a point set at its centroid (the oracle works in SO(n) only;
// translations are removed up front).
PointSet centered(const PointSet& ps);

}  // namespace rotsym
