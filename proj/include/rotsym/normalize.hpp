#pragma once

#include <filesystem>
#include <optional>

#include "rotsym/frechet.hpp"
#include "rotsym/latent_index.hpp"
#include "rotsym/metrics.hpp"

namespace rotsym {

// Canonical orientation normalization of a single neighborhood:
//   1. find the k nearest samples in the invariant space,
//   2. estimate the offset as the Frechet mean of their poses,
//   3. right-multiply every neighbor pose by the inverse offset,
//   4. fit the identity-centered symmetry family on the result.

struct Diagnostics {
  double residual = 0.0;    // Frechet gradient norm at gamma_hat
  double dispersion = 0.0;  // mean squared geodesic distance to gamma_hat
};

struct NormalizationResult {
  Pose gamma_hat;
  std::vector<Pose> normalized_poses;  // g_i * gamma_hat^-1, size k
  SymmetryModel theta_hat;
  std::vector<int> neighbor_indices;
  Diagnostics diagnostics;
  FitInfo fit_info;
};

NormalizationResult normalize_class(const Dataset& dataset, const LatentIndex& index,
                                    int x_index, const IndexConfig& cfg, FamilyTag family,
                                    const FrechetConfig& fcfg);

// ---------------------------------------------------------------------------
// Pseudo-label table (the training-set estimates driving the Theta/Lambda maps)
// ---------------------------------------------------------------------------

struct PseudoLabelEntry {
  Eigen::VectorXd z;
  std::optional<Pose> gamma_hat;
  std::optional<SymmetryModel> theta_hat;
  std::string status = "ok";  // "ok" or "failed:<reason>"

  bool ok() const { return status == "ok"; }
};

struct PseudoLabelTable {
  std::vector<PseudoLabelEntry> entries;  // one per training sample, same order
  Group group = Group::SO2;
  int latent_dim = 0;
  FamilyTag family = FamilyTag::UniformArc;
};

// normalize_class at every sample. Per-entry failures are recorded, not
// fatal; more than 50% failures aborts with a summary.
PseudoLabelTable build_pseudo_labels(const Dataset& dataset, const LatentIndex& index,
                                     const IndexConfig& cfg, FamilyTag family,
                                     const FrechetConfig& fcfg);

// JSONL: {"z":[..],"gamma_hat":{..},"theta_hat":{..},"status":"ok"}
void save_table(const PseudoLabelTable& t, const std::filesystem::path& path);
PseudoLabelTable load_table(const std::filesystem::path& path);

// The Theta map: k-NN lookup in the table embeddings, entrywise average
// of the neighbors' fitted parameters. Depends on z only.
SymmetryModel predict_theta(const PseudoLabelTable& table, const Eigen::VectorXd& z,
                            const IndexConfig& cfg);

// The Lambda map: Frechet mean of the neighbors' offset estimates.
Pose predict_gamma(const PseudoLabelTable& table, const Eigen::VectorXd& z,
                   const IndexConfig& cfg);

// ToNatural moves a sample's shape into its natural frame,
//   action((psi(x) * Lambda(x)^-1)^-1, shape);
// FromNatural applies the forward map action(psi(x) * Lambda(x)^-1, shape),
// re-posing a natural-frame shape to where the sample was observed. The
// two are exact inverses.
enum class CanonicalDirection { ToNatural, FromNatural };

PointSet canonicalize(const Sample& sample, const PseudoLabelTable& table,
                      const IndexConfig& cfg,
                      CanonicalDirection dir = CanonicalDirection::ToNatural);

// Shared scan index over the table embeddings (rebuilt lazily by the
// predictors when absent). Exposed so batch callers can reuse one.
LatentIndex table_index(const PseudoLabelTable& table);

SymmetryModel predict_theta(const PseudoLabelTable& table, const LatentIndex& tidx,
                            const Eigen::VectorXd& z, const IndexConfig& cfg);
Pose predict_gamma(const PseudoLabelTable& table, const LatentIndex& tidx,
                   const Eigen::VectorXd& z, const IndexConfig& cfg);

}  // namespace rotsym
