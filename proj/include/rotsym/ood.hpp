#pragma once

#include "rotsym/normalize.hpp"

namespace rotsym {

// Out-of-distribution pose detection: an input's absolute pose is its
// observed pose expressed relative to the predicted natural frame,
// g_abs = psi(x) * Lambda(x)^-1, and the log-likelihood of g_abs under
// the predicted symmetry model is the anomaly score.

struct OodScore {
  Pose g_abs;
  double log_likelihood = 0.0;  // finite or -inf (outside a uniform arc)
  std::optional<bool> is_in;    // ground-truth label when known
};

Pose absolute_pose(const Sample& sample, const PseudoLabelTable& table,
                   const LatentIndex& tidx, const IndexConfig& cfg);

OodScore score(const Sample& sample, const PseudoLabelTable& table,
               const LatentIndex& tidx, const IndexConfig& cfg);

// Negatives generator: every sample re-posed by an independent Haar
// rotation (shape rotated along when present).
Dataset make_haar_negatives(const Dataset& d, std::uint64_t seed);

struct OodEval {
  double auc = 0.0;
  std::vector<OodScore> scores;  // positives first, then negatives
};

OodEval evaluate_ood(const Dataset& in_set, const Dataset& out_set,
                     const PseudoLabelTable& table, const IndexConfig& cfg);

// CSV dump: sample_id,class,log_likelihood,label
void write_scores_csv(const OodEval& eval, const Dataset& in_set, const Dataset& out_set,
                      const std::string& path);

}  // namespace rotsym
