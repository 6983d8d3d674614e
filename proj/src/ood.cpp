#include "rotsym/ood.hpp"

#include <cstdio>
#include <fstream>

namespace rotsym {

Pose absolute_pose(const Sample& sample, const PseudoLabelTable& table,
                   const LatentIndex& tidx, const IndexConfig& cfg) {
  const Pose lambda = predict_gamma(table, tidx, sample.z, cfg);
  return compose(sample.pose, inverse(lambda));
}

OodScore score(const Sample& sample, const PseudoLabelTable& table,
               const LatentIndex& tidx, const IndexConfig& cfg) {
  OodScore out;
  out.g_abs = absolute_pose(sample, table, tidx, cfg);
  const SymmetryModel theta = predict_theta(table, tidx, sample.z, cfg);
  out.log_likelihood = log_density(theta, out.g_abs);
  return out;
}

Dataset make_haar_negatives(const Dataset& d, std::uint64_t seed) {
  Rng rng(derive_seed(seed, "haar-negatives"));
  Dataset out;
  out.group = d.group;
  out.latent_dim = d.latent_dim;
  out.samples.reserve(d.samples.size());
  for (const auto& s : d.samples) {
    Sample neg = s;
    const Pose h = haar_pose(d.group, rng);
    neg.pose = compose(h, s.pose);
    if (neg.shape) neg.shape = apply_action(h, *neg.shape);
    out.samples.push_back(std::move(neg));
  }
  return out;
}

OodEval evaluate_ood(const Dataset& in_set, const Dataset& out_set,
                     const PseudoLabelTable& table, const IndexConfig& cfg) {
  if (in_set.group != out_set.group || in_set.latent_dim != out_set.latent_dim) {
    throw data_error("evaluate_ood: datasets do not share group/latent schema");
  }
  const LatentIndex tidx = table_index(table);
  OodEval eval;
  eval.scores.reserve(in_set.samples.size() + out_set.samples.size());
  std::vector<double> values;
  std::vector<int> labels;
  for (const auto& s : in_set.samples) {
    OodScore sc = score(s, table, tidx, cfg);
    sc.is_in = true;
    values.push_back(sc.log_likelihood);
    labels.push_back(1);
    eval.scores.push_back(std::move(sc));
  }
  for (const auto& s : out_set.samples) {
    OodScore sc = score(s, table, tidx, cfg);
    sc.is_in = false;
    values.push_back(sc.log_likelihood);
    labels.push_back(0);
    eval.scores.push_back(std::move(sc));
  }
  eval.auc = auc_roc(values, labels);
  return eval;
}

void write_scores_csv(const OodEval& eval, const Dataset& in_set, const Dataset& out_set,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) throw data_error("write_scores_csv: cannot open " + path);
  out << "sample_id,class,log_likelihood,label\n";
  char buf[64];
  const std::size_t n_in = in_set.samples.size();
  for (std::size_t i = 0; i < eval.scores.size(); ++i) {
    const bool is_in = i < n_in;
    const Sample& s = is_in ? in_set.samples[i] : out_set.samples[i - n_in];
    const double ll = eval.scores[i].log_likelihood;
    if (std::isinf(ll)) {
      std::snprintf(buf, sizeof(buf), ll < 0 ? "-inf" : "inf");
    } else {
      std::snprintf(buf, sizeof(buf), "%.12g", ll);
    }
    out << i << "," << s.class_id << "," << buf << "," << (is_in ? "in" : "out") << "\n";
  }
}

}  // namespace rotsym
