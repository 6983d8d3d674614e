#include "rotsym/latent_index.hpp"

#include <algorithm>
#include <numeric>

namespace rotsym {

Metric metric_from_name(const std::string& name) {
  if (name == "cosine") return Metric::Cosine;
  if (name == "euclidean") return Metric::Euclidean;
  throw config_error("unknown metric '" + name + "'");
}

const char* metric_name(Metric m) { return m == Metric::Cosine ? "cosine" : "euclidean"; }

LatentIndex::LatentIndex(const Dataset& dataset) {
  if (dataset.samples.empty()) throw data_error("LatentIndex: empty dataset");
  z_.resize((Eigen::Index)dataset.samples.size(), dataset.latent_dim);
  for (std::size_t i = 0; i < dataset.samples.size(); ++i) {
    z_.row((Eigen::Index)i) = dataset.samples[i].z.transpose();
  }
  norms_ = z_.rowwise().norm();
}

LatentIndex::LatentIndex(Eigen::MatrixXd embeddings) : z_(std::move(embeddings)) {
  if (z_.rows() == 0) throw data_error("LatentIndex: no embeddings");
  norms_ = z_.rowwise().norm();
}

std::vector<int> LatentIndex::query(const Eigen::VectorXd& z, const IndexConfig& cfg) const {
  if (cfg.k < 1) throw config_error("query: k must be >= 1");
  if (cfg.k > size()) throw config_error("query: k exceeds the dataset size");
  if (z.size() != z_.cols()) throw data_error("query: latent dimension mismatch");

  Eigen::VectorXd dist((Eigen::Index)size());
  if (cfg.metric == Metric::Cosine) {
    const double qn = z.norm();
    if (qn <= 0.0) throw data_error("query: zero vector under the cosine metric");
    const Eigen::VectorXd dots = z_ * z;
    for (int i = 0; i < size(); ++i) {
      if (norms_(i) <= 0.0) throw data_error("query: stored zero vector under the cosine metric");
      dist(i) = 1.0 - dots(i) / (qn * norms_(i));
    }
  } else {
    dist = (z_.rowwise() - z.transpose()).rowwise().norm();
  }

  std::vector<int> order(size());
  std::iota(order.begin(), order.end(), 0);
  std::partial_sort(order.begin(), order.begin() + cfg.k, order.end(),
                    [&](int a, int b) {
                      if (dist(a) != dist(b)) return dist(a) < dist(b);
                      return a < b;
                    });
  order.resize(cfg.k);
  return order;
}

}  // namespace rotsym
