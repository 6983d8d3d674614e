#pragma once

#include <vector>

#include "rotsym/oracle.hpp"

namespace rotsym {

enum class Metric { Cosine, Euclidean };

Metric metric_from_name(const std::string& name);
const char* metric_name(Metric m);

struct IndexConfig {
  int k = 25;
  Metric metric = Metric::Cosine;
};

// Exact nearest-neighbor search over invariant embeddings by full scan.
// Immutable after construction; queries are safe to run concurrently.
// A query equal to a stored embedding returns that row first, and the
// query row is deliberately part of its own neighborhood.
class LatentIndex {
 public:
  explicit LatentIndex(const Dataset& dataset);
  explicit LatentIndex(Eigen::MatrixXd embeddings);  // rows are embeddings

  // Indices of the k nearest rows, ascending distance, ties broken by
  // ascending row index. Cosine distance is 1 - cosine similarity.
  std::vector<int> query(const Eigen::VectorXd& z, const IndexConfig& cfg) const;

  int size() const { return static_cast<int>(z_.rows()); }
  int dim() const { return static_cast<int>(z_.cols()); }

 private:
  Eigen::MatrixXd z_;
  Eigen::VectorXd norms_;
};

}  // namespace rotsym
