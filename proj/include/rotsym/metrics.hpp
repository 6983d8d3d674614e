#pragma once

#include <span>
#include <string>
#include <vector>

#include "rotsym/distributions.hpp"
#include "rotsym/group.hpp"

namespace rotsym {

// Exact W1 between equal-size empirical measures on the circle: both sets
// sorted, then the best of the n cyclic order-preserving couplings.
double wasserstein1_so2(std::span<const Rotation2> a, std::span<const Rotation2> b);

// Exact W2 between equal-size empirical measures on SO(3): optimal
// assignment (Hungarian) over the squared geodesic distance matrix.
// Sizes above 512 are rejected to bound the quadratic cost matrix.
double wasserstein2_so3(std::span<const Rotation3> a, std::span<const Rotation3> b);

double wasserstein_poses(std::span<const Pose> a, std::span<const Pose> b);

// Minimum-cost perfect matching on a square cost matrix; returns the
// total cost. Shortest-augmenting-path formulation, O(n^3).
double hungarian_assignment_cost(const Eigen::MatrixXd& cost);

// Parameter-space error between two models of the same family: absolute
// parameter difference in degrees for the SO(2) families, mean squared
// entrywise difference of F for matrix-Fisher.
double theta_error(const SymmetryModel& pred, const SymmetryModel& truth);

// Exact rank-statistic AUC (Mann-Whitney) with half credit for ties.
// labels: nonzero = in-distribution; higher score must mean more
// in-distribution.
double auc_roc(std::span<const double> scores, std::span<const int> labels);

// ---------------------------------------------------------------------------
// Evaluation report
// ---------------------------------------------------------------------------

struct Histogram {
  std::vector<double> bin_centers;
  std::vector<long> counts;
};

// SO(2): angles binned over (-pi, pi]. SO(3): geodesic angle from the
// identity binned over [0, pi].
Histogram pose_histogram(std::span<const Pose> poses, int bins);

void write_histogram_csv(const Histogram& h, const std::string& path);

struct ClassReport {
  std::string class_id;
  int n = 0;
  double w1 = 0.0;           // radians (W2 for SO(3) classes)
  double theta_err = 0.0;    // family-specific scalar
  double gamma_err_deg = 0.0;
  std::string status = "ok";
};

struct EvalReport {
  std::vector<ClassReport> classes;
  double theta_mae = 0.0;
  double theta_mse = 0.0;
  double gamma_mae_deg = 0.0;
  double mean_w1 = 0.0;
};

}  // namespace rotsym
