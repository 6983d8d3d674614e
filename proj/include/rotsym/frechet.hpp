#pragma once

#include <span>
#include <vector>

#include "rotsym/group.hpp"

namespace rotsym {

enum class MeanMethod { Circular, Karcher, FisherMode };

struct FrechetConfig {
  double tol = 1e-8;  // 1e-9 is plenty for SO(2), the closed form is exact
  int max_iter = 100;
  MeanMethod method = MeanMethod::FisherMode;
};

// Circular mean atan2(sum sin, sum cos). For samples inside an open
// half-circle this is the global Frechet mean. Throws Degenerate when the
// resultant length falls below 1e-6 (antipodal or near-uniform data).
Rotation2 frechet_mean_so2(std::span<const Rotation2> angles);

// Mean resultant length of a set of angles, in [0, 1].
double resultant_length(std::span<const Rotation2> angles);

// Mode of the matrix-Fisher distribution fitted by moments: the proper
// SVD projection of the arithmetic mean rotation matrix. Throws
// Degenerate when the smallest singular value of the mean is below 1e-9.
Rotation3 frechet_mean_so3_fisher_mode(std::span<const Rotation3> rotations);

struct KarcherInfo {
  double residual = 0.0;  // norm of the mean tangent at the returned point
  int iterations = 0;
};

class KarcherNonConvergence : public Error {
 public:
  KarcherNonConvergence(const Rotation3& last, double residual, int iters)
      : Error(ErrorCode::NonConvergence,
              "karcher: no convergence after " + std::to_string(iters) +
                  " iterations, residual " + std::to_string(residual)),
        last_iterate(last),
        residual(residual) {}

  Rotation3 last_iterate;
  double residual;
};

// Riemannian center of mass by fixed-point iteration
//   y <- y * exp(mean_i log(y^-1 g_i))
// initialized from the fisher mode (first sample if that is degenerate).
// Throws NonConvergence past max_iter; the message carries the residual.
Rotation3 frechet_mean_so3_karcher(std::span<const Rotation3> rotations,
                                   const FrechetConfig& cfg = {},
                                   KarcherInfo* info = nullptr);

// Dispatch helper used by the normalization pipeline.
Pose frechet_mean(std::span<const Pose> poses, const FrechetConfig& cfg = {});

}  // namespace rotsym
