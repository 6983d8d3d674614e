#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "rotsym/group.hpp"

namespace rotsym {

// ---------------------------------------------------------------------------
// Parametric symmetry families, identity-centered by construction
// ---------------------------------------------------------------------------

// Uniform distribution on the arc [-half_width, half_width]. A fit may
// report half_width 0 for point-mass data; sampling/density then treat the
// family as degenerate at the identity.
struct UniformArc2 {
  double half_width = M_PI;  // radians, in [0, pi]
};

struct WrappedGaussian2 {
  double sigma = 0.0;  // radians, >= 0; sigma 0 is a point mass at identity
};

// Density proportional to exp(tr(F^T R)) w.r.t. normalized Haar measure.
struct MatrixFisher3 {
  Eigen::Matrix3d F = Eigen::Matrix3d::Zero();
};

using SymmetryModel = std::variant<UniformArc2, WrappedGaussian2, MatrixFisher3>;

enum class FamilyTag { UniformArc, WrappedGaussian, MatrixFisher };

Group model_group(const SymmetryModel& m);
Group family_group(FamilyTag f);
const char* family_name(FamilyTag f);
FamilyTag family_from_name(const std::string& name);
FamilyTag model_family(const SymmetryModel& m);

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

std::vector<Rotation2> sample(const UniformArc2& m, int n, Rng& rng);
std::vector<Rotation2> sample(const WrappedGaussian2& m, int n, Rng& rng);

struct McmcStats {
  double acceptance_rate = 0.0;
  double step = 0.0;
};

// Metropolis chain on SO(3): proposal g' = g * exp(xi) with isotropic
// tangent Gaussian of scale 0.2/sqrt(1 + s1), s1 the largest singular
// value of F; acceptance ratio exp(tr(F^T (R' - R))); burn-in 1000,
// thinning 10. Deterministic given the generator state.
std::vector<Rotation3> sample(const MatrixFisher3& m, int n, Rng& rng,
                              McmcStats* stats = nullptr);

std::vector<Pose> sample_poses(const SymmetryModel& m, int n, Rng& rng);

// ---------------------------------------------------------------------------
// Densities
// ---------------------------------------------------------------------------

// Reference measures: the angle measure d(theta) on SO(2) (so the uniform
// arc scores -log(2 half_width) on its support) and normalized Haar on
// SO(3) (so F = 0 scores 0 everywhere).
double log_density(const SymmetryModel& m, const Rotation2& g);
double log_density(const SymmetryModel& m, const Rotation3& g);
double log_density(const SymmetryModel& m, const Pose& g);

// log of the Haar Monte-Carlo estimate of E[exp(tr(F^T R))], via
// log-sum-exp. Deterministic given the generator.
double fisher_log_normalizer(const Eigen::Matrix3d& F, int n_mc, Rng& rng);

// Memoized variant used by log_density: a fixed internal seed and sample
// pool (n_mc = 10^4) shared across all F, one cache entry per distinct F.
// Thread-safe.
double fisher_log_normalizer_cached(const Eigen::Matrix3d& F);

// ---------------------------------------------------------------------------
// Moment estimation
// ---------------------------------------------------------------------------

// A(s) = coth(s) - 1/s, the concentration-to-moment map, with the Taylor
// branch s/3 - s^3/45 below 1e-4. Monotone from [0, inf) onto [0, 1).
double a_ratio(double s);

// Inverse of a_ratio by Newton with bisection fallback. Throws Degenerate
// ("saturation") for a >= 1.
double invert_a(double a);

struct FitInfo {
  bool saturated = false;        // some concentration clamped at s_max = 1e3
  bool newton_fallback = false;  // bisection finished what Newton could not
  // Robust cross-check for the uniform arc: 95th percentile of |angle|
  // divided by 0.95. The moment estimate is the one reported in the model.
  std::optional<double> half_width_percentile;
};

// Fits an identity-centered model to pre-normalized samples (>= 2).
SymmetryModel fit(FamilyTag family, std::span<const Rotation2> samples, FitInfo* info = nullptr);
SymmetryModel fit(FamilyTag family, std::span<const Rotation3> samples, FitInfo* info = nullptr);
SymmetryModel fit(FamilyTag family, std::span<const Pose> samples, FitInfo* info = nullptr);

constexpr double kConcentrationMax = 1e3;

}  // namespace rotsym
