#include "rotsym/distributions.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace rotsym {

Group model_group(const SymmetryModel& m) {
  return std::holds_alternative<MatrixFisher3>(m) ? Group::SO3 : Group::SO2;
}

Group family_group(FamilyTag f) {
  return f == FamilyTag::MatrixFisher ? Group::SO3 : Group::SO2;
}

const char* family_name(FamilyTag f) {
  switch (f) {
    case FamilyTag::UniformArc: return "uniform_arc";
    case FamilyTag::WrappedGaussian: return "wrapped_gaussian";
    case FamilyTag::MatrixFisher: return "matrix_fisher";
  }
  return "?";
}

FamilyTag family_from_name(const std::string& name) {
  if (name == "uniform_arc") return FamilyTag::UniformArc;
  if (name == "wrapped_gaussian") return FamilyTag::WrappedGaussian;
  if (name == "matrix_fisher") return FamilyTag::MatrixFisher;
  throw config_error("unknown family '" + name + "'");
}

FamilyTag model_family(const SymmetryModel& m) {
  if (std::holds_alternative<UniformArc2>(m)) return FamilyTag::UniformArc;
  if (std::holds_alternative<WrappedGaussian2>(m)) return FamilyTag::WrappedGaussian;
  return FamilyTag::MatrixFisher;
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

std::vector<Rotation2> sample(const UniformArc2& m, int n, Rng& rng) {
  if (n < 1) throw config_error("sample: n must be >= 1");
  std::vector<Rotation2> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    out.push_back(Rotation2(m.half_width * (2.0 * rng.uniform() - 1.0)));
  }
  return out;
}

std::vector<Rotation2> sample(const WrappedGaussian2& m, int n, Rng& rng) {
  if (n < 1) throw config_error("sample: n must be >= 1");
  std::vector<Rotation2> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(Rotation2(m.sigma * rng.normal()));
  return out;
}

namespace {

constexpr int kBurnIn = 1000;
constexpr int kThin = 10;

}  // namespace

std::vector<Rotation3> sample(const MatrixFisher3& m, int n, Rng& rng, McmcStats* stats) {
  if (n < 1) throw config_error("sample: n must be >= 1");

  // Proposal scales per tangent axis, in the proper right-singular frame
  // of F. Around the mode, log-density curvature along the i-th axis of
  // that frame is s_j + s_k, so the chain takes ~posterior-sized steps in
  // stiff directions while weakly constrained directions (s_j + s_k ~ 0,
  // e.g. the free spin of a near-degenerate F) get O(1 rad) moves and
  // actually mix at the chain lengths used here.
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m.F, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d s_abs = svd.singularValues();
  Eigen::Matrix3d u = svd.matrixU();
  Eigen::Matrix3d v = svd.matrixV();
  Eigen::Vector3d s = s_abs;
  u.col(2) *= u.determinant();
  v.col(2) *= v.determinant();
  s(2) *= svd.matrixU().determinant() * svd.matrixV().determinant();
  Eigen::Vector3d scale;
  for (int i = 0; i < 3; ++i) {
    const double stiffness = s((i + 1) % 3) + s((i + 2) % 3);
    scale(i) = 1.0 / std::sqrt(1.0 + std::max(0.0, stiffness));
  }

  Rotation3 g = Rotation3::from_matrix(u * v.transpose());  // start at the mode
  Eigen::Matrix3d r = g.matrix();
  double accepted = 0.0;
  const int total = kBurnIn + (n - 1) * kThin + 1;
  std::vector<Rotation3> out;
  out.reserve(n);
  for (int i = 0; i < total; ++i) {
    // Unrestricted axis-angle step (the Gaussian tail may pass pi, where
    // the rotation exponential simply wraps; the proposal stays symmetric).
    const Eigen::Vector3d xi = v * scale.cwiseProduct(rng.normal3());
    const double angle = xi.norm();
    const Rotation3 step = angle < 1e-12
                               ? Rotation3::identity()
                               : Rotation3::about_axis(xi / angle, angle);
    const Rotation3 cand = compose(g, step);
    const Eigen::Matrix3d rc = cand.matrix();
    const double log_ratio = (m.F.transpose() * (rc - r)).trace();
    if (log_ratio >= 0.0 || std::log(rng.uniform() + 1e-300) < log_ratio) {
      g = cand;
      r = rc;
      accepted += 1.0;
    }
    if (i >= kBurnIn && (i - kBurnIn) % kThin == 0) out.push_back(g);
  }
  if (stats) {
    stats->acceptance_rate = accepted / total;
    stats->step = scale.minCoeff();
  }
  return out;
}

std::vector<Pose> sample_poses(const SymmetryModel& m, int n, Rng& rng) {
  std::vector<Pose> out;
  out.reserve(n);
  std::visit(
      [&](const auto& fam) {
        for (auto& r : sample(fam, n, rng)) out.push_back(r);
      },
      m);
  return out;
}

// ---------------------------------------------------------------------------
// Densities
// ---------------------------------------------------------------------------

namespace {

double logsumexp(std::span<const double> xs) {
  double hi = -std::numeric_limits<double>::infinity();
  for (double x : xs) hi = std::max(hi, x);
  if (!std::isfinite(hi)) return hi;
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - hi);
  return hi + std::log(acc);
}

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_density_so2(const SymmetryModel& m, double theta) {
  if (const auto* u = std::get_if<UniformArc2>(&m)) {
    if (u->half_width <= 0.0) {
      return theta == 0.0 ? std::numeric_limits<double>::infinity() : kNegInf;
    }
    return std::abs(theta) <= u->half_width ? -std::log(2.0 * u->half_width) : kNegInf;
  }
  const auto& w = std::get<WrappedGaussian2>(m);
  if (w.sigma <= 0.0) {
    return theta == 0.0 ? std::numeric_limits<double>::infinity() : kNegInf;
  }
  const int k_max = std::max(1, (int)std::ceil((8.0 * w.sigma + M_PI) / (2.0 * M_PI)));
  std::vector<double> terms;
  terms.reserve(2 * k_max + 1);
  const double log_norm = -std::log(w.sigma * std::sqrt(2.0 * M_PI));
  for (int k = -k_max; k <= k_max; ++k) {
    const double x = theta + 2.0 * M_PI * k;
    terms.push_back(log_norm - 0.5 * x * x / (w.sigma * w.sigma));
  }
  return logsumexp(terms);
}

}  // namespace

double log_density(const SymmetryModel& m, const Rotation2& g) {
  if (model_group(m) != Group::SO2) throw config_error("log_density: model/group mismatch");
  return log_density_so2(m, g.angle);
}

double log_density(const SymmetryModel& m, const Rotation3& g) {
  if (model_group(m) != Group::SO3) throw config_error("log_density: model/group mismatch");
  const auto& f = std::get<MatrixFisher3>(m);
  return (f.F.transpose() * g.matrix()).trace() - fisher_log_normalizer_cached(f.F);
}

double log_density(const SymmetryModel& m, const Pose& g) {
  if (const auto* r2 = std::get_if<Rotation2>(&g)) return log_density(m, *r2);
  return log_density(m, std::get<Rotation3>(g));
}

double fisher_log_normalizer(const Eigen::Matrix3d& F, int n_mc, Rng& rng) {
  if (n_mc < 1000) throw config_error("fisher_log_normalizer: n_mc must be >= 1000");
  std::vector<double> traces(n_mc);
  for (int i = 0; i < n_mc; ++i) {
    traces[i] = (F.transpose() * haar_rotation3(rng).matrix()).trace();
  }
  return logsumexp(traces) - std::log((double)n_mc);
}

namespace {

constexpr int kNormalizerPoolSize = 10000;
constexpr std::uint64_t kNormalizerSeed = 0x9e3779b97f4a7c15ull;

const std::vector<Eigen::Matrix3d>& normalizer_pool() {
  static const std::vector<Eigen::Matrix3d> pool = [] {
    Rng rng(kNormalizerSeed);
    std::vector<Eigen::Matrix3d> p;
    p.reserve(kNormalizerPoolSize);
    for (int i = 0; i < kNormalizerPoolSize; ++i) p.push_back(haar_rotation3(rng).matrix());
    return p;
  }();
  return pool;
}

}  // namespace

double fisher_log_normalizer_cached(const Eigen::Matrix3d& F) {
  using Key = std::array<double, 9>;
  static std::map<Key, double> cache;
  static std::mutex mutex;

  Key key;
  Eigen::Map<Eigen::Matrix3d>(key.data()) = F;
  {
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  const auto& pool = normalizer_pool();
  std::vector<double> traces(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) traces[i] = (F.transpose() * pool[i]).trace();
  const double value = logsumexp(traces) - std::log((double)pool.size());
  {
    std::lock_guard<std::mutex> lock(mutex);
    cache.emplace(key, value);
  }
  return value;
}

// ---------------------------------------------------------------------------
// Moment estimation
// ---------------------------------------------------------------------------

double a_ratio(double s) {
  if (s < 0.0) throw config_error("a_ratio: s must be >= 0");
  if (s < 1e-4) return s / 3.0 - s * s * s / 45.0;
  return 1.0 / std::tanh(s) - 1.0 / s;
}

namespace {

double a_ratio_deriv(double s) {
  if (s < 1e-4) return 1.0 / 3.0 - s * s / 15.0;
  const double inv_s2 = 1.0 / (s * s);
  if (s > 300.0) return inv_s2;  // csch^2 underflows
  const double sh = std::sinh(s);
  return inv_s2 - 1.0 / (sh * sh);
}

double invert_a_impl(double a, bool* newton_fell_back) {
  if (a < 0.0) throw config_error("invert_a: input must be in [0, 1)");
  if (a >= 1.0) throw degenerate_error("invert_a: saturation, moment ratio >= 1");
  if (a == 0.0) return 0.0;

  // Banerjee-style starting point for the p = 3 moment map.
  double s = a * (3.0 - a * a) / (1.0 - a * a);
  double lo = 0.0;
  double hi = std::max(2.0 * s, 1.0);
  while (a_ratio(hi) < a) {
    lo = hi;
    hi *= 2.0;
  }

  bool converged = false;
  for (int it = 0; it < 100; ++it) {
    const double f = a_ratio(s) - a;
    if (std::abs(f) < 1e-15) {
      converged = true;
      break;
    }
    if (f > 0.0) hi = std::min(hi, s);
    else lo = std::max(lo, s);
    const double d = a_ratio_deriv(s);
    double next = s - f / d;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - s) < 1e-14 * std::max(1.0, std::abs(s))) {
      s = next;
      converged = true;
      break;
    }
    s = next;
  }
  if (!converged) {
    if (newton_fell_back) *newton_fell_back = true;
    for (int it = 0; it < 200 && (hi - lo) > 1e-14 * std::max(1.0, hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      if (a_ratio(mid) < a) lo = mid;
      else hi = mid;
    }
    s = 0.5 * (lo + hi);
  }
  return s;
}

}  // namespace

double invert_a(double a) { return invert_a_impl(a, nullptr); }

// ---------------------------------------------------------------------------
// Fitting
// ---------------------------------------------------------------------------

namespace {

struct CircularMoments {
  double resultant = 0.0;  // mean resultant length
  double circ_std = 0.0;   // sqrt(-2 ln R)
};

CircularMoments circular_moments(std::span<const Rotation2> samples) {
  double c = 0.0, s = 0.0;
  for (const auto& r : samples) {
    c += std::cos(r.angle);
    s += std::sin(r.angle);
  }
  const double n = (double)samples.size();
  CircularMoments mo;
  mo.resultant = std::sqrt(c * c + s * s) / n;
  if (mo.resultant < 1e-6) {
    throw degenerate_error("fit: dispersion too high, circular std undefined");
  }
  mo.circ_std = mo.resultant >= 1.0 ? 0.0 : std::sqrt(-2.0 * std::log(mo.resultant));
  return mo;
}

}  // namespace

SymmetryModel fit(FamilyTag family, std::span<const Rotation2> samples, FitInfo* info) {
  if (family_group(family) != Group::SO2) {
    throw config_error("fit: family/group mismatch (SO(2) samples)");
  }
  if (samples.size() < 2) throw data_error("fit: need at least 2 samples");
  const CircularMoments mo = circular_moments(samples);
  if (family == FamilyTag::WrappedGaussian) {
    return WrappedGaussian2{mo.circ_std};
  }
  // Uniform arc: the moment estimate, cross-checked against a robust
  // 95th-percentile estimate reported through FitInfo.
  const double a_moment = std::min(M_PI, std::sqrt(3.0) * mo.circ_std);
  if (info) {
    std::vector<double> mags;
    mags.reserve(samples.size());
    for (const auto& r : samples) mags.push_back(std::abs(r.angle));
    std::sort(mags.begin(), mags.end());
    const std::size_t idx =
        std::min(mags.size() - 1,
                 (std::size_t)std::ceil(0.95 * (double)mags.size()) - 1);
    info->half_width_percentile = std::min(M_PI, mags[idx] / 0.95);
  }
  return UniformArc2{a_moment};
}

SymmetryModel fit(FamilyTag family, std::span<const Rotation3> samples, FitInfo* info) {
  if (family != FamilyTag::MatrixFisher) {
    throw config_error("fit: family/group mismatch (SO(3) samples)");
  }
  if (samples.size() < 2) throw data_error("fit: need at least 2 samples");

  Eigen::Matrix3d m = Eigen::Matrix3d::Zero();
  for (const auto& r : samples) m += r.matrix();
  m /= (double)samples.size();

  Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d u = svd.matrixU();
  Eigen::Matrix3d v = svd.matrixV();
  Eigen::Vector3d d = svd.singularValues();
  // Proper decomposition: fold the reflection signs into the last factor.
  const double du = u.determinant(), dv = v.determinant();
  u.col(2) *= du;
  v.col(2) *= dv;
  d(2) *= du * dv;

  Eigen::Vector3d s_hat;
  for (int i = 0; i < 3; ++i) {
    const double mag = std::abs(d(i));
    double s;
    bool fell_back = false;
    if (mag >= 1.0) {
      s = kConcentrationMax;
      if (info) info->saturated = true;
    } else {
      s = invert_a_impl(mag, &fell_back);
      if (s > kConcentrationMax) {
        s = kConcentrationMax;
        if (info) info->saturated = true;
      }
    }
    if (info && fell_back) info->newton_fallback = true;
    s_hat(i) = d(i) < 0.0 ? -s : s;
  }
  MatrixFisher3 out;
  out.F = u * s_hat.asDiagonal() * v.transpose();
  return out;
}

SymmetryModel fit(FamilyTag family, std::span<const Pose> samples, FitInfo* info) {
  if (samples.empty()) throw data_error("fit: need at least 2 samples");
  if (pose_group(samples.front()) == Group::SO2) {
    std::vector<Rotation2> rs;
    rs.reserve(samples.size());
    for (const auto& p : samples) rs.push_back(std::get<Rotation2>(p));
    return fit(family, std::span<const Rotation2>(rs), info);
  }
  std::vector<Rotation3> rs;
  rs.reserve(samples.size());
  for (const auto& p : samples) rs.push_back(std::get<Rotation3>(p));
  return fit(family, std::span<const Rotation3>(rs), info);
}

}  // namespace rotsym
