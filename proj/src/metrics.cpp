#include "rotsym/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>

namespace rotsym {

double wasserstein1_so2(std::span<const Rotation2> a, std::span<const Rotation2> b) {
  if (a.size() != b.size()) throw data_error("wasserstein1_so2: size mismatch");
  if (a.empty()) throw data_error("wasserstein1_so2: empty input");
  const std::size_t n = a.size();

  std::vector<double> xs(n), ys(n);
  for (std::size_t i = 0; i < n; ++i) xs[i] = a[i].angle;
  for (std::size_t i = 0; i < n; ++i) ys[i] = b[i].angle;
  std::sort(xs.begin(), xs.end());
  std::sort(ys.begin(), ys.end());

  // The optimal coupling on the circle preserves cyclic order; enumerate
  // the n cut offsets of the order-preserving matching.
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < n; ++r) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      total += std::abs(wrap_angle(xs[i] - ys[(i + r) % n]));
    }
    best = std::min(best, total / static_cast<double>(n));
  }
  return best;
}

double hungarian_assignment_cost(const Eigen::MatrixXd& cost) {
  if (cost.rows() != cost.cols() || cost.rows() == 0) {
    throw data_error("hungarian: cost matrix must be square and non-empty");
  }
  const int n = static_cast<int>(cost.rows());
  const double kInf = std::numeric_limits<double>::infinity();

  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, kInf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = match[j0];
      int j1 = -1;
      double delta = kInf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[match[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != 0);
    do {
      const int j1 = way[j0];
      match[j0] = match[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  double total = 0.0;
  for (int j = 1; j <= n; ++j) total += cost(match[j] - 1, j - 1);
  return total;
}

double wasserstein2_so3(std::span<const Rotation3> a, std::span<const Rotation3> b) {
  if (a.size() != b.size()) throw data_error("wasserstein2_so3: size mismatch");
  if (a.empty()) throw data_error("wasserstein2_so3: empty input");
  if (a.size() > 512) throw data_error("wasserstein2_so3: size above the 512 guard");
  const int n = static_cast<int>(a.size());
  Eigen::MatrixXd cost(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double d = distance(a[i], b[j]);
      cost(i, j) = d * d;
    }
  }
  return std::sqrt(hungarian_assignment_cost(cost) / static_cast<double>(n));
}

double wasserstein_poses(std::span<const Pose> a, std::span<const Pose> b) {
  if (a.empty() || b.empty()) throw data_error("wasserstein: empty input");
  if (pose_group(a.front()) == Group::SO2) {
    std::vector<Rotation2> xs, ys;
    xs.reserve(a.size());
    ys.reserve(b.size());
    for (const auto& p : a) xs.push_back(std::get<Rotation2>(p));
    for (const auto& p : b) ys.push_back(std::get<Rotation2>(p));
    return wasserstein1_so2(xs, ys);
  }
  std::vector<Rotation3> xs, ys;
  xs.reserve(a.size());
  ys.reserve(b.size());
  for (const auto& p : a) xs.push_back(std::get<Rotation3>(p));
  for (const auto& p : b) ys.push_back(std::get<Rotation3>(p));
  return wasserstein2_so3(xs, ys);
}

double theta_error(const SymmetryModel& pred, const SymmetryModel& truth) {
  if (pred.index() != truth.index()) throw data_error("theta_error: family mismatch");
  if (const auto* u = std::get_if<UniformArc2>(&pred)) {
    return std::abs(u->half_width - std::get<UniformArc2>(truth).half_width) * 180.0 / M_PI;
  }
  if (const auto* w = std::get_if<WrappedGaussian2>(&pred)) {
    return std::abs(w->sigma - std::get<WrappedGaussian2>(truth).sigma) * 180.0 / M_PI;
  }
  const Eigen::Matrix3d diff =
      std::get<MatrixFisher3>(pred).F - std::get<MatrixFisher3>(truth).F;
  return diff.squaredNorm() / 9.0;
}

double auc_roc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw data_error("auc_roc: size mismatch");
  const std::size_t n = scores.size();
  std::size_t n_pos = 0;
  for (int l : labels) n_pos += l != 0 ? 1 : 0;
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) throw data_error("auc_roc: both label kinds required");
  for (double s : scores) {
    if (std::isnan(s)) throw data_error("auc_roc: NaN score");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return scores[i] < scores[j]; });

  // Average ranks within tied groups, then the Mann-Whitney statistic.
  double rank_sum_pos = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) {
      if (labels[order[k]]) rank_sum_pos += avg_rank;
    }
    i = j + 1;
  }
  const double u_stat =
      rank_sum_pos - 0.5 * static_cast<double>(n_pos) * static_cast<double>(n_pos + 1);
  return u_stat / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

Histogram pose_histogram(std::span<const Pose> poses, int bins) {
  if (bins < 1) throw config_error("pose_histogram: bins must be >= 1");
  Histogram h;
  h.bin_centers.resize(bins);
  h.counts.assign(bins, 0);
  if (poses.empty()) return h;
  const bool planar = pose_group(poses.front()) == Group::SO2;
  const double lo = planar ? -M_PI : 0.0;
  const double width = planar ? 2.0 * M_PI : M_PI;
  for (int i = 0; i < bins; ++i) h.bin_centers[i] = lo + (i + 0.5) * width / bins;
  for (const auto& p : poses) {
    const double x = planar ? std::get<Rotation2>(p).angle
                            : distance(p, identity_pose(Group::SO3));
    int idx = static_cast<int>(std::floor((x - lo) / width * bins));
    idx = std::clamp(idx, 0, bins - 1);
    ++h.counts[idx];
  }
  return h;
}

void write_histogram_csv(const Histogram& h, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw data_error("write_histogram_csv: cannot open " + path);
  out << "bin_center,count\n";
  char buf[64];
  for (std::size_t i = 0; i < h.bin_centers.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.12g", h.bin_centers[i]);
    out << buf << "," << h.counts[i] << "\n";
  }
}

}  // namespace rotsym
