// Acceptance suite: runs every acceptance criterion at its stated
// tolerance and prints one [PASS]/[FAIL] line per criterion. Exits with
// the number of failed criteria. The CLI determinism criterion drives the
// actual binary through ROTSYM_CLI_PATH.

#include <Eigen/SVD>
#include <algorithm>
#include <chrono>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>

#include "rotsym/ood.hpp"
#include "rotsym/pipeline.hpp"

using namespace rotsym;
namespace fs = std::filesystem;

namespace {

constexpr double kDeg = M_PI / 180.0;
constexpr std::uint64_t kSeed = 5;  // pinned master seed for the seeded experiments

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

struct BuiltExperiment {
  std::vector<ClassSpec> specs;
  Dataset dataset;
  PseudoLabelTable table;
};

BuiltExperiment build_experiment(std::vector<ClassSpec> specs, int n_per_class,
                                 FamilyTag family, std::uint64_t seed, int k = 25) {
  BuiltExperiment e;
  e.specs = std::move(specs);
  e.dataset = generate_dataset(e.specs, n_per_class, seed);
  const LatentIndex index(e.dataset);
  IndexConfig cfg;
  cfg.k = k;
  e.table = build_pseudo_labels(e.dataset, index, cfg, family, FrechetConfig{});
  return e;
}

std::map<std::string, std::vector<std::size_t>> by_class(const Dataset& d) {
  std::map<std::string, std::vector<std::size_t>> out;
  for (std::size_t i = 0; i < d.samples.size(); ++i) out[d.samples[i].class_id].push_back(i);
  return out;
}

// ---------------------------------------------------------------------------
// Criterion 1: mnist-analog recovery
// ---------------------------------------------------------------------------

BuiltExperiment g_mnist;  // shared with criterion 6

Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  PresetConfig pc;
  pc.n_per_class = 500;
  pc.eps_pose = 0.02;
  g_mnist = build_experiment(make_mnist_analog(kSeed, pc), pc.n_per_class,
                             FamilyTag::UniformArc, kSeed);

  std::map<std::string, const ClassSpec*> spec_of;
  for (const auto& s : g_mnist.specs) spec_of[s.class_id] = &s;

  double mae = 0.0, max_gamma_err = 0.0;
  const auto classes = by_class(g_mnist.dataset);
  for (const auto& [cid, idxs] : classes) {
    double wsum = 0.0;
    std::vector<Rotation2> poses;
    poses.reserve(idxs.size());
    for (std::size_t i : idxs) {
      wsum += std::get<UniformArc2>(*g_mnist.table.entries[i].theta_hat).half_width;
      poses.push_back(std::get<Rotation2>(g_mnist.dataset.samples[i].pose));
    }
    const double w_hat = wsum / (double)idxs.size();
    const double w_true = std::get<UniformArc2>(spec_of.at(cid)->model).half_width;
    mae += std::abs(w_hat - w_true) / (double)classes.size();

    // class-level offset: Algorithm 1 over the whole class (k = n_class)
    const Rotation2 gamma_hat = frechet_mean_so2(poses);
    const double err =
        distance(Pose(gamma_hat), spec_of.at(cid)->canonical_offset) / kDeg;
    max_gamma_err = std::max(max_gamma_err, err);
  }
  const double elapsed = seconds_since(t0);
  Outcome o;
  o.pass = mae / kDeg < 5.0 && max_gamma_err < 3.0 && elapsed < 30.0;
  o.detail = fmt("half-width MAE %.2fdeg (<5), max class offset error %.2fdeg (<3), %.1fs (<30s)",
                 mae / kDeg, max_gamma_err, elapsed);
  return o;
}

// ---------------------------------------------------------------------------
// Criterion 2: fashion-analog sigma recovery
// ---------------------------------------------------------------------------

Outcome criterion2() {
  PresetConfig pc;
  pc.n_per_class = 500;
  pc.eps_pose = 0.02;
  const auto e = build_experiment(make_fashion_analog(kSeed, pc), pc.n_per_class,
                                  FamilyTag::WrappedGaussian, kSeed);
  std::map<std::string, const ClassSpec*> spec_of;
  for (const auto& s : e.specs) spec_of[s.class_id] = &s;

  double nonzero_mae = 0.0, zero_max = 0.0;
  int nonzero_count = 0;
  for (const auto& [cid, idxs] : by_class(e.dataset)) {
    double sum = 0.0;
    for (std::size_t i : idxs) {
      sum += std::get<WrappedGaussian2>(*e.table.entries[i].theta_hat).sigma;
    }
    const double s_hat = sum / (double)idxs.size();
    const double s_true = std::get<WrappedGaussian2>(spec_of.at(cid)->model).sigma;
    if (s_true == 0.0) {
      zero_max = std::max(zero_max, s_hat);
    } else {
      nonzero_mae += std::abs(s_hat - s_true);
      ++nonzero_count;
    }
  }
  nonzero_mae /= nonzero_count;
  Outcome o;
  o.pass = nonzero_mae / kDeg < 5.0 && zero_max / kDeg < 5.0;
  o.detail = fmt("sigma MAE %.2fdeg on nonzero buckets (<5), sigma-hat %.2fdeg on the zero bucket (<5)",
                 nonzero_mae / kDeg, zero_max / kDeg);
  return o;
}

// ---------------------------------------------------------------------------
// Criterion 3: canonical-offset invariance under 50 random offsets
// ---------------------------------------------------------------------------

struct InvarianceResult {
  double max_w = 0.0;
  double max_score_delta = 0.0;
};

InvarianceResult offset_invariance(const std::vector<ClassSpec>& specs, int n_per_class,
                                   FamilyTag family, std::uint64_t seed) {
  const Dataset base = generate_dataset(specs, n_per_class, seed);
  const LatentIndex index(base);
  IndexConfig cfg;
  const auto table = build_pseudo_labels(base, index, cfg, family, FrechetConfig{});
  const LatentIndex tidx = table_index(table);

  std::vector<std::size_t> subset;
  for (std::size_t i = 0; i < base.samples.size(); i += base.samples.size() / 96 + 1) {
    subset.push_back(i);
  }
  std::vector<NormalizationResult> base_norm;
  std::vector<double> base_scores;
  for (std::size_t i : subset) {
    base_norm.push_back(normalize_class(base, index, (int)i, cfg, family, FrechetConfig{}));
    base_scores.push_back(score(base.samples[i], table, tidx, cfg).log_likelihood);
  }

  InvarianceResult res;
  Rng rng(derive_seed(seed, "offsets"));
  for (int trial = 0; trial < 50; ++trial) {
    const Pose h = haar_pose(base.group, rng);
    Dataset shifted = base;
    for (auto& s : shifted.samples) s.pose = compose(s.pose, h);
    const LatentIndex sh_index(shifted);
    const auto sh_table = build_pseudo_labels(shifted, sh_index, cfg, family, FrechetConfig{});
    const LatentIndex sh_tidx = table_index(sh_table);
    for (std::size_t si = 0; si < subset.size(); ++si) {
      const auto moved =
          normalize_class(shifted, sh_index, (int)subset[si], cfg, family, FrechetConfig{});
      res.max_w = std::max(
          res.max_w, wasserstein_poses(moved.normalized_poses, base_norm[si].normalized_poses));
      const double sc =
          score(shifted.samples[subset[si]], sh_table, sh_tidx, cfg).log_likelihood;
      if (std::isinf(sc) && std::isinf(base_scores[si]) && sc == base_scores[si]) continue;
      res.max_score_delta = std::max(res.max_score_delta, std::abs(sc - base_scores[si]));
    }
  }
  return res;
}

Outcome criterion3() {
  PresetConfig pc2;
  pc2.n_per_class = 120;
  pc2.eps_pose = 0.02;
  const auto so2 = offset_invariance(make_mnist_analog(kSeed, pc2), pc2.n_per_class,
                                     FamilyTag::UniformArc, kSeed);
  PresetConfig pc3;
  pc3.n_per_class = 64;
  pc3.eps_pose = 0.02;
  const auto so3 = offset_invariance(make_fisher_analog(kSeed, pc3), pc3.n_per_class,
                                     FamilyTag::MatrixFisher, kSeed);
  Outcome o;
  o.pass = so2.max_w < 1e-9 && so3.max_w < 1e-6 && so2.max_score_delta < 1e-6 &&
           so3.max_score_delta < 1e-4;
  o.detail = fmt("50 offsets: SO(2) W1 %.2e (<1e-9) dscore %.2e (<1e-6); "
                 "SO(3) W2 %.2e (<1e-6) dscore %.2e (<1e-4)",
                 so2.max_w, so2.max_score_delta, so3.max_w, so3.max_score_delta);
  return o;
}

// ---------------------------------------------------------------------------
// Criterion 4: Wasserstein convergence in k and eps_pose
// ---------------------------------------------------------------------------

Outcome criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  const int ks[] = {10, 50, 250};
  const double epses[] = {0.2, 0.05, 0.0};
  const int n_class = 600, n_seeds = 20;

  auto make_spec = [&](double eps_pose) {
    ClassSpec spec;
    spec.class_id = "arc";
    spec.model = UniformArc2{60 * kDeg};
    spec.canonical_offset = Rotation2(0.9);
    spec.latent_anchor = Eigen::VectorXd::Zero(8);
    spec.latent_anchor(0) = 1.0;
    spec.eps_latent = 0.01;
    spec.eps_pose = eps_pose;
    spec.natural_pose.points.resize(3, 2);
    spec.natural_pose.points << 1, 0, 0, 1, -1, -0.5;
    spec.natural_pose.labels = {0, 1, 2};
    return spec;
  };

  // equal-mass reference: the quantile grid of U(-60deg, 60deg)
  auto reference = [&](int k) {
    std::vector<Pose> ref;
    ref.reserve(k);
    for (int i = 0; i < k; ++i) {
      ref.push_back(Rotation2(-60 * kDeg + (2.0 * i + 1.0) * 60 * kDeg / k));
    }
    return ref;
  };

  double w_by_k[3] = {0, 0, 0}, w_by_eps[3] = {0, 0, 0};
  for (int s = 0; s < n_seeds; ++s) {
    const std::uint64_t seed = 9000 + s;
    {
      const Dataset d = generate_dataset({make_spec(0.0)}, n_class, seed);
      const LatentIndex index(d);
      for (int ki = 0; ki < 3; ++ki) {
        IndexConfig cfg;
        cfg.k = ks[ki];
        const auto r = normalize_class(d, index, 0, cfg, FamilyTag::UniformArc, FrechetConfig{});
        w_by_k[ki] += wasserstein_poses(r.normalized_poses, reference(ks[ki])) / n_seeds;
      }
      // the eps = 0 point of the eps sweep reuses the same dataset
      IndexConfig cfg;
      cfg.k = 250;
      const auto r = normalize_class(d, index, 0, cfg, FamilyTag::UniformArc, FrechetConfig{});
      w_by_eps[2] += wasserstein_poses(r.normalized_poses, reference(250)) / n_seeds;
    }
    for (int ei = 0; ei < 2; ++ei) {
      const Dataset d = generate_dataset({make_spec(epses[ei])}, n_class, seed);
      const LatentIndex index(d);
      IndexConfig cfg;
      cfg.k = 250;
      const auto r = normalize_class(d, index, 0, cfg, FamilyTag::UniformArc, FrechetConfig{});
      w_by_eps[ei] += wasserstein_poses(r.normalized_poses, reference(250)) / n_seeds;
    }
  }
  const double elapsed = seconds_since(t0);
  Outcome o;
  o.pass = w_by_k[0] >= w_by_k[1] && w_by_k[1] >= w_by_k[2] && w_by_eps[0] >= w_by_eps[1] &&
           w_by_eps[1] >= w_by_eps[2] && w_by_k[2] < 0.05 && elapsed < 120.0;
  o.detail = fmt("mean W1 by k {%.3f, %.3f, %.3f} and by eps {%.3f, %.3f, %.3f}, "
                 "terminal %.3f (<0.05), %.1fs (<120s)",
                 w_by_k[0], w_by_k[1], w_by_k[2], w_by_eps[0], w_by_eps[1], w_by_eps[2],
                 w_by_k[2], elapsed);
  return o;
}

// ---------------------------------------------------------------------------
// Criterion 5: SO(3) matrix-Fisher recovery
// ---------------------------------------------------------------------------

BuiltExperiment g_fisher;  // shared with criterion 6

Outcome criterion5() {
  const auto t0 = std::chrono::steady_clock::now();
  PresetConfig pc;
  pc.n_per_class = 64;
  pc.eps_pose = 0.02;
  g_fisher = build_experiment(make_fisher_analog(kSeed, pc), pc.n_per_class,
                              FamilyTag::MatrixFisher, kSeed);

  int passing = 0, total = 0;
  const auto classes = by_class(g_fisher.dataset);
  for (const auto& [cid, idxs] : classes) {
    Eigen::Matrix3d f_sum = Eigen::Matrix3d::Zero();
    for (std::size_t i : idxs) {
      f_sum += std::get<MatrixFisher3>(*g_fisher.table.entries[i].theta_hat).F;
    }
    const Eigen::Matrix3d f_hat = f_sum / (double)idxs.size();
    Eigen::JacobiSVD<Eigen::Matrix3d> svd(f_hat, Eigen::ComputeFullU | Eigen::ComputeFullV);

    // the true axis is the dominant diagonal slot of this class's F_true
    const int class_index = std::stoi(cid.substr(3));
    Eigen::Vector3d axis_true = Eigen::Vector3d::Zero();
    axis_true(class_index % 3) = 1.0;

    const double axis_err =
        std::acos(std::clamp(std::abs(svd.matrixU().col(0).dot(axis_true)), 0.0, 1.0));
    const Eigen::Vector3d s = svd.singularValues();
    if (axis_err < 10 * kDeg && s(0) >= 20.0 && s(1) <= 1.0 && s(2) <= 1.0) ++passing;
    ++total;
  }
  const double elapsed = seconds_since(t0);
  Outcome o;
  o.pass = passing >= (total * 9 + 9) / 10 && elapsed < 300.0;
  o.detail = fmt("%d/%d classes recover axis within 10deg with s1>=20, s2,s3<=1 (>=90%%), %.1fs (<300s)",
                 passing, total, elapsed);
  return o;
}

// ---------------------------------------------------------------------------
// Criterion 6: OOD detection
// ---------------------------------------------------------------------------

Outcome criterion6() {
  IndexConfig cfg;
  const Dataset neg2 = make_haar_negatives(g_mnist.dataset, kSeed);
  const double auc2 = evaluate_ood(g_mnist.dataset, neg2, g_mnist.table, cfg).auc;
  const Dataset neg3 = make_haar_negatives(g_fisher.dataset, kSeed);
  const double auc3 = evaluate_ood(g_fisher.dataset, neg3, g_fisher.table, cfg).auc;
  Outcome o;
  o.pass = auc2 >= 0.90 && auc3 >= 0.70;
  o.detail = fmt("SO(2) mnist-analog AUC %.3f (>=0.90 required), SO(3) fisher-analog AUC %.3f (>=0.70)",
                 auc2, auc3);
  if (auc2 < 0.90) {
    o.detail += " -- note: with exact uniform-arc classes the likelihood score ties "
                "in-support negatives with positives; the Bayes-optimal pooled AUC for "
                "this generator is 13/16 ~ 0.8125, so the 0.90 bound is unreachable";
  }
  return o;
}

// ---------------------------------------------------------------------------
// Criterion 7: property suites
// ---------------------------------------------------------------------------

Outcome criterion7() {
  std::vector<std::string> failures;

  {  // group axioms and exp/log roundtrip
    Rng rng(170);
    double worst = 0.0;
    for (int i = 0; i < 300; ++i) {
      const Rotation3 a = haar_rotation3(rng), b = haar_rotation3(rng), c = haar_rotation3(rng);
      worst = std::max(worst, distance(compose(compose(a, b), c), compose(a, compose(b, c))));
      worst = std::max(worst, distance(compose(a, inverse(a)), Rotation3::identity()));
    }
    if (worst > 1e-12) failures.push_back(fmt("group axioms %.1e", worst));
    double rt = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const Rotation3 r = haar_rotation3(rng);
      rt = std::max(rt, distance(so3_exp(so3_log(r).v), r));
    }
    if (rt > 1e-9) failures.push_back(fmt("exp/log roundtrip %.1e", rt));
  }

  {  // Frechet right-equivariance
    Rng rng(171);
    MatrixFisher3 model;
    model.F = Eigen::Vector3d(30, 30, 30).asDiagonal();
    const auto base = sample(model, 60, rng);
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
      const Rotation3 h = haar_rotation3(rng);
      std::vector<Rotation3> shifted;
      for (const auto& g : base) shifted.push_back(compose(g, h));
      worst = std::max(worst, distance(frechet_mean_so3_fisher_mode(shifted),
                                       compose(frechet_mean_so3_fisher_mode(base), h)));
    }
    if (worst > 1e-8) failures.push_back(fmt("frechet equivariance %.1e", worst));
  }

  {  // circle W1 equals the Hungarian oracle
    Rng rng(172);
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
      const int n = 1 + (int)rng.index(64);
      std::vector<Rotation2> a, b;
      for (int i = 0; i < n; ++i) a.push_back(Rotation2(rng.uniform(-M_PI, M_PI)));
      for (int i = 0; i < n; ++i) b.push_back(Rotation2(rng.uniform(-M_PI, M_PI)));
      Eigen::MatrixXd cost(n, n);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) cost(i, j) = distance(a[i], b[j]);
      }
      worst = std::max(worst, std::abs(wasserstein1_so2(a, b) -
                                       hungarian_assignment_cost(cost) / n));
    }
    if (worst > 1e-10) failures.push_back(fmt("W1 vs Hungarian %.1e", worst));
  }

  {  // SO(3) W2 equals exhaustive permutation search
    Rng rng(173);
    double worst = 0.0;
    for (int t = 0; t < 20; ++t) {
      const int n = 2 + (int)rng.index(6);
      const auto a = sample_haar_so3(n, rng);
      const auto b = sample_haar_so3(n, rng);
      std::vector<int> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      double best = std::numeric_limits<double>::infinity();
      do {
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
          const double d = distance(a[i], b[perm[i]]);
          total += d * d;
        }
        best = std::min(best, total);
      } while (std::next_permutation(perm.begin(), perm.end()));
      worst = std::max(worst, std::abs(wasserstein2_so3(a, b) - std::sqrt(best / n)));
    }
    if (worst > 1e-10) failures.push_back(fmt("W2 vs brute force %.1e", worst));
  }

  {  // a_ratio/invert_a roundtrip
    double worst = 0.0;
    for (double s = 0.01; s <= 100.0; s *= 1.2) {
      worst = std::max(worst, std::abs(invert_a(a_ratio(s)) - s) / s);
    }
    if (worst > 1e-8) failures.push_back(fmt("invert_a roundtrip %.1e", worst));
  }

  {  // AUC equals the O(n^2) oracle
    Rng rng(174);
    double worst = 0.0;
    for (int t = 0; t < 100; ++t) {
      const int n = 4 + (int)rng.index(40);
      std::vector<double> scores(n);
      std::vector<int> labels(n);
      int n_pos = 0;
      for (int i = 0; i < n; ++i) {
        scores[i] = std::round(rng.uniform(-3, 3));
        labels[i] = rng.uniform() < 0.5 ? 1 : 0;
        n_pos += labels[i];
      }
      if (n_pos == 0 || n_pos == n) {
        labels[0] = 1 - labels[0];
        n_pos += labels[0] ? 1 : -1;
      }
      double wins = 0.0;
      for (int i = 0; i < n; ++i) {
        if (!labels[i]) continue;
        for (int j = 0; j < n; ++j) {
          if (labels[j]) continue;
          wins += scores[i] > scores[j] ? 1.0 : (scores[i] == scores[j] ? 0.5 : 0.0);
        }
      }
      worst = std::max(worst, std::abs(auc_roc(scores, labels) -
                                       wins / ((double)n_pos * (n - n_pos))));
    }
    if (worst > 1e-12) failures.push_back(fmt("AUC vs pairwise %.1e", worst));
  }

  {  // k-NN equals a brute-force scan
    Rng rng(175);
    bool ok = true;
    for (int t = 0; t < 1000 && ok; ++t) {
      const int n = 2 + (int)rng.index(30);
      const int dim = 1 + (int)rng.index(5);
      Eigen::MatrixXd z(n, dim);
      for (int i = 0; i < z.size(); ++i) z.data()[i] = std::round(rng.normal() * 2) / 2 + 0.25;
      for (int i = 0; i < n; ++i) {
        if (z.row(i).norm() == 0.0) z(i, 0) = 0.5;
      }
      const LatentIndex index(z);
      IndexConfig cfg;
      cfg.k = 1 + (int)rng.index(n);
      cfg.metric = t % 2 ? Metric::Cosine : Metric::Euclidean;
      Eigen::VectorXd q(dim);
      for (int i = 0; i < dim; ++i) q(i) = std::round(rng.normal() * 2) / 2;
      if (q.norm() == 0.0) q(0) = 0.5;

      std::vector<std::pair<double, int>> scored(n);
      for (int i = 0; i < n; ++i) {
        const double d = cfg.metric == Metric::Cosine
                             ? 1.0 - q.dot(z.row(i)) / (q.norm() * z.row(i).norm())
                             : (q.transpose() - z.row(i)).norm();
        scored[i] = {d, i};
      }
      std::sort(scored.begin(), scored.end());
      std::vector<int> oracle(cfg.k);
      for (int i = 0; i < cfg.k; ++i) oracle[i] = scored[i].second;
      ok = index.query(q, cfg) == oracle;
    }
    if (!ok) failures.push_back("kNN vs brute force");
  }

  Outcome o;
  o.pass = failures.empty();
  if (o.pass) {
    o.detail = "group axioms, exp/log, frechet equivariance, W1/W2 oracles, "
               "invert_a roundtrip, AUC oracle, kNN oracle all within tolerance";
  } else {
    o.detail = "failed: ";
    for (const auto& f : failures) o.detail += f + "; ";
  }
  return o;
}

// ---------------------------------------------------------------------------
// Criterion 8: CLI determinism
// ---------------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome criterion8() {
  const std::string cli = ROTSYM_CLI_PATH;
  const fs::path root = fs::temp_directory_path() / "rotsym_acceptance_cli";
  fs::remove_all(root);
  fs::create_directories(root);

  const fs::path cfg = root / "cfg.toml";
  {
    std::ofstream out(cfg);
    out << "n_per_class = 60\neps_pose = 0.02\n";
  }
  const fs::path poses = root / "poses.jsonl";
  {
    std::ofstream out(poses);
    out << R"({"type":"so2","angle":0.25})" << "\n"
        << R"({"type":"so2","angle":-0.5})" << "\n"
        << R"({"type":"so2","angle":0.1})" << "\n";
  }

  auto run_all = [&](const fs::path& dir) -> bool {
    fs::create_directories(dir);
    const std::string base = "cd " + dir.string() + " && " + cli + " --seed 21 --out . ";
    const std::vector<std::pair<std::string, std::string>> cmds = {
        {"gen", "--config " + cfg.string() + " gen --experiment mnist_analog"},
        {"normalize", "normalize --data dataset.jsonl"},
        {"estimate", "estimate --data dataset.jsonl --table table.jsonl"},
        {"eval", "eval --data dataset.jsonl --table table.jsonl --truth truth.json"},
        {"ood", "ood --data dataset.jsonl --table table.jsonl"},
        {"frechet", "frechet --poses " + poses.string()},
    };
    for (const auto& [name, args] : cmds) {
      const std::string cmd = base + args + " > stdout_" + name + ".txt 2>&1";
      if (std::system(cmd.c_str()) != 0) return false;
    }
    return true;
  };

  if (!run_all(root / "a") || !run_all(root / "b")) {
    return {false, "a CLI command exited nonzero (see " + root.string() + ")"};
  }

  int compared = 0;
  for (const auto& entry : fs::directory_iterator(root / "a")) {
    const fs::path rel = entry.path().filename();
    if (slurp(entry.path()) != slurp(root / "b" / rel)) {
      return {false, "output differs across runs: " + rel.string()};
    }
    ++compared;
  }
  Outcome o;
  o.pass = compared >= 12;  // datasets, reports, histograms, scores, stdout captures
  o.detail = fmt("%d output files byte-identical across two seeded runs of "
                 "gen/normalize/estimate/eval/ood/frechet",
                 compared);
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"mnist-analog recovery", criterion1},
      {"fashion-analog sigma recovery", criterion2},
      {"canonical-offset invariance", criterion3},
      {"wasserstein convergence in k and eps", criterion4},
      {"matrix-fisher recovery", criterion5},
      {"ood detection", criterion6},
      {"property suites", criterion7},
      {"cli determinism", criterion8},
  };
  int failed = 0;
  int idx = 0;
  for (const auto& [name, fn] : criteria) {
    ++idx;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %d: %s -- %s\n", o.pass ? "PASS" : "FAIL", idx, name,
                o.detail.c_str());
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d/8 criteria passed\n", 8 - failed);
  return failed;
}
