#pragma once

#include <optional>
#include <string>

#include "rotsym/normalize.hpp"
#include "rotsym/ood.hpp"

// File-level pipeline commands backing the CLI subcommands. Every command
// is a pure function of (input files, options, seed): repeated runs write
// byte-identical outputs. Each returns a one-line summary.

namespace rotsym {

struct GenOptions {
  std::string experiment = "custom";  // mnist_analog|fashion_analog|fisher_analog|custom
  std::string spec_path;              // class-spec TOML, required for custom
  std::string config_path;            // optional overrides TOML
  std::string out_dir;
  std::uint64_t seed = 0;
};

// Writes <out>/dataset.jsonl and <out>/truth.json.
std::string cmd_gen(const GenOptions& opts);

struct RunOptions {
  std::string data_path;
  std::string table_path;   // consumed by estimate/eval/ood; written by normalize
  std::string truth_path;   // consumed by eval
  std::string config_path;  // optional overrides TOML
  std::string out_dir;
  std::uint64_t seed = 0;
  // Unset fields fall back to the config file, then to the defaults
  // (k = 25, cosine, uniform_arc for SO(2) / matrix_fisher for SO(3)).
  int k = 0;
  std::optional<Metric> metric;
  std::optional<FamilyTag> family;
};

// Algorithm-1 pass over every sample: writes <out>/table.jsonl,
// <out>/normalize_report.json and the relative/normalized histograms.
std::string cmd_normalize(const RunOptions& opts);

// Theta/Lambda predictions for every sample of a dataset against a table:
// writes <out>/estimates.jsonl and <out>/estimate_report.json.
std::string cmd_estimate(const RunOptions& opts);

// Ground-truth comparison (needs truth.json): writes <out>/eval_report.json
// plus histogram CSVs.
std::string cmd_eval(const RunOptions& opts);

// Haar-re-posed negatives vs the dataset: writes <out>/ood_scores.csv and
// <out>/ood_report.json.
std::string cmd_ood(const RunOptions& opts);

struct FrechetOptions {
  std::string poses_path;       // JSONL of pose objects
  std::string method = "auto";  // auto|circular|fisher_mode|karcher
};

// Ad-hoc mean of a pose file; the summary carries the mean as JSON.
std::string cmd_frechet(const FrechetOptions& opts);

// Preset spec builders (exposed for tests and the acceptance suite).
struct PresetConfig {
  int n_per_class = 500;
  int latent_dim = 32;
  double eps_pose = 0.02;
  double eps_latent = 0.02;
  double eps_shape = 0.0;
  int n_atoms = 8;
};

std::vector<ClassSpec> make_mnist_analog(std::uint64_t seed, const PresetConfig& pc = {});
std::vector<ClassSpec> make_fashion_analog(std::uint64_t seed, const PresetConfig& pc = {});
std::vector<ClassSpec> make_fisher_analog(std::uint64_t seed, const PresetConfig& pc = {});

struct TruthInfo {
  std::vector<ClassSpec> specs;
  int n_per_class = 0;
};

void save_truth(const TruthInfo& truth, std::uint64_t seed, const std::filesystem::path& path);
TruthInfo load_truth(const std::filesystem::path& path);

std::vector<ClassSpec> load_class_specs_toml(const std::filesystem::path& path,
                                             std::uint64_t seed, int* n_per_class_out);

}  // namespace rotsym
