// rotsym command-line front end. Parses arguments and drives the shared
// library through its C API; all pipeline logic lives behind rotsym.h.

#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "rotsym/rotsym.h"

namespace {

constexpr size_t kSummaryCap = 4096;

int finish(rotsym_status status, const char* summary) {
  if (status == ROTSYM_OK) {
    std::printf("%s\n", summary);
    return 0;
  }
  std::fprintf(stderr, "error: %s\n", rotsym_last_error());
  switch (status) {
    case ROTSYM_ERR_CONFIG: return 2;
    case ROTSYM_ERR_DATA: return 3;
    case ROTSYM_ERR_DEGENERATE:
    case ROTSYM_ERR_NONCONVERGENCE: return 4;
    default: return 1;
  }
}

const char* opt(const std::string& s) { return s.empty() ? nullptr : s.c_str(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rotsym: per-class rotational symmetry discovery via "
               "canonical orientation normalization"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::string config, out_dir;
  app.add_option("--seed", seed, "master seed (default 0)")->capture_default_str();
  app.add_option("--config", config, "TOML override file");
  app.add_option("--out", out_dir, "output directory");

  // gen
  auto* gen = app.add_subcommand("gen", "generate an oracle dataset");
  gen->fallthrough();
  std::string experiment = "custom", spec_path;
  gen->add_option("--experiment", experiment,
                  "mnist_analog | fashion_analog | fisher_analog | custom")
      ->capture_default_str();
  gen->add_option("--spec", spec_path, "class-spec TOML (custom experiments)");

  // shared pipeline options
  std::string data_path, table_path, truth_path, metric, family;
  int k = 0;
  auto add_run_opts = [&](CLI::App* cmd, bool needs_table, bool needs_truth) {
    cmd->fallthrough();
    cmd->add_option("--data", data_path, "dataset JSONL")->required();
    if (needs_table) cmd->add_option("--table", table_path, "pseudo-label table JSONL")->required();
    if (needs_truth) cmd->add_option("--truth", truth_path, "truth JSON from gen")->required();
    cmd->add_option("--k", k, "neighborhood size (default 25)");
    cmd->add_option("--metric", metric, "cosine | euclidean");
    cmd->add_option("--family", family, "uniform_arc | wrapped_gaussian | matrix_fisher");
  };
  auto* normalize = app.add_subcommand("normalize", "run canonical orientation normalization");
  add_run_opts(normalize, false, false);
  auto* estimate = app.add_subcommand("estimate", "predict per-sample parameters and offsets");
  add_run_opts(estimate, true, false);
  auto* eval = app.add_subcommand("eval", "evaluate recovery against the oracle truth");
  add_run_opts(eval, true, true);
  auto* ood = app.add_subcommand("ood", "score Haar-re-posed negatives vs the dataset");
  add_run_opts(ood, true, false);

  // frechet
  auto* frechet = app.add_subcommand("frechet", "mean of a pose JSONL file");
  frechet->fallthrough();
  std::string poses_path, method = "auto";
  frechet->add_option("--poses", poses_path, "pose JSONL file")->required();
  frechet->add_option("--method", method, "auto | circular | fisher_mode | karcher")
      ->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  char summary[kSummaryCap] = {0};
  if (gen->parsed()) {
    rotsym_gen_opts o{experiment.c_str(), opt(spec_path), opt(config), out_dir.c_str(), seed};
    return finish(rotsym_cmd_gen(&o, summary, kSummaryCap), summary);
  }

  rotsym_run_opts o{opt(data_path), opt(table_path), opt(truth_path), opt(config),
                    out_dir.c_str(), seed, k, opt(metric), opt(family)};
  if (normalize->parsed()) return finish(rotsym_cmd_normalize(&o, summary, kSummaryCap), summary);
  if (estimate->parsed()) return finish(rotsym_cmd_estimate(&o, summary, kSummaryCap), summary);
  if (eval->parsed()) return finish(rotsym_cmd_eval(&o, summary, kSummaryCap), summary);
  if (ood->parsed()) return finish(rotsym_cmd_ood(&o, summary, kSummaryCap), summary);
  if (frechet->parsed()) {
    rotsym_frechet_opts f{poses_path.c_str(), method.c_str()};
    return finish(rotsym_cmd_frechet(&f, summary, kSummaryCap), summary);
  }
  return 2;
}
