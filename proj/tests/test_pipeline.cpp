#include <filesystem>
#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

#include "doctest.h"
#include "rotsym/pipeline.hpp"
#include "../src/toml_lite.hpp"

using namespace rotsym;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p);
  out << text;
}

}  // namespace

TEST_CASE("toml reader handles the class-file subset") {
  const auto doc = parse_toml(R"(
# comment
group = "so2"          # trailing comment
latent_dim = 16
ratio = 1.5e-2
flag = true
name = "with # hash and \"quotes\""

[meta]
tags = ["a", "b"]

[[class]]
id = "c0"
F = [[1.0, 0.0, 0.0],
     [0.0, 2.0, 0.0],
     [0.0, 0.0, 3.0]]

[[class]]
id = "c1"
)");
  CHECK(doc.at("group") == "so2");
  CHECK(doc.at("latent_dim") == 16);
  CHECK(doc.at("ratio").get<double>() == doctest::Approx(0.015));
  CHECK(doc.at("flag") == true);
  CHECK(doc.at("name") == "with # hash and \"quotes\"");
  CHECK(doc.at("meta").at("tags")[1] == "b");
  REQUIRE(doc.at("class").size() == 2);
  CHECK(doc.at("class")[0].at("F")[1][1] == 2.0);
  CHECK(doc.at("class")[1].at("id") == "c1");
}

TEST_CASE("toml reader rejects malformed input with line numbers") {
  try {
    parse_toml("a = 1\nb = \n", "bad.toml");
    CHECK(false);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("bad.toml:2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_toml("a = 1\na = 2\n"), Error);
  CHECK_THROWS_AS(parse_toml("[t\n"), Error);
  CHECK_THROWS_AS(parse_toml("k = [1, 2\n"), Error);
}

TEST_CASE("presets honor the experiment grids") {
  const auto mnist = make_mnist_analog(1);
  REQUIRE(mnist.size() == 10);
  for (int c = 0; c < 10; ++c) {
    const double a = std::get<UniformArc2>(mnist[c].model).half_width * 180.0 / M_PI;
    CHECK(a == doctest::Approx(c < 5 ? 60.0 : 90.0));
  }

  const auto fashion = make_fashion_analog(1);
  for (int c = 0; c < 10; ++c) {
    const double s = std::get<WrappedGaussian2>(fashion[c].model).sigma * 180.0 / M_PI;
    CHECK(s == doctest::Approx(c < 3 ? 0.0 : (c < 6 ? 32.0 : 64.0)));
  }

  const auto fisher = make_fisher_analog(1);
  REQUIRE(fisher.size() == 30);
  for (int c = 0; c < 30; ++c) {
    const Eigen::Matrix3d f = std::get<MatrixFisher3>(fisher[c].model).F;
    CHECK(f(c % 3, c % 3) == doctest::Approx(100.0));
    CHECK(f.diagonal().sum() == doctest::Approx(100.0 + 2 * 0.001));
  }
}

TEST_CASE("cmd_gen writes byte-identical outputs across runs") {
  const auto dir_a = fresh_dir("rotsym_gen_a");
  const auto dir_b = fresh_dir("rotsym_gen_b");
  GenOptions opts;
  opts.experiment = "fisher_analog";
  opts.seed = 7;
  auto cfg = fs::temp_directory_path() / "rotsym_gen_cfg.toml";
  write_file(cfg, "n_per_class = 8\n");
  opts.config_path = cfg.string();

  opts.out_dir = dir_a.string();
  const std::string sum_a = cmd_gen(opts);
  opts.out_dir = dir_b.string();
  const std::string sum_b = cmd_gen(opts);

  CHECK(slurp(dir_a / "dataset.jsonl") == slurp(dir_b / "dataset.jsonl"));
  CHECK(slurp(dir_a / "truth.json") == slurp(dir_b / "truth.json"));
  CHECK(sum_a.substr(0, sum_a.rfind(' ')) == sum_b.substr(0, sum_b.rfind(' ')));

  // every class has the configured sample count
  const Dataset d = load_dataset(dir_a / "dataset.jsonl");
  std::map<std::string, int> counts;
  for (const auto& s : d.samples) counts[s.class_id]++;
  CHECK(counts.size() == 30);
  for (const auto& [id, n] : counts) CHECK(n == 8);
}

TEST_CASE("fisher preset defaults to 64 samples per class") {
  const auto dir = fresh_dir("rotsym_gen_fisher64");
  GenOptions opts;
  opts.experiment = "fisher_analog";
  opts.seed = 3;
  opts.out_dir = dir.string();
  cmd_gen(opts);
  const Dataset d = load_dataset(dir / "dataset.jsonl");
  std::map<std::string, int> counts;
  for (const auto& s : d.samples) counts[s.class_id]++;
  for (const auto& [id, n] : counts) CHECK(n >= 64);
}

TEST_CASE("custom spec generation and validation errors") {
  const auto dir = fresh_dir("rotsym_gen_custom");
  const auto spec = fs::temp_directory_path() / "rotsym_spec.toml";
  write_file(spec, R"(
group = "so2"
latent_dim = 8
n_per_class = 40

[[class]]
id = "a"
family = "uniform_arc"
half_width_deg = 30.0
offset_deg = 90.0

[[class]]
id = "b"
family = "wrapped_gaussian"
sigma_deg = 20.0
)");
  GenOptions opts;
  opts.experiment = "custom";
  opts.spec_path = spec.string();
  opts.seed = 5;
  opts.out_dir = dir.string();
  cmd_gen(opts);
  const Dataset d = load_dataset(dir / "dataset.jsonl");
  CHECK(d.samples.size() == 80);
  const TruthInfo truth = load_truth(dir / "truth.json");
  CHECK(truth.specs.size() == 2);
  CHECK(distance(truth.specs[0].canonical_offset, Pose(Rotation2(M_PI / 2))) < 1e-12);

  // duplicate class ids are a config error with the field visible
  write_file(spec, R"(
group = "so2"
[[class]]
id = "dup"
family = "uniform_arc"
half_width_deg = 30.0
[[class]]
id = "dup"
family = "uniform_arc"
half_width_deg = 30.0
)");
  try {
    cmd_gen(opts);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Config);
    CHECK(std::string(e.what()).find("dup") != std::string::npos);
  }

  // missing family parameter names the offending field path
  write_file(spec, R"(
group = "so2"
[[class]]
id = "a"
family = "uniform_arc"
)");
  try {
    cmd_gen(opts);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("class[0].half_width_deg") != std::string::npos);
  }
}

TEST_CASE("pipeline end to end on a small custom dataset") {
  const auto dir = fresh_dir("rotsym_pipe");
  const auto spec = fs::temp_directory_path() / "rotsym_pipe_spec.toml";
  write_file(spec, R"(
group = "so2"
latent_dim = 8
n_per_class = 120

[[class]]
id = "a"
family = "uniform_arc"
half_width_deg = 60.0
eps_pose = 0.02

[[class]]
id = "b"
family = "uniform_arc"
half_width_deg = 90.0
eps_pose = 0.02
)");
  GenOptions gen;
  gen.experiment = "custom";
  gen.spec_path = spec.string();
  gen.seed = 11;
  gen.out_dir = dir.string();
  cmd_gen(gen);

  RunOptions run;
  run.data_path = (dir / "dataset.jsonl").string();
  run.out_dir = dir.string();
  run.seed = 11;

  const std::string norm_summary = cmd_normalize(run);
  CHECK(norm_summary.find("failed=0") != std::string::npos);
  CHECK(fs::exists(dir / "table.jsonl"));
  CHECK(fs::exists(dir / "hist_relative.csv"));
  CHECK(fs::exists(dir / "hist_normalized.csv"));

  run.table_path = (dir / "table.jsonl").string();
  cmd_estimate(run);
  CHECK(fs::exists(dir / "estimates.jsonl"));

  run.truth_path = (dir / "truth.json").string();
  cmd_eval(run);
  const auto report = nlohmann::json::parse(slurp(dir / "eval_report.json"));
  CHECK(report.at("classes").size() == 2);
  CHECK(report.at("theta_mae").get<double>() < 5.0);    // degrees
  CHECK(report.at("gamma_mae_deg").get<double>() < 5.0);

  cmd_ood(run);
  const auto ood = nlohmann::json::parse(slurp(dir / "ood_report.json"));
  CHECK(ood.at("auc").get<double>() > 0.6);

  // repeated normalize runs are byte-identical
  const auto dir2 = fresh_dir("rotsym_pipe2");
  RunOptions run2 = run;
  run2.out_dir = dir2.string();
  cmd_normalize(run2);
  CHECK(slurp(dir / "table.jsonl") == slurp(dir2 / "table.jsonl"));
  CHECK(slurp(dir / "hist_normalized.csv") == slurp(dir2 / "hist_normalized.csv"));
}

TEST_CASE("pipeline end to end on a custom SO(3) dataset") {
  const auto dir = fresh_dir("rotsym_pipe3d");
  const auto spec = fs::temp_directory_path() / "rotsym_pipe3d_spec.toml";
  write_file(spec, R"(
group = "so3"
latent_dim = 8
n_per_class = 64

[[class]]
id = "m0"
family = "matrix_fisher"
F = [[100.0, 0.0, 0.0], [0.0, 0.001, 0.0], [0.0, 0.0, 0.001]]
eps_pose = 0.02

[[class]]
id = "m1"
family = "matrix_fisher"
F = [[0.001, 0.0, 0.0], [0.0, 100.0, 0.0], [0.0, 0.0, 0.001]]
offset_quat = [1.0, 0.0, 0.0, 0.0]
eps_pose = 0.02
)");
  GenOptions gen;
  gen.experiment = "custom";
  gen.spec_path = spec.string();
  gen.seed = 17;
  gen.out_dir = dir.string();
  cmd_gen(gen);

  const TruthInfo truth = load_truth(dir / "truth.json");
  CHECK(distance(truth.specs[1].canonical_offset, identity_pose(Group::SO3)) == 0.0);

  RunOptions run;
  run.data_path = (dir / "dataset.jsonl").string();
  run.out_dir = dir.string();
  run.seed = 17;
  CHECK(cmd_normalize(run).find("failed=0") != std::string::npos);
  run.table_path = (dir / "table.jsonl").string();
  run.truth_path = (dir / "truth.json").string();
  cmd_estimate(run);
  cmd_eval(run);
  const auto report = nlohmann::json::parse(slurp(dir / "eval_report.json"));
  CHECK(report.at("classes").size() == 2);
  // W2 between the recovered set and a fresh draw of a spin-symmetric
  // distribution is dominated by the free spin angle; just check sanity
  for (const auto& c : report.at("classes")) {
    CHECK(c.at("status") == "ok");
    CHECK(c.at("w1").get<double>() >= 0.0);
  }
  const std::string ood_summary = cmd_ood(run);
  const auto ood = nlohmann::json::parse(slurp(dir / "ood_report.json"));
  CHECK(ood.at("auc").get<double>() > 0.9);  // concentrated axes separate well

  // SO(3) pose-file mean via both estimators
  const auto poses = fs::temp_directory_path() / "rotsym_pipe3d_poses.jsonl";
  {
    std::ofstream out(poses);
    for (const auto& line : {R"({"type":"so3","quat":[1.0,0.0,0.0,0.0]})",
                             R"({"type":"so3","quat":[0.9689124217106447,0.0,0.0,0.24740395925452294]})"}) {
      out << line << "\n";
    }
  }
  FrechetOptions fo;
  fo.poses_path = poses.string();
  CHECK(cmd_frechet(fo).find("method=fisher_mode") != std::string::npos);
  fo.method = "karcher";
  const std::string karcher_summary = cmd_frechet(fo);
  // mean of identity and rot_z(0.5) is rot_z(0.25)
  const auto mean_json =
      nlohmann::json::parse(karcher_summary.substr(karcher_summary.find("mean=") + 5));
  CHECK(mean_json.at("quat")[3].get<double>() ==
        doctest::Approx(std::sin(0.125)).epsilon(1e-9));
}

TEST_CASE("group mismatch is a config error before computation") {
  const auto dir = fresh_dir("rotsym_pipe_mismatch");
  GenOptions gen;
  gen.experiment = "mnist_analog";
  gen.seed = 2;
  gen.out_dir = dir.string();
  auto cfg = fs::temp_directory_path() / "rotsym_small_cfg.toml";
  write_file(cfg, "n_per_class = 30\n");
  gen.config_path = cfg.string();
  cmd_gen(gen);

  RunOptions run;
  run.data_path = (dir / "dataset.jsonl").string();
  run.out_dir = dir.string();
  run.family = FamilyTag::MatrixFisher;  // SO(3) family on an SO(2) dataset
  try {
    cmd_normalize(run);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Config);
  }
}

TEST_CASE("malformed config values surface as config errors") {
  const auto dir = fresh_dir("rotsym_badcfg");
  const auto cfg = fs::temp_directory_path() / "rotsym_badcfg.toml";
  write_file(cfg, "n_per_class = \"many\"\n");
  GenOptions gen;
  gen.experiment = "mnist_analog";
  gen.out_dir = dir.string();
  gen.config_path = cfg.string();
  try {
    cmd_gen(gen);
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Config);
  }

  GenOptions unknown;
  unknown.experiment = "cifar_analog";
  unknown.out_dir = dir.string();
  CHECK_THROWS_AS(cmd_gen(unknown), Error);
}

TEST_CASE("cmd_frechet reports the mean of a pose file") {
  const auto path = fs::temp_directory_path() / "rotsym_poses.jsonl";
  write_file(path, R"({"type":"so2","angle":0.4}
{"type":"so2","angle":-0.4}
{"type":"so2","angle":0.0}
)");
  FrechetOptions opts;
  opts.poses_path = path.string();
  const std::string summary = cmd_frechet(opts);
  CHECK(summary.find("method=circular") != std::string::npos);
  CHECK(summary.find("\"angle\":0.0") != std::string::npos);

  opts.method = "karcher";
  CHECK_THROWS_AS(cmd_frechet(opts), Error);  // SO(3) methods on an SO(2) file
}
