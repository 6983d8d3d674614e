#include "rotsym/rotsym.h"

#include <cstring>
#include <new>

#include "rotsym/pipeline.hpp"

using namespace rotsym;

namespace {

thread_local std::string g_last_error;

rotsym_status status_from(const Error& e) {
  switch (e.code()) {
    case ErrorCode::Config: return ROTSYM_ERR_CONFIG;
    case ErrorCode::Data: return ROTSYM_ERR_DATA;
    case ErrorCode::Degenerate: return ROTSYM_ERR_DEGENERATE;
    case ErrorCode::NonConvergence: return ROTSYM_ERR_NONCONVERGENCE;
    case ErrorCode::Internal: return ROTSYM_ERR_INTERNAL;
  }
  return ROTSYM_ERR_INTERNAL;
}

template <typename Fn>
rotsym_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return ROTSYM_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_from(e);
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return ROTSYM_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return ROTSYM_ERR_INTERNAL;
  }
}

void copy_summary(const std::string& text, char* summary, size_t cap) {
  if (!summary || cap == 0) return;
  const size_t n = std::min(cap - 1, text.size());
  std::memcpy(summary, text.data(), n);
  summary[n] = '\0';
}

std::string str_or(const char* s, const char* fallback = "") {
  return s ? std::string(s) : std::string(fallback);
}

std::vector<Rotation3> quats_to_rotations(const double* quats, size_t n) {
  std::vector<Rotation3> rs;
  rs.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    rs.push_back(Rotation3::from_quat(quats[4 * i], quats[4 * i + 1], quats[4 * i + 2],
                                      quats[4 * i + 3]));
  }
  return rs;
}

RunOptions to_run_options(const rotsym_run_opts* o) {
  if (!o) throw config_error("options must not be NULL");
  RunOptions r;
  r.data_path = str_or(o->data_path);
  r.table_path = str_or(o->table_path);
  r.truth_path = str_or(o->truth_path);
  r.config_path = str_or(o->config_path);
  r.out_dir = str_or(o->out_dir);
  r.seed = o->seed;
  r.k = o->k;
  if (o->metric) r.metric = metric_from_name(o->metric);
  if (o->family) r.family = family_from_name(o->family);
  return r;
}

}  // namespace

struct rotsym_dataset {
  Dataset value;
};

struct rotsym_table {
  PseudoLabelTable value;
};

extern "C" {

const char* rotsym_version(void) { return "0.1.0"; }

const char* rotsym_last_error(void) { return g_last_error.c_str(); }

rotsym_status rotsym_dataset_load(const char* path, rotsym_dataset** out) {
  return guarded([&] {
    if (!path || !out) throw config_error("path and out must not be NULL");
    *out = new rotsym_dataset{load_dataset(path)};
  });
}

rotsym_status rotsym_dataset_save(const rotsym_dataset* d, const char* path) {
  return guarded([&] {
    if (!d || !path) throw config_error("dataset and path must not be NULL");
    save_dataset(d->value, path);
  });
}

void rotsym_dataset_free(rotsym_dataset* d) { delete d; }

size_t rotsym_dataset_size(const rotsym_dataset* d) { return d ? d->value.samples.size() : 0; }

int rotsym_dataset_group_dim(const rotsym_dataset* d) {
  if (!d) return 0;
  return d->value.group == Group::SO2 ? 2 : 3;
}

int rotsym_dataset_latent_dim(const rotsym_dataset* d) { return d ? d->value.latent_dim : 0; }

rotsym_status rotsym_table_load(const char* path, rotsym_table** out) {
  return guarded([&] {
    if (!path || !out) throw config_error("path and out must not be NULL");
    *out = new rotsym_table{load_table(path)};
  });
}

void rotsym_table_free(rotsym_table* t) { delete t; }

size_t rotsym_table_size(const rotsym_table* t) { return t ? t->value.entries.size() : 0; }

rotsym_status rotsym_so2_frechet_mean(const double* angles, size_t n, double* out_angle) {
  return guarded([&] {
    if (!angles || !out_angle) throw config_error("angles and out must not be NULL");
    std::vector<Rotation2> rs;
    rs.reserve(n);
    for (size_t i = 0; i < n; ++i) rs.push_back(Rotation2(angles[i]));
    *out_angle = frechet_mean_so2(rs).angle;
  });
}

rotsym_status rotsym_so3_frechet_mean(const double* quats_wxyz, size_t n, int method,
                                      double* out_quat_wxyz) {
  return guarded([&] {
    if (!quats_wxyz || !out_quat_wxyz) throw config_error("quats and out must not be NULL");
    const auto rs = quats_to_rotations(quats_wxyz, n);
    Rotation3 mean;
    if (method == 1) {
      mean = frechet_mean_so3_karcher(rs);
    } else {
      mean = frechet_mean_so3_fisher_mode(rs);
    }
    out_quat_wxyz[0] = mean.quat().w();
    out_quat_wxyz[1] = mean.quat().x();
    out_quat_wxyz[2] = mean.quat().y();
    out_quat_wxyz[3] = mean.quat().z();
  });
}

rotsym_status rotsym_wasserstein1_so2(const double* a, const double* b, size_t n, double* out) {
  return guarded([&] {
    if (!a || !b || !out) throw config_error("inputs must not be NULL");
    std::vector<Rotation2> xs, ys;
    xs.reserve(n);
    ys.reserve(n);
    for (size_t i = 0; i < n; ++i) xs.push_back(Rotation2(a[i]));
    for (size_t i = 0; i < n; ++i) ys.push_back(Rotation2(b[i]));
    *out = wasserstein1_so2(xs, ys);
  });
}

rotsym_status rotsym_wasserstein2_so3(const double* quats_a, const double* quats_b, size_t n,
                                      double* out) {
  return guarded([&] {
    if (!quats_a || !quats_b || !out) throw config_error("inputs must not be NULL");
    *out = wasserstein2_so3(quats_to_rotations(quats_a, n), quats_to_rotations(quats_b, n));
  });
}

rotsym_status rotsym_auc_roc(const double* scores, const int* labels, size_t n, double* out) {
  return guarded([&] {
    if (!scores || !labels || !out) throw config_error("inputs must not be NULL");
    *out = auc_roc(std::span<const double>(scores, n), std::span<const int>(labels, n));
  });
}

rotsym_status rotsym_a_ratio(double s, double* out) {
  return guarded([&] {
    if (!out) throw config_error("out must not be NULL");
    *out = a_ratio(s);
  });
}

rotsym_status rotsym_invert_a(double a, double* out) {
  return guarded([&] {
    if (!out) throw config_error("out must not be NULL");
    *out = invert_a(a);
  });
}

rotsym_status rotsym_cmd_gen(const rotsym_gen_opts* opts, char* summary, size_t summary_cap) {
  return guarded([&] {
    if (!opts) throw config_error("options must not be NULL");
    GenOptions g;
    g.experiment = str_or(opts->experiment, "custom");
    g.spec_path = str_or(opts->spec_path);
    g.config_path = str_or(opts->config_path);
    g.out_dir = str_or(opts->out_dir);
    g.seed = opts->seed;
    copy_summary(cmd_gen(g), summary, summary_cap);
  });
}

#define ROTSYM_RUN_CMD(NAME, FN)                                                      \
  rotsym_status NAME(const rotsym_run_opts* opts, char* summary, size_t summary_cap) { \
    return guarded([&] { copy_summary(FN(to_run_options(opts)), summary, summary_cap); }); \
  }

ROTSYM_RUN_CMD(rotsym_cmd_normalize, cmd_normalize)
ROTSYM_RUN_CMD(rotsym_cmd_estimate, cmd_estimate)
ROTSYM_RUN_CMD(rotsym_cmd_eval, cmd_eval)
ROTSYM_RUN_CMD(rotsym_cmd_ood, cmd_ood)

#undef ROTSYM_RUN_CMD

rotsym_status rotsym_cmd_frechet(const rotsym_frechet_opts* opts, char* summary,
                                 size_t summary_cap) {
  return guarded([&] {
    if (!opts) throw config_error("options must not be NULL");
    FrechetOptions f;
    f.poses_path = str_or(opts->poses_path);
    f.method = str_or(opts->method, "auto");
    copy_summary(cmd_frechet(f), summary, summary_cap);
  });
}

}  // extern "C"
