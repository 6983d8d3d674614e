#include "rotsym/wire.hpp"

#include <nlohmann/json.hpp>

namespace rotsym {

using nlohmann::json;

json pose_to_json(const Pose& p) {
  if (const auto* r2 = std::get_if<Rotation2>(&p)) {
    return json{{"type", "so2"}, {"angle", r2->angle}};
  }
  const auto& q = std::get<Rotation3>(p).quat();
  return json{{"type", "so3"}, {"quat", {q.w(), q.x(), q.y(), q.z()}}};
}

Pose pose_from_json(const json& j) {
  if (!j.is_object() || !j.contains("type")) throw data_error("pose: not an object with 'type'");
  const std::string type = j.at("type").get<std::string>();
  if (type == "so2") {
    const double angle = j.at("angle").get<double>();
    if (!std::isfinite(angle)) throw data_error("pose: non-finite angle");
    return Rotation2(angle);
  }
  if (type == "so3") {
    const auto& q = j.at("quat");
    if (!q.is_array() || q.size() != 4) throw data_error("pose: quat must have 4 entries");
    return Rotation3::from_quat(q[0].get<double>(), q[1].get<double>(),
                                q[2].get<double>(), q[3].get<double>());
  }
  throw data_error("pose: unknown type '" + type + "'");
}

json model_to_json(const SymmetryModel& m) {
  if (const auto* u = std::get_if<UniformArc2>(&m)) {
    return json{{"family", "uniform_arc"}, {"half_width", u->half_width}};
  }
  if (const auto* w = std::get_if<WrappedGaussian2>(&m)) {
    return json{{"family", "wrapped_gaussian"}, {"sigma", w->sigma}};
  }
  const auto& f = std::get<MatrixFisher3>(m);
  json rows = json::array();
  for (int i = 0; i < 3; ++i) {
    rows.push_back({f.F(i, 0), f.F(i, 1), f.F(i, 2)});
  }
  return json{{"family", "matrix_fisher"}, {"F", rows}};
}

SymmetryModel model_from_json(const json& j) {
  const std::string family = j.at("family").get<std::string>();
  if (family == "uniform_arc") {
    const double a = j.at("half_width").get<double>();
    if (a < 0.0 || a > M_PI + 1e-12) throw data_error("model: half_width out of [0, pi]");
    return UniformArc2{a};
  }
  if (family == "wrapped_gaussian") {
    const double s = j.at("sigma").get<double>();
    if (s < 0.0) throw data_error("model: sigma must be >= 0");
    return WrappedGaussian2{s};
  }
  if (family == "matrix_fisher") {
    const auto& rows = j.at("F");
    if (!rows.is_array() || rows.size() != 3) throw data_error("model: F must be 3x3");
    MatrixFisher3 f;
    for (int i = 0; i < 3; ++i) {
      if (!rows[i].is_array() || rows[i].size() != 3) throw data_error("model: F must be 3x3");
      for (int k = 0; k < 3; ++k) f.F(i, k) = rows[i][k].get<double>();
    }
    return f;
  }
  throw data_error("model: unknown family '" + family + "'");
}

}  // namespace rotsym
