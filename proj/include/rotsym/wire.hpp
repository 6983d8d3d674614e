#pragma once

#include <nlohmann/json_fwd.hpp>

#include "rotsym/distributions.hpp"
#include "rotsym/group.hpp"

// JSON wire formats shared by datasets, tables and reports:
//   pose   {"type":"so2","angle":r} | {"type":"so3","quat":[w,x,y,z]}
//   model  {"family":"uniform_arc","half_width":a}
//          | {"family":"wrapped_gaussian","sigma":s}
//          | {"family":"matrix_fisher","F":[[..],[..],[..]]}
// The hemisphere convention is enforced when poses are loaded.

namespace rotsym {

nlohmann::json pose_to_json(const Pose& p);
Pose pose_from_json(const nlohmann::json& j);

nlohmann::json model_to_json(const SymmetryModel& m);
SymmetryModel model_from_json(const nlohmann::json& j);

}  // namespace rotsym
