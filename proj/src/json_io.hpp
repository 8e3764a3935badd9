#pragma once

#include <json.hpp>

#include "rtmhd/model.hpp"

namespace rtmhd {

using Json = nlohmann::json;

Json profile_to_json(const ProfileSpec& spec);
ProfileSpec profile_from_json(const Json& j);
Json params_to_json(const PhysicalParams& p);
PhysicalParams params_from_json(const Json& j, const PhysicalParams& defaults = {});
Json magnetic_to_json(const MagneticConfig& m);
MagneticConfig magnetic_from_json(const Json& j, const MagneticConfig& defaults = {});
Json grid_to_json(const Grid1D& g);
Grid1D grid_from_json(const Json& j, const Grid1D& defaults = {});

}  // namespace rtmhd
