#pragma once

#include "gridloc/geo.hpp"
#include "gridloc/grid.hpp"
#include "gridloc/match.hpp"

#include <nlohmann/json.hpp>

namespace gridloc {

void to_json(nlohmann::json& j, const BBox& b);
void from_json(const nlohmann::json& j, BBox& b);

void to_json(nlohmann::json& j, const ProjectionRef& r);
void from_json(const nlohmann::json& j, ProjectionRef& r);

void to_json(nlohmann::json& j, const GridSpec& s);
void from_json(const nlohmann::json& j, GridSpec& s);

void to_json(nlohmann::json& j, const TransformedMatch& m);
void from_json(const nlohmann::json& j, TransformedMatch& m);

}  // namespace gridloc
