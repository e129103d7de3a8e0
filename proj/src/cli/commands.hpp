#pragma once

#include "config.hpp"

#include <ostream>

namespace gridloc::cli {

int cmd_rasterize(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_threshold(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_landmask(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_locate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_georef(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_identifiability(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_rescale(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_hex(const RunConfig& cfg, std::ostream& out, std::ostream& err);

}  // namespace gridloc::cli
