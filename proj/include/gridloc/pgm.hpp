#pragma once

#include "gridloc/raster.hpp"

#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>

namespace gridloc {

using GrayImage = Raster<std::uint8_t>;

/// Binary PGM (P5, maxval 255). Comment lines are written after the magic.
void write_pgm(std::ostream& out, const GrayImage& image, std::span<const std::string> comments = {});

/// Set bits become black (0), clear bits white (255).
void write_pgm(std::ostream& out, const BinaryImage& image, std::span<const std::string> comments = {});

/// Linear min-max stretch to [0, 255]; a constant raster maps to 0.
GrayImage stretch_to_gray(const RealRaster& raster);

GrayImage read_pgm(std::istream& in);

/// Dark pixels (< 128) read as set bits.
BinaryImage read_binary_pgm(std::istream& in);

}  // namespace gridloc
