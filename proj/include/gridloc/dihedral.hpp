#pragma once

#include "gridloc/raster.hpp"

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>

namespace gridloc {

/// The 8 axis-aligned symmetries of a pixel grid. Rotations are clockwise as
/// displayed (y grows down). Enumeration order is the search tie-break order.
enum class Dihedral : std::uint8_t {
    identity,
    rot90,
    rot180,
    rot270,
    flip_h,  ///< mirror left-right
    flip_v,  ///< mirror top-bottom
    transpose,
    anti_transpose,
};

inline constexpr std::array<Dihedral, 8> kAllDihedral = {
    Dihedral::identity, Dihedral::rot90,  Dihedral::rot180,    Dihedral::rot270,
    Dihedral::flip_h,   Dihedral::flip_v, Dihedral::transpose, Dihedral::anti_transpose,
};

/// Action on centered pixel coordinates (x, y).
Eigen::Matrix2i dihedral_matrix(Dihedral d);

/// Element equal to applying `first`, then `second`.
Dihedral compose(Dihedral first, Dihedral second);

Dihedral inverse(Dihedral d);

bool swaps_axes(Dihedral d);

std::string_view to_string(Dihedral d);
std::optional<Dihedral> dihedral_from_string(std::string_view name);

/// Where pixel `p` of a width x height image lands after applying `d`.
CellIndex map_index(Dihedral d, CellIndex p, int width, int height);

/// Applies `d` to an image; rot90 and rot270 swap the dimensions.
template <typename Derived>
Raster<typename Derived::Scalar> dihedral_transform(const Eigen::DenseBase<Derived>& image, Dihedral d) {
    using Out = Raster<typename Derived::Scalar>;
    switch (d) {
        case Dihedral::identity: return Out(image);
        case Dihedral::rot90: return Out(image.transpose().rowwise().reverse());
        case Dihedral::rot180: return Out(image.reverse());
        case Dihedral::rot270: return Out(image.transpose().colwise().reverse());
        case Dihedral::flip_h: return Out(image.rowwise().reverse());
        case Dihedral::flip_v: return Out(image.colwise().reverse());
        case Dihedral::transpose: return Out(image.transpose());
        case Dihedral::anti_transpose: return Out(image.transpose().reverse());
    }
    return Out(image);
}

}  // namespace gridloc
