#include "gridloc/dihedral.hpp"

#include "gridloc/error.hpp"

namespace gridloc {

Eigen::Matrix2i dihedral_matrix(Dihedral d) {
    Eigen::Matrix2i m;
    switch (d) {
        case Dihedral::identity: m << 1, 0, 0, 1; break;
        case Dihedral::rot90: m << 0, -1, 1, 0; break;
        case Dihedral::rot180: m << -1, 0, 0, -1; break;
        case Dihedral::rot270: m << 0, 1, -1, 0; break;
        case Dihedral::flip_h: m << -1, 0, 0, 1; break;
        case Dihedral::flip_v: m << 1, 0, 0, -1; break;
        case Dihedral::transpose: m << 0, 1, 1, 0; break;
        case Dihedral::anti_transpose: m << 0, -1, -1, 0; break;
    }
    return m;
}

namespace {

Dihedral from_matrix(const Eigen::Matrix2i& m) {
    for (Dihedral d : kAllDihedral) {
        if (dihedral_matrix(d) == m) return d;
    }
    throw Error("matrix is not a dihedral element");
}

}  // namespace

Dihedral compose(Dihedral first, Dihedral second) {
    return from_matrix(dihedral_matrix(second) * dihedral_matrix(first));
}

Dihedral inverse(Dihedral d) {
    // Orthogonal integer matrices: the inverse is the transpose.
    return from_matrix(dihedral_matrix(d).transpose());
}

bool swaps_axes(Dihedral d) { return dihedral_matrix(d)(0, 0) == 0; }

std::string_view to_string(Dihedral d) {
    switch (d) {
        case Dihedral::identity: return "identity";
        case Dihedral::rot90: return "rot90";
        case Dihedral::rot180: return "rot180";
        case Dihedral::rot270: return "rot270";
        case Dihedral::flip_h: return "flipH";
        case Dihedral::flip_v: return "flipV";
        case Dihedral::transpose: return "transpose";
        case Dihedral::anti_transpose: return "anti-transpose";
    }
    return "identity";
}

std::optional<Dihedral> dihedral_from_string(std::string_view name) {
    for (Dihedral d : kAllDihedral) {
        if (to_string(d) == name) return d;
    }
    return std::nullopt;
}

CellIndex map_index(Dihedral d, CellIndex p, int width, int height) {
    // Work in doubled centered coordinates so odd and even sizes stay integral.
    const Eigen::Vector2i c(2 * p.x - (width - 1), 2 * p.y - (height - 1));
    const Eigen::Vector2i t = dihedral_matrix(d) * c;
    const int out_w = swaps_axes(d) ? height : width;
    const int out_h = swaps_axes(d) ? width : height;
    return {(t.x() + out_w - 1) / 2, (t.y() + out_h - 1) / 2};
}

}  // namespace gridloc
