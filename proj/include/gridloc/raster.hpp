#pragma once

#include <Eigen/Core>

#include <cstdint>

namespace gridloc {

/// Row-major dense raster: rows are image rows (y, growing south), columns
/// are image columns (x, growing east). Index as `raster(y, x)`.
template <typename Scalar>
using Raster = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using ActivityRaster = Raster<std::int64_t>;
using RealRaster = Raster<double>;
/// true = active / land (rendered black).
using BinaryImage = Raster<bool>;

enum class CountMode { records, unique_users };

template <typename Derived>
inline Eigen::Index raster_width(const Eigen::DenseBase<Derived>& r) { return r.cols(); }

template <typename Derived>
inline Eigen::Index raster_height(const Eigen::DenseBase<Derived>& r) { return r.rows(); }

struct CellIndex {
    int x = 0;
    int y = 0;

    friend auto operator<=>(const CellIndex&, const CellIndex&) = default;
};

/// Row-major ordering used for deterministic tie-breaks: smaller y first, then smaller x.
inline bool row_major_less(const CellIndex& a, const CellIndex& b) {
    return a.y != b.y ? a.y < b.y : a.x < b.x;
}

}  // namespace gridloc
