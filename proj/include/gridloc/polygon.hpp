#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

namespace gridloc {

/// Closed ring of (x, y) vertices; first == last. For geographic rings x is
/// longitude and y is latitude, both in degrees.
using Ring = std::vector<Eigen::Vector2d>;

/// First ring is the outer boundary, the rest are holes.
using PolygonPart = std::vector<Ring>;

/// A named polygon or multipolygon (one part per outer-ring group).
struct NamedPolygon {
    std::string name;
    std::vector<PolygonPart> parts;
};

/// Shoelace signed area; positive for counterclockwise rings in a y-up frame.
double signed_area(const Ring& ring);

/// Orients outer rings counterclockwise and holes clockwise (y-up frame).
/// Idempotent.
void normalize_orientation(NamedPolygon& polygon);

/// Even-odd containment within one part under the half-open edge rule:
/// an edge counts when exactly one endpoint has y > p.y and the crossing lies
/// strictly right of p.
bool part_contains(const PolygonPart& part, const Eigen::Vector2d& p);

}  // namespace gridloc
