#include "gridloc/polygon.hpp"

#include <algorithm>

namespace gridloc {

double signed_area(const Ring& ring) {
    double twice = 0;
    for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
        twice += ring[i].x() * ring[i + 1].y() - ring[i + 1].x() * ring[i].y();
    }
    return 0.5 * twice;
}

void normalize_orientation(NamedPolygon& polygon) {
    for (PolygonPart& part : polygon.parts) {
        for (std::size_t i = 0; i < part.size(); ++i) {
            const bool want_ccw = i == 0;
            const double a = signed_area(part[i]);
            if ((want_ccw && a < 0) || (!want_ccw && a > 0)) std::reverse(part[i].begin(), part[i].end());
        }
    }
}

bool part_contains(const PolygonPart& part, const Eigen::Vector2d& p) {
    bool inside = false;
    for (const Ring& ring : part) {
        for (std::size_t i = 0; i + 1 < ring.size(); ++i) {
            const Eigen::Vector2d& a = ring[i];
            const Eigen::Vector2d& b = ring[i + 1];
            if ((a.y() > p.y()) == (b.y() > p.y())) continue;
            const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
            if (x > p.x()) inside = !inside;
        }
    }
    return inside;
}

}  // namespace gridloc
