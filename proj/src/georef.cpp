#include "gridloc/georef.hpp"

#include "gridloc/error.hpp"
#include "gridloc/json_io.hpp"

namespace gridloc {

using nlohmann::json;

void to_json(json& j, const BBox& b) { j = json::array({b.west, b.south, b.east, b.north}); }

void from_json(const json& j, BBox& b) {
    if (!j.is_array() || j.size() != 4) throw Error("bbox must be [west, south, east, north]");
    b = {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
}

void to_json(json& j, const ProjectionRef& r) {
    j = {{"origin_lat", r.origin_lat}, {"origin_lon", r.origin_lon}, {"ref_lat", r.ref_lat},
         {"earth_radius_m", r.earth_radius_m}};
}

void from_json(const json& j, ProjectionRef& r) {
    r.origin_lat = j.at("origin_lat").get<double>();
    r.origin_lon = j.at("origin_lon").get<double>();
    r.ref_lat = j.at("ref_lat").get<double>();
    r.earth_radius_m = j.value("earth_radius_m", kEarthRadiusM);
}

void to_json(json& j, const GridSpec& s) {
    j = {{"anchor_lat", s.anchor_lat}, {"anchor_lon", s.anchor_lon}, {"cell_size_m", s.cell_size_m},
         {"width_cells", s.width_cells}, {"height_cells", s.height_cells}, {"ref_lat", s.ref_lat},
         {"scale_x", s.scale_x}, {"scale_y", s.scale_y}, {"axes", std::string(to_string(s.axes))}};
}

void from_json(const json& j, GridSpec& s) {
    s.anchor_lat = j.at("anchor_lat").get<double>();
    s.anchor_lon = j.at("anchor_lon").get<double>();
    s.cell_size_m = j.value("cell_size_m", 500.0);
    s.width_cells = j.value("width_cells", 200);
    s.height_cells = j.value("height_cells", 200);
    s.ref_lat = j.value("ref_lat", s.anchor_lat);
    s.scale_x = j.value("scale_x", 1.0);
    s.scale_y = j.value("scale_y", 1.0);
    const std::string axes = j.value("axes", "identity");
    auto d = dihedral_from_string(axes);
    if (!d) throw Error("unknown axes element '" + axes + "'");
    s.axes = *d;
    validate(s);
}

void to_json(json& j, const TransformedMatch& m) {
    j = {{"offset_x", m.match.offset_x},
         {"offset_y", m.match.offset_y},
         {"score", m.match.score},
         {"dihedral", std::string(to_string(m.dihedral))},
         {"scale_x", m.scale_x},
         {"scale_y", m.scale_y},
         {"template_width", m.template_width},
         {"template_height", m.template_height},
         {"background_width", m.background_width},
         {"background_height", m.background_height},
         {"method", std::string(to_string(m.method))}};
}

void from_json(const json& j, TransformedMatch& m) {
    m.match.offset_x = j.at("offset_x").get<int>();
    m.match.offset_y = j.at("offset_y").get<int>();
    m.match.score = j.at("score").get<double>();
    const std::string d = j.at("dihedral").get<std::string>();
    auto dih = dihedral_from_string(d);
    if (!dih) throw Error("unknown dihedral element '" + d + "'");
    m.dihedral = *dih;
    m.scale_x = j.at("scale_x").get<double>();
    m.scale_y = j.at("scale_y").get<double>();
    m.template_width = j.at("template_width").get<int>();
    m.template_height = j.at("template_height").get<int>();
    m.background_width = j.at("background_width").get<int>();
    m.background_height = j.at("background_height").get<int>();
    auto method = score_method_from_string(j.value("method", "hamming"));
    if (!method) throw Error("unknown score method");
    m.method = *method;
}

GridSpec anchor_from_match(const TransformedMatch& m, const BBox& bbox, double pixel_size_m,
                           const ProjectionRef& ref) {
    if (!(m.scale_x > 0) || !(m.scale_y > 0)) throw Error("match scales must be positive");
    const Eigen::Vector2i dims = mask_dimensions(bbox, pixel_size_m, ref);
    if (dims.x() != m.background_width || dims.y() != m.background_height) {
        throw Error("match was made against a " + std::to_string(m.background_width) + "x" +
                    std::to_string(m.background_height) + " background but the bbox rasterizes to " +
                    std::to_string(dims.x()) + "x" + std::to_string(dims.y()));
    }
    const long scaled_w = std::lround(dims.x() * m.scale_x);
    const long scaled_h = std::lround(dims.y() * m.scale_y);
    if (m.match.offset_x < 0 || m.match.offset_y < 0 || m.template_width < 1 || m.template_height < 1 ||
        m.match.offset_x + m.template_width > scaled_w || m.match.offset_y + m.template_height > scaled_h)
        throw Error("match offset does not fit the scaled background");

    const Eigen::Vector2d nw = project(bbox.north, bbox.west, ref);
    const Eigen::Vector2d offset_px(m.match.offset_x / m.scale_x, m.match.offset_y / m.scale_y);
    const Eigen::Vector2d anchor = unproject(nw + offset_px * pixel_size_m, ref);

    GridSpec spec;
    spec.anchor_lat = anchor.x();
    spec.anchor_lon = anchor.y();
    spec.cell_size_m = pixel_size_m;
    spec.width_cells = m.template_width;
    spec.height_cells = m.template_height;
    spec.ref_lat = ref.ref_lat;
    spec.scale_x = m.scale_x;
    spec.scale_y = m.scale_y;
    spec.axes = m.dihedral;
    return spec;
}

Eigen::Vector2d cell_to_geo(const GridSpec& spec, int x, int y) {
    if (x < 0 || y < 0 || x >= data_width(spec) || y >= data_height(spec)) {
        throw Error("cell (" + std::to_string(x) + "," + std::to_string(y) + ") outside " +
                    std::to_string(data_width(spec)) + "x" + std::to_string(data_height(spec)) + " grid");
    }
    const CellIndex g = data_to_geo(spec, {x, y});
    const Eigen::Vector2d m = Eigen::Vector2d(g.x + 0.5, g.y + 0.5).cwiseProduct(cell_extent_m(spec));
    return unproject(m, grid_projection(spec));
}

Ring cell_ring(const GridSpec& spec, CellIndex g) {
    const ProjectionRef ref = grid_projection(spec);
    const Eigen::Vector2d ext = cell_extent_m(spec);
    auto corner = [&](int dx, int dy) {
        const Eigen::Vector2d ll = unproject(Eigen::Vector2d(g.x + dx, g.y + dy).cwiseProduct(ext), ref);
        return Eigen::Vector2d(ll.y(), ll.x());
    };
    // NW, SW, SE, NE, NW: counterclockwise with north up.
    return {corner(0, 0), corner(0, 1), corner(1, 1), corner(1, 0), corner(0, 0)};
}

BBox grid_bbox(const GridSpec& spec) {
    const ProjectionRef ref = grid_projection(spec);
    const Eigen::Vector2d se = unproject(
        Eigen::Vector2d(spec.width_cells, spec.height_cells).cwiseProduct(cell_extent_m(spec)), ref);
    return {spec.anchor_lon, se.x(), se.y(), spec.anchor_lat};
}

namespace {

json ring_json(const Ring& ring) {
    json coords = json::array();
    for (const auto& p : ring) coords.push_back({p.x(), p.y()});
    return coords;
}

}  // namespace

json grid_to_geojson(const GeoreferencedGrid& grid) {
    const GridSpec& s = grid.spec;
    const int dw = data_width(s), dh = data_height(s);
    auto check = [&](const ActivityRaster& r, const char* what) {
        if (r.size() != 0 && (r.cols() != dw || r.rows() != dh))
            throw Error(std::string(what) + " raster does not match the grid dimensions");
    };
    check(grid.activity, "activity");
    check(grid.users, "users");
    if (grid.homes) check(*grid.homes, "homes");

    json features = json::array();
    for (int gy = 0; gy < s.height_cells; ++gy) {
        for (int gx = 0; gx < s.width_cells; ++gx) {
            const CellIndex d = geo_to_data(s, {gx, gy});
            json props = {{"x", d.x}, {"y", d.y}};
            props["activity"] = grid.activity.size() ? grid.activity(d.y, d.x) : 0;
            props["users"] = grid.users.size() ? grid.users(d.y, d.x) : 0;
            if (grid.homes) props["homes"] = (*grid.homes)(d.y, d.x);
            features.push_back({{"type", "Feature"},
                                {"properties", std::move(props)},
                                {"geometry",
                                 {{"type", "Polygon"},
                                  {"coordinates", json::array({ring_json(cell_ring(s, {gx, gy}))})}}}});
        }
    }
    json provenance = {{"grid_spec", s}};
    if (grid.match) provenance["match"] = *grid.match;
    if (grid.background_bbox) provenance["background_bbox"] = *grid.background_bbox;
    if (grid.pixel_size_m > 0) provenance["pixel_size_m"] = grid.pixel_size_m;
    return {{"type", "FeatureCollection"}, {"features", std::move(features)}, {"provenance", std::move(provenance)}};
}

GridSpec grid_spec_from_geojson(const json& collection) {
    if (!collection.contains("provenance") || !collection["provenance"].contains("grid_spec"))
        throw Error("GeoJSON grid has no provenance.grid_spec member");
    GridSpec spec = collection["provenance"]["grid_spec"].get<GridSpec>();
    const json& features = collection.at("features");
    if (features.size() != static_cast<std::size_t>(spec.width_cells) * spec.height_cells)
        throw Error("feature count does not match grid dimensions");
    const json& ring = features.at(0).at("geometry").at("coordinates").at(0);
    double west = INFINITY, north = -INFINITY;
    for (const json& p : ring) {
        west = std::min(west, p.at(0).get<double>());
        north = std::max(north, p.at(1).get<double>());
    }
    spec.anchor_lon = west;
    spec.anchor_lat = north;
    return spec;
}

json hex_to_geojson(const HexCounts& counts, const HexSpec& hex) {
    json features = json::array();
    for (const auto& [h, n] : counts) {
        Ring ring;
        for (const auto& c : hex_corners(h, hex.edge_m)) {
            const Eigen::Vector2d ll = unproject(c, hex.origin);
            ring.emplace_back(ll.y(), ll.x());
        }
        // Corners run clockwise once south-down is flipped to north-up.
        std::reverse(ring.begin(), ring.end());
        ring.push_back(ring.front());
        features.push_back({{"type", "Feature"},
                            {"properties", {{"q", h.q}, {"r", h.r}, {"count", n}}},
                            {"geometry", {{"type", "Polygon"}, {"coordinates", json::array({ring_json(ring)})}}}});
    }
    return {{"type", "FeatureCollection"},
            {"features", std::move(features)},
            {"provenance", {{"edge_m", hex.edge_m}, {"origin", hex.origin}}}};
}

}  // namespace gridloc
