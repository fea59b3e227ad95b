// visgen.hpp - turns a query plus its result table into a renderable
// specification: Vega-Lite v5 documents for bar/line/pie, a self-describing
// trajectory-map document for MAP (schema in docs/map_document.md).
#ifndef TVL_VISGEN_HPP
#define TVL_VISGEN_HPP

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include <json.hpp>

#include "tvl/executor.hpp"

namespace tvl {

struct VisError : TvlError {
    enum class Code { ShapeMismatch };
    Code code;

    VisError(Code c, const std::string& msg) : TvlError(msg), code(c) {}
};

struct VisSpec {
    VisType kind = VisType::Bar;
    std::string document;            // serialized JSON
    std::optional<LonLat> center;    // MAP only
    nlohmann::ordered_json doc;      // structured mirror of `document`
};

// Shoelace centroid of the area's exterior ring; maps center on this point.
inline LonLat area_centroid(const AreaRecord& a) { return polygon_centroid(a.polygon); }

namespace detail {

inline nlohmann::ordered_json value_to_json(const Value& v) {
    if (is_null(v)) return nullptr;
    if (std::holds_alternative<int64_t>(v)) return std::get<int64_t>(v);
    if (std::holds_alternative<double>(v)) return std::get<double>(v);
    if (std::holds_alternative<Timestamp>(v)) return format_timestamp(std::get<Timestamp>(v));
    return std::get<std::string>(v);
}

inline nlohmann::ordered_json rows_to_values(const ResultTable& r) {
    nlohmann::ordered_json values = nlohmann::ordered_json::array();
    for (const auto& row : r.rows) {
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (size_t i = 0; i < r.columns.size(); ++i) obj[r.columns[i]] = value_to_json(row[i]);
        values.push_back(std::move(obj));
    }
    return values;
}

inline size_t column_index(const ResultTable& r, const std::string& name, const char* role) {
    for (size_t i = 0; i < r.columns.size(); ++i)
        if (r.columns[i] == name) return i;
    throw VisError(VisError::Code::ShapeMismatch,
                   std::string("result lacks the ") + role + " column '" + name + "'");
}

// Encoding fields derived from the query: category = first group key or bin
// column, measure = first aggregate item.
struct ChartFields {
    std::string x;
    bool x_temporal = false;
    std::string y;
};

inline std::string bin_column_name(const SqlSkeleton& s) {
    return "bin_" + str::lower(bin_unit_keyword(s.transform->bin->unit));
}

inline std::string result_name_for_key(const SqlSkeleton& s, const std::string& key) {
    for (const auto& it : s.select_items)
        if (!it.is_aggregate() && (it.column == key || it.alias == key))
            return result_column_name(it);
    return key;
}

inline ChartFields chart_fields(const TvlQuery& q, const ResultTable& r) {
    const SqlSkeleton& s = q.sql;
    ChartFields f;
    if (s.transform && s.transform->bin) {
        f.x = bin_column_name(s);
        f.x_temporal = true;
    } else if (s.transform && !s.transform->group_keys.empty()) {
        f.x = result_name_for_key(s, s.transform->group_keys.front());
    } else {
        // ungrouped chart: first non-aggregate select item carries the axis
        for (const auto& it : s.select_items)
            if (!it.is_aggregate()) {
                f.x = result_column_name(it);
                break;
            }
    }
    for (const auto& it : s.select_items)
        if (it.is_aggregate()) {
            f.y = result_column_name(it);
            break;
        }
    if (f.y.empty()) {
        // raw series: measure is the first column that is not the axis
        for (const auto& it : s.select_items) {
            std::string name = result_column_name(it);
            if (name != f.x) {
                f.y = name;
                break;
            }
        }
    }
    if (f.y.empty() && !f.x.empty()) {
        // single-column result: chart the values themselves, no category axis
        f.y = f.x;
        f.x.clear();
    }
    if (f.y.empty())
        throw VisError(VisError::Code::ShapeMismatch, "cannot derive chart axes from select list");
    column_index(r, f.y, "measure");
    if (!f.x.empty() && !f.x_temporal) {
        size_t xi = column_index(r, f.x, "axis");
        for (const auto& row : r.rows)
            if (std::holds_alternative<Timestamp>(row[xi])) {
                f.x_temporal = true;
                break;
            }
    }
    return f;
}

inline nlohmann::ordered_json vega_lite_doc(const TvlQuery& q, const ResultTable& r) {
    ChartFields f = chart_fields(q, r);
    ResultTable data = r;
    if (q.vis == VisType::Line && !f.x.empty()) {
        size_t xi = column_index(r, f.x, "axis");
        std::stable_sort(data.rows.begin(), data.rows.end(),
                         [&](const auto& a, const auto& b) {
                             return compare_values(a[xi], b[xi]) < 0;
                         });
    }
    nlohmann::ordered_json doc;
    doc["$schema"] = "https://vega.github.io/schema/vega-lite/v5.json";
    doc["data"] = {{"values", rows_to_values(data)}};
    nlohmann::ordered_json enc;
    switch (q.vis) {
        case VisType::Bar:
            doc["mark"] = "bar";
            if (!f.x.empty())
                enc["x"] = {{"field", f.x}, {"type", f.x_temporal ? "temporal" : "nominal"}};
            enc["y"] = {{"field", f.y}, {"type", "quantitative"}};
            break;
        case VisType::Line:
            doc["mark"] = "line";
            if (!f.x.empty())
                enc["x"] = {{"field", f.x}, {"type", f.x_temporal ? "temporal" : "ordinal"}};
            enc["y"] = {{"field", f.y}, {"type", "quantitative"}};
            break;
        case VisType::Pie:
            doc["mark"] = "arc";
            // raw aggregates embedded; the renderer derives percentages
            enc["theta"] = {{"field", f.y}, {"type", "quantitative"}};
            if (!f.x.empty()) enc["color"] = {{"field", f.x}, {"type", "nominal"}};
            break;
        default:
            break;
    }
    doc["encoding"] = std::move(enc);
    return doc;
}

// Zoom level at which the area bounding box fills 80% of a square viewport.
inline int map_zoom(const BoundingBox& b) {
    double ext_lon = std::max(b.max_lon - b.min_lon, 1e-9);
    double ext_lat = std::max(b.max_lat - b.min_lat, 1e-9);
    double z_lon = std::log2(360.0 * 0.8 / ext_lon);
    double z_lat = std::log2(180.0 * 0.8 / ext_lat);
    int z = static_cast<int>(std::floor(std::min(z_lon, z_lat)));
    return std::clamp(z, 1, 19);
}

inline nlohmann::ordered_json map_doc(const TvlQuery& q, const ResultTable& r,
                                      const AreaRegistry& registry, LonLat& center_out) {
    const AreaRecord* rec = registry.find(q.area->name);
    if (!rec)
        throw VisError(VisError::Code::ShapeMismatch, "unresolvable map area: " + q.area->name);
    LonLat center = area_centroid(*rec);
    center_out = center;
    BoundingBox bbox = polygon_bbox(rec->polygon);

    size_t ui = column_index(r, "user_id", "user id");
    size_t ti = column_index(r, "traj_id", "trajectory id");
    size_t lat_i = column_index(r, "latitude", "latitude");
    size_t lon_i = column_index(r, "longitude", "longitude");
    size_t dt_i = column_index(r, "datetime", "datetime");

    // one line feature per trajectory, vertices in datetime order
    std::map<std::pair<int64_t, int64_t>, std::vector<const std::vector<Value>*>> trajs;
    for (const auto& row : r.rows) {
        if (is_null(row[ui]) || is_null(row[ti]))
            throw VisError(VisError::Code::ShapeMismatch, "null trajectory key in map result");
        trajs[{std::get<int64_t>(row[ui]), std::get<int64_t>(row[ti])}].push_back(&row);
    }
    nlohmann::ordered_json features = nlohmann::ordered_json::array();
    for (auto& [key, rows] : trajs) {
        std::stable_sort(rows.begin(), rows.end(), [&](const auto* a, const auto* b) {
            return compare_values((*a)[dt_i], (*b)[dt_i]) < 0;
        });
        nlohmann::ordered_json coords = nlohmann::ordered_json::array();
        nlohmann::ordered_json times = nlohmann::ordered_json::array();
        for (const auto* row : rows) {
            coords.push_back({value_to_json((*row)[lon_i]), value_to_json((*row)[lat_i])});
            times.push_back(value_to_json((*row)[dt_i]));
        }
        features.push_back({{"user_id", key.first},
                            {"traj_id", key.second},
                            {"coordinates", std::move(coords)},
                            {"timestamps", std::move(times)}});
    }

    nlohmann::ordered_json doc;
    doc["kind"] = "trajectory-map";
    doc["area"] = rec->name;
    doc["center"] = {center.lon, center.lat};
    doc["zoom"] = map_zoom(bbox);
    doc["bbox"] = {bbox.min_lon, bbox.min_lat, bbox.max_lon, bbox.max_lat};
    doc["data"] = {{"values", rows_to_values(r)}};
    doc["features"] = std::move(features);
    return doc;
}

}  // namespace detail

// Builds the visualization document for an executed query. An empty result
// is not an error: the spec simply embeds no data.
inline VisSpec emit_spec(const TvlQuery& q, const ResultTable& r, const AreaRegistry& registry) {
    VisSpec spec;
    spec.kind = q.vis;
    if (q.vis == VisType::Map) {
        LonLat center;
        spec.doc = detail::map_doc(q, r, registry, center);
        spec.center = center;
    } else {
        spec.doc = detail::vega_lite_doc(q, r);
    }
    spec.document = spec.doc.dump(2) + "\n";
    return spec;
}

}  // namespace tvl

#endif  // TVL_VISGEN_HPP
