// registry.hpp - named area polygons loaded from a GeoJSON feature
// collection; the library of predefined geofence names.
#ifndef TVL_REGISTRY_HPP
#define TVL_REGISTRY_HPP

#include <fstream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tvl/ast.hpp"
#include "tvl/geometry.hpp"

namespace tvl {

struct RegistryError : TvlError {
    enum class Code { Parse, InvalidPolygon, DuplicateName };
    Code code;

    RegistryError(Code c, const std::string& msg) : TvlError(msg), code(c) {}
};

struct AreaRecord {
    std::string name;  // canonical AreaRef text
    std::string province;
    Polygon polygon;
};

class AreaRegistry {
public:
    void add(AreaRecord rec) {
        validate_polygon(rec);
        std::string key = lookup_key(rec.name);
        if (index_.count(key))
            throw RegistryError(RegistryError::Code::DuplicateName,
                                "duplicate area name: " + rec.name);
        index_[key] = records_.size();
        records_.push_back(std::move(rec));
    }

    const AreaRecord* find(std::string_view name) const {
        auto it = index_.find(lookup_key(name));
        return it == index_.end() ? nullptr : &records_[it->second];
    }

    const std::vector<AreaRecord>& records() const { return records_; }
    size_t size() const { return records_.size(); }

    static std::string lookup_key(std::string_view name) {
        return str::lower(canonical_area_name(name));
    }

private:
    std::vector<AreaRecord> records_;
    std::map<std::string, size_t> index_;

    static void validate_polygon(const AreaRecord& rec) {
        auto reject = [&](const std::string& why) {
            throw RegistryError(RegistryError::Code::InvalidPolygon,
                                "invalid polygon for \"" + rec.name + "\": " + why);
        };
        auto check_ring = [&](const Ring& r, const char* which) {
            if (r.size() < 4) reject(std::string(which) + " ring has fewer than 4 vertices");
            if (!(r.front() == r.back())) reject(std::string(which) + " ring is not closed");
            if (std::fabs(geom::signed_ring_area(r)) <= 0.0)
                reject(std::string(which) + " ring has zero area");
            if (geom::ring_self_intersects(r)) reject(std::string(which) + " ring self-intersects");
        };
        check_ring(rec.polygon.exterior, "exterior");
        for (const auto& h : rec.polygon.holes) check_ring(h, "hole");
    }
};

namespace detail {

inline Ring ring_from_json(const nlohmann::json& coords) {
    Ring r;
    for (const auto& v : coords) {
        if (!v.is_array() || v.size() < 2)
            throw RegistryError(RegistryError::Code::Parse, "coordinate is not a [lon, lat] pair");
        r.push_back(LonLat{v[0].get<double>(), v[1].get<double>()});
    }
    return r;
}

}  // namespace detail

// Parses a GeoJSON FeatureCollection of Polygon features with `name` and
// `province` properties.
inline AreaRegistry parse_registry(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw RegistryError(RegistryError::Code::Parse, std::string("bad registry JSON: ") + e.what());
    }
    if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" || !doc.contains("features"))
        throw RegistryError(RegistryError::Code::Parse, "expected a GeoJSON FeatureCollection");

    AreaRegistry reg;
    for (const auto& feat : doc["features"]) {
        try {
            const auto& props = feat.at("properties");
            const auto& geometry = feat.at("geometry");
            if (geometry.at("type").get<std::string>() != "Polygon")
                throw RegistryError(RegistryError::Code::Parse, "geometry type must be Polygon");
            AreaRecord rec;
            rec.name = canonical_area_name(props.at("name").get<std::string>());
            rec.province = props.value("province", "");
            const auto& rings = geometry.at("coordinates");
            if (!rings.is_array() || rings.empty())
                throw RegistryError(RegistryError::Code::Parse, "polygon has no rings");
            rec.polygon.exterior = detail::ring_from_json(rings[0]);
            for (size_t i = 1; i < rings.size(); ++i)
                rec.polygon.holes.push_back(detail::ring_from_json(rings[i]));
            reg.add(std::move(rec));
        } catch (const nlohmann::json::exception& e) {
            throw RegistryError(RegistryError::Code::Parse,
                                std::string("bad feature: ") + e.what());
        }
    }
    return reg;
}

inline AreaRegistry load_registry(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw RegistryError(RegistryError::Code::Parse, "cannot open registry file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_registry(text);
}

}  // namespace tvl

#endif  // TVL_REGISTRY_HPP
