#include <catch2/catch_amalgamated.hpp>

#include "support/helpers.hpp"

using namespace tvl;

namespace {

Polygon unit_square() {
    return Polygon{{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}}, {}};
}

Polygon l_shape() {
    // unit square with the top-right quadrant removed
    return Polygon{{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}, {0, 0}}, {}};
}

Polygon random_polygon(std::mt19937_64& rng) {
    // star-shaped around a center: strictly simple by construction
    std::uniform_real_distribution<double> cd(-50.0, 50.0);
    double cx = cd(rng), cy = cd(rng);
    size_t n = 4 + rng() % 9;
    std::vector<double> angles;
    for (size_t i = 0; i < n; ++i)
        angles.push_back(2 * M_PI * static_cast<double>(i) / static_cast<double>(n) +
                         std::uniform_real_distribution<double>(0.0, 0.4)(rng));
    Ring ring;
    for (double a : angles) {
        double r = std::uniform_real_distribution<double>(0.5, 5.0)(rng);
        ring.push_back({cx + r * std::cos(a), cy + r * std::sin(a)});
    }
    ring.push_back(ring.front());
    return Polygon{ring, {}};
}

}  // namespace

TEST_CASE("centroid of the unit square") {
    LonLat c = polygon_centroid(unit_square());
    CHECK(c.lon == Catch::Approx(0.5));
    CHECK(c.lat == Catch::Approx(0.5));
}

TEST_CASE("centroid translates with the polygon") {
    Polygon p = l_shape();
    LonLat c0 = polygon_centroid(p);
    Polygon moved = p;
    for (auto& v : moved.exterior) {
        v.lon += 11.25;
        v.lat -= 3.5;
    }
    LonLat c1 = polygon_centroid(moved);
    CHECK(c1.lon == Catch::Approx(c0.lon + 11.25).margin(1e-12));
    CHECK(c1.lat == Catch::Approx(c0.lat - 3.5).margin(1e-12));
}

TEST_CASE("L-shape centroid matches a Monte-Carlo estimate") {
    Polygon p = l_shape();
    LonLat c = polygon_centroid(p);
    std::mt19937_64 rng(4242);
    std::uniform_real_distribution<double> dx(0.0, 2.0), dy(0.0, 2.0);
    double sx = 0, sy = 0;
    size_t inside = 0;
    for (size_t i = 0; i < 1000000; ++i) {
        LonLat pt{dx(rng), dy(rng)};
        if (point_in_polygon(pt, p)) {
            sx += pt.lon;
            sy += pt.lat;
            ++inside;
        }
    }
    REQUIRE(inside > 0);
    CHECK(c.lon == Catch::Approx(sx / static_cast<double>(inside)).margin(1e-3));
    CHECK(c.lat == Catch::Approx(sy / static_cast<double>(inside)).margin(1e-3));
}

TEST_CASE("simple containment verdicts") {
    Polygon p = unit_square();
    CHECK(point_in_polygon({0.5, 0.5}, p));
    CHECK_FALSE(point_in_polygon({0.5, 10.5}, p));   // way outside the bbox
    CHECK_FALSE(point_in_polygon({-0.01, 0.5}, p));
    // boundary counts as inside, corners too
    CHECK(point_in_polygon({0.0, 0.5}, p));
    CHECK(point_in_polygon({1.0, 1.0}, p));
    CHECK(point_in_polygon({0.25, 0.0}, p));
}

TEST_CASE("holes are excluded, hole boundaries count as inside") {
    Polygon p = unit_square();
    p.holes.push_back({{0.25, 0.25}, {0.75, 0.25}, {0.75, 0.75}, {0.25, 0.75}, {0.25, 0.25}});
    CHECK_FALSE(point_in_polygon({0.5, 0.5}, p));
    CHECK(point_in_polygon({0.1, 0.1}, p));
    CHECK(point_in_polygon({0.25, 0.5}, p));  // on the hole ring
}

TEST_CASE("ray casting agrees with the winding-number oracle") {
    std::mt19937_64 rng(777);
    size_t checked = 0;
    for (int pi = 0; pi < 40; ++pi) {
        Polygon poly = random_polygon(rng);
        BoundingBox bb = polygon_bbox(poly);
        double pad_lon = (bb.max_lon - bb.min_lon) * 0.3;
        double pad_lat = (bb.max_lat - bb.min_lat) * 0.3;
        std::uniform_real_distribution<double> lon_d(bb.min_lon - pad_lon, bb.max_lon + pad_lon);
        std::uniform_real_distribution<double> lat_d(bb.min_lat - pad_lat, bb.max_lat + pad_lat);
        for (int i = 0; i < 25; ++i) {
            LonLat pt{lon_d(rng), lat_d(rng)};
            INFO("point (" << pt.lon << ", " << pt.lat << ")");
            REQUIRE(point_in_polygon(pt, poly) == testutil::oracle_point_in_polygon(pt, poly));
            ++checked;
        }
        // boundary-adjacent pairs around random edge points
        for (int i = 0; i < 5; ++i) {
            size_t e = rng() % (poly.exterior.size() - 1);
            double t = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
            LonLat a = poly.exterior[e], b = poly.exterior[e + 1];
            LonLat on{a.lon + t * (b.lon - a.lon), a.lat + t * (b.lat - a.lat)};
            // nudge well clear of the boundary on both sides
            double nx = -(b.lat - a.lat), ny = b.lon - a.lon;
            double norm = std::hypot(nx, ny);
            for (double side : {1e-7, -1e-7}) {
                LonLat near{on.lon + nx / norm * side, on.lat + ny / norm * side};
                INFO("edge-adjacent point near (" << on.lon << ", " << on.lat << ")");
                REQUIRE(point_in_polygon(near, poly) ==
                        testutil::oracle_point_in_polygon(near, poly));
                ++checked;
            }
        }
    }
    CHECK(checked >= 1000);
}

TEST_CASE("exactly-on-edge points agree with the oracle") {
    Polygon p = l_shape();
    std::mt19937_64 rng(31337);
    for (int i = 0; i < 200; ++i) {
        size_t e = rng() % (p.exterior.size() - 1);
        double t = static_cast<double>(rng() % 1000) / 1000.0;
        LonLat a = p.exterior[e], b = p.exterior[e + 1];
        LonLat on{a.lon + t * (b.lon - a.lon), a.lat + t * (b.lat - a.lat)};
        CHECK(point_in_polygon(on, p));
        CHECK(testutil::oracle_point_in_polygon(on, p));
    }
}

TEST_CASE("registry loads the fixture file") {
    AreaRegistry reg = testutil::fixture_registry();
    CHECK(reg.size() == 4);
    REQUIRE(reg.find("Miyun District, Beijing") != nullptr);
    CHECK(reg.find("Miyun District, Beijing")->province == "Beijing");
    // lookup is case- and whitespace-normalized
    CHECK(reg.find("  miyun district,   beijing ") != nullptr);
    CHECK(reg.find("Nowhere, Province") == nullptr);
}

TEST_CASE("registry rejects malformed polygons") {
    auto feature = [](const std::string& name, const std::string& coords) {
        return std::string(R"({"type":"FeatureCollection","features":[{"type":"Feature",)") +
               R"("properties":{"name":")" + name + R"(","province":"P"},)" +
               R"("geometry":{"type":"Polygon","coordinates":)" + coords + "}}]}";
    };
    // open ring (first != last)
    CHECK_THROWS_AS(parse_registry(feature("A", "[[[0,0],[1,0],[1,1],[0,1]]]")), RegistryError);
    // fewer than 4 vertices
    CHECK_THROWS_AS(parse_registry(feature("B", "[[[0,0],[1,0],[0,0]]]")), RegistryError);
    // zero area
    CHECK_THROWS_AS(parse_registry(feature("C", "[[[0,0],[1,1],[2,2],[0,0]]]")), RegistryError);
    // self-intersecting bow tie
    CHECK_THROWS_AS(parse_registry(feature("D", "[[[0,0],[1,1],[1,0],[0,1],[0,0]]]")),
                    RegistryError);
    try {
        parse_registry(feature("E", "[[[0,0],[1,0],[1,1],[0,1]]]"));
        FAIL();
    } catch (const RegistryError& e) {
        CHECK(e.code == RegistryError::Code::InvalidPolygon);
    }
    // not geojson at all
    CHECK_THROWS_AS(parse_registry("{\"hello\":1}"), RegistryError);
}

TEST_CASE("registry rejects duplicate names") {
    std::string doc = R"({"type":"FeatureCollection","features":[)"
                      R"({"type":"Feature","properties":{"name":"Miyun District, Beijing","province":"Beijing"},)"
                      R"("geometry":{"type":"Polygon","coordinates":[[[0,0],[1,0],[1,1],[0,1],[0,0]]]}},)"
                      R"({"type":"Feature","properties":{"name":"miyun district,beijing","province":"Beijing"},)"
                      R"("geometry":{"type":"Polygon","coordinates":[[[2,2],[3,2],[3,3],[2,3],[2,2]]]}}]})";
    try {
        parse_registry(doc);
        FAIL();
    } catch (const RegistryError& e) {
        CHECK(e.code == RegistryError::Code::DuplicateName);
    }
}

TEST_CASE("wkt uses six decimals and closes rings") {
    Polygon p{{{116.6, 40.25}, {117.3, 40.25}, {116.95, 40.8}, {116.6, 40.25}}, {}};
    CHECK(polygon_wkt(p) ==
          "POLYGON((116.600000 40.250000, 117.300000 40.250000, 116.950000 40.800000, "
          "116.600000 40.250000))");
}
