// helpers.hpp - shared fixtures and independent reference implementations
// (oracles) used to cross-check the library. Everything here deliberately
// re-derives results through a different computation path.
#ifndef TVL_TESTS_HELPERS_HPP
#define TVL_TESTS_HELPERS_HPP

#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "tvl/tvl.hpp"

#ifndef TVL_TESTS_DATA_DIR
#define TVL_TESTS_DATA_DIR "tests/data"
#endif

namespace testutil {

inline std::string data_path(const std::string& name) {
    return std::string(TVL_TESTS_DATA_DIR) + "/" + name;
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline tvl::AreaRegistry fixture_registry() { return tvl::load_registry(data_path("areas.geojson")); }
inline tvl::TrajStore fixture_store() { return tvl::load_store(data_path("store.csv")); }

inline tvl::TvlQuery fig7_query() {
    return tvl::parse_tvl(slurp(data_path("fig7.tvl")));
}

// ── winding-number oracle ───────────────────────────────────────────────────
// Fully independent point-in-polygon verdict: sums signed angles instead of
// casting a ray. Boundary points count as inside, matching the library
// convention.

inline bool winding_on_segment(tvl::LonLat p, tvl::LonLat a, tvl::LonLat b) {
    double cross = (b.lon - a.lon) * (p.lat - a.lat) - (b.lat - a.lat) * (p.lon - a.lon);
    if (std::fabs(cross) > 1e-12) return false;
    double dot = (p.lon - a.lon) * (b.lon - a.lon) + (p.lat - a.lat) * (b.lat - a.lat);
    double len2 = (b.lon - a.lon) * (b.lon - a.lon) + (b.lat - a.lat) * (b.lat - a.lat);
    return dot >= -1e-12 && dot <= len2 + 1e-12;
}

inline int winding_number(tvl::LonLat p, const tvl::Ring& ring) {
    double total = 0;
    for (size_t i = 0; i + 1 < ring.size(); ++i) {
        double ax = ring[i].lon - p.lon, ay = ring[i].lat - p.lat;
        double bx = ring[i + 1].lon - p.lon, by = ring[i + 1].lat - p.lat;
        total += std::atan2(ax * by - ay * bx, ax * bx + ay * by);
    }
    return static_cast<int>(std::lround(total / (2.0 * M_PI)));
}

inline bool oracle_point_in_polygon(tvl::LonLat p, const tvl::Polygon& poly) {
    for (size_t i = 0; i + 1 < poly.exterior.size(); ++i)
        if (winding_on_segment(p, poly.exterior[i], poly.exterior[i + 1])) return true;
    for (const auto& hole : poly.holes)
        for (size_t i = 0; i + 1 < hole.size(); ++i)
            if (winding_on_segment(p, hole[i], hole[i + 1])) return true;
    if (winding_number(p, poly.exterior) == 0) return false;
    for (const auto& hole : poly.holes)
        if (winding_number(p, hole) != 0) return false;
    return true;
}

// ── brute-force reference executor ──────────────────────────────────────────
// Filters, groups and aggregates a query directly over TrajPoint records,
// sharing nothing with the library executor beyond the Value type. Joins are
// limited to the traj_labels template the generators emit.

struct RefRow {
    std::map<std::string, tvl::Value> cols;
};

inline std::vector<RefRow> ref_source_rows(const tvl::TrajStore& store, const tvl::SqlSkeleton& s) {
    std::vector<RefRow> rows;
    auto point_row = [](const tvl::TrajPoint& p) {
        RefRow r;
        r.cols["user_id"] = p.user_id;
        r.cols["traj_id"] = p.traj_id;
        r.cols["latitude"] = p.latitude;
        r.cols["longitude"] = p.longitude;
        r.cols["altitude"] = p.altitude ? tvl::Value{*p.altitude} : tvl::Value{};
        r.cols["datetime"] = p.datetime;
        r.cols["travel_mode"] = p.travel_mode ? tvl::Value{*p.travel_mode} : tvl::Value{};
        for (auto& [k, v] : std::map<std::string, tvl::Value>(r.cols))
            r.cols["traj_data." + k] = v;
        return r;
    };
    if (s.from_table == "traj_data") {
        for (const auto& p : store.points()) rows.push_back(point_row(p));
    } else {
        for (const auto& l : store.labels()) {
            RefRow r;
            r.cols["user_id"] = l.user_id;
            r.cols["traj_id"] = l.traj_id;
            r.cols["travel_mode"] = l.travel_mode;
            for (auto& [k, v] : std::map<std::string, tvl::Value>(r.cols))
                r.cols["traj_labels." + k] = v;
            rows.push_back(r);
        }
    }
    for (const auto& join : s.joins) {
        REQUIRE(join.table == "traj_labels");  // the only join the schema supports
        std::vector<RefRow> joined;
        for (const auto& lrow : rows) {
            for (const auto& l : store.labels()) {
                RefRow r = lrow;
                r.cols["traj_labels.user_id"] = l.user_id;
                r.cols["traj_labels.traj_id"] = l.traj_id;
                r.cols["traj_labels.travel_mode"] = l.travel_mode;
                // bare right-table names only when the left side lacks them
                for (const char* c : {"user_id", "traj_id", "travel_mode"})
                    if (!r.cols.count(c)) r.cols[c] = r.cols["traj_labels." + std::string(c)];
                tvl::Value lv = r.cols.at(join.left_col);
                tvl::Value rv = r.cols.at(join.right_col);
                if (!tvl::is_null(lv) && tvl::compare_values(lv, rv) == 0) joined.push_back(r);
            }
        }
        rows = joined;
    }
    return rows;
}

inline bool ref_scalar_match(const tvl::Value& v, const tvl::Scalar& lit, tvl::Cmp cmp) {
    if (tvl::is_null(v)) return false;
    int c;
    if (std::holds_alternative<std::string>(lit)) {
        const std::string& s = std::get<std::string>(lit);
        if (std::holds_alternative<tvl::Timestamp>(v)) {
            auto ts = tvl::parse_timestamp(s);
            REQUIRE(ts.has_value());
            auto x = std::get<tvl::Timestamp>(v);
            c = x < *ts ? -1 : (x > *ts ? 1 : 0);
        } else {
            const std::string& x = std::get<std::string>(v);
            c = x.compare(s) < 0 ? -1 : (x.compare(s) > 0 ? 1 : 0);
        }
    } else {
        double lv = std::holds_alternative<int64_t>(lit)
                        ? static_cast<double>(std::get<int64_t>(lit))
                        : std::get<double>(lit);
        double xv = std::holds_alternative<int64_t>(v) ? static_cast<double>(std::get<int64_t>(v))
                                                       : std::get<double>(v);
        c = xv < lv ? -1 : (xv > lv ? 1 : 0);
    }
    switch (cmp) {
        case tvl::Cmp::Eq: return c == 0;
        case tvl::Cmp::Ne: return c != 0;
        case tvl::Cmp::Lt: return c < 0;
        case tvl::Cmp::Le: return c <= 0;
        case tvl::Cmp::Gt: return c > 0;
        case tvl::Cmp::Ge: return c >= 0;
        default: return false;
    }
}

inline bool ref_predicate(const RefRow& row, const tvl::Predicate& p) {
    const tvl::Value& v = row.cols.at(p.column);
    if (p.cmp == tvl::Cmp::In) {
        for (const auto& lit : p.value.values)
            if (ref_scalar_match(v, lit, tvl::Cmp::Eq)) return true;
        return false;
    }
    return ref_scalar_match(v, p.value.values.front(), p.cmp);
}

// Caches materialized source rows per (from table, join signature) so bulk
// equivalence runs do not rebuild them per query.
struct RefSourceCache {
    std::map<std::string, std::vector<RefRow>> by_signature;

    const std::vector<RefRow>& get(const tvl::TrajStore& store, const tvl::SqlSkeleton& s) {
        std::string key = s.from_table;
        for (const auto& j : s.joins) key += "|" + j.table + ":" + j.left_col + "=" + j.right_col;
        auto it = by_signature.find(key);
        if (it == by_signature.end())
            it = by_signature.emplace(key, ref_source_rows(store, s)).first;
        return it->second;
    }
};

// Reference execution of a compiled query: independent filter composition,
// map-based grouping, and a final canonical sort on formatted rows.
inline tvl::ResultTable reference_execute(const tvl::CompiledSql& c, const tvl::TrajStore& store,
                                          const tvl::AreaRegistry& registry,
                                          RefSourceCache* cache = nullptr) {
    const tvl::SqlSkeleton& s = c.structured.skeleton;
    RefSourceCache local;
    const std::vector<RefRow>& source = (cache ? *cache : local).get(store, s);
    std::vector<const RefRow*> rows;
    rows.reserve(source.size());
    for (const auto& r : source) rows.push_back(&r);

    if (c.structured.area) {
        const tvl::AreaRecord* rec = registry.find(*c.structured.area);
        REQUIRE(rec != nullptr);
        std::vector<const RefRow*> kept;
        for (const auto* r : rows) {
            tvl::LonLat p{std::get<double>(r->cols.at("longitude")),
                          std::get<double>(r->cols.at("latitude"))};
            if (oracle_point_in_polygon(p, rec->polygon)) kept.push_back(r);
        }
        rows = kept;
    }
    if (c.structured.time.present()) {
        std::vector<const RefRow*> kept;
        for (const auto* r : rows) {
            auto t = std::get<tvl::Timestamp>(r->cols.at("datetime"));
            if (!(t < *c.structured.time.st) && !(*c.structured.time.et < t)) kept.push_back(r);
        }
        rows = kept;
    }
    for (const auto& p : s.extra_where) {
        std::vector<const RefRow*> kept;
        for (const auto* r : rows)
            if (ref_predicate(*r, p)) kept.push_back(r);
        rows = kept;
    }

    tvl::ResultTable out;
    bool has_agg = s.has_aggregates();
    bool grouped = s.transform && !s.transform->empty();

    auto column_name = [](const tvl::SelectItem& it) {
        if (!it.alias.empty()) return it.alias;
        if (it.agg)
            return tvl::str::lower(tvl::agg_keyword(*it.agg)) + "(" + it.column + ")";
        return it.column;
    };

    if (!has_agg && !grouped) {
        for (const auto& it : s.select_items) out.columns.push_back(column_name(it));
        for (const auto* r : rows) {
            std::vector<tvl::Value> vals;
            for (const auto& it : s.select_items) vals.push_back(r->cols.at(it.column));
            out.rows.push_back(vals);
        }
    } else {
        std::optional<tvl::BinSpec> bin = s.transform ? s.transform->bin : std::nullopt;
        std::vector<std::string> keys = s.transform ? s.transform->group_keys
                                                    : std::vector<std::string>{};
        if (bin) out.columns.push_back("bin_" + tvl::str::lower(tvl::bin_unit_keyword(bin->unit)));
        for (const auto& it : s.select_items) out.columns.push_back(column_name(it));

        std::map<std::vector<std::string>, std::vector<const RefRow*>> groups;
        std::map<std::vector<std::string>, std::vector<tvl::Value>> key_values;
        for (const auto* r : rows) {
            std::vector<tvl::Value> kv;
            if (bin)
                kv.push_back(tvl::truncate(std::get<tvl::Timestamp>(r->cols.at(bin->column)),
                                           bin->unit));
            for (const auto& k : keys) kv.push_back(r->cols.at(k));
            std::vector<std::string> gk;
            for (const auto& v : kv) gk.push_back(tvl::format_value(v));
            groups[gk].push_back(r);
            key_values[gk] = kv;
        }
        for (const auto& [gk, members] : groups) {
            std::vector<tvl::Value> row;
            const auto& kv = key_values[gk];
            if (bin) row.push_back(kv[0]);
            size_t base = bin ? 1 : 0;
            for (const auto& it : s.select_items) {
                if (!it.is_aggregate()) {
                    size_t pos = 0;
                    for (size_t k = 0; k < keys.size(); ++k)
                        if (keys[k] == it.column || (!it.alias.empty() && keys[k] == it.alias))
                            pos = k;
                    row.push_back(kv[base + pos]);
                    continue;
                }
                // aggregate recomputed the straightforward way
                if (*it.agg == tvl::AggFn::Count && it.column == "*") {
                    row.push_back(static_cast<int64_t>(members.size()));
                    continue;
                }
                std::vector<tvl::Value> vals;
                for (const auto* m : members) {
                    const tvl::Value& v = m->cols.at(it.column);
                    if (!tvl::is_null(v)) vals.push_back(v);
                }
                switch (*it.agg) {
                    case tvl::AggFn::Count:
                        row.push_back(static_cast<int64_t>(vals.size()));
                        break;
                    case tvl::AggFn::Sum:
                    case tvl::AggFn::Avg: {
                        if (vals.empty()) {
                            row.push_back(tvl::Value{});
                            break;
                        }
                        double sum = 0;
                        for (const auto& v : vals)
                            sum += std::holds_alternative<int64_t>(v)
                                       ? static_cast<double>(std::get<int64_t>(v))
                                       : std::get<double>(v);
                        row.push_back(*it.agg == tvl::AggFn::Sum
                                          ? tvl::Value{sum}
                                          : tvl::Value{sum / static_cast<double>(vals.size())});
                        break;
                    }
                    case tvl::AggFn::Max:
                    case tvl::AggFn::Min: {
                        if (vals.empty()) {
                            row.push_back(tvl::Value{});
                            break;
                        }
                        tvl::Value best = vals[0];
                        for (const auto& v : vals) {
                            int cmp = tvl::compare_values(v, best);
                            if (*it.agg == tvl::AggFn::Max ? cmp > 0 : cmp < 0) best = v;
                        }
                        row.push_back(best);
                        break;
                    }
                }
            }
            out.rows.push_back(row);
        }
    }

    // canonical sort mirroring the executor contract: order keys, then the
    // whole row; reference path sorts on formatted text where possible
    std::vector<size_t> order_cols;
    bool desc = false;
    std::vector<size_t> plain_src;  // for plain queries ordering on unprojected cols
    if (s.order_by) {
        desc = s.order_by->dir == tvl::SortDir::Desc;
        for (const auto& k : s.order_by->keys) {
            bool found = false;
            for (size_t i = 0; i < out.columns.size(); ++i)
                if (out.columns[i] == k) {
                    order_cols.push_back(i);
                    found = true;
                    break;
                }
            if (!found) {
                size_t bin_offset = (s.transform && s.transform->bin) ? 1 : 0;
                for (size_t i = 0; i < s.select_items.size() && !found; ++i)
                    if (!s.select_items[i].is_aggregate() && s.select_items[i].column == k) {
                        order_cols.push_back(bin_offset + i);
                        found = true;
                    }
            }
            REQUIRE(found);  // generated queries only order on projected columns
        }
    }
    std::sort(out.rows.begin(), out.rows.end(), [&](const auto& a, const auto& b) {
        for (size_t idx : order_cols) {
            int cv = tvl::compare_values(a[idx], b[idx]);
            if (cv != 0) return desc ? cv > 0 : cv < 0;
        }
        for (size_t i = 0; i < a.size(); ++i) {
            int cv = tvl::compare_values(a[i], b[i]);
            if (cv != 0) return cv < 0;
        }
        return false;
    });
    return out;
}

// ── misc ────────────────────────────────────────────────────────────────────

inline std::string table_text(const tvl::ResultTable& t) {
    return tvl::render_result_csv(t);
}

// Deterministic synthetic store: points spread over the fixture polygons
// with varied users, modes and altitudes (including nulls).
inline tvl::TrajStore synthetic_store(size_t n_points, uint64_t seed, size_t n_users = 12) {
    std::mt19937_64 rng(seed);
    tvl::TrajStore store;
    struct Area {
        double lon0, lon1, lat0, lat1;
    };
    // interior boxes of the fixture areas plus one box outside every area
    std::vector<Area> boxes = {
        {116.75, 117.15, 40.32, 40.55},  // Miyun
        {116.10, 116.30, 39.95, 40.10},  // Haidian
        {116.40, 116.60, 39.85, 40.00},  // Chaoyang
        {114.70, 115.30, 40.60, 41.00},  // Zhangjiakou
        {115.60, 116.00, 39.00, 39.50},  // outside all fixtures
    };
    std::vector<std::string> modes = {"walk", "bike", "bus", "car", "train"};
    int64_t base_time = tvl::Timestamp::from_civil({2008, 1, 1, 0, 0, 0}).sec;
    size_t trajs = std::max<size_t>(1, n_points / 20);
    size_t made = 0;
    for (size_t t = 0; t < trajs && made < n_points; ++t) {
        int64_t user = static_cast<int64_t>(rng() % n_users);
        int64_t traj = static_cast<int64_t>(t + 1);
        const Area& box = boxes[rng() % boxes.size()];
        bool has_mode = rng() % 8 != 0;
        std::string mode = modes[rng() % modes.size()];
        int64_t t_cur = base_time + static_cast<int64_t>(rng() % (4 * 365 * 86400ULL));
        size_t len = 5 + rng() % 30;
        for (size_t i = 0; i < len && made < n_points; ++i) {
            tvl::TrajPoint p;
            p.user_id = user;
            p.traj_id = traj;
            std::uniform_real_distribution<double> lon_d(box.lon0, box.lon1);
            std::uniform_real_distribution<double> lat_d(box.lat0, box.lat1);
            p.longitude = lon_d(rng);
            p.latitude = lat_d(rng);
            if (rng() % 10 != 0)
                p.altitude = std::uniform_real_distribution<double>(0.0, 2000.0)(rng);
            p.datetime = tvl::Timestamp{t_cur};
            t_cur += static_cast<int64_t>(30 + rng() % 600);
            if (has_mode) p.travel_mode = mode;
            store.add(std::move(p));
            ++made;
        }
    }
    store.finalize();
    return store;
}

}  // namespace testutil

#endif  // TVL_TESTS_HELPERS_HPP
