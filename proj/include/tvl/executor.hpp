// executor.hpp - runs a compiled query against the in-memory store:
// join, filter (polygon / time window / extra predicates), bin + group +
// aggregate, then deterministic ordering.
#ifndef TVL_EXECUTOR_HPP
#define TVL_EXECUTOR_HPP

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "tvl/registry.hpp"
#include "tvl/sqlgen.hpp"
#include "tvl/store.hpp"

namespace tvl {

struct ExecError : TvlError {
    enum class Code { UnknownColumn, TypeMismatch, UnknownArea, UnknownTable };
    Code code;

    ExecError(Code c, const std::string& msg) : TvlError(msg), code(c) {}
};

using Value = std::variant<std::monostate, int64_t, double, std::string, Timestamp>;

inline bool is_null(const Value& v) { return std::holds_alternative<std::monostate>(v); }

inline std::string format_value(const Value& v) {
    if (is_null(v)) return "";
    if (std::holds_alternative<int64_t>(v)) return std::to_string(std::get<int64_t>(v));
    if (std::holds_alternative<double>(v)) return str::format_double(std::get<double>(v));
    if (std::holds_alternative<Timestamp>(v)) return format_timestamp(std::get<Timestamp>(v));
    return std::get<std::string>(v);
}

// Total order used for deterministic row ordering: nulls first, then
// numerics (cross-comparable), strings, timestamps.
inline int compare_values(const Value& a, const Value& b) {
    auto rank = [](const Value& v) {
        if (is_null(v)) return 0;
        if (std::holds_alternative<int64_t>(v) || std::holds_alternative<double>(v)) return 1;
        if (std::holds_alternative<std::string>(v)) return 2;
        return 3;
    };
    int ra = rank(a), rb = rank(b);
    if (ra != rb) return ra < rb ? -1 : 1;
    switch (ra) {
        case 0: return 0;
        case 1: {
            double x = std::holds_alternative<int64_t>(a)
                           ? static_cast<double>(std::get<int64_t>(a))
                           : std::get<double>(a);
            double y = std::holds_alternative<int64_t>(b)
                           ? static_cast<double>(std::get<int64_t>(b))
                           : std::get<double>(b);
            if (x < y) return -1;
            if (x > y) return 1;
            return 0;
        }
        case 2: {
            const auto& x = std::get<std::string>(a);
            const auto& y = std::get<std::string>(b);
            return x < y ? -1 : (x > y ? 1 : 0);
        }
        default: {
            auto x = std::get<Timestamp>(a), y = std::get<Timestamp>(b);
            return x < y ? -1 : (x > y ? 1 : 0);
        }
    }
}

struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<Value>> rows;

    bool operator==(const ResultTable&) const = default;
};

namespace detail {

struct SourceTable {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Value>> rows;
};

inline SourceTable materialize(const TrajStore& store, const std::string& table) {
    SourceTable t;
    t.name = table;
    if (table == "traj_data") {
        t.columns = {"user_id", "traj_id", "latitude", "longitude",
                     "altitude", "datetime", "travel_mode"};
        for (const auto& p : store.points()) {
            std::vector<Value> row;
            row.emplace_back(p.user_id);
            row.emplace_back(p.traj_id);
            row.emplace_back(p.latitude);
            row.emplace_back(p.longitude);
            row.emplace_back(p.altitude ? Value{*p.altitude} : Value{});
            row.emplace_back(p.datetime);
            row.emplace_back(p.travel_mode ? Value{*p.travel_mode} : Value{});
            t.rows.push_back(std::move(row));
        }
        return t;
    }
    if (table == "traj_labels") {
        t.columns = {"user_id", "traj_id", "travel_mode"};
        for (const auto& l : store.labels()) {
            t.rows.push_back({Value{l.user_id}, Value{l.traj_id}, Value{l.travel_mode}});
        }
        return t;
    }
    throw ExecError(ExecError::Code::UnknownTable, "unknown table: " + table);
}

// Column namespace over the FROM table and joins: bare names resolve in
// declaration order, qualified names directly.
class ColumnScope {
public:
    void add_table(const SourceTable& t) {
        for (size_t i = 0; i < t.columns.size(); ++i)
            entries_.push_back({t.name, t.columns[i], next_ + i});
        next_ += t.columns.size();
    }

    size_t resolve(const std::string& ref) const {
        auto dot = ref.find('.');
        if (dot != std::string::npos) {
            std::string tbl = ref.substr(0, dot), col = ref.substr(dot + 1);
            for (const auto& e : entries_)
                if (e.table == tbl && e.column == col) return e.index;
        } else {
            for (const auto& e : entries_)
                if (e.column == ref) return e.index;
        }
        throw ExecError(ExecError::Code::UnknownColumn, "unknown column: " + ref);
    }

private:
    struct Entry {
        std::string table;
        std::string column;
        size_t index;
    };
    std::vector<Entry> entries_;
    size_t next_ = 0;
};

inline double numeric_or_throw(const Value& v, const std::string& what) {
    if (std::holds_alternative<int64_t>(v)) return static_cast<double>(std::get<int64_t>(v));
    if (std::holds_alternative<double>(v)) return std::get<double>(v);
    throw ExecError(ExecError::Code::TypeMismatch, what + " needs a numeric value");
}

// Three-way comparison between a row value and a predicate scalar; null
// values compare as "no match" (the caller treats nullopt as false).
inline std::optional<int> compare_for_predicate(const Value& v, const Scalar& lit,
                                                const std::string& column) {
    if (is_null(v)) return std::nullopt;
    if (std::holds_alternative<std::string>(lit)) {
        const std::string& s = std::get<std::string>(lit);
        if (std::holds_alternative<std::string>(v)) {
            const std::string& x = std::get<std::string>(v);
            return x < s ? -1 : (x > s ? 1 : 0);
        }
        if (std::holds_alternative<Timestamp>(v)) {
            auto ts = parse_timestamp(s);
            if (!ts)
                throw ExecError(ExecError::Code::TypeMismatch,
                                "column " + column + " needs a timestamp literal, got '" + s + "'");
            auto x = std::get<Timestamp>(v);
            return x < *ts ? -1 : (x > *ts ? 1 : 0);
        }
        throw ExecError(ExecError::Code::TypeMismatch,
                        "string literal compared against numeric column " + column);
    }
    double lv = std::holds_alternative<int64_t>(lit)
                    ? static_cast<double>(std::get<int64_t>(lit))
                    : std::get<double>(lit);
    double xv = numeric_or_throw(v, "column " + column);
    return xv < lv ? -1 : (xv > lv ? 1 : 0);
}

inline bool eval_predicate(const Predicate& p, const Value& v) {
    if (p.cmp == Cmp::In) {
        for (const auto& lit : p.value.values) {
            auto c = compare_for_predicate(v, lit, p.column);
            if (c && *c == 0) return true;
        }
        return false;
    }
    auto c = compare_for_predicate(v, p.value.values.front(), p.column);
    if (!c) return false;
    switch (p.cmp) {
        case Cmp::Eq: return *c == 0;
        case Cmp::Ne: return *c != 0;
        case Cmp::Lt: return *c < 0;
        case Cmp::Le: return *c <= 0;
        case Cmp::Gt: return *c > 0;
        case Cmp::Ge: return *c >= 0;
        default: return false;
    }
}

struct AggState {
    int64_t count = 0;       // contributing (non-null) values; rows for COUNT(*)
    double sum = 0;
    bool any = false;
    Value max_v, min_v;

    void feed(const Value& v, AggFn fn) {
        if (fn == AggFn::Count) {
            if (!is_null(v)) ++count;
            return;
        }
        if (is_null(v)) return;
        if (fn == AggFn::Max || fn == AggFn::Min) {
            if (!any || (fn == AggFn::Max ? compare_values(v, max_v) > 0
                                          : compare_values(v, min_v) < 0)) {
                max_v = v;
                min_v = v;
            }
            any = true;
            return;
        }
        sum += numeric_or_throw(v, "aggregate input");
        ++count;
        any = true;
    }

    Value result(AggFn fn) const {
        switch (fn) {
            case AggFn::Count: return Value{count};
            case AggFn::Sum: return any ? Value{sum} : Value{};
            case AggFn::Avg: return any ? Value{sum / static_cast<double>(count)} : Value{};
            case AggFn::Max: return any ? max_v : Value{};
            case AggFn::Min: return any ? min_v : Value{};
        }
        return Value{};
    }
};

inline std::string result_column_name(const SelectItem& it) {
    if (!it.alias.empty()) return it.alias;
    if (it.agg) return str::lower(agg_keyword(*it.agg)) + "(" + it.column + ")";
    return it.column;
}

}  // namespace detail

inline ResultTable execute(const CompiledSql& c, const TrajStore& store,
                           const AreaRegistry& registry) {
    const SqlSkeleton& s = c.structured.skeleton;

    // join product
    detail::SourceTable base = detail::materialize(store, s.from_table);
    detail::ColumnScope scope;
    scope.add_table(base);
    std::vector<std::vector<Value>> rows = std::move(base.rows);
    for (const auto& j : s.joins) {
        detail::SourceTable right = detail::materialize(store, j.table);
        detail::ColumnScope extended = scope;
        extended.add_table(right);
        size_t li = scope.resolve(j.left_col);  // left side must already be in scope
        // right side resolved in the extended scope (usually qualified)
        size_t ri = extended.resolve(j.right_col);
        std::vector<std::vector<Value>> joined;
        for (const auto& lrow : rows) {
            for (const auto& rrow : right.rows) {
                std::vector<Value> comb = lrow;
                comb.insert(comb.end(), rrow.begin(), rrow.end());
                const Value& lv = comb[li];
                if (!is_null(lv) && compare_values(lv, comb[ri]) == 0)
                    joined.push_back(std::move(comb));
            }
        }
        rows = std::move(joined);
        scope = extended;
    }

    // WHERE: spatial, temporal, extra predicates
    const Polygon* polygon = nullptr;
    size_t lon_idx = 0, lat_idx = 0, dt_idx = 0;
    if (c.structured.area || c.structured.time.present()) {
        GeometryBinding bind = geometry_binding(s.from_table);
        if (c.structured.area) {
            const AreaRecord* rec = registry.find(*c.structured.area);
            if (!rec)
                throw ExecError(ExecError::Code::UnknownArea, "unknown area: " + *c.structured.area);
            polygon = &rec->polygon;
            lon_idx = scope.resolve(bind.lon_column);
            lat_idx = scope.resolve(bind.lat_column);
        }
        if (c.structured.time.present()) dt_idx = scope.resolve(bind.datetime_column);
    }
    std::vector<std::pair<size_t, const Predicate*>> preds;
    for (const auto& p : s.extra_where) preds.emplace_back(scope.resolve(p.column), &p);

    std::vector<std::vector<Value>> filtered;
    for (auto& row : rows) {
        if (polygon) {
            double lon = detail::numeric_or_throw(row[lon_idx], "longitude");
            double lat = detail::numeric_or_throw(row[lat_idx], "latitude");
            if (!point_in_polygon(LonLat{lon, lat}, *polygon)) continue;
        }
        if (c.structured.time.present()) {
            if (!std::holds_alternative<Timestamp>(row[dt_idx]))
                throw ExecError(ExecError::Code::TypeMismatch, "datetime column is not temporal");
            Timestamp t = std::get<Timestamp>(row[dt_idx]);
            if (t < *c.structured.time.st || t > *c.structured.time.et) continue;
        }
        bool ok = true;
        for (const auto& [idx, p] : preds) {
            if (!detail::eval_predicate(*p, row[idx])) {
                ok = false;
                break;
            }
        }
        if (ok) filtered.push_back(std::move(row));
    }

    // transform + projection
    ResultTable out;
    bool has_agg = s.has_aggregates();
    bool has_transform = s.transform && !s.transform->empty();
    std::optional<BinSpec> bin = s.transform ? s.transform->bin : std::nullopt;

    if (!has_agg && !has_transform) {
        // Plain projection. ORDER BY may reference source columns that are
        // not projected, so sort keys are captured from the source rows.
        std::vector<size_t> proj;
        for (const auto& it : s.select_items) {
            proj.push_back(scope.resolve(it.column));
            out.columns.push_back(detail::result_column_name(it));
        }
        std::vector<size_t> key_src;
        bool desc = false;
        if (s.order_by) {
            desc = s.order_by->dir == SortDir::Desc;
            for (const auto& k : s.order_by->keys) {
                bool mapped = false;
                for (size_t i = 0; i < s.select_items.size(); ++i) {
                    const auto& it = s.select_items[i];
                    if ((!it.alias.empty() && it.alias == k) ||
                        (!it.is_aggregate() && it.column == k)) {
                        key_src.push_back(proj[i]);
                        mapped = true;
                        break;
                    }
                }
                if (!mapped) key_src.push_back(scope.resolve(k));
            }
        }
        std::vector<std::pair<std::vector<Value>, std::vector<Value>>> keyed;
        keyed.reserve(filtered.size());
        for (const auto& row : filtered) {
            std::vector<Value> keys;
            keys.reserve(key_src.size());
            for (size_t idx : key_src) keys.push_back(row[idx]);
            std::vector<Value> r;
            r.reserve(proj.size());
            for (size_t idx : proj) r.push_back(row[idx]);
            keyed.emplace_back(std::move(keys), std::move(r));
        }
        std::sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
            for (size_t i = 0; i < a.first.size(); ++i) {
                int c = compare_values(a.first[i], b.first[i]);
                if (c != 0) return desc ? c > 0 : c < 0;
            }
            for (size_t i = 0; i < a.second.size(); ++i) {
                int c = compare_values(a.second[i], b.second[i]);
                if (c != 0) return c < 0;
            }
            return false;
        });
        for (auto& [_, r] : keyed) out.rows.push_back(std::move(r));
        return out;
    } else {
        size_t bin_idx = 0;
        if (bin) {
            bin_idx = scope.resolve(bin->column);
            out.columns.push_back("bin_" + str::lower(bin_unit_keyword(bin->unit)));
        }
        std::vector<size_t> key_idx;
        std::vector<std::string> group_keys =
            s.transform ? s.transform->group_keys : std::vector<std::string>{};
        for (const auto& k : group_keys) key_idx.push_back(scope.resolve(k));

        struct ItemPlan {
            const SelectItem* item;
            size_t src_idx = 0;       // column index (aggregates over columns / plain)
            bool star = false;        // COUNT(*)
            int group_pos = -1;       // plain items: position in group key vector
        };
        std::vector<ItemPlan> plans;
        for (const auto& it : s.select_items) {
            ItemPlan plan{&it};
            if (it.is_aggregate()) {
                if (it.column == "*")
                    plan.star = true;
                else
                    plan.src_idx = scope.resolve(it.column);
            } else {
                for (size_t g = 0; g < group_keys.size(); ++g)
                    if (group_keys[g] == it.column ||
                        (!it.alias.empty() && group_keys[g] == it.alias))
                        plan.group_pos = static_cast<int>(g);
                if (plan.group_pos < 0)
                    throw ExecError(ExecError::Code::TypeMismatch,
                                    "plain select item not in GROUP BY: " + it.column);
                plan.src_idx = scope.resolve(it.column);
            }
            plans.push_back(plan);
            out.columns.push_back(detail::result_column_name(it));
        }

        struct Group {
            std::vector<Value> keys;  // [bin] + group key values
            std::vector<detail::AggState> aggs;
        };
        std::map<std::string, Group> groups;
        for (const auto& row : filtered) {
            std::vector<Value> keys;
            if (bin) {
                if (!std::holds_alternative<Timestamp>(row[bin_idx]))
                    throw ExecError(ExecError::Code::TypeMismatch,
                                    "BIN BY column is not temporal: " + bin->column);
                keys.push_back(truncate(std::get<Timestamp>(row[bin_idx]), bin->unit));
            }
            for (size_t idx : key_idx) keys.push_back(row[idx]);
            std::string map_key;
            for (const auto& k : keys) {
                map_key += format_value(k);
                map_key.push_back('\x1f');
            }
            auto [it, fresh] = groups.try_emplace(map_key);
            if (fresh) {
                it->second.keys = keys;
                it->second.aggs.resize(plans.size());
            }
            for (size_t i = 0; i < plans.size(); ++i) {
                const ItemPlan& plan = plans[i];
                if (!plan.item->is_aggregate()) continue;
                if (plan.star)
                    it->second.aggs[i].count++;  // COUNT(*) counts rows
                else
                    it->second.aggs[i].feed(row[plan.src_idx], *plan.item->agg);
            }
        }
        for (auto& [_, g] : groups) {
            std::vector<Value> r;
            size_t key_base = bin ? 1 : 0;
            if (bin) r.push_back(g.keys[0]);
            for (const auto& plan : plans) {
                if (plan.item->is_aggregate())
                    r.push_back(g.aggs[&plan - plans.data()].result(*plan.item->agg));
                else
                    r.push_back(g.keys[key_base + plan.group_pos]);
            }
            out.rows.push_back(std::move(r));
        }
    }

    // deterministic ordering: order_by keys first, then full-row tiebreak
    std::vector<size_t> order_idx;
    bool desc = false;
    if (s.order_by) {
        desc = s.order_by->dir == SortDir::Desc;
        size_t bin_offset = (s.transform && s.transform->bin) ? 1 : 0;
        for (const auto& k : s.order_by->keys) {
            bool found = false;
            for (size_t i = 0; i < out.columns.size() && !found; ++i)
                if (out.columns[i] == k) {
                    order_idx.push_back(i);
                    found = true;
                }
            // a group key ordered by its column name while the item is aliased
            for (size_t i = 0; i < s.select_items.size() && !found; ++i)
                if (!s.select_items[i].is_aggregate() && s.select_items[i].column == k) {
                    order_idx.push_back(bin_offset + i);
                    found = true;
                }
            if (!found)
                throw ExecError(ExecError::Code::UnknownColumn, "ORDER BY key not in result: " + k);
        }
    }
    std::sort(out.rows.begin(), out.rows.end(),
              [&](const std::vector<Value>& a, const std::vector<Value>& b) {
                  for (size_t idx : order_idx) {
                      int c = compare_values(a[idx], b[idx]);
                      if (c != 0) return desc ? c > 0 : c < 0;
                  }
                  for (size_t i = 0; i < a.size(); ++i) {
                      int c = compare_values(a[i], b[i]);
                      if (c != 0) return c < 0;
                  }
                  return false;
              });
    return out;
}

inline std::string render_result_csv(const ResultTable& t) {
    std::string out = str::join(t.columns, ",") + "\n";
    for (const auto& row : t.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out.push_back(',');
            out += format_value(row[i]);
        }
        out.push_back('\n');
    }
    return out;
}

}  // namespace tvl

#endif  // TVL_EXECUTOR_HPP
