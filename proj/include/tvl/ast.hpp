// ast.hpp - TVL abstract syntax: one statement = visualization type,
// optional area, optional closed time window, restricted SQL skeleton.
#ifndef TVL_AST_HPP
#define TVL_AST_HPP

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tvl/common.hpp"
#include "tvl/timestamp.hpp"

namespace tvl {

// ── Visualization type ──────────────────────────────────────────────────────

enum class VisType { Map, Bar, Line, Pie };

inline const char* vis_keyword(VisType v) {
    switch (v) {
        case VisType::Map: return "map";
        case VisType::Bar: return "bar";
        case VisType::Line: return "line";
        case VisType::Pie: return "pie";
    }
    return "";
}

inline std::optional<VisType> vis_from_keyword(std::string_view kw) {
    if (str::iequals(kw, "map")) return VisType::Map;
    if (str::iequals(kw, "bar")) return VisType::Bar;
    if (str::iequals(kw, "line")) return VisType::Line;
    if (str::iequals(kw, "pie")) return VisType::Pie;
    return std::nullopt;
}

// ── Area reference ──────────────────────────────────────────────────────────
// Canonical form: comma-separated "smallest-unit, parent" parts, each
// whitespace-collapsed, joined by ", ". Case is preserved.

inline std::string canonical_area_name(std::string_view raw) {
    std::vector<std::string> parts;
    for (auto& p : str::split(raw, ',')) {
        std::string c = str::collapse_ws(p);
        if (!c.empty()) parts.push_back(std::move(c));
    }
    return str::join(parts, ", ");
}

struct AreaRef {
    std::string name;

    static AreaRef canonical(std::string_view raw) { return AreaRef{canonical_area_name(raw)}; }
    bool operator==(const AreaRef&) const = default;
};

// ── Time window ─────────────────────────────────────────────────────────────
// Dual-anchor closed interval [st, et]; both anchors present or both absent.

struct TimeWindow {
    std::optional<Timestamp> st;
    std::optional<Timestamp> et;

    bool present() const { return st.has_value() && et.has_value(); }
    bool operator==(const TimeWindow&) const = default;
};

// ── SQL skeleton ────────────────────────────────────────────────────────────

enum class AggFn { Avg, Count, Sum, Max, Min };

inline const char* agg_keyword(AggFn a) {
    switch (a) {
        case AggFn::Avg: return "AVG";
        case AggFn::Count: return "COUNT";
        case AggFn::Sum: return "SUM";
        case AggFn::Max: return "MAX";
        case AggFn::Min: return "MIN";
    }
    return "";
}

inline std::optional<AggFn> agg_from_keyword(std::string_view kw) {
    if (str::iequals(kw, "AVG")) return AggFn::Avg;
    if (str::iequals(kw, "COUNT")) return AggFn::Count;
    if (str::iequals(kw, "SUM")) return AggFn::Sum;
    if (str::iequals(kw, "MAX")) return AggFn::Max;
    if (str::iequals(kw, "MIN")) return AggFn::Min;
    return std::nullopt;
}

// Plain column, or aggregate over a column ("*" only under COUNT);
// empty alias means none.
struct SelectItem {
    std::optional<AggFn> agg;
    std::string column;
    std::string alias;

    bool is_aggregate() const { return agg.has_value(); }
    bool operator==(const SelectItem&) const = default;
};

enum class Cmp { Eq, Ne, Lt, Le, Gt, Ge, In };

inline const char* cmp_text(Cmp c) {
    switch (c) {
        case Cmp::Eq: return "=";
        case Cmp::Ne: return "!=";
        case Cmp::Lt: return "<";
        case Cmp::Le: return "<=";
        case Cmp::Gt: return ">";
        case Cmp::Ge: return ">=";
        case Cmp::In: return "IN";
    }
    return "";
}

using Scalar = std::variant<int64_t, double, std::string>;

struct Literal {
    bool is_list = false;          // true only for IN
    std::vector<Scalar> values;    // exactly one element unless is_list

    static Literal scalar(Scalar s) { return Literal{false, {std::move(s)}}; }
    static Literal list(std::vector<Scalar> vs) { return Literal{true, std::move(vs)}; }
    bool operator==(const Literal&) const = default;
};

struct Predicate {
    std::string column;
    Cmp cmp = Cmp::Eq;
    Literal value;

    bool operator==(const Predicate&) const = default;
};

// Single-equality inner join; columns may be table-qualified.
struct Join {
    std::string table;
    std::string left_col;
    std::string right_col;

    bool operator==(const Join&) const = default;
};

struct BinSpec {
    BinUnit unit = BinUnit::Day;
    std::string column;

    bool operator==(const BinSpec&) const = default;
};

// Transform pipeline stage: temporal binning plus grouping. The aggregate
// list is implied by the aggregate select items.
struct TransformSpec {
    std::optional<BinSpec> bin;
    std::vector<std::string> group_keys;

    bool empty() const { return !bin.has_value() && group_keys.empty(); }
    bool operator==(const TransformSpec&) const = default;
};

enum class SortDir { Asc, Desc };

struct OrderBy {
    std::vector<std::string> keys;
    SortDir dir = SortDir::Asc;

    bool operator==(const OrderBy&) const = default;
};

struct SqlSkeleton {
    std::vector<SelectItem> select_items;
    std::string from_table;
    std::vector<Join> joins;
    std::vector<Predicate> extra_where;
    std::optional<TransformSpec> transform;
    std::optional<OrderBy> order_by;

    std::vector<SelectItem> aggregate_items() const {
        std::vector<SelectItem> out;
        for (const auto& it : select_items)
            if (it.is_aggregate()) out.push_back(it);
        return out;
    }
    bool has_aggregates() const {
        for (const auto& it : select_items)
            if (it.is_aggregate()) return true;
        return false;
    }
    bool operator==(const SqlSkeleton&) const = default;
};

// ── Full statement ──────────────────────────────────────────────────────────

struct TvlQuery {
    VisType vis = VisType::Map;
    std::optional<AreaRef> area;
    TimeWindow time;
    SqlSkeleton sql;

    bool operator==(const TvlQuery&) const = default;
};

}  // namespace tvl

#endif  // TVL_AST_HPP
