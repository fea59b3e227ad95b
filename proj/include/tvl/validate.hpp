// validate.hpp - structural validation. Violations are data, not exceptions.
#ifndef TVL_VALIDATE_HPP
#define TVL_VALIDATE_HPP

#include <string>
#include <vector>

#include "tvl/ast.hpp"
#include "tvl/printer.hpp"
#include "tvl/schema.hpp"

namespace tvl {

enum class ViolationCode {
    EmptySelect,
    MapRequiresArea,
    EmptyAreaName,
    TimeWindowReversed,
    TimeWindowHalfOpen,
    UnknownTable,
    UnknownColumn,
    StarOutsideCount,
    EmptyInList,
    UngroupedPlainColumn,
    UnresolvedGroupKey,
    UnresolvedOrderKey,
    BinColumnNotTemporal,
    EmptyTransform,
};

inline const char* violation_code_name(ViolationCode c) {
    switch (c) {
        case ViolationCode::EmptySelect: return "EmptySelect";
        case ViolationCode::MapRequiresArea: return "MapRequiresArea";
        case ViolationCode::EmptyAreaName: return "EmptyAreaName";
        case ViolationCode::TimeWindowReversed: return "TimeWindowReversed";
        case ViolationCode::TimeWindowHalfOpen: return "TimeWindowHalfOpen";
        case ViolationCode::UnknownTable: return "UnknownTable";
        case ViolationCode::UnknownColumn: return "UnknownColumn";
        case ViolationCode::StarOutsideCount: return "StarOutsideCount";
        case ViolationCode::EmptyInList: return "EmptyInList";
        case ViolationCode::UngroupedPlainColumn: return "UngroupedPlainColumn";
        case ViolationCode::UnresolvedGroupKey: return "UnresolvedGroupKey";
        case ViolationCode::UnresolvedOrderKey: return "UnresolvedOrderKey";
        case ViolationCode::BinColumnNotTemporal: return "BinColumnNotTemporal";
        case ViolationCode::EmptyTransform: return "EmptyTransform";
    }
    return "?";
}

struct Violation {
    ViolationCode code;
    std::string detail;
};

inline std::string describe_violations(const std::vector<Violation>& v) {
    std::string msg = "invalid TVL:";
    for (const auto& viol : v) {
        msg += " [";
        msg += violation_code_name(viol.code);
        if (!viol.detail.empty()) msg += ": " + viol.detail;
        msg += "]";
    }
    return msg;
}

namespace detail {

inline std::vector<const TableDef*> query_scope(const SqlSkeleton& s, const Schema& schema) {
    std::vector<const TableDef*> scope;
    scope.push_back(schema.table(s.from_table));
    for (const auto& j : s.joins) scope.push_back(schema.table(j.table));
    return scope;
}

}  // namespace detail

inline std::vector<Violation> validate(const TvlQuery& q, const Schema& schema = Schema::instance()) {
    std::vector<Violation> out;
    auto add = [&](ViolationCode c, std::string d) { out.push_back({c, std::move(d)}); };

    if (q.vis == VisType::Map && !q.area) add(ViolationCode::MapRequiresArea, "MAP needs AREA");
    if (q.area && canonical_area_name(q.area->name).empty())
        add(ViolationCode::EmptyAreaName, "area name empty after trimming");

    if (q.time.st.has_value() != q.time.et.has_value())
        add(ViolationCode::TimeWindowHalfOpen, "ST and ET must both be present or both absent");
    else if (q.time.present() && *q.time.st > *q.time.et)
        add(ViolationCode::TimeWindowReversed,
            format_timestamp(*q.time.st) + " > " + format_timestamp(*q.time.et));

    const SqlSkeleton& s = q.sql;
    if (s.select_items.empty()) add(ViolationCode::EmptySelect, "select list empty");

    auto scope = detail::query_scope(s, schema);
    bool tables_known = true;
    if (!scope.empty() && !scope.front()) {
        add(ViolationCode::UnknownTable, s.from_table);
        tables_known = false;
    }
    for (size_t i = 0; i < s.joins.size(); ++i) {
        if (!scope[i + 1]) {
            add(ViolationCode::UnknownTable, s.joins[i].table);
            tables_known = false;
        }
    }

    auto known_column = [&](const std::string& col) {
        return !tables_known || schema.resolve(col, scope) != nullptr;
    };

    for (const auto& it : s.select_items) {
        if (it.column == "*") {
            if (it.agg != AggFn::Count) add(ViolationCode::StarOutsideCount, select_item_text(it));
        } else if (!known_column(it.column)) {
            add(ViolationCode::UnknownColumn, it.column);
        }
    }
    if (tables_known) {
        for (const auto& j : s.joins) {
            if (!known_column(j.left_col)) add(ViolationCode::UnknownColumn, j.left_col);
            if (!known_column(j.right_col)) add(ViolationCode::UnknownColumn, j.right_col);
        }
        for (const auto& p : s.extra_where)
            if (!known_column(p.column)) add(ViolationCode::UnknownColumn, p.column);
    }
    for (const auto& p : s.extra_where)
        if (p.value.is_list && p.value.values.empty())
            add(ViolationCode::EmptyInList, predicate_text(p));

    // grouping rules
    bool has_agg = s.has_aggregates();
    bool grouped = s.transform && !s.transform->empty();
    if (s.transform && s.transform->empty())
        add(ViolationCode::EmptyTransform, "transform present but has no bin and no group keys");
    if (s.transform) {
        if (s.transform->bin) {
            const ColumnDef* c =
                tables_known ? schema.resolve(s.transform->bin->column, scope) : nullptr;
            if (tables_known && (!c || c->type != ColumnType::Time))
                add(ViolationCode::BinColumnNotTemporal, s.transform->bin->column);
        }
        for (const auto& k : s.transform->group_keys) {
            bool ok = known_column(k);
            if (!ok)
                for (const auto& it : s.select_items)
                    if (!it.alias.empty() && it.alias == k) ok = true;
            if (!ok) add(ViolationCode::UnresolvedGroupKey, k);
        }
    }
    if (has_agg || grouped) {
        // plain select columns must be group keys once any aggregation applies
        for (const auto& it : s.select_items) {
            if (it.is_aggregate()) continue;
            bool in_keys = false;
            if (s.transform)
                for (const auto& k : s.transform->group_keys)
                    if (k == it.column || (!it.alias.empty() && k == it.alias)) in_keys = true;
            if (!in_keys) add(ViolationCode::UngroupedPlainColumn, it.column);
        }
    }

    if (s.order_by) {
        for (const auto& k : s.order_by->keys) {
            bool ok = false;
            for (const auto& it : s.select_items) {
                if (!it.alias.empty() && it.alias == k) ok = true;
                if (!it.is_aggregate() && it.column == k) ok = true;
            }
            if (s.transform && s.transform->bin) {
                std::string bin_col =
                    "bin_" + str::lower(bin_unit_keyword(s.transform->bin->unit));
                if (k == bin_col) ok = true;
            }
            if (!ok && !(has_agg || grouped) && known_column(k)) ok = true;
            if (s.transform && !ok)
                for (const auto& g : s.transform->group_keys)
                    if (g == k) ok = true;
            if (!ok) add(ViolationCode::UnresolvedOrderKey, k);
        }
    }

    return out;
}

inline bool is_valid(const TvlQuery& q, const Schema& schema = Schema::instance()) {
    return validate(q, schema).empty();
}

}  // namespace tvl

#endif  // TVL_VALIDATE_HPP
