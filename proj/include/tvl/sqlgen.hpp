// sqlgen.hpp - compiles a TvlQuery to an executable SQL statement by
// injecting the spatial and temporal WHERE constraints into the base
// skeleton. Emitted text targets a PostGIS-flavored dialect.
#ifndef TVL_SQLGEN_HPP
#define TVL_SQLGEN_HPP

#include <sstream>
#include <string>
#include <vector>

#include "tvl/printer.hpp"
#include "tvl/registry.hpp"
#include "tvl/schema.hpp"
#include "tvl/validate.hpp"

namespace tvl {

struct CompileError : TvlError {
    enum class Code { UnknownArea, UnknownTable, MissingGeometryColumn, InvalidQuery };
    Code code;

    CompileError(Code c, const std::string& msg) : TvlError(msg), code(c) {}
};

// Structured twin of the emitted SQL text, consumed by the oracle executor.
struct CompiledQuery {
    SqlSkeleton skeleton;                 // extra_where in canonical order
    std::optional<std::string> area;      // canonical area name, resolved at compile time
    TimeWindow time;
};

struct CompiledSql {
    std::string text;
    std::vector<std::string> injected_predicates;
    std::string dialect = "postgis-like";
    CompiledQuery structured;
};

// Column pair used for constraint injection, looked up per FROM table.
inline GeometryBinding geometry_binding(const std::string& table,
                                        const Schema& schema = Schema::instance()) {
    const TableDef* t = schema.table(table);
    if (!t) throw CompileError(CompileError::Code::UnknownTable, "unknown table: " + table);
    if (!t->binding)
        throw CompileError(CompileError::Code::MissingGeometryColumn,
                           "table has no geometry/datetime binding: " + table);
    return *t->binding;
}

// Injection order is fixed (spatial, temporal, extra predicates) so the
// compiled text is canonical; all predicates are AND-joined in one WHERE.
inline CompiledSql compile_to_sql(const TvlQuery& q, const AreaRegistry& registry,
                                  const Schema& schema = Schema::instance()) {
    auto violations = validate(q, schema);
    if (!violations.empty())
        throw CompileError(CompileError::Code::InvalidQuery, describe_violations(violations));

    CompiledSql out;
    out.structured.skeleton = q.sql;
    out.structured.skeleton.extra_where = sorted_where(q.sql.extra_where);
    out.structured.time = q.time;

    std::vector<std::string> where_parts;
    if (q.area) {
        const AreaRecord* rec = registry.find(q.area->name);
        if (!rec)
            throw CompileError(CompileError::Code::UnknownArea,
                               "unknown area: " + q.area->name);
        GeometryBinding bind = geometry_binding(q.sql.from_table, schema);
        std::string pred = "ST_Within(" + bind.point_expr() + ", ST_GeomFromText('" +
                           polygon_wkt(rec->polygon) + "'))";
        out.injected_predicates.push_back(pred);
        where_parts.push_back(std::move(pred));
        out.structured.area = rec->name;
    }
    if (q.time.present()) {
        GeometryBinding bind = geometry_binding(q.sql.from_table, schema);
        std::string pred = bind.datetime_column + " BETWEEN '" + format_timestamp(*q.time.st) +
                           "' AND '" + format_timestamp(*q.time.et) + "'";
        out.injected_predicates.push_back(pred);
        where_parts.push_back(std::move(pred));
    }
    for (const auto& p : out.structured.skeleton.extra_where)
        where_parts.push_back(predicate_text(p));

    // Re-render the skeleton with the combined WHERE clause in place. The
    // TVL-level BIN BY transform lowers to date_trunc in the select list and
    // GROUP BY, which is how the target dialect spells temporal binning.
    std::string bin_expr, bin_alias;
    if (q.sql.transform && q.sql.transform->bin) {
        const BinSpec& b = *q.sql.transform->bin;
        bin_alias = "bin_" + str::lower(bin_unit_keyword(b.unit));
        bin_expr = "date_trunc('" + str::lower(bin_unit_keyword(b.unit)) + "', " + b.column + ")";
    }

    std::ostringstream sql;
    sql << "SELECT ";
    if (!bin_expr.empty()) sql << bin_expr << " AS " << bin_alias << ", ";
    for (size_t i = 0; i < q.sql.select_items.size(); ++i) {
        if (i) sql << ", ";
        sql << select_item_text(q.sql.select_items[i]);
    }
    sql << " FROM " << q.sql.from_table;
    for (const auto& j : q.sql.joins)
        sql << " JOIN " << j.table << " ON " << j.left_col << " = " << j.right_col;
    for (size_t i = 0; i < where_parts.size(); ++i)
        sql << (i == 0 ? " WHERE " : " AND ") << where_parts[i];
    if (q.sql.transform && (!bin_expr.empty() || !q.sql.transform->group_keys.empty())) {
        sql << " GROUP BY ";
        bool first = true;
        if (!bin_expr.empty()) {
            sql << bin_expr;
            first = false;
        }
        for (const auto& k : q.sql.transform->group_keys) {
            if (!first) sql << ", ";
            sql << k;
            first = false;
        }
    }
    if (q.sql.order_by) {
        sql << " ORDER BY ";
        for (size_t i = 0; i < q.sql.order_by->keys.size(); ++i) {
            if (i) sql << ", ";
            sql << q.sql.order_by->keys[i];
        }
        if (q.sql.order_by->dir == SortDir::Desc) sql << " DESC";
    }
    out.text = sql.str();
    return out;
}

}  // namespace tvl

#endif  // TVL_SQLGEN_HPP
