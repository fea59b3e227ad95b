// schema.hpp - the fixed two-table trajectory schema every TVL statement
// queries: the point table plus the travel-mode label side table.
#ifndef TVL_SCHEMA_HPP
#define TVL_SCHEMA_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tvl/common.hpp"

namespace tvl {

enum class ColumnType { Int, Real, Text, Time };

struct ColumnDef {
    std::string name;
    ColumnType type;
    bool nullable = false;
};

// Lat/lon live in plain numeric columns; the compiler synthesizes the
// geometry point from them and the executor evaluates the polygon test
// against the same pair.
struct GeometryBinding {
    std::string lon_column;
    std::string lat_column;
    std::string datetime_column;

    std::string point_expr() const { return "ST_Point(" + lon_column + ", " + lat_column + ")"; }
};

struct TableDef {
    std::string name;
    std::vector<ColumnDef> columns;
    std::optional<GeometryBinding> binding;

    const ColumnDef* column(std::string_view col) const {
        for (const auto& c : columns)
            if (c.name == col) return &c;
        return nullptr;
    }
};

class Schema {
public:
    static const Schema& instance() {
        static const Schema s = make_default();
        return s;
    }

    const TableDef* table(std::string_view name) const {
        for (const auto& t : tables_)
            if (t.name == name) return &t;
        return nullptr;
    }

    const std::vector<TableDef>& tables() const { return tables_; }

    // Resolves a possibly table-qualified column against the FROM table and
    // joined tables, in declaration order. Returns nullptr when unknown.
    const ColumnDef* resolve(std::string_view col, const std::vector<const TableDef*>& scope) const {
        auto dot = col.find('.');
        if (dot != std::string_view::npos) {
            std::string_view tbl = col.substr(0, dot);
            std::string_view bare = col.substr(dot + 1);
            for (const TableDef* t : scope)
                if (t && t->name == tbl)
                    if (const ColumnDef* c = t->column(bare)) return c;
            return nullptr;
        }
        for (const TableDef* t : scope)
            if (t)
                if (const ColumnDef* c = t->column(col)) return c;
        return nullptr;
    }

private:
    std::vector<TableDef> tables_;

    static Schema make_default() {
        Schema s;
        s.tables_.push_back(TableDef{
            "traj_data",
            {
                {"user_id", ColumnType::Int},
                {"traj_id", ColumnType::Int},
                {"latitude", ColumnType::Real},
                {"longitude", ColumnType::Real},
                {"altitude", ColumnType::Real, true},
                {"datetime", ColumnType::Time},
                {"travel_mode", ColumnType::Text, true},
            },
            GeometryBinding{"longitude", "latitude", "datetime"},
        });
        s.tables_.push_back(TableDef{
            "traj_labels",
            {
                {"user_id", ColumnType::Int},
                {"traj_id", ColumnType::Int},
                {"travel_mode", ColumnType::Text},
            },
            std::nullopt,
        });
        return s;
    }
};

}  // namespace tvl

#endif  // TVL_SCHEMA_HPP
