// printer.hpp - canonical TVL text. Deterministic, whitespace-normalized,
// one statement per line; WHERE conjuncts are emitted in sorted order so
// canonical text is a stable identity for a query.
#ifndef TVL_PRINTER_HPP
#define TVL_PRINTER_HPP

#include <algorithm>
#include <sstream>
#include <string>

#include "tvl/ast.hpp"

namespace tvl {

inline std::string scalar_text(const Scalar& s) {
    if (std::holds_alternative<int64_t>(s)) return std::to_string(std::get<int64_t>(s));
    if (std::holds_alternative<double>(s)) return str::format_double(std::get<double>(s));
    // SQL-style single-quoted string, '' escapes an embedded quote
    const std::string& v = std::get<std::string>(s);
    std::string out = "'";
    for (char c : v) {
        out.push_back(c);
        if (c == '\'') out.push_back('\'');
    }
    out.push_back('\'');
    return out;
}

inline std::string literal_text(const Literal& l) {
    if (!l.is_list) return scalar_text(l.values.front());
    std::string out = "(";
    for (size_t i = 0; i < l.values.size(); ++i) {
        if (i) out += ", ";
        out += scalar_text(l.values[i]);
    }
    out += ")";
    return out;
}

inline std::string predicate_text(const Predicate& p) {
    return p.column + " " + cmp_text(p.cmp) + " " + literal_text(p.value);
}

inline std::string select_item_text(const SelectItem& it) {
    std::string out;
    if (it.agg)
        out = std::string(agg_keyword(*it.agg)) + "(" + it.column + ")";
    else
        out = it.column;
    if (!it.alias.empty()) out += " AS " + it.alias;
    return out;
}

inline std::vector<Predicate> sorted_where(std::vector<Predicate> preds) {
    std::sort(preds.begin(), preds.end(), [](const Predicate& a, const Predicate& b) {
        return predicate_text(a) < predicate_text(b);
    });
    return preds;
}

inline std::string render_skeleton(const SqlSkeleton& s) {
    std::ostringstream out;
    out << "SELECT ";
    for (size_t i = 0; i < s.select_items.size(); ++i) {
        if (i) out << ", ";
        out << select_item_text(s.select_items[i]);
    }
    out << " FROM " << s.from_table;
    for (const auto& j : s.joins)
        out << " JOIN " << j.table << " ON " << j.left_col << " = " << j.right_col;
    auto preds = sorted_where(s.extra_where);
    for (size_t i = 0; i < preds.size(); ++i)
        out << (i == 0 ? " WHERE " : " AND ") << predicate_text(preds[i]);
    if (s.transform) {
        if (s.transform->bin)
            out << " BIN BY " << bin_unit_keyword(s.transform->bin->unit) << "("
                << s.transform->bin->column << ")";
        if (!s.transform->group_keys.empty()) {
            out << " GROUP BY ";
            for (size_t i = 0; i < s.transform->group_keys.size(); ++i) {
                if (i) out << ", ";
                out << s.transform->group_keys[i];
            }
        }
    }
    if (s.order_by) {
        out << " ORDER BY ";
        for (size_t i = 0; i < s.order_by->keys.size(); ++i) {
            if (i) out << ", ";
            out << s.order_by->keys[i];
        }
        if (s.order_by->dir == SortDir::Desc) out << " DESC";
    }
    return out.str();
}

// Canonical serializer. Total for structurally valid queries; the output
// re-parses to an equal value whenever extra_where is already in canonical
// order (parse keeps source order, render sorts).
inline std::string render_tvl(const TvlQuery& q) {
    std::ostringstream out;
    out << "VISUALIZE " << vis_keyword(q.vis);
    if (q.area) out << " AREA \"" << q.area->name << "\"";
    if (q.time.present())
        out << " TIME \"" << format_timestamp(*q.time.st) << "\" TO \""
            << format_timestamp(*q.time.et) << "\"";
    out << " SQL " << render_skeleton(q.sql);
    return out.str();
}

}  // namespace tvl

#endif  // TVL_PRINTER_HPP
