// metrics.hpp - normalization and the six exact-match accuracies over
// (gold, predicted) TVL pairs: Vis, Axis, Area, Time, SQL, TVL.
#ifndef TVL_METRICS_HPP
#define TVL_METRICS_HPP

#include <cstdio>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "tvl/printer.hpp"

namespace tvl {

struct MetricsError : TvlError {
    using TvlError::TvlError;
};

// Model output that could not be parsed into a TvlQuery. Scores zero on
// every component.
struct FormatFailure {
    std::string reason;
};

using Predicted = std::variant<TvlQuery, FormatFailure>;

// Order-insensitive canonical form: IN lists sorted, aliases case-folded,
// WHERE conjuncts alphabetized by their canonical text. Idempotent.
inline SqlSkeleton normalize_sql(SqlSkeleton s) {
    for (auto& it : s.select_items) it.alias = str::lower(it.alias);
    for (auto& p : s.extra_where) {
        if (p.value.is_list)
            std::sort(p.value.values.begin(), p.value.values.end(),
                      [](const Scalar& a, const Scalar& b) {
                          return scalar_text(a) < scalar_text(b);
                      });
    }
    s.extra_where = sorted_where(std::move(s.extra_where));
    return s;
}

namespace detail {

// Select-list comparison for the Axis metric on non-map charts: aliases are
// case-folded and dropped when they just repeat the column name.
inline std::vector<SelectItem> normalized_select(const std::vector<SelectItem>& items) {
    std::vector<SelectItem> out = items;
    for (auto& it : out) {
        it.alias = str::lower(it.alias);
        if (!it.is_aggregate() && str::iequals(it.alias, it.column)) it.alias.clear();
    }
    return out;
}

}  // namespace detail

struct ScoredPair {
    bool vis = false;
    bool axis = false;
    bool area = false;
    bool time = false;
    bool sql = false;
    bool tvl = false;
};

inline ScoredPair compare_pair(const TvlQuery& gold, const TvlQuery& pred) {
    ScoredPair v;
    v.vis = gold.vis == pred.vis;
    if (gold.area.has_value() != pred.area.has_value())
        v.area = false;
    else
        v.area = !gold.area || canonical_area_name(gold.area->name) ==
                                   canonical_area_name(pred.area->name);
    v.time = gold.time == pred.time;  // both-absent counts as a match
    v.sql = normalize_sql(gold.sql) == normalize_sql(pred.sql);
    if (gold.vis == VisType::Map)
        v.axis = v.area;  // maps center on the area, so Axis follows Area
    else
        v.axis = detail::normalized_select(gold.sql.select_items) ==
                 detail::normalized_select(pred.sql.select_items);
    v.tvl = v.vis && v.area && v.time && v.sql;
    return v;
}

inline ScoredPair compare_pair(const TvlQuery& gold, const Predicted& pred) {
    if (std::holds_alternative<FormatFailure>(pred)) return ScoredPair{};  // all false
    return compare_pair(gold, std::get<TvlQuery>(pred));
}

struct EvalReport {
    size_t n = 0;
    size_t n_vis = 0, n_axis = 0, n_area = 0, n_time = 0, n_sql = 0, n_tvl = 0;

    double vis_acc() const { return ratio(n_vis); }
    double axis_acc() const { return ratio(n_axis); }
    double area_acc() const { return ratio(n_area); }
    double time_acc() const { return ratio(n_time); }
    double sql_acc() const { return ratio(n_sql); }
    double tvl_acc() const { return ratio(n_tvl); }

    void add(const ScoredPair& p) {
        ++n;
        n_vis += p.vis;
        n_axis += p.axis;
        n_area += p.area;
        n_time += p.time;
        n_sql += p.sql;
        n_tvl += p.tvl;
    }

private:
    double ratio(size_t k) const { return n ? static_cast<double>(k) / static_cast<double>(n) : 0.0; }
};

inline EvalReport score(const std::vector<std::pair<TvlQuery, Predicted>>& pairs) {
    if (pairs.empty()) throw MetricsError("cannot score an empty pair set");
    EvalReport r;
    for (const auto& [gold, pred] : pairs) r.add(compare_pair(gold, pred));
    return r;
}

namespace detail {

inline std::string acc4(double v) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

}  // namespace detail

// Structured report document; accuracies at 4 decimal places.
inline nlohmann::ordered_json report_json(const EvalReport& r) {
    nlohmann::ordered_json j;
    j["n"] = r.n;
    j["vis_acc"] = detail::acc4(r.vis_acc());
    j["axis_acc"] = detail::acc4(r.axis_acc());
    j["area_acc"] = detail::acc4(r.area_acc());
    j["time_acc"] = detail::acc4(r.time_acc());
    j["sql_acc"] = detail::acc4(r.sql_acc());
    j["tvl_acc"] = detail::acc4(r.tvl_acc());
    j["counts"] = {{"vis", r.n_vis},   {"axis", r.n_axis}, {"area", r.n_area},
                   {"time", r.n_time}, {"sql", r.n_sql},   {"tvl", r.n_tvl}};
    return j;
}

// Fixed-width table, one row per report, column order Vis.Acc, Axis.Acc,
// Area, Time, SQL, TVL (percent, two decimals).
inline std::string format_report_table(
    const std::vector<std::tuple<std::string, std::string, EvalReport>>& rows) {
    auto pct = [](double v) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%.2f", v * 100.0);
        return std::string(buf);
    };
    char line[256];
    std::string out;
    std::snprintf(line, sizeof(line), "%-10s %-20s %9s %9s %8s %8s %8s %8s\n", "Test Set",
                  "Model", "Vis.Acc", "Axis.Acc", "Area", "Time", "SQL", "TVL");
    out += line;
    for (const auto& [set_name, model, r] : rows) {
        std::snprintf(line, sizeof(line), "%-10s %-20s %9s %9s %8s %8s %8s %8s\n",
                      set_name.c_str(), model.c_str(), pct(r.vis_acc()).c_str(),
                      pct(r.axis_acc()).c_str(), pct(r.area_acc()).c_str(),
                      pct(r.time_acc()).c_str(), pct(r.sql_acc()).c_str(),
                      pct(r.tvl_acc()).c_str());
        out += line;
    }
    return out;
}

}  // namespace tvl

#endif  // TVL_METRICS_HPP
