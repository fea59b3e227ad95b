// datagen.hpp - TVL corpus generation: candidate (area, time-range)
// collection, seed map queries from the base trajectory template,
// constraint-tree augmentation over auxiliary attributes, and the extended
// bar/line/pie chart templates. Everything is deterministic per rng_seed.
#ifndef TVL_DATAGEN_HPP
#define TVL_DATAGEN_HPP

#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "tvl/dataset.hpp"
#include "tvl/executor.hpp"
#include "tvl/parser.hpp"
#include "tvl/printer.hpp"
#include "tvl/registry.hpp"
#include "tvl/store.hpp"

namespace tvl {

struct DatagenError : TvlError {
    using TvlError::TvlError;
};

struct CandidateArea {
    AreaRef area;
    Timestamp earliest;
    Timestamp latest;
};

struct ChartMix {
    double map = 0.697;
    double bar = 0.113;
    double line = 0.104;
    double pie = 0.086;
};

struct GenConfig {
    int intervals_per_area = 3;  // in [3, 5]
    ChartMix chart_mix;
    uint64_t rng_seed = 0;
    size_t max_tvls = 0;  // 0 = no cap for augment; required > 0 for corpus assembly

    void check() const {
        if (intervals_per_area < 3 || intervals_per_area > 5)
            throw DatagenError("intervals_per_area must be in [3, 5]");
        double sum = chart_mix.map + chart_mix.bar + chart_mix.line + chart_mix.pie;
        if (std::fabs(sum - 1.0) > 1e-9)
            throw DatagenError("chart_mix proportions must sum to 1, got " +
                               str::format_double(sum));
    }
};

inline GenConfig gen_config_from_json(const nlohmann::json& j) {
    GenConfig cfg;
    cfg.intervals_per_area = j.value("intervals_per_area", 3);
    if (j.contains("chart_mix")) {
        const auto& m = j.at("chart_mix");
        cfg.chart_mix.map = m.value("map", 0.0);
        cfg.chart_mix.bar = m.value("bar", 0.0);
        cfg.chart_mix.line = m.value("line", 0.0);
        cfg.chart_mix.pie = m.value("pie", 0.0);
    }
    cfg.rng_seed = j.at("rng_seed").get<uint64_t>();
    cfg.max_tvls = j.value("max_tvls", size_t{0});
    cfg.check();
    return cfg;
}

// ── candidate collection ────────────────────────────────────────────────────

// One candidate per registry area that contains at least one point; the
// time range spans the earliest and latest in-area timestamps.
inline std::vector<CandidateArea> collect_candidates(const TrajStore& store,
                                                     const AreaRegistry& registry) {
    std::vector<CandidateArea> out;
    for (const auto& rec : registry.records()) {
        bool any = false;
        Timestamp lo{}, hi{};
        for (const auto& p : store.points()) {
            if (!point_in_polygon(LonLat{p.longitude, p.latitude}, rec.polygon)) continue;
            if (!any || p.datetime < lo) lo = p.datetime;
            if (!any || p.datetime > hi) hi = p.datetime;
            any = true;
        }
        if (any) out.push_back(CandidateArea{AreaRef{rec.name}, lo, hi});
    }
    return out;
}

// ── interval sampling ───────────────────────────────────────────────────────

// k pairwise-distinct sub-intervals of [earliest, latest], minimum length
// one hour (or the whole range when shorter). A degenerate range yields the
// single point-interval once. Deterministic per (rng_seed, area name).
inline std::vector<TimeWindow> sample_intervals(const CandidateArea& c, const GenConfig& cfg) {
    cfg.check();
    if (c.earliest > c.latest) throw DatagenError("candidate range reversed for " + c.area.name);
    if (c.earliest == c.latest)
        return {TimeWindow{c.earliest, c.latest}};

    int64_t range = c.latest.sec - c.earliest.sec;
    int64_t min_len = std::min<int64_t>(3600, range);
    std::mt19937_64 rng(mix64(cfg.rng_seed ^ hash_combine(0x5eedULL, c.area.name)));
    std::set<std::pair<int64_t, int64_t>> seen;
    std::vector<TimeWindow> out;
    int attempts = 0;
    while (out.size() < static_cast<size_t>(cfg.intervals_per_area) && attempts < 1000) {
        ++attempts;
        std::uniform_int_distribution<int64_t> st_dist(0, range - min_len);
        int64_t st_off = st_dist(rng);
        std::uniform_int_distribution<int64_t> len_dist(min_len, range - st_off);
        int64_t len = len_dist(rng);
        auto key = std::make_pair(st_off, len);
        if (!seen.insert(key).second) continue;
        out.push_back(TimeWindow{Timestamp{c.earliest.sec + st_off},
                                 Timestamp{c.earliest.sec + st_off + len}});
    }
    return out;
}

// ── seed generation ─────────────────────────────────────────────────────────

// The base trajectory skeleton every map seed uses.
inline SqlSkeleton base_trajectory_skeleton() {
    SqlSkeleton s;
    for (const char* col : {"user_id", "traj_id", "latitude", "longitude", "datetime"})
        s.select_items.push_back(SelectItem{std::nullopt, col, ""});
    s.from_table = "traj_data";
    s.order_by = OrderBy{{"user_id", "traj_id", "datetime"}, SortDir::Asc};
    return s;
}

// One MAP query per (candidate, sampled interval) pair.
inline std::vector<TvlQuery> generate_seed(const std::vector<CandidateArea>& candidates,
                                           const GenConfig& cfg) {
    std::vector<TvlQuery> out;
    for (const auto& c : candidates) {
        for (const auto& w : sample_intervals(c, cfg)) {
            TvlQuery q;
            q.vis = VisType::Map;
            q.area = c.area;
            q.time = w;
            q.sql = base_trajectory_skeleton();
            out.push_back(std::move(q));
        }
    }
    return out;
}

// ── constraint tree ─────────────────────────────────────────────────────────

struct AttributeDomains {
    std::vector<std::string> travel_modes;   // sorted distinct
    std::vector<int64_t> user_ids;           // sorted distinct
    std::vector<double> altitude_thresholds; // distinct quantile cut points
};

// Nearest-rank quantile via partial selection.
inline double quantile_nearest(std::vector<double> v, double q) {
    if (v.empty()) throw DatagenError("quantile of empty set");
    size_t idx = static_cast<size_t>(std::llround(q * static_cast<double>(v.size() - 1)));
    std::nth_element(v.begin(), v.begin() + static_cast<ptrdiff_t>(idx), v.end());
    return v[idx];
}

inline AttributeDomains extract_attribute_domains(
    const TrajStore& store, const std::vector<double>& quantiles = {0.25, 0.5, 0.75}) {
    AttributeDomains d;
    std::set<std::string> modes;
    std::set<int64_t> users;
    std::vector<double> alts;
    for (const auto& p : store.points()) {
        if (p.travel_mode) modes.insert(*p.travel_mode);
        users.insert(p.user_id);
        if (p.altitude) alts.push_back(*p.altitude);
    }
    d.travel_modes.assign(modes.begin(), modes.end());
    d.user_ids.assign(users.begin(), users.end());
    if (!alts.empty()) {
        std::set<double> cuts;
        for (double q : quantiles) cuts.insert(quantile_nearest(alts, q));
        d.altitude_thresholds.assign(cuts.begin(), cuts.end());
    }
    return d;
}

// Depth-2 constraint tree: single-attribute leaves plus a combo layer of
// pairwise conjunctions over distinct attributes. The root is a container
// with no predicates of its own.
struct ConstraintNode {
    enum class Kind { Leaf, Combo };
    Kind kind = Kind::Leaf;
    std::vector<Predicate> predicates;
    std::vector<ConstraintNode> children;
};

inline ConstraintNode build_constraint_tree(const AttributeDomains& d) {
    ConstraintNode root;
    root.kind = ConstraintNode::Kind::Combo;

    std::vector<std::vector<Predicate>> by_attribute;
    std::vector<Predicate> mode_preds, user_preds, alt_preds;
    for (const auto& m : d.travel_modes)
        mode_preds.push_back(Predicate{"travel_mode", Cmp::Eq, Literal::scalar(Scalar{m})});
    for (int64_t u : d.user_ids)
        user_preds.push_back(Predicate{"user_id", Cmp::Eq, Literal::scalar(Scalar{u})});
    for (double t : d.altitude_thresholds)
        alt_preds.push_back(Predicate{"altitude", Cmp::Gt, Literal::scalar(Scalar{t})});
    for (auto* preds : {&mode_preds, &user_preds, &alt_preds}) {
        if (preds->empty()) continue;
        by_attribute.push_back(*preds);
        for (const auto& p : *preds) {
            ConstraintNode leaf;
            leaf.kind = ConstraintNode::Kind::Leaf;
            leaf.predicates = {p};
            root.children.push_back(std::move(leaf));
        }
    }
    for (size_t a = 0; a < by_attribute.size(); ++a) {
        for (size_t b = a + 1; b < by_attribute.size(); ++b) {
            for (const auto& pa : by_attribute[a]) {
                for (const auto& pb : by_attribute[b]) {
                    ConstraintNode combo;
                    combo.kind = ConstraintNode::Kind::Combo;
                    combo.predicates = {pa, pb};
                    root.children.push_back(std::move(combo));
                }
            }
        }
    }
    return root;
}

inline std::vector<const ConstraintNode*> tree_leaves(const ConstraintNode& root) {
    std::vector<const ConstraintNode*> out;
    for (const auto& c : root.children)
        if (c.kind == ConstraintNode::Kind::Leaf) out.push_back(&c);
    return out;
}

inline std::vector<const ConstraintNode*> tree_combos(const ConstraintNode& root) {
    std::vector<const ConstraintNode*> out;
    for (const auto& c : root.children)
        if (c.kind == ConstraintNode::Kind::Combo && !c.predicates.empty()) out.push_back(&c);
    return out;
}

// ── augmentation ────────────────────────────────────────────────────────────

// Embeds tree nodes into seed WHERE clauses. All (seed, node) pairs are
// enumerated, deduplicated by canonical text, and (when a cap is set)
// down-sampled deterministically.
inline std::vector<TvlQuery> augment(const std::vector<TvlQuery>& seeds,
                                     const ConstraintNode& tree, const GenConfig& cfg) {
    std::vector<const ConstraintNode*> nodes = tree_leaves(tree);
    for (const auto* c : tree_combos(tree)) nodes.push_back(c);

    std::vector<TvlQuery> out;
    std::set<std::string> seen;
    for (const auto& seed : seeds) {
        for (const auto* node : nodes) {
            TvlQuery q = seed;
            for (const auto& p : node->predicates) q.sql.extra_where.push_back(p);
            q.sql.extra_where = sorted_where(q.sql.extra_where);
            std::string text = render_tvl(q);
            if (seen.insert(text).second) out.push_back(std::move(q));
        }
    }
    if (cfg.max_tvls > 0 && out.size() > cfg.max_tvls) {
        std::vector<size_t> idx(out.size());
        for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::mt19937_64 rng(mix64(cfg.rng_seed ^ 0xa9e5577ULL));
        std::shuffle(idx.begin(), idx.end(), rng);
        idx.resize(cfg.max_tvls);
        std::sort(idx.begin(), idx.end());
        std::vector<TvlQuery> kept;
        kept.reserve(idx.size());
        for (size_t i : idx) kept.push_back(std::move(out[i]));
        out = std::move(kept);
    }
    return out;
}

// ── extended chart templates ────────────────────────────────────────────────

struct TypeQuotas {
    size_t map = 0, bar = 0, line = 0, pie = 0;
};

// Largest-remainder apportionment of n records across the four types.
inline TypeQuotas chart_quotas(size_t n, const ChartMix& mix) {
    double props[4] = {mix.map, mix.bar, mix.line, mix.pie};
    size_t base[4];
    double rem[4];
    size_t assigned = 0;
    for (int i = 0; i < 4; ++i) {
        double exact = static_cast<double>(n) * props[i];
        base[i] = static_cast<size_t>(exact);
        rem[i] = exact - static_cast<double>(base[i]);
        assigned += base[i];
    }
    std::vector<int> order{0, 1, 2, 3};
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (rem[a] != rem[b]) return rem[a] > rem[b];
        return a < b;
    });
    for (int i = 0; assigned < n; ++i, ++assigned) base[order[static_cast<size_t>(i) % 4]]++;
    return TypeQuotas{base[0], base[1], base[2], base[3]};
}

namespace detail {

inline SqlSkeleton mode_count_skeleton(bool join_labels) {
    SqlSkeleton s;
    s.from_table = "traj_data";
    if (join_labels) {
        s.joins.push_back(Join{"traj_labels", "traj_data.traj_id", "traj_labels.traj_id"});
        s.select_items.push_back(SelectItem{std::nullopt, "traj_labels.travel_mode", ""});
        s.select_items.push_back(SelectItem{AggFn::Count, "*", "cnt"});
        s.transform = TransformSpec{std::nullopt, {"traj_labels.travel_mode"}};
    } else {
        s.select_items.push_back(SelectItem{std::nullopt, "travel_mode", ""});
        s.select_items.push_back(SelectItem{AggFn::Count, "*", "cnt"});
        s.transform = TransformSpec{std::nullopt, {"travel_mode"}};
    }
    return s;
}

inline SqlSkeleton altitude_series_skeleton(int variant) {
    SqlSkeleton s;
    s.from_table = "traj_data";
    switch (variant) {
        case 0:  // raw altitude-over-time series
            s.select_items.push_back(SelectItem{std::nullopt, "datetime", ""});
            s.select_items.push_back(SelectItem{std::nullopt, "altitude", ""});
            s.order_by = OrderBy{{"datetime"}, SortDir::Asc};
            break;
        case 1:
            s.select_items.push_back(SelectItem{AggFn::Avg, "altitude", "avg_altitude"});
            s.transform = TransformSpec{BinSpec{BinUnit::Day, "datetime"}, {}};
            s.order_by = OrderBy{{"bin_day"}, SortDir::Asc};
            break;
        case 2:
            s.select_items.push_back(SelectItem{AggFn::Avg, "altitude", "avg_altitude"});
            s.transform = TransformSpec{BinSpec{BinUnit::Hour, "datetime"}, {}};
            s.order_by = OrderBy{{"bin_hour"}, SortDir::Asc};
            break;
        default:
            s.select_items.push_back(SelectItem{AggFn::Max, "altitude", "max_altitude"});
            s.transform = TransformSpec{BinSpec{BinUnit::Day, "datetime"}, {}};
            s.order_by = OrderBy{{"bin_day"}, SortDir::Asc};
            break;
    }
    return s;
}

}  // namespace detail

// Bar/line/pie queries built from travel mode and altitude, constrained by
// candidate areas and their sampled intervals; per-type counts follow the
// configured mix.
inline std::vector<TvlQuery> expand_chart_types(const std::vector<CandidateArea>& candidates,
                                                const GenConfig& cfg,
                                                const AttributeDomains& domains) {
    cfg.check();
    if (cfg.max_tvls == 0) throw DatagenError("expand_chart_types needs max_tvls > 0");
    TypeQuotas quotas = chart_quotas(cfg.max_tvls, cfg.chart_mix);
    if ((quotas.bar > 0 || quotas.pie > 0) && domains.travel_modes.empty())
        throw DatagenError("missing attribute: store has no travel_mode values");
    if (quotas.line > 0 && domains.altitude_thresholds.empty())
        throw DatagenError("missing attribute: store has no altitude values");

    // Constraint-tree nodes widen the template space beyond
    // (variant x candidate x window): the same auxiliary-attribute
    // predicates the map augmentation embeds. Bar/pie skip travel_mode
    // constraints since that is already their grouping dimension.
    ConstraintNode tree = build_constraint_tree(domains);
    std::vector<const ConstraintNode*> nodes = tree_leaves(tree);
    for (const auto* c : tree_combos(tree)) nodes.push_back(c);
    auto constraint_options = [&](bool allow_mode) {
        std::vector<std::vector<Predicate>> opts{{}};
        for (const auto* node : nodes) {
            bool uses_mode = false;
            for (const auto& p : node->predicates) uses_mode |= p.column == "travel_mode";
            if (uses_mode && !allow_mode) continue;
            opts.push_back(node->predicates);
        }
        return opts;
    };

    struct Slot {
        VisType vis;
        size_t want;
        int variants;
        bool mode_constraints;
    };
    std::vector<TvlQuery> out;
    std::set<std::string> seen;
    for (Slot slot : {Slot{VisType::Bar, quotas.bar, 2, false},
                      Slot{VisType::Line, quotas.line, 4, true},
                      Slot{VisType::Pie, quotas.pie, 2, false}}) {
        size_t made = 0;
        auto options = constraint_options(slot.mode_constraints);
        for (const auto& extra : options) {
            if (made >= slot.want) break;
            for (int variant = 0; variant < slot.variants && made < slot.want; ++variant) {
                for (const auto& c : candidates) {
                    if (made >= slot.want) break;
                    for (const auto& w : sample_intervals(c, cfg)) {
                        if (made >= slot.want) break;
                        TvlQuery q;
                        q.vis = slot.vis;
                        q.area = c.area;
                        q.time = w;
                        if (slot.vis == VisType::Line)
                            q.sql = detail::altitude_series_skeleton(variant);
                        else
                            q.sql = detail::mode_count_skeleton(variant == 1);
                        for (const auto& p : extra) q.sql.extra_where.push_back(p);
                        q.sql.extra_where = sorted_where(q.sql.extra_where);
                        if (seen.insert(render_tvl(q)).second) {
                            out.push_back(std::move(q));
                            ++made;
                        }
                    }
                }
            }
        }
        if (made < slot.want)
            throw DatagenError(std::string("cannot reach the ") + vis_keyword(slot.vis) +
                               " quota: need " + std::to_string(slot.want) + ", produced " +
                               std::to_string(made) +
                               " (store too small for the requested max_tvls)");
    }
    return out;
}

// ── corpus assembly ─────────────────────────────────────────────────────────

struct CorpusRecord {
    std::string id;
    TvlQuery query;
    std::string tvl;  // canonical text

    std::string vis_type() const { return vis_keyword(query.vis); }
};

// End-to-end pipeline: candidates -> seeds -> constraint tree -> augment ->
// chart expansion -> per-type quota assembly with sequential ids.
inline std::vector<CorpusRecord> generate_corpus(const TrajStore& store,
                                                 const AreaRegistry& registry,
                                                 const GenConfig& cfg) {
    cfg.check();
    if (cfg.max_tvls == 0) throw DatagenError("generate_corpus needs max_tvls > 0");
    auto candidates = collect_candidates(store, registry);
    if (candidates.empty()) throw DatagenError("no candidate areas: store/registry do not overlap");

    TypeQuotas quotas = chart_quotas(cfg.max_tvls, cfg.chart_mix);

    // map pool: seeds plus constraint-tree augmentations, deduplicated
    auto seeds = generate_seed(candidates, cfg);
    auto domains = extract_attribute_domains(store);
    auto tree = build_constraint_tree(domains);
    GenConfig uncapped = cfg;
    uncapped.max_tvls = 0;
    std::vector<TvlQuery> maps = seeds;
    for (auto& q : augment(seeds, tree, uncapped)) maps.push_back(std::move(q));
    std::set<std::string> seen;
    std::vector<TvlQuery> map_pool;
    for (auto& q : maps) {
        std::string text = render_tvl(q);
        if (seen.insert(text).second) map_pool.push_back(std::move(q));
    }
    if (map_pool.size() < quotas.map)
        throw DatagenError("cannot reach the map quota: need " + std::to_string(quotas.map) +
                           ", produced " + std::to_string(map_pool.size()) +
                           " (store too small for the requested max_tvls)");
    if (map_pool.size() > quotas.map) {
        std::vector<size_t> idx(map_pool.size());
        for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::mt19937_64 rng(mix64(cfg.rng_seed ^ 0x9a7c0ffeeULL));
        std::shuffle(idx.begin(), idx.end(), rng);
        idx.resize(quotas.map);
        std::sort(idx.begin(), idx.end());
        std::vector<TvlQuery> kept;
        for (size_t i : idx) kept.push_back(std::move(map_pool[i]));
        map_pool = std::move(kept);
    }

    auto charts = expand_chart_types(candidates, cfg, domains);

    std::vector<CorpusRecord> out;
    size_t next_id = 1;
    auto push = [&](TvlQuery q) {
        CorpusRecord rec;
        char buf[16];
        std::snprintf(buf, sizeof(buf), "t%06zu", next_id++);
        rec.id = buf;
        rec.tvl = render_tvl(q);
        rec.query = std::move(q);
        out.push_back(std::move(rec));
    };
    for (auto& q : map_pool) push(std::move(q));
    for (auto& q : charts) push(std::move(q));
    return out;
}

inline std::string render_corpus(const std::vector<CorpusRecord>& corpus) {
    std::string out;
    for (const auto& rec : corpus) {
        nlohmann::ordered_json j;
        j["id"] = rec.id;
        j["vis_type"] = rec.vis_type();
        j["tvl"] = rec.tvl;
        out += j.dump() + "\n";
    }
    return out;
}

inline std::vector<CorpusRecord> parse_corpus(std::istream& in) {
    std::vector<CorpusRecord> out;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = str::trim(line);
        if (t.empty()) continue;
        try {
            auto j = nlohmann::json::parse(t);
            CorpusRecord rec;
            rec.id = j.at("id").get<std::string>();
            rec.tvl = j.at("tvl").get<std::string>();
            rec.query = parse_tvl(rec.tvl);
            out.push_back(std::move(rec));
        } catch (const nlohmann::json::exception& e) {
            throw DatagenError("corpus line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

// ── synthesized questions ───────────────────────────────────────────────────
// Deterministic template questions standing in for the LLM-written NLQs so
// the split/retrieval/evaluation path can run self-contained: one plainly
// phrased question, one with a rephrased area, and (when a window exists)
// one with humanized times.

namespace detail {

inline std::string human_time(Timestamp t) {
    static const char* months[] = {"January", "February", "March",     "April",   "May",
                                   "June",    "July",     "August",    "September",
                                   "October", "November", "December"};
    CivilTime c = t.civil();
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%s %d, %d at %02d:%02d", months[c.month - 1], c.day, c.year,
                  c.hour, c.minute);
    return buf;
}

inline std::string describe_constraints(const TvlQuery& q) {
    std::string out;
    for (const auto& p : q.sql.extra_where) {
        out += ", considering only records where ";
        out += p.column + " " + cmp_text(p.cmp) + " " + literal_text(p.value);
    }
    return out;
}

inline std::string subject_phrase(const TvlQuery& q) {
    switch (q.vis) {
        case VisType::Map: return "the movement trajectories";
        case VisType::Bar: return "a bar chart of the number of records per travel mode";
        case VisType::Pie: return "the percentage of travel by each mode";
        case VisType::Line: return "how the altitude changes over time";
    }
    return "";
}

}  // namespace detail

inline std::vector<DatasetRecord> synthesize_questions(const CorpusRecord& rec) {
    const TvlQuery& q = rec.query;
    std::vector<DatasetRecord> out;
    std::string area = q.area ? q.area->name : "";
    std::string when;
    if (q.time.present())
        when = " from " + format_timestamp(*q.time.st) + " to " + format_timestamp(*q.time.et);
    std::string constraints = detail::describe_constraints(q);

    auto push = [&](int k, const std::string& scenario, std::string text) {
        DatasetRecord r;
        r.id = rec.id + "-q" + std::to_string(k);
        r.question = std::move(text);
        r.tvl = rec.tvl;
        r.vis_type = rec.vis_type();
        r.scenario = scenario;
        out.push_back(std::move(r));
    };

    std::string subject = detail::subject_phrase(q);
    push(1, "normal",
         "Display " + subject + (area.empty() ? "" : " in " + area) + when + constraints + ".");
    if (!area.empty()) {
        auto parts = str::split(area, ',');
        std::string rephrased = parts.size() >= 2
                                    ? "the " + str::trim(parts[0]) + " area of " + str::trim(parts[1])
                                    : "the region called " + area;
        push(2, "area", "Display " + subject + " within " + rephrased + when + constraints + ".");
    }
    if (q.time.present()) {
        std::string human = " between " + detail::human_time(*q.time.st) + " and " +
                            detail::human_time(*q.time.et);
        push(3, "time",
             "Display " + subject + (area.empty() ? "" : " in " + area) + human + constraints + ".");
    }
    return out;
}

inline std::vector<DatasetRecord> synthesize_questions(const std::vector<CorpusRecord>& corpus) {
    std::vector<DatasetRecord> out;
    for (const auto& rec : corpus)
        for (auto& r : synthesize_questions(rec)) out.push_back(std::move(r));
    return out;
}

// ── whole-space random query generator ──────────────────────────────────────
// Covers shapes the template pipeline never emits; used by round-trip and
// executor-equivalence property tests. Every produced query validates.

inline TvlQuery random_query(std::mt19937_64& rng) {
    auto pick = [&](auto& v) { return v[rng() % v.size()]; };
    std::vector<std::string> areas = {"Miyun District, Beijing", "Haidian District, Beijing",
                                      "Chaoyang District, Beijing", "Zhangjiakou, Hebei"};
    std::vector<std::string> modes = {"walk", "bike", "bus", "car", "train"};

    TvlQuery q;
    SqlSkeleton& s = q.sql;
    s.from_table = "traj_data";
    bool join = rng() % 5 == 0;
    if (join) s.joins.push_back(Join{"traj_labels", "traj_data.traj_id", "traj_labels.traj_id"});

    std::vector<std::string> plain_cols = {"user_id", "traj_id", "latitude",
                                           "longitude", "altitude", "datetime"};
    std::vector<std::string> numeric_cols = {"latitude", "longitude", "altitude"};
    int shape = static_cast<int>(rng() % 4);  // 0 plain, 1 grouped, 2 binned, 3 global agg
    bool map_shape = shape == 0 && rng() % 2 == 0;

    if (map_shape)
        q.vis = VisType::Map;  // maps keep the full trajectory projection
    else
        q.vis = rng() % 3 == 0 ? VisType::Bar : (rng() % 2 ? VisType::Line : VisType::Pie);
    if (q.vis == VisType::Map || rng() % 3 != 0) q.area = AreaRef{pick(areas)};
    if (rng() % 3 != 0) {
        int64_t base = Timestamp::from_civil({2008, 1, 1, 0, 0, 0}).sec;
        int64_t st = base + static_cast<int64_t>(rng() % (4 * 365 * 86400ULL));
        int64_t len = static_cast<int64_t>(rng() % (90 * 86400ULL));
        q.time = TimeWindow{Timestamp{st}, Timestamp{st + len}};
    }

    if (map_shape) {
        std::vector<std::string> cols = {"user_id", "traj_id", "latitude", "longitude",
                                         "datetime"};
        if (rng() % 3 == 0) cols.push_back("altitude");
        std::shuffle(cols.begin(), cols.end(), rng);
        for (const auto& c : cols) s.select_items.push_back(SelectItem{std::nullopt, c, ""});
        if (rng() % 2) s.order_by = OrderBy{{"user_id", "traj_id", "datetime"}, SortDir::Asc};
    } else if (shape == 0) {
        size_t n = 1 + rng() % 4;
        std::vector<std::string> cols = plain_cols;
        std::shuffle(cols.begin(), cols.end(), rng);
        for (size_t i = 0; i < n; ++i) s.select_items.push_back(SelectItem{std::nullopt, cols[i], ""});
        if (rng() % 2) {
            OrderBy ob;
            size_t k = 1 + rng() % n;
            for (size_t i = 0; i < k; ++i) ob.keys.push_back(cols[i]);
            ob.dir = rng() % 4 == 0 ? SortDir::Desc : SortDir::Asc;
            s.order_by = ob;
        }
    } else if (shape == 1) {
        std::vector<std::string> keys = {"travel_mode", "user_id", "traj_id"};
        std::shuffle(keys.begin(), keys.end(), rng);
        size_t nk = 1 + rng() % 2;
        TransformSpec t;
        for (size_t i = 0; i < nk; ++i) {
            t.group_keys.push_back(keys[i]);
            s.select_items.push_back(SelectItem{std::nullopt, keys[i], ""});
        }
        s.select_items.push_back(SelectItem{AggFn::Count, "*", "cnt"});
        if (rng() % 2)
            s.select_items.push_back(
                SelectItem{rng() % 2 ? AggFn::Avg : AggFn::Max, pick(numeric_cols), "m1"});
        s.transform = t;
        if (rng() % 2) s.order_by = OrderBy{{rng() % 2 ? std::string("cnt") : t.group_keys[0]},
                                            rng() % 2 ? SortDir::Desc : SortDir::Asc};
    } else if (shape == 2) {
        TransformSpec t;
        BinUnit units[] = {BinUnit::Hour, BinUnit::Day, BinUnit::Month, BinUnit::Year};
        t.bin = BinSpec{units[rng() % 4], "datetime"};
        if (rng() % 2) {
            t.group_keys.push_back("travel_mode");
            s.select_items.push_back(SelectItem{std::nullopt, "travel_mode", ""});
        }
        AggFn fns[] = {AggFn::Avg, AggFn::Sum, AggFn::Max, AggFn::Min};
        s.select_items.push_back(SelectItem{fns[rng() % 4], pick(numeric_cols), "m1"});
        s.transform = t;
        if (rng() % 2)
            s.order_by = OrderBy{{"bin_" + str::lower(bin_unit_keyword(t.bin->unit))},
                                 SortDir::Asc};
    } else {
        s.select_items.push_back(SelectItem{AggFn::Count, "*", "total"});
        if (rng() % 2) s.select_items.push_back(SelectItem{AggFn::Avg, pick(numeric_cols), "m1"});
    }

    size_t np = rng() % 3;
    for (size_t i = 0; i < np; ++i) {
        switch (rng() % 4) {
            case 0:
                s.extra_where.push_back(
                    Predicate{"travel_mode", rng() % 2 ? Cmp::Eq : Cmp::Ne,
                              Literal::scalar(Scalar{pick(modes)})});
                break;
            case 1:
                s.extra_where.push_back(Predicate{
                    "user_id", rng() % 2 ? Cmp::Le : Cmp::Gt,
                    Literal::scalar(Scalar{static_cast<int64_t>(rng() % 20)})});
                break;
            case 2: {
                std::vector<Scalar> vs;
                size_t k = 1 + rng() % 3;
                for (size_t j = 0; j < k; ++j) vs.push_back(Scalar{static_cast<int64_t>(rng() % 10)});
                std::sort(vs.begin(), vs.end(), [](const Scalar& a, const Scalar& b) {
                    return std::get<int64_t>(a) < std::get<int64_t>(b);
                });
                vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
                s.extra_where.push_back(Predicate{"user_id", Cmp::In, Literal::list(vs)});
                break;
            }
            default:
                s.extra_where.push_back(Predicate{
                    "altitude", rng() % 2 ? Cmp::Ge : Cmp::Lt,
                    Literal::scalar(Scalar{static_cast<double>(rng() % 4000) / 2.0})});
                break;
        }
    }
    s.extra_where = sorted_where(s.extra_where);
    return q;
}

}  // namespace tvl

#endif  // TVL_DATAGEN_HPP
