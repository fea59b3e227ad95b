// dataset.hpp - line-delimited (question, TVL) records and the stratified
// train/test split. Records whose ids share a TVL prefix ("t000123-q2")
// always land in the same split.
#ifndef TVL_DATASET_HPP
#define TVL_DATASET_HPP

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "tvl/common.hpp"

namespace tvl {

struct DatasetError : TvlError {
    using TvlError::TvlError;
};

struct DatasetRecord {
    std::string id;
    std::string question;   // empty for gold-corpus rows
    std::string tvl;        // canonical TVL text
    std::string vis_type;   // map|bar|line|pie
    std::string scenario;   // normal|area|time

    bool operator==(const DatasetRecord&) const = default;
};

inline std::string record_group_id(const std::string& id) {
    auto p = id.rfind("-q");
    return p == std::string::npos ? id : id.substr(0, p);
}

inline nlohmann::ordered_json record_to_json(const DatasetRecord& r) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    if (!r.question.empty()) j["question"] = r.question;
    j["tvl"] = r.tvl;
    j["vis_type"] = r.vis_type;
    if (!r.scenario.empty()) j["scenario"] = r.scenario;
    return j;
}

inline DatasetRecord record_from_json(const nlohmann::json& j) {
    DatasetRecord r;
    r.id = j.at("id").get<std::string>();
    r.question = j.value("question", "");
    r.tvl = j.at("tvl").get<std::string>();
    r.vis_type = j.value("vis_type", "");
    r.scenario = j.value("scenario", "normal");
    return r;
}

inline std::string render_records(const std::vector<DatasetRecord>& records) {
    std::string out;
    for (const auto& r : records) out += record_to_json(r).dump() + "\n";
    return out;
}

inline std::vector<DatasetRecord> parse_records(std::istream& in) {
    std::vector<DatasetRecord> out;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = str::trim(line);
        if (t.empty()) continue;
        try {
            out.push_back(record_from_json(nlohmann::json::parse(t)));
        } catch (const nlohmann::json::exception& e) {
            throw DatasetError("record line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

inline std::vector<DatasetRecord> load_records(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DatasetError("cannot open dataset file: " + path);
    return parse_records(in);
}

inline void write_records(const std::string& path, const std::vector<DatasetRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DatasetError("cannot write dataset file: " + path);
    out << render_records(records);
}

struct SplitResult {
    std::vector<DatasetRecord> train;
    std::vector<DatasetRecord> test;
};

// Stratified split on (vis_type, scenario signature). Whole TVL groups move
// together; per-stratum selection uses largest-remainder shares so every
// stratum lands within one record of its global proportion. When
// train_n + test_n < total, the leftover records are dropped.
inline SplitResult split_dataset(const std::vector<DatasetRecord>& records, size_t train_n,
                                 size_t test_n, uint64_t seed) {
    if (train_n + test_n > records.size())
        throw DatasetError("insufficient data: need " + std::to_string(train_n + test_n) +
                           " records, have " + std::to_string(records.size()));

    struct Group {
        std::string key;
        std::vector<size_t> rows;  // indices into records
    };
    struct Stratum {
        std::vector<Group> groups;
        size_t group_size = 0;  // records per group (uniform within a stratum)
        size_t records = 0;
    };

    // group records by TVL id prefix, preserving input order
    std::map<std::string, std::vector<size_t>> by_group;
    std::vector<std::string> group_order;
    for (size_t i = 0; i < records.size(); ++i) {
        std::string g = record_group_id(records[i].id);
        if (!by_group.count(g)) group_order.push_back(g);
        by_group[g].push_back(i);
    }

    // stratum key = vis_type plus the sorted scenario signature of the group
    std::map<std::string, Stratum> strata;
    std::vector<std::string> strata_order;
    for (const auto& g : group_order) {
        const auto& rows = by_group[g];
        std::vector<std::string> scen;
        for (size_t i : rows) scen.push_back(records[i].scenario);
        std::sort(scen.begin(), scen.end());
        std::string key = records[rows.front()].vis_type + "|" + str::join(scen, "+");
        if (!strata.count(key)) strata_order.push_back(key);
        Stratum& s = strata[key];
        s.groups.push_back(Group{g, rows});
        s.group_size = rows.size();
        s.records += rows.size();
    }

    std::mt19937_64 rng(seed);
    for (const auto& key : strata_order) {
        auto& g = strata[key].groups;
        std::shuffle(g.begin(), g.end(), rng);
    }

    const double total = static_cast<double>(records.size());
    // Largest-remainder allocation of `want` records across strata, in units
    // of whole groups.
    auto allocate = [&](size_t want, const std::vector<size_t>& available) {
        std::vector<size_t> take(strata_order.size(), 0);
        std::vector<std::pair<double, size_t>> remainders;
        size_t assigned = 0;
        for (size_t si = 0; si < strata_order.size(); ++si) {
            const Stratum& s = strata[strata_order[si]];
            double exact = static_cast<double>(want) * static_cast<double>(s.records) / total;
            size_t w = s.group_size;
            size_t groups = std::min(static_cast<size_t>(exact) / w, available[si]);
            take[si] = groups;
            assigned += groups * w;
            remainders.push_back({exact - static_cast<double>(groups * w), si});
        }
        std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        // top up a group at a time, preferring strata furthest below share
        bool progress = true;
        while (assigned < want && progress) {
            progress = false;
            for (const auto& [rem, si] : remainders) {
                const Stratum& s = strata[strata_order[si]];
                size_t w = s.group_size;
                if (take[si] < available[si] && assigned + w <= want) {
                    ++take[si];
                    assigned += w;
                    progress = true;
                    if (assigned == want) break;
                }
            }
        }
        if (assigned != want)
            throw DatasetError("cannot hit exact split size " + std::to_string(want) +
                               " with the available group sizes");
        return take;
    };

    std::vector<size_t> avail(strata_order.size());
    for (size_t si = 0; si < strata_order.size(); ++si)
        avail[si] = strata[strata_order[si]].groups.size();
    auto train_take = allocate(train_n, avail);
    for (size_t si = 0; si < strata_order.size(); ++si) avail[si] -= train_take[si];
    auto test_take = allocate(test_n, avail);

    SplitResult out;
    std::vector<size_t> train_rows, test_rows;
    for (size_t si = 0; si < strata_order.size(); ++si) {
        const Stratum& s = strata[strata_order[si]];
        for (size_t gi = 0; gi < train_take[si]; ++gi)
            for (size_t r : s.groups[gi].rows) train_rows.push_back(r);
        for (size_t gi = train_take[si]; gi < train_take[si] + test_take[si]; ++gi)
            for (size_t r : s.groups[gi].rows) test_rows.push_back(r);
    }
    std::sort(train_rows.begin(), train_rows.end());
    std::sort(test_rows.begin(), test_rows.end());
    for (size_t r : train_rows) out.train.push_back(records[r]);
    for (size_t r : test_rows) out.test.push_back(records[r]);
    return out;
}

}  // namespace tvl

#endif  // TVL_DATASET_HPP
