#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "support/helpers.hpp"

using namespace tvl;

namespace {

std::vector<DatasetRecord> two_strata_corpus() {
    // 100 single-record groups, 50 map / 50 bar
    std::vector<DatasetRecord> records;
    for (int i = 0; i < 100; ++i) {
        DatasetRecord r;
        char buf[16];
        std::snprintf(buf, sizeof(buf), "t%06d", i + 1);
        r.id = buf;
        r.question = "q" + std::to_string(i);
        r.tvl = "VISUALIZE map AREA \"X\" SQL SELECT latitude, longitude FROM traj_data";
        r.vis_type = i < 50 ? "map" : "bar";
        r.scenario = "normal";
        records.push_back(std::move(r));
    }
    return records;
}

}  // namespace

TEST_CASE("records serialize and parse back") {
    DatasetRecord r{"t000001-q2", "Show trajectories in X.", "VISUALIZE map ...", "map", "area"};
    std::istringstream in(render_records({r}));
    auto back = parse_records(in);
    REQUIRE(back.size() == 1);
    CHECK(back[0] == r);
    CHECK(record_group_id(r.id) == "t000001");
    CHECK(record_group_id("t000042") == "t000042");
}

TEST_CASE("70/30 split keeps strata within one record") {
    auto records = two_strata_corpus();
    SplitResult split = split_dataset(records, 70, 30, 1);
    REQUIRE(split.train.size() == 70);
    REQUIRE(split.test.size() == 30);
    size_t train_map = 0, test_map = 0;
    std::set<std::string> train_ids, test_ids;
    for (const auto& r : split.train) {
        train_map += r.vis_type == "map";
        train_ids.insert(r.id);
    }
    for (const auto& r : split.test) {
        test_map += r.vis_type == "map";
        test_ids.insert(r.id);
    }
    CHECK(std::fabs(static_cast<double>(train_map) - 35.0) <= 1.0);
    CHECK(std::fabs(static_cast<double>(test_map) - 15.0) <= 1.0);
    for (const auto& id : test_ids) CHECK_FALSE(train_ids.count(id));
}

TEST_CASE("same seed same split, different seed different split") {
    auto records = two_strata_corpus();
    SplitResult a = split_dataset(records, 70, 30, 99);
    SplitResult b = split_dataset(records, 70, 30, 99);
    CHECK(a.train == b.train);
    CHECK(a.test == b.test);
    SplitResult c = split_dataset(records, 70, 30, 100);
    CHECK(a.train != c.train);
}

TEST_CASE("question groups never straddle the split") {
    AreaRegistry reg = testutil::fixture_registry();
    TrajStore store = testutil::synthetic_store(3000, 55);
    GenConfig cfg;
    cfg.rng_seed = 42;
    cfg.max_tvls = 120;
    cfg.intervals_per_area = 4;
    auto dataset = synthesize_questions(generate_corpus(store, reg, cfg));

    // pick sizes achievable with whole groups of 2-3 records
    SplitResult split = split_dataset(dataset, dataset.size() / 2, dataset.size() / 4, 7);
    std::set<std::string> train_groups, test_groups;
    for (const auto& r : split.train) train_groups.insert(record_group_id(r.id));
    for (const auto& r : split.test) test_groups.insert(record_group_id(r.id));
    for (const auto& g : test_groups) CHECK_FALSE(train_groups.count(g));

    // every group is fully inside its split
    std::map<std::string, size_t> full_size;
    for (const auto& r : dataset) full_size[record_group_id(r.id)]++;
    std::map<std::string, size_t> train_size;
    for (const auto& r : split.train) train_size[record_group_id(r.id)]++;
    for (const auto& [g, n] : train_size) CHECK(n == full_size[g]);
}

TEST_CASE("insufficient data is rejected") {
    auto records = two_strata_corpus();
    CHECK_THROWS_AS(split_dataset(records, 80, 30, 1), DatasetError);
}

TEST_CASE("leftover records are dropped, sizes stay exact") {
    auto records = two_strata_corpus();
    SplitResult split = split_dataset(records, 51, 17, 3);
    CHECK(split.train.size() == 51);
    CHECK(split.test.size() == 17);
}
