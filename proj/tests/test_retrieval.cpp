#include <catch2/catch_amalgamated.hpp>

#include "support/helpers.hpp"

using namespace tvl;

namespace {

std::vector<DatasetRecord> retrieval_corpus() {
    std::vector<DatasetRecord> records;
    const char* questions[] = {
        "Show the trajectories in Miyun District over March 2010.",
        "Display a bar chart of records per travel mode in Haidian.",
        "How did the altitude change over time in Chaoyang?",
        "Show the percentage of travel by each mode in Beijing.",
        "Map all movement in Zhangjiakou during the summer.",
        "Plot altitude against time for user seven.",
        "Count records per travel mode within Miyun District.",
        "Show the paths of every user in Haidian District last year.",
        "Which travel modes dominate trips in Chaoyang District?",
        "Draw the trajectory lines recorded around Miyun reservoir.",
        "Visualize a pie of travel modes for the winter months.",
        "Show where user three moved on 2010-05-01.",
        "Chart the average altitude per day in Zhangjiakou.",
        "Display trajectories crossing Haidian between 9am and noon.",
        "Bar chart of counts by mode for trips above 200 meters.",
        "Trace the path of trajectory 42 on the map.",
        "Show altitude variation for bike trips in Miyun.",
        "How many walking records exist per district?",
        "Pie chart of mode shares for user one in 2011.",
        "Map the evening commute trajectories in Chaoyang.",
    };
    for (size_t i = 0; i < std::size(questions); ++i) {
        DatasetRecord r;
        char buf[16];
        std::snprintf(buf, sizeof(buf), "t%06zu", i + 1);
        r.id = buf;
        r.question = questions[i];
        r.tvl = "VISUALIZE map AREA \"X\" SQL SELECT latitude, longitude FROM traj_data";
        r.vis_type = "map";
        r.scenario = "normal";
        records.push_back(std::move(r));
    }
    return records;
}

// exhaustive pairwise scoring with an independently written tf-idf cosine
double oracle_score(const std::string& a, const std::string& b,
                    const std::vector<DatasetRecord>& corpus) {
    auto toks = [](const std::string& s) {
        std::map<std::string, double> tf;
        std::string cur;
        for (char ch : s + " ") {
            if (std::isalnum(static_cast<unsigned char>(ch)))
                cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
            else if (!cur.empty()) {
                tf[cur] += 1;
                cur.clear();
            }
        }
        return tf;
    };
    std::map<std::string, size_t> df;
    for (const auto& r : corpus)
        for (const auto& [tok, _] : toks(r.question)) df[tok]++;
    auto weight = [&](const std::string& tok) {
        return std::log((1.0 + static_cast<double>(corpus.size())) /
                        (1.0 + static_cast<double>(df.count(tok) ? df[tok] : 0))) +
               1.0;
    };
    auto ta = toks(a);
    auto tb = toks(b);
    double dot = 0, na = 0, nb = 0;
    for (const auto& [tok, f] : ta) na += (f * weight(tok)) * (f * weight(tok));
    for (const auto& [tok, f] : tb) nb += (f * weight(tok)) * (f * weight(tok));
    for (const auto& [tok, f] : ta)
        if (tb.count(tok)) dot += f * weight(tok) * tb[tok] * weight(tok);
    double denom = std::sqrt(na) * std::sqrt(nb);
    return denom > 0 ? dot / denom : 0.0;
}

}  // namespace

TEST_CASE("a verbatim corpus question retrieves its own record first") {
    auto corpus = retrieval_corpus();
    auto hits = retrieve_topk(corpus[4].question, corpus, 1);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].id == corpus[4].id);
}

TEST_CASE("k equal to the corpus size returns the whole corpus sorted") {
    auto corpus = retrieval_corpus();
    LexicalRetriever r(corpus);
    auto hits = r.top_k("altitude over time in Miyun", corpus.size());
    REQUIRE(hits.size() == corpus.size());
    for (size_t i = 1; i < hits.size(); ++i) CHECK(hits[i - 1].score >= hits[i].score);
    std::set<size_t> indices;
    for (const auto& h : hits) indices.insert(h.index);
    CHECK(indices.size() == corpus.size());
}

TEST_CASE("ranking equals exhaustive pairwise scoring") {
    auto corpus = retrieval_corpus();
    LexicalRetriever r(corpus);
    const char* queries[] = {
        "altitude change over time",
        "bar chart travel mode counts",
        "map the trajectories in Miyun District",
        "pie of travel modes",
    };
    for (const char* query : queries) {
        auto hits = r.top_k(query, corpus.size());
        std::vector<std::pair<double, std::string>> expected;
        for (const auto& rec : corpus)
            expected.push_back({oracle_score(query, rec.question, corpus), rec.id});
        std::sort(expected.begin(), expected.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        REQUIRE(hits.size() == expected.size());
        for (size_t i = 0; i < hits.size(); ++i) {
            INFO("query: " << query << ", rank " << i);
            CHECK(corpus[hits[i].index].id == expected[i].second);
            CHECK(hits[i].score == Catch::Approx(expected[i].first).margin(1e-12));
        }
    }
}

TEST_CASE("ties break by ascending record id") {
    std::vector<DatasetRecord> corpus;
    for (int i = 0; i < 4; ++i) {
        DatasetRecord r;
        r.id = "t00000" + std::to_string(4 - i);  // inserted in reverse id order
        r.question = "identical question text";
        r.tvl = "VISUALIZE map AREA \"X\" SQL SELECT latitude, longitude FROM traj_data";
        r.vis_type = "map";
        corpus.push_back(std::move(r));
    }
    auto hits = retrieve_topk("identical question text", corpus, 4);
    REQUIRE(hits.size() == 4);
    CHECK(hits[0].id == "t000001");
    CHECK(hits[3].id == "t000004");
}
