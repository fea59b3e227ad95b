#include <catch2/catch_amalgamated.hpp>

#include "support/helpers.hpp"

using namespace tvl;

TEST_CASE("a windowed query gets three generation prompts") {
    TvlQuery q = testutil::fig7_query();
    auto prompts = build_nlq_prompts(q);
    REQUIRE(prompts.size() == 3);
    CHECK(prompts[0].kind == PromptKind::GenBasic);
    CHECK(prompts[1].kind == PromptKind::GenAreaDiverse);
    CHECK(prompts[2].kind == PromptKind::GenTimeDiverse);
    std::string tvl = render_tvl(q);
    for (const auto& p : prompts) {
        CHECK(p.payload.find(tvl) != std::string::npos);
        CHECK(p.payload.find("Miyun District, Beijing") != std::string::npos);
    }
}

TEST_CASE("the time-diverse prompt is skipped without a window") {
    TvlQuery q = parse_tvl("VISUALIZE map AREA \"X\" SQL SELECT latitude, longitude FROM traj_data");
    auto prompts = build_nlq_prompts(q);
    REQUIRE(prompts.size() == 2);
    CHECK(prompts[0].kind == PromptKind::GenBasic);
    CHECK(prompts[1].kind == PromptKind::GenAreaDiverse);
}

TEST_CASE("the area-diverse prompt pins spatial-reference consistency") {
    auto prompts = build_nlq_prompts(testutil::fig7_query());
    CHECK(prompts[1].payload.find("consistency of spatial references") != std::string::npos);
    CHECK(prompts[2].payload.find("preserving the equivalence of the specified time range") !=
          std::string::npos);
}

TEST_CASE("correction prompts carry the issue-specific instruction") {
    TvlQuery q = testutil::fig7_query();
    std::string nlq = "Show me something vaguely related.";
    auto missing = build_correction_prompt(q, nlq, CorrectionIssue::Missing);
    CHECK(missing.kind == PromptKind::CorrectMissing);
    CHECK(missing.payload.find("all the necessary fields in the TVL") != std::string::npos);
    auto error = build_correction_prompt(q, nlq, CorrectionIssue::Error);
    CHECK(error.payload.find("time, area, and SQL") != std::string::npos);
    auto redundancy = build_correction_prompt(q, nlq, CorrectionIssue::Redundancy);
    CHECK(redundancy.payload.find("not related to TVL") != std::string::npos);
    for (const auto& p : {missing, error, redundancy}) {
        CHECK(p.payload.find(render_tvl(q)) != std::string::npos);
        CHECK(p.payload.find(nlq) != std::string::npos);
    }
}

TEST_CASE("few-shot prompts keep demonstration order") {
    std::vector<Demonstration> demos;
    for (int i = 0; i < 6; ++i)
        demos.push_back({"question " + std::to_string(i), "tvl " + std::to_string(i)});
    auto p = build_fewshot_prompt("target question", demos);
    auto messages = p.messages();
    // system + 6 pairs + target
    REQUIRE(messages.size() == 1 + 12 + 1);
    CHECK(messages[0].first == "system");
    for (int i = 0; i < 6; ++i) {
        CHECK(messages[1 + 2 * i].second == "question " + std::to_string(i));
        CHECK(messages[2 + 2 * i].second == "tvl " + std::to_string(i));
    }
    CHECK(messages.back().second == "target question");
    CHECK_THROWS_AS(build_fewshot_prompt("q", {}), TvlError);

    auto single = build_fewshot_prompt("q", {demos[0]});
    CHECK(single.messages().size() == 4);
}

TEST_CASE("prompt building is deterministic") {
    TvlQuery q = testutil::fig7_query();
    auto a = build_nlq_prompts(q);
    auto b = build_nlq_prompts(q);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].system == b[i].system);
        CHECK(a[i].payload == b[i].payload);
        CHECK(a[i].render_text() == b[i].render_text());
    }
    auto j = a[0].to_json();
    CHECK(j.at("kind") == "gen_basic");
    CHECK(j.at("messages").size() == 2);
}
