// prompts.hpp - prompt builders: NLQ generation (basic / area-diverse /
// time-diverse), NLQ correction (redundancy / missing / error), and the
// few-shot translation prompt. Templates live below as editable constants;
// builders are deterministic text functions.
#ifndef TVL_PROMPTS_HPP
#define TVL_PROMPTS_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "tvl/printer.hpp"

namespace tvl {

enum class PromptKind {
    GenBasic,
    GenAreaDiverse,
    GenTimeDiverse,
    CorrectRedundancy,
    CorrectMissing,
    CorrectError,
    FewshotTranslate,
};

inline const char* prompt_kind_name(PromptKind k) {
    switch (k) {
        case PromptKind::GenBasic: return "gen_basic";
        case PromptKind::GenAreaDiverse: return "gen_area_diverse";
        case PromptKind::GenTimeDiverse: return "gen_time_diverse";
        case PromptKind::CorrectRedundancy: return "correct_redundancy";
        case PromptKind::CorrectMissing: return "correct_missing";
        case PromptKind::CorrectError: return "correct_error";
        case PromptKind::FewshotTranslate: return "fewshot_translate";
    }
    return "?";
}

struct Demonstration {
    std::string question;
    std::string tvl;
};

struct PromptSpec {
    PromptKind kind = PromptKind::GenBasic;
    std::string system;
    std::vector<Demonstration> demos;
    std::string payload;  // the final user message

    // role-tagged chat messages: system, demo pairs, then the payload
    std::vector<std::pair<std::string, std::string>> messages() const {
        std::vector<std::pair<std::string, std::string>> out;
        out.emplace_back("system", system);
        for (const auto& d : demos) {
            out.emplace_back("user", d.question);
            out.emplace_back("assistant", d.tvl);
        }
        out.emplace_back("user", payload);
        return out;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["kind"] = prompt_kind_name(kind);
        j["messages"] = nlohmann::ordered_json::array();
        for (const auto& [role, content] : messages())
            j["messages"].push_back({{"role", role}, {"content", content}});
        return j;
    }

    std::string render_text() const {
        std::string out;
        for (const auto& [role, content] : messages())
            out += "[" + role + "]\n" + content + "\n\n";
        return out;
    }
};

namespace prompt_text {

inline constexpr const char* kNlqSystem =
    "You write natural language questions that a data analyst would ask a "
    "trajectory visualization system. Respond with exactly one question and "
    "nothing else.";

inline constexpr const char* kGenBasic =
    "Write one natural language question that this TVL statement answers. "
    "The question must stay semantically accurate: it has to express the "
    "visualization type, the area, the time range and every condition of the "
    "statement, without adding anything.";

inline constexpr const char* kGenAreaDiverse =
    "Write one natural language question for this TVL statement, but describe "
    "the geographical area with a synonymous or rephrased expression instead "
    "of its literal name. Keep consistency of spatial references: the "
    "rephrasing must denote exactly the area named";

inline constexpr const char* kGenTimeDiverse =
    "Write one natural language question for this TVL statement, but express "
    "the time range in natural everyday wording rather than the standard "
    "timestamp format, preserving the equivalence of the specified time "
    "range.";

inline constexpr const char* kCorrectSystem =
    "You fix natural language questions so they faithfully describe a given "
    "TVL statement. Respond with the corrected question and nothing else.";

inline constexpr const char* kCorrectRedundancy =
    "The question below contains content that is not related to TVL. Rewrite "
    "it so every part of the question corresponds to a field of the "
    "statement, removing the unrelated content.";

inline constexpr const char* kCorrectMissing =
    "The question below omits part of the statement. Rewrite it so it covers "
    "all the necessary fields in the TVL: the visualization type, the area, "
    "the time range and every condition.";

inline constexpr const char* kCorrectError =
    "The question below describes key information such as time, area, and "
    "SQL inconsistently with the statement. Rewrite it so every detail "
    "matches the TVL exactly.";

inline constexpr const char* kFewshotSystem =
    "You translate natural language questions about trajectory data into TVL "
    "(Trajectory Visualization Language). A TVL statement has the form:\n"
    "  VISUALIZE <map|bar|line|pie> [AREA \"<name>\"] "
    "[TIME \"<YYYY-MM-DD HH:MM:SS>\" TO \"<YYYY-MM-DD HH:MM:SS>\"] SQL <query>\n"
    "where <query> is a SELECT statement over the traj_data table (columns "
    "user_id, traj_id, latitude, longitude, altitude, datetime, travel_mode) "
    "and the traj_labels table (user_id, traj_id, travel_mode), optionally "
    "with WHERE conditions, BIN BY <HOUR|DAY|MONTH|YEAR>(column), GROUP BY "
    "and ORDER BY clauses. Respond with a single TVL statement on one line "
    "and nothing else.";

}  // namespace prompt_text

// The two or three NLQ-generation prompts for one statement: basic wording,
// area-diverse wording (when an area exists), and time-diverse wording
// (when a window exists).
inline std::vector<PromptSpec> build_nlq_prompts(const TvlQuery& q) {
    std::string tvl = render_tvl(q);
    std::vector<PromptSpec> out;

    PromptSpec basic;
    basic.kind = PromptKind::GenBasic;
    basic.system = prompt_text::kNlqSystem;
    basic.payload = std::string(prompt_text::kGenBasic) + "\n\nTVL: " + tvl;
    out.push_back(std::move(basic));

    if (q.area) {
        PromptSpec area;
        area.kind = PromptKind::GenAreaDiverse;
        area.system = prompt_text::kNlqSystem;
        area.payload = std::string(prompt_text::kGenAreaDiverse) + " \"" + q.area->name +
                       "\".\n\nTVL: " + tvl;
        out.push_back(std::move(area));
    }
    if (q.time.present()) {
        PromptSpec time;
        time.kind = PromptKind::GenTimeDiverse;
        time.system = prompt_text::kNlqSystem;
        time.payload = std::string(prompt_text::kGenTimeDiverse) + "\n\nTVL: " + tvl;
        out.push_back(std::move(time));
    }
    return out;
}

enum class CorrectionIssue { Redundancy, Missing, Error };

inline PromptSpec build_correction_prompt(const TvlQuery& q, const std::string& nlq,
                                          CorrectionIssue issue) {
    PromptSpec p;
    p.system = prompt_text::kCorrectSystem;
    const char* instruction = nullptr;
    switch (issue) {
        case CorrectionIssue::Redundancy:
            p.kind = PromptKind::CorrectRedundancy;
            instruction = prompt_text::kCorrectRedundancy;
            break;
        case CorrectionIssue::Missing:
            p.kind = PromptKind::CorrectMissing;
            instruction = prompt_text::kCorrectMissing;
            break;
        case CorrectionIssue::Error:
            p.kind = PromptKind::CorrectError;
            instruction = prompt_text::kCorrectError;
            break;
    }
    p.payload = std::string(instruction) + "\n\nTVL: " + render_tvl(q) + "\nQuestion: " + nlq;
    return p;
}

inline PromptSpec build_fewshot_prompt(const std::string& question,
                                       const std::vector<Demonstration>& demos) {
    if (demos.empty()) throw TvlError("few-shot prompt needs at least one demonstration");
    PromptSpec p;
    p.kind = PromptKind::FewshotTranslate;
    p.system = prompt_text::kFewshotSystem;
    p.demos = demos;
    p.payload = question;
    return p;
}

}  // namespace tvl

#endif  // TVL_PROMPTS_HPP
