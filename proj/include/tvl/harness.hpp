// harness.hpp - end-to-end evaluation: build the few-shot (or RAG) prompt
// per test record, call the model, parse the completion, score against
// gold, and aggregate the six-metric report. Completions are checkpointed
// to an append-only log so interrupted runs resume without re-querying.
#ifndef TVL_HARNESS_HPP
#define TVL_HARNESS_HPP

#include <atomic>
#include <fstream>
#include <map>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "tvl/client.hpp"
#include "tvl/metrics.hpp"
#include "tvl/parser.hpp"

namespace tvl {

namespace detail {

inline size_t ci_find(const std::string& hay, const std::string& needle, size_t from = 0) {
    if (needle.empty() || hay.size() < needle.size()) return std::string::npos;
    for (size_t i = from; i + needle.size() <= hay.size(); ++i) {
        bool hit = true;
        for (size_t j = 0; j < needle.size(); ++j) {
            if (std::tolower(static_cast<unsigned char>(hay[i + j])) !=
                std::tolower(static_cast<unsigned char>(needle[j]))) {
                hit = false;
                break;
            }
        }
        if (hit) return i;
    }
    return std::string::npos;
}

inline std::vector<std::string> fenced_blocks(const std::string& text) {
    std::vector<std::string> out;
    size_t pos = 0;
    while (true) {
        size_t open = text.find("```", pos);
        if (open == std::string::npos) break;
        size_t body = text.find('\n', open);
        if (body == std::string::npos) break;  // fence tag with no content
        size_t close = text.find("```", body);
        if (close == std::string::npos) break;
        out.push_back(text.substr(body + 1, close - body - 1));
        pos = close + 3;
    }
    return out;
}

}  // namespace detail

// Extracts the first TVL block from a model completion (optionally inside a
// code fence) and parses it. Failures are data, never exceptions.
inline Predicted parse_model_output(const std::string& text) {
    if (str::trim(text).empty()) return FormatFailure{"empty completion"};

    std::string first_error;
    auto attempt = [&](const std::string& fragment) -> std::optional<TvlQuery> {
        size_t at = detail::ci_find(fragment, "VISUALIZE");
        if (at == std::string::npos) return std::nullopt;
        std::string candidate = str::trim(fragment.substr(at));
        try {
            return parse_tvl(candidate);
        } catch (const TvlError& e) {
            if (first_error.empty()) first_error = e.what();
        }
        // tolerate trailing prose after a blank line
        size_t cut = candidate.find("\n\n");
        if (cut != std::string::npos) {
            try {
                return parse_tvl(str::trim(candidate.substr(0, cut)));
            } catch (const TvlError&) {
            }
        }
        return std::nullopt;
    };

    for (const auto& block : detail::fenced_blocks(text))
        if (auto q = attempt(block)) return *q;
    if (auto q = attempt(text)) return *q;

    if (first_error.empty()) first_error = "no TVL statement found in completion";
    return FormatFailure{first_error};
}

struct ShotsPolicy {
    size_t k = 1;                              // demonstrations per prompt
    std::vector<Demonstration> fixed_demos;    // used when no retriever is given
};

struct ExperimentOptions {
    size_t jobs = 1;
    std::string checkpoint_path;       // per-pair completion log; empty = none
    const Retriever* retriever = nullptr;  // non-null enables RAG demo selection
    LogSink log;
};

struct PairOutcome {
    std::string id;
    std::string completion;
    ScoredPair verdicts;
    bool format_failure = false;
    std::string failure_reason;
};

struct ExperimentResult {
    EvalReport report;
    std::vector<PairOutcome> pairs;  // in test-set order
};

namespace detail {

inline std::map<std::string, std::string> load_checkpoint(const std::string& path) {
    std::map<std::string, std::string> out;
    if (path.empty()) return out;
    std::ifstream in(path, std::ios::binary);
    if (!in) return out;
    std::string line;
    while (std::getline(in, line)) {
        std::string t = str::trim(line);
        if (t.empty()) continue;
        try {
            auto j = nlohmann::json::parse(t);
            out[j.at("id").get<std::string>()] = j.at("completion").get<std::string>();
        } catch (const nlohmann::json::exception&) {
            // a torn final line from an interrupted run is re-queried
        }
    }
    return out;
}

}  // namespace detail

inline PromptSpec build_experiment_prompt(const DatasetRecord& rec, const ShotsPolicy& shots,
                                          const Retriever* retriever) {
    std::vector<Demonstration> demos;
    if (retriever) {
        for (const auto& hit : retriever->top_k(rec.question, shots.k)) {
            const DatasetRecord& d = retriever->corpus()[hit.index];
            demos.push_back(Demonstration{d.question, d.tvl});
        }
    } else {
        for (size_t i = 0; i < shots.fixed_demos.size() && i < shots.k; ++i)
            demos.push_back(shots.fixed_demos[i]);
    }
    return build_fewshot_prompt(rec.question, demos);
}

inline ExperimentResult run_experiment(const std::vector<DatasetRecord>& test_set,
                                       const ModelConfig& model, const ShotsPolicy& shots,
                                       const ExperimentOptions& options = {}) {
    if (test_set.empty()) throw MetricsError("experiment needs a non-empty test set");
    model.check();

    auto done = detail::load_checkpoint(options.checkpoint_path);
    std::vector<std::string> completions(test_set.size());
    std::vector<size_t> pending;
    for (size_t i = 0; i < test_set.size(); ++i) {
        auto it = done.find(test_set[i].id);
        if (it != done.end())
            completions[i] = it->second;
        else
            pending.push_back(i);
    }

    std::mutex log_mutex;
    std::ofstream checkpoint;
    if (!options.checkpoint_path.empty())
        checkpoint.open(options.checkpoint_path, std::ios::binary | std::ios::app);

    std::atomic<size_t> cursor{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_failure;
    std::mutex failure_mutex;

    auto worker = [&]() {
        while (!failed.load()) {
            size_t slot = cursor.fetch_add(1);
            if (slot >= pending.size()) return;
            size_t i = pending[slot];
            try {
                PromptSpec prompt =
                    build_experiment_prompt(test_set[i], shots, options.retriever);
                std::string completion = call_model(prompt, model, options.log);
                std::lock_guard<std::mutex> lock(log_mutex);
                completions[i] = completion;
                if (checkpoint.is_open()) {
                    nlohmann::ordered_json j;
                    j["id"] = test_set[i].id;
                    j["completion"] = completion;
                    checkpoint << j.dump() << "\n";
                    checkpoint.flush();
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failed.exchange(true)) first_failure = std::current_exception();
                return;
            }
        }
    };

    size_t jobs = std::max<size_t>(1, options.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failed.load()) std::rethrow_exception(first_failure);

    ExperimentResult result;
    for (size_t i = 0; i < test_set.size(); ++i) {
        TvlQuery gold = parse_tvl(test_set[i].tvl);
        Predicted pred = parse_model_output(completions[i]);
        PairOutcome outcome;
        outcome.id = test_set[i].id;
        outcome.completion = completions[i];
        outcome.verdicts = compare_pair(gold, pred);
        if (std::holds_alternative<FormatFailure>(pred)) {
            outcome.format_failure = true;
            outcome.failure_reason = std::get<FormatFailure>(pred).reason;
        }
        result.report.add(outcome.verdicts);
        result.pairs.push_back(std::move(outcome));
    }
    return result;
}

// Offline scoring of a prediction file against gold records: predictions are
// raw output texts keyed by record id; a missing prediction scores as a
// format failure. No network involved.
inline ExperimentResult score_offline(const std::vector<DatasetRecord>& gold,
                                      const std::map<std::string, std::string>& predictions) {
    if (gold.empty()) throw MetricsError("cannot score an empty gold set");
    ExperimentResult result;
    for (const auto& rec : gold) {
        TvlQuery g = parse_tvl(rec.tvl);
        PairOutcome outcome;
        outcome.id = rec.id;
        auto it = predictions.find(rec.id);
        Predicted pred = it == predictions.end()
                             ? Predicted{FormatFailure{"missing prediction"}}
                             : parse_model_output(it->second);
        if (it != predictions.end()) outcome.completion = it->second;
        outcome.verdicts = compare_pair(g, pred);
        if (std::holds_alternative<FormatFailure>(pred)) {
            outcome.format_failure = true;
            outcome.failure_reason = std::get<FormatFailure>(pred).reason;
        }
        result.report.add(outcome.verdicts);
        result.pairs.push_back(std::move(outcome));
    }
    return result;
}

}  // namespace tvl

#endif  // TVL_HARNESS_HPP
