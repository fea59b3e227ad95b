// tvl_cli.cpp - command-line front end: parse/compile/exec/render TVL,
// generate corpora, build prompts, split datasets, run scored experiments.
//
// Exit codes: 0 success, 1 domain error, 2 usage error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "tvl/tvl.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw tvl::TvlError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw tvl::TvlError("cannot write file: " + path);
    out << content;
}

void write_bytes(const std::string& path, const std::vector<uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw tvl::TvlError("cannot write file: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
}

void emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty())
        std::cout << content;
    else
        write_file(out_path, content);
}

tvl::TvlQuery parse_file(const std::string& path) { return tvl::parse_tvl(slurp(path)); }

nlohmann::json load_json(const std::string& path) {
    return nlohmann::json::parse(slurp(path));
}

std::map<std::string, std::string> load_predictions(const std::string& path) {
    std::map<std::string, std::string> out;
    std::istringstream in(slurp(path));
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = tvl::str::trim(line);
        if (t.empty()) continue;
        try {
            auto j = nlohmann::json::parse(t);
            std::string text;
            for (const char* key : {"output", "completion", "tvl"})
                if (j.contains(key)) {
                    text = j.at(key).get<std::string>();
                    break;
                }
            out[j.at("id").get<std::string>()] = text;
        } catch (const nlohmann::json::exception& e) {
            throw tvl::TvlError("prediction line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

std::string report_block(const tvl::EvalReport& report, const std::string& set_name,
                         const std::string& model_name) {
    return tvl::format_report_table({{set_name, model_name, report}});
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Trajectory Visualization Language toolkit"};
    app.set_version_flag("--version", "tvl 0.1.0");
    app.require_subcommand(1);

    // parse
    std::string in_file;
    auto* cmd_parse = app.add_subcommand("parse", "parse a TVL file and print its canonical text");
    cmd_parse->add_option("file", in_file, "TVL source file")->required();

    // compile
    std::string areas_path, data_path, out_path;
    auto* cmd_compile = app.add_subcommand("compile", "compile a TVL file to SQL");
    cmd_compile->add_option("file", in_file, "TVL source file")->required();
    cmd_compile->add_option("--areas", areas_path, "area registry (GeoJSON)")->required();

    // exec
    auto* cmd_exec = app.add_subcommand("exec", "compile and execute a TVL file on a store");
    cmd_exec->add_option("file", in_file, "TVL source file")->required();
    cmd_exec->add_option("--areas", areas_path, "area registry (GeoJSON)")->required();
    cmd_exec->add_option("--data", data_path, "trajectory store (.csv or .plt)")->required();

    // render-spec / render-png
    size_t png_width = 640, png_height = 480;
    auto* cmd_spec = app.add_subcommand("render-spec", "emit the visualization specification");
    cmd_spec->add_option("file", in_file)->required();
    cmd_spec->add_option("--areas", areas_path)->required();
    cmd_spec->add_option("--data", data_path)->required();
    cmd_spec->add_option("--out", out_path, "output file (default stdout)");

    auto* cmd_png = app.add_subcommand("render-png", "rasterize the visualization to a PNG");
    cmd_png->add_option("file", in_file)->required();
    cmd_png->add_option("--areas", areas_path)->required();
    cmd_png->add_option("--data", data_path)->required();
    cmd_png->add_option("--out", out_path, "output PNG path")->required();
    cmd_png->add_option("--width", png_width);
    cmd_png->add_option("--height", png_height);

    // generate
    std::string config_path, questions_out;
    uint64_t seed = 0;
    bool seed_set = false;
    auto* cmd_gen = app.add_subcommand("generate", "run the corpus generation pipeline");
    cmd_gen->add_option("--data", data_path)->required();
    cmd_gen->add_option("--areas", areas_path)->required();
    cmd_gen->add_option("--config", config_path, "generation config (JSON)")->required();
    cmd_gen->add_option("--out", out_path, "corpus output (JSONL)")->required();
    cmd_gen->add_option("--questions-out", questions_out,
                        "also write a question dataset (JSONL)");
    cmd_gen->add_option("--seed", seed, "override the config rng_seed")
        ->each([&](const std::string&) { seed_set = true; });

    // prompts
    std::string nlq_text, issue_text, question_text, demos_path, train_path;
    size_t shots_k = 1;
    bool as_json = false, use_rag = false;
    auto* cmd_prompts = app.add_subcommand("prompts", "emit prompt texts");
    auto* cmd_pgen = cmd_prompts->add_subcommand("gen", "NLQ generation prompts for a TVL");
    cmd_pgen->add_option("--tvl", in_file, "TVL source file")->required();
    cmd_pgen->add_flag("--json", as_json, "emit structured JSON instead of text");
    auto* cmd_pcorrect = cmd_prompts->add_subcommand("correct", "NLQ correction prompt");
    cmd_pcorrect->add_option("--tvl", in_file)->required();
    cmd_pcorrect->add_option("--nlq", nlq_text, "the faulty question")->required();
    cmd_pcorrect->add_option("--issue", issue_text, "redundancy|missing|error")->required();
    cmd_pcorrect->add_flag("--json", as_json);
    auto* cmd_pfew = cmd_prompts->add_subcommand("fewshot", "few-shot translation prompt");
    cmd_pfew->add_option("--question", question_text)->required();
    cmd_pfew->add_option("--demos", demos_path, "dataset file with demonstrations");
    cmd_pfew->add_option("--k", shots_k, "demonstrations to include");
    cmd_pfew->add_flag("--rag", use_rag, "select demos by retrieval instead of file order");
    cmd_pfew->add_option("--train", train_path, "retrieval corpus (dataset JSONL)");
    cmd_pfew->add_flag("--json", as_json);

    // split
    std::string train_out, test_out;
    size_t train_n = 0, test_n = 0;
    auto* cmd_split = app.add_subcommand("split", "stratified train/test split");
    cmd_split->add_option("--in", in_file, "dataset or corpus (JSONL)")->required();
    cmd_split->add_option("--train-n", train_n)->required();
    cmd_split->add_option("--test-n", test_n)->required();
    cmd_split->add_option("--seed", seed)->required();
    cmd_split->add_option("--train-out", train_out)->required();
    cmd_split->add_option("--test-out", test_out)->required();

    // evaluate
    std::string model_path, log_path;
    size_t jobs = 1;
    bool verbose = false;
    auto* cmd_eval = app.add_subcommand("evaluate", "run a scored experiment against a model");
    cmd_eval->add_option("--test", in_file, "test dataset (JSONL)")->required();
    cmd_eval->add_option("--model", model_path, "model config (JSON)")->required();
    cmd_eval->add_option("--shots", shots_k, "fixed demonstrations per prompt");
    cmd_eval->add_option("--demos", demos_path, "demonstration dataset for fixed-shot runs");
    cmd_eval->add_flag("--rag", use_rag, "retrieve demonstrations per question");
    cmd_eval->add_option("--k", shots_k, "retrieved demonstrations (RAG)");
    cmd_eval->add_option("--train", train_path, "retrieval corpus for RAG");
    cmd_eval->add_option("--out", out_path, "report output (JSON)");
    cmd_eval->add_option("--log", log_path, "resumable per-pair checkpoint log");
    cmd_eval->add_option("--jobs", jobs, "parallel model calls");
    cmd_eval->add_flag("--verbose", verbose, "log requests to stderr (key redacted)");

    // score
    std::string gold_path, pred_path;
    auto* cmd_score = app.add_subcommand("score", "offline scoring, no model calls");
    cmd_score->add_option("--gold", gold_path)->required();
    cmd_score->add_option("--pred", pred_path)->required();
    cmd_score->add_option("--out", out_path, "report output (JSON)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*cmd_parse) {
            std::cout << tvl::render_tvl(parse_file(in_file)) << "\n";
        } else if (*cmd_compile) {
            auto registry = tvl::load_registry(areas_path);
            std::cout << tvl::compile_to_sql(parse_file(in_file), registry).text << "\n";
        } else if (*cmd_exec) {
            auto registry = tvl::load_registry(areas_path);
            auto store = tvl::load_store(data_path);
            auto compiled = tvl::compile_to_sql(parse_file(in_file), registry);
            std::cout << tvl::render_result_csv(tvl::execute(compiled, store, registry));
        } else if (*cmd_spec) {
            auto registry = tvl::load_registry(areas_path);
            auto store = tvl::load_store(data_path);
            auto q = parse_file(in_file);
            auto result = tvl::execute(tvl::compile_to_sql(q, registry), store, registry);
            emit(out_path, tvl::emit_spec(q, result, registry).document);
        } else if (*cmd_png) {
            auto registry = tvl::load_registry(areas_path);
            auto store = tvl::load_store(data_path);
            auto q = parse_file(in_file);
            auto result = tvl::execute(tvl::compile_to_sql(q, registry), store, registry);
            auto spec = tvl::emit_spec(q, result, registry);
            write_bytes(out_path, tvl::render_png(spec, png_width, png_height));
        } else if (*cmd_gen) {
            auto registry = tvl::load_registry(areas_path);
            auto store = tvl::load_store(data_path);
            auto cfg = tvl::gen_config_from_json(load_json(config_path));
            if (seed_set) cfg.rng_seed = seed;
            auto corpus = tvl::generate_corpus(store, registry, cfg);
            write_file(out_path, tvl::render_corpus(corpus));
            if (!questions_out.empty())
                tvl::write_records(questions_out, tvl::synthesize_questions(corpus));
            std::cerr << "generated " << corpus.size() << " TVLs\n";
        } else if (*cmd_pgen) {
            auto prompts = tvl::build_nlq_prompts(parse_file(in_file));
            if (as_json) {
                nlohmann::ordered_json arr = nlohmann::ordered_json::array();
                for (const auto& p : prompts) arr.push_back(p.to_json());
                std::cout << arr.dump(2) << "\n";
            } else {
                for (const auto& p : prompts)
                    std::cout << "=== " << tvl::prompt_kind_name(p.kind) << " ===\n"
                              << p.render_text();
            }
        } else if (*cmd_pcorrect) {
            tvl::CorrectionIssue issue;
            if (issue_text == "redundancy") issue = tvl::CorrectionIssue::Redundancy;
            else if (issue_text == "missing") issue = tvl::CorrectionIssue::Missing;
            else if (issue_text == "error") issue = tvl::CorrectionIssue::Error;
            else throw tvl::TvlError("unknown issue (want redundancy|missing|error): " + issue_text);
            auto p = tvl::build_correction_prompt(parse_file(in_file), nlq_text, issue);
            std::cout << (as_json ? p.to_json().dump(2) + "\n" : p.render_text());
        } else if (*cmd_pfew) {
            std::vector<tvl::Demonstration> demos;
            if (use_rag) {
                if (train_path.empty()) throw tvl::TvlError("--rag needs --train");
                for (const auto& r :
                     tvl::retrieve_topk(question_text, tvl::load_records(train_path), shots_k))
                    demos.push_back({r.question, r.tvl});
            } else {
                if (demos_path.empty()) throw tvl::TvlError("fewshot needs --demos or --rag");
                auto records = tvl::load_records(demos_path);
                for (size_t i = 0; i < records.size() && i < shots_k; ++i)
                    demos.push_back({records[i].question, records[i].tvl});
            }
            auto p = tvl::build_fewshot_prompt(question_text, demos);
            std::cout << (as_json ? p.to_json().dump(2) + "\n" : p.render_text());
        } else if (*cmd_split) {
            auto records = tvl::load_records(in_file);
            auto split = tvl::split_dataset(records, train_n, test_n, seed);
            tvl::write_records(train_out, split.train);
            tvl::write_records(test_out, split.test);
            std::cerr << "train=" << split.train.size() << " test=" << split.test.size() << "\n";
        } else if (*cmd_eval) {
            auto test_set = tvl::load_records(in_file);
            auto model = tvl::model_config_from_json(load_json(model_path));
            tvl::ShotsPolicy shots;
            shots.k = shots_k;
            tvl::ExperimentOptions options;
            options.jobs = jobs;
            options.checkpoint_path = log_path;
            if (verbose)
                options.log = [](const std::string& line) { std::cerr << line << "\n"; };
            std::unique_ptr<tvl::Retriever> retriever;
            if (use_rag) {
                if (train_path.empty()) throw tvl::TvlError("--rag needs --train");
                auto train = tvl::load_records(train_path);
                if (model.retriever_kind == "embedding")
                    retriever = std::make_unique<tvl::EmbeddingEndpointRetriever>(
                        std::move(train), model, options.log);
                else
                    retriever = std::make_unique<tvl::LexicalRetriever>(std::move(train));
                options.retriever = retriever.get();
            } else {
                if (demos_path.empty()) throw tvl::TvlError("evaluate needs --demos or --rag");
                for (const auto& r : tvl::load_records(demos_path))
                    shots.fixed_demos.push_back({r.question, r.tvl});
            }
            auto result = tvl::run_experiment(test_set, model, shots, options);
            std::cout << report_block(result.report, "Test", model.model.empty() ? "model" : model.model);
            if (!out_path.empty()) write_file(out_path, tvl::report_json(result.report).dump(2) + "\n");
        } else if (*cmd_score) {
            auto gold = tvl::load_records(gold_path);
            auto result = tvl::score_offline(gold, load_predictions(pred_path));
            std::cout << report_block(result.report, "Offline", "predictions");
            if (!out_path.empty()) write_file(out_path, tvl::report_json(result.report).dump(2) + "\n");
        }
    } catch (const tvl::SyntaxError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const tvl::TvlError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
