// client.hpp - chat-completion client over HTTP with role-tagged messages,
// exponential-backoff retries and redacted request logging; plus the
// optional dense-embedding retriever that calls an /v1/embeddings endpoint.
#ifndef TVL_CLIENT_HPP
#define TVL_CLIENT_HPP

#include <chrono>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "tvl/prompts.hpp"
#include "tvl/retrieval.hpp"

namespace tvl {

struct ClientError : TvlError {
    using TvlError::TvlError;
};
struct AuthError : ClientError {
    using ClientError::ClientError;
};
struct TransportError : ClientError {
    using ClientError::ClientError;
};
struct RateLimited : ClientError {
    using ClientError::ClientError;
};

struct ModelConfig {
    std::string endpoint;       // base URL, e.g. http://127.0.0.1:8089
    std::string model;
    std::string api_key_env;    // name of the env var holding the key; never the key itself
    double temperature = 0.1;
    int max_tokens = 2048;
    int retriever_k = 0;        // 0 = no retrieval, otherwise in [1, 3]
    std::string retriever_kind = "lexical";  // lexical | embedding
    std::string embedding_endpoint;          // defaults to `endpoint`
    std::string embedding_model;
    int max_retries = 3;
    int retry_base_ms = 250;

    void check() const {
        if (endpoint.empty()) throw ClientError("model config needs an endpoint");
        if (temperature < 0) throw ClientError("temperature must be >= 0");
        if (retriever_k != 0 && (retriever_k < 1 || retriever_k > 3))
            throw ClientError("retriever k must be in [1, 3]");
    }

    std::string api_key() const {
        if (api_key_env.empty()) return "";
        const char* v = std::getenv(api_key_env.c_str());
        if (!v) throw AuthError("api key environment variable not set: " + api_key_env);
        return v;
    }
};

inline ModelConfig model_config_from_json(const nlohmann::json& j) {
    ModelConfig m;
    m.endpoint = j.at("endpoint").get<std::string>();
    m.model = j.value("model", "");
    m.api_key_env = j.value("api_key_env", "");
    m.temperature = j.value("temperature", 0.1);
    m.max_tokens = j.value("max_tokens", 2048);
    if (j.contains("retriever")) {
        const auto& r = j.at("retriever");
        m.retriever_k = r.value("k", 0);
        m.retriever_kind = r.value("type", "lexical");
        m.embedding_endpoint = r.value("endpoint", "");
        m.embedding_model = r.value("model", "");
    }
    m.max_retries = j.value("max_retries", 3);
    m.retry_base_ms = j.value("retry_base_ms", 250);
    m.check();
    return m;
}

using LogSink = std::function<void(const std::string&)>;

namespace detail {

inline void log_line(const LogSink& log, const std::string& line) {
    if (log) log(line);
}

// POSTs JSON with retries on transport failures, 429 and 5xx; auth errors
// fail fast. The api key never reaches the log.
inline std::string post_json_with_retry(const ModelConfig& m, const std::string& base_url,
                                        const std::string& path, const nlohmann::json& body,
                                        const LogSink& log) {
    std::string key = m.api_key();
    std::string payload = body.dump();
    int status = 0;
    for (int attempt = 0; attempt <= m.max_retries; ++attempt) {
        if (attempt > 0) {
            int delay = m.retry_base_ms * (1 << (attempt - 1));
            std::this_thread::sleep_for(std::chrono::milliseconds(delay));
        }
        httplib::Client cli(base_url);
        cli.set_connection_timeout(30);
        cli.set_read_timeout(120);
        httplib::Headers headers;
        if (!key.empty()) headers.emplace("Authorization", "Bearer " + key);
        log_line(log, "POST " + base_url + path + " model=" + m.model +
                          " auth=" + (key.empty() ? "none" : "Bearer ***") + " attempt=" +
                          std::to_string(attempt + 1));
        auto res = cli.Post(path, headers, payload, "application/json");
        if (!res) {
            log_line(log, "transport failure: " + httplib::to_string(res.error()));
            status = -1;
            continue;
        }
        status = res->status;
        log_line(log, "status=" + std::to_string(status) + " bytes=" +
                          std::to_string(res->body.size()));
        if (status == 200) return res->body;
        if (status == 401 || status == 403)
            throw AuthError("authentication rejected (HTTP " + std::to_string(status) + ")");
        if (status == 429 || status >= 500) continue;  // retryable
        throw TransportError("HTTP " + std::to_string(status) + ": " + res->body);
    }
    if (status == 429) throw RateLimited("rate limited after retries");
    throw TransportError("request failed after " + std::to_string(m.max_retries + 1) +
                         " attempts (last status " + std::to_string(status) + ")");
}

}  // namespace detail

// Sends the prompt as a chat completion and returns the raw completion text.
inline std::string call_model(const PromptSpec& p, const ModelConfig& m, const LogSink& log = {}) {
    m.check();
    nlohmann::ordered_json body;
    body["model"] = m.model;
    body["messages"] = nlohmann::ordered_json::array();
    for (const auto& [role, content] : p.messages())
        body["messages"].push_back({{"role", role}, {"content", content}});
    body["temperature"] = m.temperature;
    body["max_tokens"] = m.max_tokens;

    std::string raw = detail::post_json_with_retry(m, m.endpoint, "/v1/chat/completions", body, log);
    try {
        auto j = nlohmann::json::parse(raw);
        return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw TransportError(std::string("malformed completion response: ") + e.what());
    }
}

// Batch embedding call against an /v1/embeddings endpoint.
inline std::vector<std::vector<double>> embed_texts(const ModelConfig& m,
                                                    const std::vector<std::string>& texts,
                                                    const LogSink& log = {}) {
    std::string base = m.embedding_endpoint.empty() ? m.endpoint : m.embedding_endpoint;
    nlohmann::ordered_json body;
    body["model"] = m.embedding_model.empty() ? m.model : m.embedding_model;
    body["input"] = texts;
    std::string raw = detail::post_json_with_retry(m, base, "/v1/embeddings", body, log);
    try {
        auto j = nlohmann::json::parse(raw);
        std::vector<std::vector<double>> out;
        for (const auto& item : j.at("data"))
            out.push_back(item.at("embedding").get<std::vector<double>>());
        if (out.size() != texts.size())
            throw TransportError("embedding count mismatch: asked " +
                                 std::to_string(texts.size()) + ", got " +
                                 std::to_string(out.size()));
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw TransportError(std::string("malformed embeddings response: ") + e.what());
    }
}

// Dense retriever backed by an external embedding endpoint; the corpus is
// embedded once at construction.
class EmbeddingEndpointRetriever : public Retriever {
public:
    EmbeddingEndpointRetriever(std::vector<DatasetRecord> corpus, ModelConfig config,
                               LogSink log = {})
        : corpus_(std::move(corpus)), config_(std::move(config)), log_(std::move(log)) {
        std::vector<std::string> texts;
        for (const auto& r : corpus_) texts.push_back(r.question);
        vectors_ = embed_texts(config_, texts, log_);
    }

    const std::vector<DatasetRecord>& corpus() const override { return corpus_; }

    std::vector<RankedHit> top_k(const std::string& question, size_t k) const override {
        auto qv = embed_texts(config_, {question}, log_).front();
        std::vector<RankedHit> hits;
        for (size_t i = 0; i < vectors_.size(); ++i)
            hits.push_back(RankedHit{i, cosine(qv, vectors_[i])});
        return detail::sort_hits(std::move(hits), corpus_, k);
    }

private:
    std::vector<DatasetRecord> corpus_;
    ModelConfig config_;
    LogSink log_;
    std::vector<std::vector<double>> vectors_;

    static double cosine(const std::vector<double>& a, const std::vector<double>& b) {
        double dot = 0, na = 0, nb = 0;
        size_t n = std::min(a.size(), b.size());
        for (size_t i = 0; i < n; ++i) {
            dot += a[i] * b[i];
            na += a[i] * a[i];
            nb += b[i] * b[i];
        }
        double denom = std::sqrt(na) * std::sqrt(nb);
        return denom > 0 ? dot / denom : 0.0;
    }
};

}  // namespace tvl

#endif  // TVL_CLIENT_HPP
