// retrieval.hpp - demonstration retrieval for RAG prompting. The default
// scorer is a deterministic lexical one: token-overlap cosine with
// document-frequency weighting. A dense-embedding adapter that calls an
// external endpoint lives in client.hpp behind the same interface.
#ifndef TVL_RETRIEVAL_HPP
#define TVL_RETRIEVAL_HPP

#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "tvl/dataset.hpp"

namespace tvl {

struct RankedHit {
    size_t index = 0;  // into the bound corpus
    double score = 0;
};

class Retriever {
public:
    virtual ~Retriever() = default;
    virtual const std::vector<DatasetRecord>& corpus() const = 0;

    // Hits sorted by score descending, ties broken by record id ascending.
    virtual std::vector<RankedHit> top_k(const std::string& question, size_t k) const = 0;
};

namespace detail {

inline std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        if (std::isalnum(static_cast<unsigned char>(ch))) {
            cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
        } else if (!cur.empty()) {
            out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

inline std::vector<RankedHit> sort_hits(std::vector<RankedHit> hits,
                                        const std::vector<DatasetRecord>& corpus, size_t k) {
    std::sort(hits.begin(), hits.end(), [&](const RankedHit& a, const RankedHit& b) {
        if (a.score != b.score) return a.score > b.score;
        return corpus[a.index].id < corpus[b.index].id;
    });
    if (hits.size() > k) hits.resize(k);
    return hits;
}

}  // namespace detail

class LexicalRetriever : public Retriever {
public:
    explicit LexicalRetriever(std::vector<DatasetRecord> corpus) : corpus_(std::move(corpus)) {
        doc_tf_.resize(corpus_.size());
        for (size_t i = 0; i < corpus_.size(); ++i) {
            for (const auto& tok : detail::tokenize(corpus_[i].question)) doc_tf_[i][tok] += 1.0;
            for (const auto& [tok, _] : doc_tf_[i]) df_[tok] += 1;
        }
        for (auto& tf : doc_tf_) {
            double norm = 0;
            for (auto& [tok, w] : tf) {
                w *= idf(tok);
                norm += w * w;
            }
            doc_norm_.push_back(std::sqrt(norm));
        }
    }

    const std::vector<DatasetRecord>& corpus() const override { return corpus_; }

    std::vector<RankedHit> top_k(const std::string& question, size_t k) const override {
        std::map<std::string, double> qv;
        for (const auto& tok : detail::tokenize(question)) qv[tok] += 1.0;
        double qnorm = 0;
        for (auto& [tok, w] : qv) {
            w *= idf(tok);
            qnorm += w * w;
        }
        qnorm = std::sqrt(qnorm);

        std::vector<RankedHit> hits;
        hits.reserve(corpus_.size());
        for (size_t i = 0; i < corpus_.size(); ++i) {
            double dot = 0;
            for (const auto& [tok, w] : qv) {
                auto it = doc_tf_[i].find(tok);
                if (it != doc_tf_[i].end()) dot += w * it->second;
            }
            double denom = qnorm * doc_norm_[i];
            hits.push_back(RankedHit{i, denom > 0 ? dot / denom : 0.0});
        }
        return detail::sort_hits(std::move(hits), corpus_, k);
    }

private:
    std::vector<DatasetRecord> corpus_;
    std::vector<std::map<std::string, double>> doc_tf_;
    std::vector<double> doc_norm_;
    std::map<std::string, size_t> df_;

    double idf(const std::string& tok) const {
        auto it = df_.find(tok);
        size_t df = it == df_.end() ? 0 : it->second;
        return std::log((1.0 + static_cast<double>(corpus_.size())) /
                        (1.0 + static_cast<double>(df))) +
               1.0;
    }
};

// Convenience form of the lexical route for one-off lookups.
inline std::vector<DatasetRecord> retrieve_topk(const std::string& question,
                                                const std::vector<DatasetRecord>& corpus,
                                                size_t k) {
    LexicalRetriever r(corpus);
    std::vector<DatasetRecord> out;
    for (const auto& hit : r.top_k(question, k)) out.push_back(corpus[hit.index]);
    return out;
}

}  // namespace tvl

#endif  // TVL_RETRIEVAL_HPP
