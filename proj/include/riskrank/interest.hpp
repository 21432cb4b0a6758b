#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <unordered_map>
#include <vector>

#include "riskrank/error.hpp"

namespace riskrank {

// Term -> weight, sorted by term, with the L2 norm cached. Immutable once
// built; all scoring runs on these.
class SparseVector {
public:
    SparseVector() = default;
    static SparseVector from_map(const std::map<std::string, double>& weights);

    const std::vector<std::pair<std::string, double>>& entries() const { return entries_; }
    double norm() const { return norm_; }
    bool empty() const { return entries_.empty(); }

    double dot(const SparseVector& other) const;

private:
    std::vector<std::pair<std::string, double>> entries_;
    double norm_ = 0.0;
};

// Cosine similarity; 0 when either norm is 0 (degenerate but legal).
double cosine(const SparseVector& a, const SparseVector& b);

// A document as term frequencies plus tf-idf weights against its corpus.
struct DocumentVector {
    std::string id;
    std::map<std::string, double> term_freq;  // tf > 0
    SparseVector weights;                     // tf * ln(n / n_t); zero-idf terms dropped
};

// Fixed document collection. finalize() freezes it and computes document
// frequencies and tf-idf weights; scoring and interest building require a
// finalized corpus.
class Corpus {
public:
    void add_document(std::string id, std::map<std::string, double> term_freq);
    void finalize();
    bool finalized() const { return finalized_; }

    // JSON lines, one {"id": ..., "terms": {term: tf, ...}} per line.
    // Lines holding {"id", "text"} are tokenized (lowercase, whitespace split).
    static Corpus load_jsonl(const std::string& path);

    std::size_t size() const { return docs_.size(); }
    const std::vector<DocumentVector>& documents() const { return docs_; }
    const DocumentVector& document(const std::string& id) const;     // throws CorpusError
    const DocumentVector& document_at(std::size_t i) const { return docs_[i]; }
    bool contains(const std::string& id) const { return by_id_.count(id) != 0; }

    // Number of documents containing the term; 0 when absent.
    std::size_t doc_frequency(const std::string& term) const;

private:
    std::vector<DocumentVector> docs_;
    std::unordered_map<std::string, std::size_t> by_id_;
    std::unordered_map<std::string, std::size_t> doc_freq_;
    bool finalized_ = false;
};

// Lowercase, whitespace-split tokens with counts; the optional real-text path.
std::map<std::string, double> tokenize_counts(const std::string& text);

// Query term vector; same representation as document weights.
struct Query {
    SparseVector weights;

    static Query from_terms(const std::vector<std::string>& terms);          // weight 1 each
    static Query from_weights(const std::map<std::string, double>& weights);
};

// Mean tf-idf vector over the documents a user clicked.
struct UserInterest {
    SparseVector weights;
    std::uint64_t source_docs = 0;  // |D|, zero for the empty interest

    bool empty() const { return source_docs == 0; }
};

// w_t = (1/|D|) * sum_d tf(t, d) * ln(n / n_t). Terms whose idf is 0 are
// dropped. Throws on an empty doc set, unknown ids, or corpus inconsistency.
UserInterest build_interest(const std::vector<std::string>& doc_ids, const Corpus& corpus);

}  // namespace riskrank
