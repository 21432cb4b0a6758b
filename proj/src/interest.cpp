#include "riskrank/interest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json_util.hpp"

namespace riskrank {

SparseVector SparseVector::from_map(const std::map<std::string, double>& weights) {
    SparseVector v;
    v.entries_.reserve(weights.size());
    double sq = 0.0;
    for (const auto& [term, w] : weights) {
        if (w == 0.0) continue;
        v.entries_.emplace_back(term, w);
        sq += w * w;
    }
    v.norm_ = std::sqrt(sq);
    return v;
}

double SparseVector::dot(const SparseVector& other) const {
    double sum = 0.0;
    auto a = entries_.begin();
    auto b = other.entries_.begin();
    while (a != entries_.end() && b != other.entries_.end()) {
        int c = a->first.compare(b->first);
        if (c == 0) {
            sum += a->second * b->second;
            ++a;
            ++b;
        } else if (c < 0) {
            ++a;
        } else {
            ++b;
        }
    }
    return sum;
}

double cosine(const SparseVector& a, const SparseVector& b) {
    if (a.norm() == 0.0 || b.norm() == 0.0) return 0.0;
    return a.dot(b) / (a.norm() * b.norm());
}

void Corpus::add_document(std::string id, std::map<std::string, double> term_freq) {
    if (finalized_) throw CorpusError("corpus: cannot add documents after finalize");
    if (id.empty()) throw CorpusError("corpus: empty document id");
    if (by_id_.count(id)) throw CorpusError("corpus: duplicate document id '" + id + "'");
    if (term_freq.empty()) throw CorpusError("corpus: document '" + id + "' has no terms");
    for (const auto& [term, tf] : term_freq) {
        if (term.empty()) throw CorpusError("corpus: document '" + id + "' has an empty term");
        if (!(tf > 0.0)) throw CorpusError("corpus: document '" + id + "' term '" + term + "' has tf <= 0");
    }
    by_id_.emplace(id, docs_.size());
    DocumentVector d;
    d.id = std::move(id);
    d.term_freq = std::move(term_freq);
    docs_.push_back(std::move(d));
}

void Corpus::finalize() {
    if (finalized_) return;
    if (docs_.empty()) throw CorpusError("corpus: no documents");
    doc_freq_.clear();
    for (const auto& d : docs_) {
        for (const auto& [term, tf] : d.term_freq) {
            (void)tf;
            ++doc_freq_[term];
        }
    }
    const double n = static_cast<double>(docs_.size());
    for (auto& d : docs_) {
        std::map<std::string, double> w;
        for (const auto& [term, tf] : d.term_freq) {
            double idf = std::log(n / static_cast<double>(doc_freq_.at(term)));
            if (idf == 0.0) continue;  // term present in every document
            w[term] = tf * idf;
        }
        d.weights = SparseVector::from_map(w);
    }
    finalized_ = true;
}

Corpus Corpus::load_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CorpusError("corpus: cannot open '" + path + "'");
    Corpus c;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.is_object()) {
            throw CorpusError("corpus '" + path + "' line " + std::to_string(lineno) + ": invalid JSON object");
        }
        if (!j.contains("id") || !j["id"].is_string()) {
            throw CorpusError("corpus '" + path + "' line " + std::to_string(lineno) + ": missing string id");
        }
        std::map<std::string, double> tf;
        if (j.contains("terms")) {
            if (!j["terms"].is_object()) {
                throw CorpusError("corpus '" + path + "' line " + std::to_string(lineno) + ": terms must be an object");
            }
            for (auto it = j["terms"].begin(); it != j["terms"].end(); ++it) {
                if (!it.value().is_number()) {
                    throw CorpusError("corpus '" + path + "' line " + std::to_string(lineno) +
                                      ": tf for '" + it.key() + "' must be a number");
                }
                tf[it.key()] = it.value().get<double>();
            }
        } else if (j.contains("text") && j["text"].is_string()) {
            tf = tokenize_counts(j["text"].get<std::string>());
        } else {
            throw CorpusError("corpus '" + path + "' line " + std::to_string(lineno) + ": need terms or text");
        }
        c.add_document(j["id"].get<std::string>(), std::move(tf));
    }
    c.finalize();
    return c;
}

const DocumentVector& Corpus::document(const std::string& id) const {
    auto it = by_id_.find(id);
    if (it == by_id_.end()) throw CorpusError("corpus: unknown document id '" + id + "'");
    return docs_[it->second];
}

std::size_t Corpus::doc_frequency(const std::string& term) const {
    auto it = doc_freq_.find(term);
    return it == doc_freq_.end() ? 0 : it->second;
}

std::map<std::string, double> tokenize_counts(const std::string& text) {
    std::map<std::string, double> counts;
    std::string token;
    std::istringstream in(text);
    while (in >> token) {
        std::transform(token.begin(), token.end(), token.begin(),
                       [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
        counts[token] += 1.0;
    }
    return counts;
}

Query Query::from_terms(const std::vector<std::string>& terms) {
    std::map<std::string, double> w;
    for (const auto& t : terms) {
        if (t.empty()) throw ValidationError("query: empty term");
        w[t] = 1.0;
    }
    if (w.empty()) throw ValidationError("query: no terms");
    Query q;
    q.weights = SparseVector::from_map(w);
    return q;
}

Query Query::from_weights(const std::map<std::string, double>& weights) {
    if (weights.empty()) throw ValidationError("query: no terms");
    Query q;
    q.weights = SparseVector::from_map(weights);
    return q;
}

UserInterest build_interest(const std::vector<std::string>& doc_ids, const Corpus& corpus) {
    if (!corpus.finalized()) throw CorpusError("interest: corpus not finalized");
    if (doc_ids.empty()) throw ValidationError("interest: empty click set");
    const double n = static_cast<double>(corpus.size());
    std::map<std::string, double> acc;
    for (const auto& id : doc_ids) {
        const DocumentVector& d = corpus.document(id);
        for (const auto& [term, tf] : d.term_freq) {
            std::size_t df = corpus.doc_frequency(term);
            if (df == 0) throw CorpusError("interest: term '" + term + "' missing from corpus frequencies");
            double idf = std::log(n / static_cast<double>(df));
            if (idf == 0.0) continue;
            acc[term] += tf * idf;
        }
    }
    const double inv = 1.0 / static_cast<double>(doc_ids.size());
    for (auto& [term, w] : acc) w *= inv;
    UserInterest ui;
    ui.weights = SparseVector::from_map(acc);
    ui.source_docs = doc_ids.size();
    return ui;
}

}  // namespace riskrank
