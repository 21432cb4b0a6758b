#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "riskrank/error.hpp"

namespace riskrank {

// Rooted concept tree for one context dimension. Immutable after load.
// depth(root) = 1 (node count along the path, root inclusive).
class Ontology {
public:
    // edges are (parent, child) pairs. Rejects unknown roots, repeated
    // children (that covers two-parent conflicts), cycles and nodes
    // unreachable from the root.
    static Ontology from_edges(std::string dimension, const std::string& root,
                               const std::vector<std::pair<std::string, std::string>>& edges);

    // File format: {"dimension": ..., "root": ..., "edges": [[parent, child], ...]}
    static Ontology load_file(const std::string& path);
    static Ontology from_json_text(const std::string& text, const std::string& origin);

    const std::string& dimension() const { return dimension_; }
    const std::string& root() const { return names_[0]; }
    std::size_t size() const { return names_.size(); }
    bool contains(const std::string& concept_name) const;
    const std::vector<std::string>& concepts() const { return names_; }

    // Node count from the root to the concept, inclusive.
    int depth(const std::string& concept_name) const;

    // Deepest common ancestor; every pair has one because the tree is rooted.
    const std::string& least_common_subsumer(const std::string& a, const std::string& b) const;

    // 2 * depth(lcs) / (depth(a) + depth(b)), in (0, 1], 1 iff a == b.
    double similarity(const std::string& a, const std::string& b) const;

private:
    Ontology() = default;
    int index_of(const std::string& concept_name) const;

    std::string dimension_;
    std::vector<std::string> names_;   // names_[0] is the root
    std::vector<int> parent_;          // parent_[0] = -1
    std::vector<int> depth_;
    std::unordered_map<std::string, int> index_;
};

// Running mean of observed situation risk per (dimension, concept).
// An entry exists once annotated or once a first observation arrives;
// absence means "no annotation" and matters to the concept-risk estimator.
class ConceptRiskTable {
public:
    struct Entry {
        double sum = 0.0;
        std::uint64_t count = 0;
        double value() const { return sum / static_cast<double>(count); }
    };

    // Seed an expert annotation. weight acts as a prior sample count.
    void annotate(const std::string& dimension, const std::string& concept_name, double cv,
                  std::uint64_t weight = 1);

    // Fold one computed situation risk into the concept's running mean.
    void observe(const std::string& dimension, const std::string& concept_name, double risk);

    std::optional<double> risk(const std::string& dimension, const std::string& concept_name) const;
    std::optional<Entry> entry(const std::string& dimension, const std::string& concept_name) const;
    bool empty() const { return entries_.empty(); }

private:
    // Ordered maps keep iteration deterministic.
    std::map<std::string, std::map<std::string, Entry>> entries_;
};

}  // namespace riskrank
