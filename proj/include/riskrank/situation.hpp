#pragma once

#include <optional>
#include <string>
#include <vector>

#include "riskrank/ontology.hpp"
#include "riskrank/parallel.hpp"

namespace riskrank {

// Ordered list of context dimension names; fixes the meaning and order of
// every Situation's concept tuple.
class ContextSchema {
public:
    ContextSchema() = default;
    explicit ContextSchema(std::vector<std::string> dimensions);

    std::size_t size() const { return dimensions_.size(); }
    const std::vector<std::string>& dimensions() const { return dimensions_; }
    const std::string& dimension(std::size_t i) const { return dimensions_[i]; }
    std::size_t index_of(const std::string& dimension) const;  // throws DimensionMismatchError

private:
    std::vector<std::string> dimensions_;
};

// One concept per schema dimension, in schema order. risk is the stored mean
// risk level when the situation is tracked; unset until first computed.
struct Situation {
    std::vector<std::string> concepts;
    std::optional<double> risk;

    // Identity is concept-wise equality; risk is bookkeeping.
    bool same_concepts(const Situation& other) const { return concepts == other.concepts; }
    // Dimension-ordered lexicographic comparison, used for deterministic ties.
    bool tuple_less(const Situation& other) const { return concepts < other.concepts; }
};

// The per-dimension ontologies backing a schema. Concept similarity is only
// defined within one dimension; situations compare dimension by dimension.
class OntologySet {
public:
    OntologySet() = default;
    OntologySet(ContextSchema schema, std::vector<Ontology> ontologies);

    const ContextSchema& schema() const { return schema_; }
    const Ontology& ontology(std::size_t dim_index) const { return ontologies_[dim_index]; }
    std::size_t dimensions() const { return ontologies_.size(); }

    // Rejects situations whose arity or concepts do not fit the ontologies.
    void validate(const Situation& s) const;

    // Mean of per-dimension concept similarities; 1 iff concept-wise equal.
    double situation_similarity(const Situation& a, const Situation& b) const;

    // JSON object {dimension: concept, ..., "risk": optional number}.
    Situation situation_from_json_text(const std::string& text) const;
    std::string situation_to_json_text(const Situation& s) const;

private:
    ContextSchema schema_;
    std::vector<Ontology> ontologies_;
};

}  // namespace riskrank
