#include "riskrank/situation.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include "json_util.hpp"

namespace riskrank {

ContextSchema::ContextSchema(std::vector<std::string> dimensions) : dimensions_(std::move(dimensions)) {
    if (dimensions_.empty()) throw ValidationError("schema: at least one dimension required");
    for (std::size_t i = 0; i < dimensions_.size(); ++i) {
        if (dimensions_[i].empty()) throw ValidationError("schema: empty dimension name");
        for (std::size_t j = i + 1; j < dimensions_.size(); ++j) {
            if (dimensions_[i] == dimensions_[j]) {
                throw ValidationError("schema: duplicate dimension '" + dimensions_[i] + "'");
            }
        }
    }
}

std::size_t ContextSchema::index_of(const std::string& dimension) const {
    for (std::size_t i = 0; i < dimensions_.size(); ++i) {
        if (dimensions_[i] == dimension) return i;
    }
    throw DimensionMismatchError("schema: unknown dimension '" + dimension + "'");
}

OntologySet::OntologySet(ContextSchema schema, std::vector<Ontology> ontologies)
    : schema_(std::move(schema)), ontologies_(std::move(ontologies)) {
    if (schema_.size() != ontologies_.size()) {
        throw DimensionMismatchError("ontology set: schema lists " + std::to_string(schema_.size()) +
                                     " dimensions but " + std::to_string(ontologies_.size()) +
                                     " ontologies were given");
    }
    for (std::size_t i = 0; i < ontologies_.size(); ++i) {
        if (ontologies_[i].dimension() != schema_.dimension(i)) {
            throw DimensionMismatchError("ontology set: position " + std::to_string(i) + " expects '" +
                                         schema_.dimension(i) + "' but ontology is for '" +
                                         ontologies_[i].dimension() + "'");
        }
    }
}

void OntologySet::validate(const Situation& s) const {
    if (s.concepts.size() != ontologies_.size()) {
        throw DimensionMismatchError("situation: has " + std::to_string(s.concepts.size()) +
                                     " concepts, schema has " + std::to_string(ontologies_.size()) +
                                     " dimensions");
    }
    for (std::size_t i = 0; i < ontologies_.size(); ++i) {
        if (!ontologies_[i].contains(s.concepts[i])) {
            throw UnknownConceptError("situation: concept '" + s.concepts[i] +
                                      "' not in ontology '" + schema_.dimension(i) + "'");
        }
    }
    if (s.risk && (*s.risk < 0.0 || *s.risk > 1.0)) {
        throw DomainError("situation: risk level must lie in [0, 1]");
    }
}

double OntologySet::situation_similarity(const Situation& a, const Situation& b) const {
    validate(a);
    validate(b);
    double sum = 0.0;
    for (std::size_t i = 0; i < ontologies_.size(); ++i) {
        sum += ontologies_[i].similarity(a.concepts[i], b.concepts[i]);
    }
    return sum / static_cast<double>(ontologies_.size());
}

Situation OntologySet::situation_from_json_text(const std::string& text) const {
    return detail::situation_from_json(*this, detail::parse_json(text, "situation"));
}

std::string OntologySet::situation_to_json_text(const Situation& s) const {
    return detail::situation_to_json(*this, s).dump();
}

namespace detail {

nlohmann::json parse_json(const std::string& text, const std::string& origin) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ValidationError(origin + ": invalid JSON");
    return j;
}

nlohmann::json load_json_file(const std::string& path, const std::string& what) {
    std::ifstream in(path);
    if (!in) throw ValidationError(what + ": cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_json(buf.str(), what + " '" + path + "'");
}

nlohmann::json situation_to_json(const OntologySet& ontologies, const Situation& s) {
    nlohmann::json j = nlohmann::json::object();
    for (std::size_t i = 0; i < ontologies.dimensions(); ++i) {
        j[ontologies.schema().dimension(i)] = s.concepts[i];
    }
    if (s.risk) j["risk"] = *s.risk;
    return j;
}

Situation situation_from_json(const OntologySet& ontologies, const nlohmann::json& j) {
    if (!j.is_object()) throw ValidationError("situation: expected a JSON object");
    Situation s;
    s.concepts.reserve(ontologies.dimensions());
    for (std::size_t i = 0; i < ontologies.dimensions(); ++i) {
        const std::string& dim = ontologies.schema().dimension(i);
        auto it = j.find(dim);
        if (it == j.end() || !it->is_string()) {
            throw DimensionMismatchError("situation: missing concept for dimension '" + dim + "'");
        }
        s.concepts.push_back(it->get<std::string>());
    }
    if (auto it = j.find("risk"); it != j.end() && !it->is_null()) {
        if (!it->is_number()) throw ValidationError("situation: risk must be a number");
        s.risk = it->get<double>();
    }
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() == "risk") continue;
        bool known = false;
        for (std::size_t i = 0; i < ontologies.dimensions(); ++i) {
            if (it.key() == ontologies.schema().dimension(i)) known = true;
        }
        if (!known) throw DimensionMismatchError("situation: unexpected field '" + it.key() + "'");
    }
    ontologies.validate(s);
    return s;
}

}  // namespace detail

}  // namespace riskrank
