#include "riskrank/ontology.hpp"

#include <fstream>
#include <queue>
#include <sstream>

#include "json.hpp"

namespace riskrank {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw ValidationError(msg); }

}  // namespace

Ontology Ontology::from_edges(std::string dimension, const std::string& root,
                              const std::vector<std::pair<std::string, std::string>>& edges) {
    if (dimension.empty()) fail("ontology: empty dimension name");
    if (root.empty()) fail("ontology: empty root name");

    std::unordered_map<std::string, std::string> parent_of;
    std::unordered_map<std::string, std::vector<std::string>> children_of;
    for (const auto& [parent, child] : edges) {
        if (parent.empty() || child.empty()) fail("ontology '" + dimension + "': empty node name in edge");
        if (child == root) fail("ontology '" + dimension + "': root '" + root + "' appears as a child");
        auto [it, inserted] = parent_of.emplace(child, parent);
        if (!inserted) {
            fail("ontology '" + dimension + "': node '" + child + "' has parents '" + it->second +
                 "' and '" + parent + "'");
        }
        children_of[parent].push_back(child);
    }

    Ontology o;
    o.dimension_ = std::move(dimension);
    o.names_.push_back(root);
    o.parent_.push_back(-1);
    o.depth_.push_back(1);
    o.index_.emplace(root, 0);

    // BFS from the root assigns depths; anything left over is unreachable
    // (detached subtree or cycle).
    std::queue<std::string> frontier;
    frontier.push(root);
    while (!frontier.empty()) {
        std::string cur = std::move(frontier.front());
        frontier.pop();
        int cur_idx = o.index_.at(cur);
        auto kids = children_of.find(cur);
        if (kids == children_of.end()) continue;
        for (const auto& child : kids->second) {
            if (o.index_.count(child)) fail("ontology '" + o.dimension_ + "': cycle through '" + child + "'");
            int idx = static_cast<int>(o.names_.size());
            o.index_.emplace(child, idx);
            o.names_.push_back(child);
            o.parent_.push_back(cur_idx);
            o.depth_.push_back(o.depth_[cur_idx] + 1);
            frontier.push(child);
        }
    }

    if (o.names_.size() != parent_of.size() + 1) {
        for (const auto& [child, parent] : parent_of) {
            if (!o.index_.count(child)) {
                fail("ontology '" + o.dimension_ + "': node '" + child +
                     "' is unreachable from root '" + o.names_[0] + "'");
            }
        }
        fail("ontology '" + o.dimension_ + "': inconsistent edge set");
    }
    return o;
}

Ontology Ontology::from_json_text(const std::string& text, const std::string& origin) {
    nlohmann::json j = nlohmann::json::parse(text, nullptr, false);
    if (j.is_discarded()) fail("ontology " + origin + ": invalid JSON");
    if (!j.is_object() || !j.contains("dimension") || !j.contains("root") || !j.contains("edges")) {
        fail("ontology " + origin + ": expected {dimension, root, edges}");
    }
    if (!j["dimension"].is_string() || !j["root"].is_string() || !j["edges"].is_array()) {
        fail("ontology " + origin + ": wrong field types");
    }
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& e : j["edges"]) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_string() || !e[1].is_string()) {
            fail("ontology " + origin + ": each edge must be [parent, child]");
        }
        edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>());
    }
    return from_edges(j["dimension"].get<std::string>(), j["root"].get<std::string>(), edges);
}

Ontology Ontology::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("ontology: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str(), "'" + path + "'");
}

bool Ontology::contains(const std::string& concept_name) const {
    return index_.count(concept_name) != 0;
}

int Ontology::index_of(const std::string& concept_name) const {
    auto it = index_.find(concept_name);
    if (it == index_.end()) {
        throw UnknownConceptError("ontology '" + dimension_ + "': unknown concept '" + concept_name + "'");
    }
    return it->second;
}

int Ontology::depth(const std::string& concept_name) const { return depth_[index_of(concept_name)]; }

const std::string& Ontology::least_common_subsumer(const std::string& a, const std::string& b) const {
    int x = index_of(a);
    int y = index_of(b);
    while (depth_[x] > depth_[y]) x = parent_[x];
    while (depth_[y] > depth_[x]) y = parent_[y];
    while (x != y) {
        x = parent_[x];
        y = parent_[y];
    }
    return names_[x];
}

double Ontology::similarity(const std::string& a, const std::string& b) const {
    int x = index_of(a);
    int y = index_of(b);
    int da = depth_[x];
    int db = depth_[y];
    while (depth_[x] > depth_[y]) x = parent_[x];
    while (depth_[y] > depth_[x]) y = parent_[y];
    while (x != y) {
        x = parent_[x];
        y = parent_[y];
    }
    return 2.0 * static_cast<double>(depth_[x]) / static_cast<double>(da + db);
}

void ConceptRiskTable::annotate(const std::string& dimension, const std::string& concept_name,
                                double cv, std::uint64_t weight) {
    if (cv < 0.0 || cv > 1.0) throw DomainError("concept risk: cv must lie in [0, 1]");
    if (weight == 0) throw DomainError("concept risk: annotation weight must be positive");
    Entry& e = entries_[dimension][concept_name];
    e.sum += cv * static_cast<double>(weight);
    e.count += weight;
}

void ConceptRiskTable::observe(const std::string& dimension, const std::string& concept_name,
                               double risk) {
    if (risk < 0.0 || risk > 1.0) throw DomainError("concept risk: observed risk must lie in [0, 1]");
    Entry& e = entries_[dimension][concept_name];
    e.sum += risk;
    e.count += 1;
}

std::optional<double> ConceptRiskTable::risk(const std::string& dimension,
                                             const std::string& concept_name) const {
    auto e = entry(dimension, concept_name);
    if (!e) return std::nullopt;
    return e->value();
}

std::optional<ConceptRiskTable::Entry> ConceptRiskTable::entry(const std::string& dimension,
                                                               const std::string& concept_name) const {
    auto dim = entries_.find(dimension);
    if (dim == entries_.end()) return std::nullopt;
    auto it = dim->second.find(concept_name);
    if (it == dim->second.end()) return std::nullopt;
    return it->second;
}

}  // namespace riskrank
