#include "riskrank/casebase.hpp"

#include <algorithm>
#include <fstream>

#include "json_util.hpp"

namespace riskrank {

std::optional<double> Case::ctr() const {
    if (rec_count == 0) return std::nullopt;
    double r = static_cast<double>(click_count) / static_cast<double>(rec_count);
    return std::clamp(r, 0.0, 1.0);
}

std::optional<std::size_t> CaseBase::find_exact(const Situation& s) const {
    for (std::size_t i = 0; i < cases_.size(); ++i) {
        if (cases_[i].situation.same_concepts(s)) return i;
    }
    return std::nullopt;
}

std::optional<Retrieved> CaseBase::retrieve_nearest(const Situation& current,
                                                    const OntologySet& ontologies,
                                                    Execution exec) const {
    if (cases_.empty()) return std::nullopt;
    ontologies.validate(current);

    std::vector<double> sims(cases_.size());
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(cases_.size()); ++i) {
            sims[static_cast<std::size_t>(i)] =
                ontologies.situation_similarity(current, cases_[static_cast<std::size_t>(i)].situation);
        }
    } else {
        for (std::size_t i = 0; i < cases_.size(); ++i) {
            sims[i] = ontologies.situation_similarity(current, cases_[i].situation);
        }
    }

    // Serial reduction keeps the argmax and its tie-break schedule-independent.
    std::size_t best = 0;
    for (std::size_t i = 1; i < cases_.size(); ++i) {
        if (sims[i] > sims[best] ||
            (sims[i] == sims[best] && cases_[i].situation.tuple_less(cases_[best].situation))) {
            best = i;
        }
    }
    return Retrieved{best, sims[best]};
}

std::size_t CaseBase::insert_or_update(const Situation& current, const std::vector<std::string>& clicks,
                                       const Corpus& corpus, const OntologySet& ontologies) {
    ontologies.validate(current);
    std::vector<std::string> unique_clicks = clicks;
    std::sort(unique_clicks.begin(), unique_clicks.end());
    unique_clicks.erase(std::unique(unique_clicks.begin(), unique_clicks.end()), unique_clicks.end());
    for (const auto& id : unique_clicks) corpus.document(id);  // unknown ids fail loudly

    auto found = find_exact(current);
    std::size_t idx;
    if (!found) {
        Case c;
        c.situation.concepts = current.concepts;  // risk stays unset until first update
        c.clicked_docs = unique_clicks;
        idx = cases_.size();
        cases_.push_back(std::move(c));
    } else {
        idx = *found;
        Case& c = cases_[idx];
        std::vector<std::string> merged;
        merged.reserve(c.clicked_docs.size() + unique_clicks.size());
        std::set_union(c.clicked_docs.begin(), c.clicked_docs.end(), unique_clicks.begin(),
                       unique_clicks.end(), std::back_inserter(merged));
        c.clicked_docs = std::move(merged);
    }

    Case& c = cases_[idx];
    c.rec_count += 1;
    c.click_count += unique_clicks.size();
    c.interest = c.clicked_docs.empty() ? UserInterest{} : build_interest(c.clicked_docs, corpus);
    return idx;
}

double CaseBase::update_situation_risk(std::size_t index, double risk) {
    if (risk < 0.0 || risk > 1.0) throw DomainError("case base: risk must lie in [0, 1]");
    Case& c = cases_.at(index);
    c.risk_history.push_back(risk);
    double sum = 0.0;
    for (double r : c.risk_history) sum += r;
    c.situation.risk = sum / static_cast<double>(c.risk_history.size());
    return *c.situation.risk;
}

bool CaseBase::is_critical(const Situation& s) const {
    for (const auto& m : critical_) {
        if (m.same_concepts(s)) return true;
    }
    return false;
}

void CaseBase::seed_critical(Situation s, const OntologySet& ontologies) {
    ontologies.validate(s);
    if (is_critical(s)) return;
    s.risk = 1.0;
    critical_.push_back(std::move(s));
}

bool CaseBase::promote_if_critical(std::size_t index) {
    const Case& c = cases_.at(index);
    if (!c.situation.risk || *c.situation.risk < 1.0) return false;
    if (is_critical(c.situation)) return false;
    Situation s;
    s.concepts = c.situation.concepts;
    s.risk = 1.0;
    critical_.push_back(std::move(s));
    return true;
}

std::optional<Situation> CaseBase::critical_centroid(const OntologySet& ontologies,
                                                     Execution exec) const {
    if (critical_.empty()) return std::nullopt;
    const std::size_t n = critical_.size();
    std::vector<double> mean_sim(n, 0.0);

    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(n); ++i) {
            double sum = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                sum += ontologies.situation_similarity(critical_[static_cast<std::size_t>(i)], critical_[j]);
            }
            mean_sim[static_cast<std::size_t>(i)] = sum / static_cast<double>(n);
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            double sum = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                sum += ontologies.situation_similarity(critical_[i], critical_[j]);
            }
            mean_sim[i] = sum / static_cast<double>(n);
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < n; ++i) {
        if (mean_sim[i] > mean_sim[best] ||
            (mean_sim[i] == mean_sim[best] && critical_[i].tuple_less(critical_[best]))) {
            best = i;
        }
    }
    return critical_[best];
}

std::string CaseBase::to_json_text(const OntologySet& ontologies) const {
    nlohmann::json j;
    j["version"] = 1;
    j["cases"] = nlohmann::json::array();
    for (const auto& c : cases_) {
        nlohmann::json jc;
        jc["situation"] = detail::situation_to_json(ontologies, c.situation);
        jc["clicked_docs"] = c.clicked_docs;
        nlohmann::json w = nlohmann::json::object();
        for (const auto& [term, weight] : c.interest.weights.entries()) w[term] = weight;
        jc["interest"] = {{"weights", std::move(w)}, {"source_docs", c.interest.source_docs}};
        jc["rec_count"] = c.rec_count;
        jc["click_count"] = c.click_count;
        jc["risk_history"] = c.risk_history;
        j["cases"].push_back(std::move(jc));
    }
    j["critical_situations"] = nlohmann::json::array();
    for (const auto& s : critical_) {
        j["critical_situations"].push_back(detail::situation_to_json(ontologies, s));
    }
    return j.dump(2);
}

void CaseBase::save_file(const std::string& path, const OntologySet& ontologies) const {
    std::ofstream out(path);
    if (!out) throw ValidationError("case base: cannot write '" + path + "'");
    out << to_json_text(ontologies) << '\n';
}

CaseBase CaseBase::from_json_text(const std::string& text, const OntologySet& ontologies) {
    nlohmann::json j = detail::parse_json(text, "case base");
    if (!j.is_object()) throw ValidationError("case base: expected a JSON object");
    if (!j.contains("version") || !j["version"].is_number_integer() || j["version"].get<int>() != 1) {
        throw ValidationError("case base: unsupported or missing version (expected 1)");
    }
    if (!j.contains("cases") || !j["cases"].is_array() || !j.contains("critical_situations") ||
        !j["critical_situations"].is_array()) {
        throw ValidationError("case base: expected cases and critical_situations arrays");
    }

    CaseBase base;
    for (const auto& jc : j["cases"]) {
        if (!jc.is_object()) throw ValidationError("case base: each case must be an object");
        Case c;
        c.situation = detail::situation_from_json(ontologies, jc.at("situation"));
        for (const auto& d : jc.at("clicked_docs")) c.clicked_docs.push_back(d.get<std::string>());
        if (!std::is_sorted(c.clicked_docs.begin(), c.clicked_docs.end())) {
            throw ValidationError("case base: clicked_docs must be sorted");
        }
        std::map<std::string, double> w;
        const auto& ji = jc.at("interest");
        for (auto it = ji.at("weights").begin(); it != ji.at("weights").end(); ++it) {
            w[it.key()] = it.value().get<double>();
        }
        c.interest.weights = SparseVector::from_map(w);
        c.interest.source_docs = ji.at("source_docs").get<std::uint64_t>();
        c.rec_count = jc.at("rec_count").get<std::uint64_t>();
        c.click_count = jc.at("click_count").get<std::uint64_t>();
        for (const auto& r : jc.at("risk_history")) c.risk_history.push_back(r.get<double>());
        base.cases_.push_back(std::move(c));
    }
    for (const auto& js : j["critical_situations"]) {
        Situation s = detail::situation_from_json(ontologies, js);
        s.risk = 1.0;
        base.critical_.push_back(std::move(s));
    }
    return base;
}

CaseBase CaseBase::load_file(const std::string& path, const OntologySet& ontologies) {
    std::ifstream in(path);
    if (!in) throw ValidationError("case base: cannot open '" + path + "'");
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json_text(text, ontologies);
}

}  // namespace riskrank
