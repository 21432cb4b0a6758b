#include "riskrank/engine.hpp"

#include <algorithm>
#include <utility>

#include "riskrank/rng.hpp"

namespace riskrank {

void RankParams::validate() const {
    if (epsilon_min < 0.0 || epsilon_max > 1.0 || epsilon_min > epsilon_max) {
        throw DomainError("rank params: need 0 <= epsilon_min <= epsilon_max <= 1");
    }
    if (list_size == 0) throw DomainError("rank params: list size must be positive");
    if (epsilon_override && (*epsilon_override < 0.0 || *epsilon_override > 1.0)) {
        throw DomainError("rank params: epsilon override must lie in [0, 1]");
    }
}

double epsilon_from_risk(double risk, const RankParams& params) {
    params.validate();
    if (risk < 0.0 || risk > 1.0) throw DomainError("epsilon schedule: risk must lie in [0, 1]");
    double eps = params.epsilon_max - risk * (1.0 - params.epsilon_min);
    return std::clamp(eps, params.epsilon_min, params.epsilon_max);
}

namespace {

// Draw order per document: first the branch draw l, then either the random
// score or the query/context coin j. Each document owns one forked stream,
// so scores never depend on evaluation order.
ScoredDocument score_one(const DocumentVector& doc, const Query& query, const UserInterest* interest,
                         double epsilon, std::uint64_t stream_seed) {
    Rng rng(stream_seed);
    ScoredDocument out;
    out.doc_id = doc.id;
    double l = rng.uniform();
    if (l < epsilon) {
        out.score = rng.uniform();
        out.provenance = Provenance::Random;
        return out;
    }
    double j = rng.uniform();
    if (l < j || interest == nullptr) {
        out.score = cosine(query.weights, doc.weights);
        out.provenance = Provenance::Query;
    } else {
        out.score = cosine(interest->weights, doc.weights);
        out.provenance = Provenance::Context;
    }
    return out;
}

}  // namespace

std::vector<ScoredDocument> score_all_documents(const Corpus& corpus, const Query& query,
                                                const UserInterest* interest, double epsilon,
                                                std::uint64_t seed, std::uint64_t trial,
                                                Execution exec) {
    if (!corpus.finalized()) throw CorpusError("scoring: corpus not finalized");
    if (epsilon < 0.0 || epsilon > 1.0) throw DomainError("scoring: epsilon must lie in [0, 1]");
    const std::uint64_t trial_key = Rng::mix(seed, trial);
    std::vector<ScoredDocument> scored(corpus.size());
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(static)
        for (long long i = 0; i < static_cast<long long>(corpus.size()); ++i) {
            auto idx = static_cast<std::size_t>(i);
            scored[idx] = score_one(corpus.document_at(idx), query, interest, epsilon,
                                    Rng::mix(trial_key, idx));
        }
    } else {
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            scored[i] = score_one(corpus.document_at(i), query, interest, epsilon, Rng::mix(trial_key, i));
        }
    }
    return scored;
}

RankingEngine::RankingEngine(OntologySet ontologies, Corpus corpus, RiskConfig risk_config,
                             RankParams rank_params)
    : ontologies_(std::move(ontologies)),
      corpus_(std::move(corpus)),
      risk_config_(risk_config),
      rank_params_(rank_params) {
    risk_config_.validate();
    rank_params_.validate();
    if (!corpus_.finalized()) throw CorpusError("engine: corpus not finalized");
}

void RankingEngine::seed_critical_situation(const Situation& s) {
    base_.seed_critical(s, ontologies_);
}

void RankingEngine::annotate_concept_risk(const std::string& dimension, const std::string& concept_name,
                                          double cv, std::uint64_t weight) {
    bool known = false;
    for (std::size_t d = 0; d < ontologies_.dimensions(); ++d) {
        if (ontologies_.schema().dimension(d) == dimension) {
            if (!ontologies_.ontology(d).contains(concept_name)) {
                throw UnknownConceptError("annotation: concept '" + concept_name +
                                          "' not in ontology '" + dimension + "'");
            }
            known = true;
        }
    }
    if (!known) throw DimensionMismatchError("annotation: unknown dimension '" + dimension + "'");
    concept_risks_.annotate(dimension, concept_name, cv, weight);
}

RiskBreakdown RankingEngine::compute_risk(const Situation& current, const Case* retrieved) const {
    RiskBreakdown bd;
    bd.rm = similarity_risk(current, base_, ontologies_, risk_config_.similarity_threshold,
                            rank_params_.exec);
    bd.rc = concept_risk(current, concept_risks_, base_.critical(), ontologies_.schema());
    if (retrieved != nullptr) {
        bd.rv = variance_risk(*retrieved, ctr_statistics(base_, risk_config_.alpha));
    }
    auto agg = aggregate_risk(bd.rm, bd.rc, bd.rv, risk_config_);
    bd.defaulted = !agg.has_value();
    bd.aggregate = agg.value_or(risk_config_.default_risk);
    return bd;
}

QueryOutcome RankingEngine::process_query(const Situation& current, const Query& query) {
    ontologies_.validate(current);
    if (query.weights.empty()) throw ValidationError("engine: query has no terms");

    const std::uint64_t trial = trial_counter_++;
    QueryOutcome out;

    const UserInterest* interest = nullptr;
    if (base_.empty()) {
        // Cold start: no interests and no usable estimators; stay cautious.
        out.risk.defaulted = true;
        out.risk.aggregate = risk_config_.default_risk;
    } else {
        auto nearest = base_.retrieve_nearest(current, ontologies_, rank_params_.exec);
        out.retrieved_case = nearest->index;
        const Case& retrieved = base_.case_at(nearest->index);
        out.risk = compute_risk(current, &retrieved);
        interest = &retrieved.interest;
    }

    out.epsilon = rank_params_.epsilon_override ? *rank_params_.epsilon_override
                                                : epsilon_from_risk(out.risk.aggregate, rank_params_);

    std::vector<ScoredDocument> scored = score_all_documents(corpus_, query, interest, out.epsilon,
                                                             rank_params_.seed, trial,
                                                             rank_params_.exec);
    std::sort(scored.begin(), scored.end(), [](const ScoredDocument& a, const ScoredDocument& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.doc_id < b.doc_id;
    });
    if (scored.size() > rank_params_.list_size) scored.resize(rank_params_.list_size);
    out.ranked = std::move(scored);
    return out;
}

void RankingEngine::feedback(const Situation& current, const RankedList& shown,
                             const std::vector<std::string>& clicked) {
    ontologies_.validate(current);
    for (const auto& id : clicked) {
        bool found = false;
        for (const auto& s : shown) {
            if (s.doc_id == id) {
                found = true;
                break;
            }
        }
        if (!found) throw ClickedNotShownError("feedback: clicked document '" + id + "' was not shown");
    }

    std::size_t idx = base_.insert_or_update(current, clicked, corpus_, ontologies_);

    // Risk recomputed against the updated base; the retrieved case is now the
    // situation's own case (similarity 1).
    RiskBreakdown bd = compute_risk(current, &base_.case_at(idx));
    base_.update_situation_risk(idx, bd.aggregate);
    for (std::size_t d = 0; d < ontologies_.dimensions(); ++d) {
        concept_risks_.observe(ontologies_.schema().dimension(d), current.concepts[d], bd.aggregate);
    }
    base_.promote_if_critical(idx);
}

}  // namespace riskrank
