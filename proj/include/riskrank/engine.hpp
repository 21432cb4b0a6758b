#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "riskrank/casebase.hpp"
#include "riskrank/interest.hpp"
#include "riskrank/parallel.hpp"
#include "riskrank/risk.hpp"

namespace riskrank {

// Exploration bounds, list size and the master seed. Every random draw in
// ranking derives from seed, the trial counter and the document index, so
// results are identical for serial and parallel execution.
struct RankParams {
    double epsilon_min = 0.0;
    double epsilon_max = 1.0;
    std::size_t list_size = 10;
    std::uint64_t seed = 0;
    Execution exec = Execution::Serial;
    // Fixes epsilon regardless of risk (the no-risk baseline arm).
    std::optional<double> epsilon_override;

    void validate() const;
};

enum class Provenance { Query, Context, Random };

struct ScoredDocument {
    std::string doc_id;
    double score = 0.0;
    Provenance provenance = Provenance::Query;
};

using RankedList = std::vector<ScoredDocument>;

struct RiskBreakdown {
    std::optional<double> rm, rc, rv;
    double aggregate = 0.0;
    bool defaulted = false;  // no estimator available; default risk used
};

struct QueryOutcome {
    RankedList ranked;        // top list_size, score-descending, id-ascending ties
    double epsilon = 0.0;
    RiskBreakdown risk;
    std::optional<std::size_t> retrieved_case;  // nearest case consulted, if any
};

// clamp(epsilon_max - risk * (1 - epsilon_min), epsilon_min, epsilon_max).
double epsilon_from_risk(double risk, const RankParams& params);

// Scores every corpus document once: with probability epsilon a uniform
// random score, otherwise the query or the interest cosine (interest absent
// falls back to the query score). Exposed for the calibration tests and the
// benchmark; identical across Execution modes.
std::vector<ScoredDocument> score_all_documents(const Corpus& corpus, const Query& query,
                                                const UserInterest* interest, double epsilon,
                                                std::uint64_t seed, std::uint64_t trial,
                                                Execution exec);

// One user's ranking loop: rank under risk-adapted exploration, then learn
// from clicks. Single-writer: process_query only reads shared state, feedback
// is the only mutation path.
class RankingEngine {
public:
    RankingEngine(OntologySet ontologies, Corpus corpus, RiskConfig risk_config, RankParams rank_params);

    // Seed helpers, applied before the first query.
    void seed_critical_situation(const Situation& s);
    void annotate_concept_risk(const std::string& dimension, const std::string& concept_name,
                               double cv, std::uint64_t weight = 1);

    // Ranks the corpus for the situation. Empty case base: query-only scoring
    // at the default risk. Does not mutate the case base; the trial's rec
    // increment lands when feedback() records the list against the case.
    QueryOutcome process_query(const Situation& current, const Query& query);

    // Updates the matched-or-new case with this trial's clicks, recomputes
    // the situation risk, folds it into concept risks, and promotes the
    // situation into the critical list when its stored risk reaches 1.
    void feedback(const Situation& current, const RankedList& shown,
                  const std::vector<std::string>& clicked);

    const CaseBase& case_base() const { return base_; }
    const Corpus& corpus() const { return corpus_; }
    const OntologySet& ontologies() const { return ontologies_; }
    const ConceptRiskTable& concept_risks() const { return concept_risks_; }
    const RiskConfig& risk_config() const { return risk_config_; }
    const RankParams& rank_params() const { return rank_params_; }
    std::uint64_t trials() const { return trial_counter_; }

    // Load a previously saved case base in place of the current one.
    void replace_case_base(CaseBase base) { base_ = std::move(base); }

private:
    RiskBreakdown compute_risk(const Situation& current, const Case* retrieved) const;

    OntologySet ontologies_;
    Corpus corpus_;
    RiskConfig risk_config_;
    RankParams rank_params_;
    CaseBase base_;
    ConceptRiskTable concept_risks_;
    std::uint64_t trial_counter_ = 0;
};

}  // namespace riskrank
