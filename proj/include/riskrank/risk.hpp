#pragma once

#include <optional>
#include <vector>

#include "riskrank/casebase.hpp"
#include "riskrank/parallel.hpp"
#include "riskrank/situation.hpp"

namespace riskrank {

// Weights and thresholds for the three risk estimators. The lambdas must be
// nonnegative and sum to 1; components whose estimator is unavailable are
// dropped and the remaining weights renormalized.
struct RiskConfig {
    double lambda_m = 1.0 / 3.0;  // centroid-similarity estimator
    double lambda_c = 1.0 / 3.0;  // concept estimator
    double lambda_v = 1.0 / 3.0;  // CTR-variability estimator
    double similarity_threshold = 0.9;  // B in [0, 1]
    double alpha = 2.0;                 // deviation multiplier in the CTR floor
    double default_risk = 1.0;          // used when no estimator is available

    void validate() const;
};

// Population CTR statistics over cases that have served at least one list.
// sufficient requires two such cases; var_floor = max(mean - alpha*stddev, 0).
struct CtrStatistics {
    std::size_t case_count = 0;
    double mean = 0.0;
    double stddev = 0.0;
    double var_floor = 0.0;
    bool sufficient = false;
};

CtrStatistics ctr_statistics(const CaseBase& base, double alpha);

// CTR-variability estimator on the retrieved case: 1 when its CTR is at or
// below the floor, otherwise 1 - (ctr - floor)/(1 - floor). Unavailable
// without sufficient statistics, a served case, or when the floor reaches 1.
std::optional<double> variance_risk(const Case& retrieved, const CtrStatistics& stats);

// Per-dimension weights for the concept estimator: mean concept risk across
// critical situations (unannotated members count 0), normalized to sum 1.
// Unavailable when critical is empty or every mean is 0.
std::optional<std::vector<double>> concept_weights(const std::vector<Situation>& critical,
                                                   const ConceptRiskTable& table,
                                                   const ContextSchema& schema);

// Weighted sum of the situation's annotated concept risks. Unavailable when
// no concept of the situation carries an annotation or weights are undefined.
std::optional<double> concept_risk(const Situation& s, const ConceptRiskTable& table,
                                   const std::vector<Situation>& critical,
                                   const ContextSchema& schema);

// Centroid-similarity estimator: 1 when sim(current, centroid) >= B, else
// 1 - B + sim. Unavailable when the critical list is empty.
std::optional<double> similarity_risk(const Situation& current, const CaseBase& base,
                                      const OntologySet& ontologies, double threshold,
                                      Execution exec = Execution::Serial);

// (sum lambda_i * r_i) / (sum lambda_i) over available components; nullopt
// when none is available. All components at 1 yield exactly 1.0.
std::optional<double> aggregate_risk(std::optional<double> rm, std::optional<double> rc,
                                     std::optional<double> rv, const RiskConfig& config);

}  // namespace riskrank
