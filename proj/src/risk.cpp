#include "riskrank/risk.hpp"

#include <algorithm>
#include <cmath>

namespace riskrank {

void RiskConfig::validate() const {
    if (lambda_m < 0.0 || lambda_c < 0.0 || lambda_v < 0.0) {
        throw DomainError("risk config: lambdas must be nonnegative");
    }
    if (std::abs(lambda_m + lambda_c + lambda_v - 1.0) > 1e-9) {
        throw DomainError("risk config: lambdas must sum to 1");
    }
    if (similarity_threshold <= 0.0 || similarity_threshold > 1.0) {
        throw DomainError("risk config: similarity threshold must lie in (0, 1]");
    }
    if (alpha <= 0.0) throw DomainError("risk config: alpha must be positive");
    if (default_risk < 0.0 || default_risk > 1.0) {
        throw DomainError("risk config: default risk must lie in [0, 1]");
    }
}

CtrStatistics ctr_statistics(const CaseBase& base, double alpha) {
    if (alpha <= 0.0) throw DomainError("ctr statistics: alpha must be positive");
    CtrStatistics st;
    double sum = 0.0;
    for (const auto& c : base.cases()) {
        if (auto r = c.ctr()) {
            ++st.case_count;
            sum += *r;
        }
    }
    if (st.case_count == 0) return st;
    st.mean = sum / static_cast<double>(st.case_count);
    double sq = 0.0;
    for (const auto& c : base.cases()) {
        if (auto r = c.ctr()) {
            double d = *r - st.mean;
            sq += d * d;
        }
    }
    // Population deviation: the case list is the whole population here.
    st.stddev = std::sqrt(sq / static_cast<double>(st.case_count));
    st.var_floor = std::max(st.mean - alpha * st.stddev, 0.0);
    st.sufficient = st.case_count >= 2;
    return st;
}

std::optional<double> variance_risk(const Case& retrieved, const CtrStatistics& stats) {
    if (!stats.sufficient) return std::nullopt;
    auto ctr = retrieved.ctr();
    if (!ctr) return std::nullopt;
    if (stats.var_floor >= 1.0) return std::nullopt;  // degenerate: every CTR pinned at 1
    if (*ctr <= stats.var_floor) return 1.0;
    return 1.0 - (*ctr - stats.var_floor) / (1.0 - stats.var_floor);
}

std::optional<std::vector<double>> concept_weights(const std::vector<Situation>& critical,
                                                   const ConceptRiskTable& table,
                                                   const ContextSchema& schema) {
    if (critical.empty()) return std::nullopt;
    std::vector<double> mu(schema.size(), 0.0);
    for (std::size_t d = 0; d < schema.size(); ++d) {
        double sum = 0.0;
        for (const auto& s : critical) {
            sum += table.risk(schema.dimension(d), s.concepts[d]).value_or(0.0);
        }
        mu[d] = sum / static_cast<double>(critical.size());
    }
    double total = 0.0;
    for (double m : mu) total += m;
    if (total == 0.0) return std::nullopt;  // no annotated mass anywhere
    for (double& m : mu) m /= total;
    return mu;
}

std::optional<double> concept_risk(const Situation& s, const ConceptRiskTable& table,
                                   const std::vector<Situation>& critical,
                                   const ContextSchema& schema) {
    if (s.concepts.size() != schema.size()) {
        throw DimensionMismatchError("concept risk: situation arity does not match schema");
    }
    auto mu = concept_weights(critical, table, schema);
    if (!mu) return std::nullopt;
    bool any = false;
    double sum = 0.0;
    for (std::size_t d = 0; d < schema.size(); ++d) {
        if (auto cv = table.risk(schema.dimension(d), s.concepts[d])) {
            any = true;
            sum += (*mu)[d] * *cv;
        }
    }
    if (!any) return std::nullopt;  // situation has no annotated concept
    return sum;
}

std::optional<double> similarity_risk(const Situation& current, const CaseBase& base,
                                      const OntologySet& ontologies, double threshold,
                                      Execution exec) {
    if (threshold <= 0.0 || threshold > 1.0) {
        throw DomainError("similarity risk: threshold must lie in (0, 1]");
    }
    auto centroid = base.critical_centroid(ontologies, exec);
    if (!centroid) return std::nullopt;
    double sim = ontologies.situation_similarity(current, *centroid);
    if (sim >= threshold) return 1.0;
    return 1.0 - threshold + sim;
}

std::optional<double> aggregate_risk(std::optional<double> rm, std::optional<double> rc,
                                     std::optional<double> rv, const RiskConfig& config) {
    config.validate();
    for (const auto& r : {rm, rc, rv}) {
        if (r && (*r < 0.0 || *r > 1.0)) throw DomainError("aggregate risk: components must lie in [0, 1]");
    }
    double num = 0.0;
    double den = 0.0;
    if (rm) {
        num += config.lambda_m * *rm;
        den += config.lambda_m;
    }
    if (rc) {
        num += config.lambda_c * *rc;
        den += config.lambda_c;
    }
    if (rv) {
        num += config.lambda_v * *rv;
        den += config.lambda_v;
    }
    if (den == 0.0) return std::nullopt;
    return num / den;
}

}  // namespace riskrank
