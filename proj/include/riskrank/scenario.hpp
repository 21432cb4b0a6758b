#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "riskrank/engine.hpp"

namespace riskrank {

// The three exploration policies compared by the harness. Everything else
// (schedule, corpus, clicks, learning) is identical across arms.
enum class Arm { Baseline, RmOnly, Full };

const char* arm_label(Arm a);
std::optional<Arm> arm_from_label(const std::string& label);

// One recurring situation in the schedule, with its query and the ground
// truth of which topics the user actually cares about. Topic relevance can
// differ between the first and the second half of the run (shift_day).
struct ScenarioSituation {
    std::string name;
    std::string class_label;  // free-form; "critical" marks the designated risky phases
    Situation context;
    Query query;
    int weight = 1;
    std::map<std::string, double> relevance_always;
    std::map<std::string, double> relevance_first;   // days before shift_day
    std::map<std::string, double> relevance_second;  // days at or after shift_day

    bool is_critical() const { return class_label == "critical"; }
};

struct ClickModelParams {
    double background_prob = 0.0;      // click probability for irrelevant docs outside critical phases
    double dwell_mean_relevant = 2.0;  // minutes
    double dwell_mean_irrelevant = 0.5;
    std::uint64_t click_seed = 101;
};

struct ConceptAnnotation {
    std::string dimension;
    std::string concept_name;
    double cv = 0.0;
    std::uint64_t weight = 1;
};

// A full experiment description: context model, corpus, user model and the
// engine configuration. Loadable from one JSON file; everything derived from
// it is deterministic given the seeds.
class SimScenario {
public:
    static SimScenario load_file(const std::string& path);
    static SimScenario from_json_text(const std::string& text, const std::string& base_dir);

    std::string name;
    int days = 28;
    int trials_per_day = 100;
    int shift_day = 0;  // 0 = no shift; otherwise 1-based day where *_second applies
    std::vector<std::uint64_t> seeds;
    std::vector<Arm> arms;

    OntologySet ontologies;
    Corpus corpus;
    std::unordered_map<std::string, std::string> doc_topic;  // docs without a topic are never relevant

    RiskConfig risk;
    double epsilon_min = 0.0;
    double epsilon_max = 1.0;
    std::size_t list_size = 10;
    std::uint64_t engine_seed = 0x5eedULL;

    std::vector<Situation> critical_seeds;
    std::vector<ConceptAnnotation> annotations;
    ClickModelParams click;
    std::vector<ScenarioSituation> situations;
    std::vector<std::size_t> schedule;  // situation indices, cycled by global trial number

    // Ground-truth relevance probability for a document on a given 1-based day.
    double relevance_prob(const ScenarioSituation& s, const std::string& doc_id, int day) const;

    // Fully configured engine for one (arm, seed) replication.
    RankingEngine make_engine(Arm arm, std::uint64_t run_seed, Execution exec) const;

private:
    void validate() const;
    const std::map<std::string, double>& window(const ScenarioSituation& s, int day) const;
};

// Deterministic synthetic corpus: per-topic term pools plus shared noise
// vocabulary. Document ids are "<topic>_<index>"; filler docs carry no topic.
struct CorpusGenSpec {
    struct Topic {
        std::string name;
        int docs = 0;
        std::vector<std::string> terms;
        int terms_per_doc = 0;  // 0 = min(8, |terms|)
        int tf_min = 0;         // 0 = inherit [1, global tf_max]
        int tf_max = 0;
    };
    std::uint64_t seed = 1;
    std::vector<Topic> topics;
    int noise_terms = 0;
    int noise_per_doc = 0;
    int filler_docs = 0;
    int filler_terms_per_doc = 4;
    int tf_max = 4;
};

Corpus generate_corpus(const CorpusGenSpec& spec, std::unordered_map<std::string, std::string>* doc_topic);

}  // namespace riskrank
