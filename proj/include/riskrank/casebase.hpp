#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "riskrank/interest.hpp"
#include "riskrank/parallel.hpp"
#include "riskrank/situation.hpp"

namespace riskrank {

// One tracked situation with its click history and learned interest.
struct Case {
    Situation situation;                    // situation.risk = stored mean risk, unset until first update
    std::vector<std::string> clicked_docs;  // sorted, unique
    UserInterest interest;                  // empty when clicked_docs is empty
    std::uint64_t rec_count = 0;            // ranked lists served for this situation
    std::uint64_t click_count = 0;          // clicks received, repeats included
    std::vector<double> risk_history;       // every computed risk, in visit order

    // Clamped click-through rate; undefined (nullopt) before the first list.
    std::optional<double> ctr() const;
};

struct Retrieved {
    std::size_t index;
    double similarity;
};

// Linear-scan store of cases plus the critical-situation list. The scan and
// the centroid search are the parallel kernels; both reduce serially so the
// argmax and its tie-break never depend on thread schedule. Ties prefer the
// lowest dimension-ordered concept tuple.
class CaseBase {
public:
    std::size_t size() const { return cases_.size(); }
    bool empty() const { return cases_.empty(); }
    const Case& case_at(std::size_t i) const { return cases_[i]; }
    const std::vector<Case>& cases() const { return cases_; }

    // Most similar stored situation to current; nullopt when empty.
    std::optional<Retrieved> retrieve_nearest(const Situation& current, const OntologySet& ontologies,
                                              Execution exec = Execution::Serial) const;

    // Exact-match update or insert. Counters move here: rec_count += 1,
    // click_count += |clicks|; clicked_docs takes the set union and the
    // interest is rebuilt (empty union -> empty interest). Returns the index.
    std::size_t insert_or_update(const Situation& current, const std::vector<std::string>& clicks,
                                 const Corpus& corpus, const OntologySet& ontologies);

    // Appends one computed risk, stores the running mean on the situation and
    // returns it.
    double update_situation_risk(std::size_t index, double risk);

    // Critical situations: stored risk pinned to 1.
    const std::vector<Situation>& critical() const { return critical_; }
    bool is_critical(const Situation& s) const;
    void seed_critical(Situation s, const OntologySet& ontologies);
    // Moves the case's situation into the critical list once its stored risk
    // reaches 1. Returns true when a promotion happened.
    bool promote_if_critical(std::size_t index);

    // Member of the critical list with the highest mean similarity to all
    // members (self included); nullopt when the list is empty.
    std::optional<Situation> critical_centroid(const OntologySet& ontologies,
                                               Execution exec = Execution::Serial) const;

    // Persistence: {"version": 1, "cases": [...], "critical_situations": [...]}.
    // Round-trips every counter, weight and history bit-for-bit.
    void save_file(const std::string& path, const OntologySet& ontologies) const;
    std::string to_json_text(const OntologySet& ontologies) const;
    static CaseBase load_file(const std::string& path, const OntologySet& ontologies);
    static CaseBase from_json_text(const std::string& text, const OntologySet& ontologies);

private:
    std::optional<std::size_t> find_exact(const Situation& s) const;

    std::vector<Case> cases_;
    std::vector<Situation> critical_;
};

}  // namespace riskrank
