#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "riskrank/scenario.hpp"

namespace riskrank {

struct Click {
    std::string doc_id;
    double dwell_minutes = 0.0;
    bool relevant = false;
};

// Independent click per top-10 document. Relevant docs click with their
// ground-truth probability; irrelevant ones with the background rate, or
// never inside critical situations. Streams are keyed by (click seed, run
// seed, day, trial, doc id) and shared across arms.
std::vector<Click> simulate_user_clicks(const SimScenario& scenario, const ScenarioSituation& situation,
                                        const RankedList& shown, int day, int trial,
                                        std::uint64_t run_seed);

// One CSV row per (day, arm, seed).
struct MetricsRecord {
    int day = 0;
    std::string arm;
    std::uint64_t seed = 0;
    double precision_top10 = 0.0;     // clicks in the top 10 / requests, that day
    double avg_dwell_minutes = 0.0;   // total dwell minutes / requests, that day
    double cumulative_ctr = 0.0;      // clicks / ranked lists, run-to-date
    double epsilon_mean = 0.0;        // mean exploration rate over the day
};

// Per-trial trace kept for the acceptance checks and tests.
struct TrialRecord {
    std::string arm;
    std::uint64_t seed = 0;
    int day = 0;
    int trial = 0;
    std::size_t situation = 0;
    bool critical = false;
    double epsilon = 0.0;
    double risk = 0.0;
    bool defaulted = false;
    int shown_relevant = 0;  // ground-truth relevant docs in the top 10 (diagnostic)
    int clicks = 0;          // clicks on the top 10 this trial
    double dwell_sum = 0.0;
};

struct RunResult {
    std::vector<MetricsRecord> records;  // ordered by (arm, seed, day)
    std::vector<TrialRecord> trials;
};

struct RunOptions {
    std::vector<std::uint64_t> seeds;  // empty = scenario seeds
    std::vector<Arm> arms;             // empty = scenario arms
    Execution exec = Execution::Serial;
    bool keep_trials = true;
};

// Runs every (arm, seed) replication. Replications are independent engines;
// under Execution::Parallel they run concurrently and produce byte-identical
// results to the serial path.
RunResult run_experiment(const SimScenario& scenario, const RunOptions& options = {});

// Header: day,arm,seed,precision_top10,avg_dwell_minutes,cumulative_ctr,epsilon_mean
std::string metrics_to_csv(const std::vector<MetricsRecord>& records);
void write_metrics_csv(const std::vector<MetricsRecord>& records, const std::string& path);

// Whole-run aggregate per (param value, arm, seed) for offline threshold scans.
struct GridRecord {
    std::string param;
    double value = 0.0;
    std::string arm;
    std::uint64_t seed = 0;
    double mean_precision_top10 = 0.0;
    double mean_dwell_minutes = 0.0;  // total dwell / requests, whole run
    double final_cumulative_ctr = 0.0;
    double mean_epsilon = 0.0;
};

// param is one of: B, alpha, default_risk, epsilon_min, epsilon_max,
// background_prob. Values are applied to a copy of the scenario.
std::vector<GridRecord> grid_scan(const SimScenario& scenario, const std::string& param,
                                  const std::vector<double>& values, const RunOptions& options = {});

std::string grid_to_csv(const std::vector<GridRecord>& records);
void write_grid_csv(const std::vector<GridRecord>& records, const std::string& path);

// "start:stop:step" inclusive of stop up to half a step of rounding.
std::vector<double> parse_range(const std::string& text);

}  // namespace riskrank
