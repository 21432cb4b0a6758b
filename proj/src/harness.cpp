#include "riskrank/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "riskrank/rng.hpp"

namespace riskrank {

std::vector<Click> simulate_user_clicks(const SimScenario& scenario, const ScenarioSituation& situation,
                                        const RankedList& shown, int day, int trial,
                                        std::uint64_t run_seed) {
    std::vector<Click> clicks;
    const std::size_t top = std::min<std::size_t>(shown.size(), 10);
    const std::uint64_t k1 = Rng::mix(scenario.click.click_seed, run_seed);
    const std::uint64_t k2 = Rng::mix(k1, static_cast<std::uint64_t>(day));
    const std::uint64_t k3 = Rng::mix(k2, static_cast<std::uint64_t>(trial));
    for (std::size_t i = 0; i < top; ++i) {
        const std::string& id = shown[i].doc_id;
        double p = scenario.relevance_prob(situation, id, day);
        bool relevant = p > 0.0;
        if (!relevant) p = situation.is_critical() ? 0.0 : scenario.click.background_prob;
        if (p <= 0.0) continue;
        Rng rng(Rng::mix(k3, hash_string(id.data(), id.size())));
        if (rng.uniform() >= p) continue;
        Click c;
        c.doc_id = id;
        c.relevant = relevant;
        c.dwell_minutes = rng.exponential(relevant ? scenario.click.dwell_mean_relevant
                                                   : scenario.click.dwell_mean_irrelevant);
        clicks.push_back(std::move(c));
    }
    return clicks;
}

namespace {

struct Replication {
    Arm arm;
    std::uint64_t seed;
    std::vector<MetricsRecord> records;
    std::vector<TrialRecord> trials;
};

void run_replication(const SimScenario& sc, Replication& rep, Execution exec, bool keep_trials) {
    RankingEngine engine = sc.make_engine(rep.arm, rep.seed, exec);
    const std::size_t schedule_len = sc.schedule.size();
    std::uint64_t cum_clicks = 0;
    std::uint64_t cum_lists = 0;
    long long global_trial = 0;

    for (int day = 1; day <= sc.days; ++day) {
        double eps_sum = 0.0;
        double dwell_sum = 0.0;
        std::uint64_t day_clicks = 0;

        for (int t = 0; t < sc.trials_per_day; ++t, ++global_trial) {
            const ScenarioSituation& sit =
                sc.situations[sc.schedule[static_cast<std::size_t>(global_trial) % schedule_len]];
            QueryOutcome outcome = engine.process_query(sit.context, sit.query);

            int relevant_shown = 0;
            const std::size_t top = std::min<std::size_t>(outcome.ranked.size(), 10);
            for (std::size_t i = 0; i < top; ++i) {
                if (sc.relevance_prob(sit, outcome.ranked[i].doc_id, day) > 0.0) ++relevant_shown;
            }

            std::vector<Click> clicks = simulate_user_clicks(sc, sit, outcome.ranked, day, t, rep.seed);
            std::vector<std::string> clicked_ids;
            clicked_ids.reserve(clicks.size());
            double trial_dwell = 0.0;
            for (const auto& c : clicks) {
                clicked_ids.push_back(c.doc_id);
                trial_dwell += c.dwell_minutes;
            }
            engine.feedback(sit.context, outcome.ranked, clicked_ids);

            eps_sum += outcome.epsilon;
            dwell_sum += trial_dwell;
            day_clicks += clicks.size();

            if (keep_trials) {
                TrialRecord tr;
                tr.arm = arm_label(rep.arm);
                tr.seed = rep.seed;
                tr.day = day;
                tr.trial = t;
                tr.situation = sc.schedule[static_cast<std::size_t>(global_trial) % schedule_len];
                tr.critical = sit.is_critical();
                tr.epsilon = outcome.epsilon;
                tr.risk = outcome.risk.aggregate;
                tr.defaulted = outcome.risk.defaulted;
                tr.shown_relevant = relevant_shown;
                tr.clicks = static_cast<int>(clicks.size());
                tr.dwell_sum = trial_dwell;
                rep.trials.push_back(std::move(tr));
            }
        }

        cum_clicks += day_clicks;
        cum_lists += static_cast<std::uint64_t>(sc.trials_per_day);

        MetricsRecord r;
        r.day = day;
        r.arm = arm_label(rep.arm);
        r.seed = rep.seed;
        r.precision_top10 = static_cast<double>(day_clicks) / static_cast<double>(sc.trials_per_day);
        r.avg_dwell_minutes = dwell_sum / static_cast<double>(sc.trials_per_day);
        r.cumulative_ctr = static_cast<double>(cum_clicks) / static_cast<double>(cum_lists);
        r.epsilon_mean = eps_sum / static_cast<double>(sc.trials_per_day);
        rep.records.push_back(std::move(r));
    }
}

}  // namespace

RunResult run_experiment(const SimScenario& scenario, const RunOptions& options) {
    const std::vector<std::uint64_t>& seeds = options.seeds.empty() ? scenario.seeds : options.seeds;
    const std::vector<Arm>& arms = options.arms.empty() ? scenario.arms : options.arms;
    if (seeds.empty() || arms.empty()) throw ValidationError("run: need at least one arm and one seed");

    std::vector<Replication> reps;
    for (Arm arm : arms) {
        for (std::uint64_t seed : seeds) reps.push_back(Replication{arm, seed, {}, {}});
    }

    // Replications are independent; the parallel path distributes them and
    // the canonical (arm, seed) order below fixes the output either way.
    if (options.exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic)
        for (long long i = 0; i < static_cast<long long>(reps.size()); ++i) {
            run_replication(scenario, reps[static_cast<std::size_t>(i)], options.exec,
                            options.keep_trials);
        }
    } else {
        for (auto& rep : reps) run_replication(scenario, rep, options.exec, options.keep_trials);
    }

    RunResult out;
    for (auto& rep : reps) {
        out.records.insert(out.records.end(), rep.records.begin(), rep.records.end());
        out.trials.insert(out.trials.end(), rep.trials.begin(), rep.trials.end());
    }
    return out;
}

namespace {

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

}  // namespace

std::string metrics_to_csv(const std::vector<MetricsRecord>& records) {
    std::ostringstream out;
    out << "day,arm,seed,precision_top10,avg_dwell_minutes,cumulative_ctr,epsilon_mean\n";
    for (const auto& r : records) {
        out << r.day << ',' << r.arm << ',' << r.seed << ',' << fmt6(r.precision_top10) << ','
            << fmt6(r.avg_dwell_minutes) << ',' << fmt6(r.cumulative_ctr) << ','
            << fmt6(r.epsilon_mean) << '\n';
    }
    return out.str();
}

void write_metrics_csv(const std::vector<MetricsRecord>& records, const std::string& path) {
    if (records.empty()) throw ValidationError("metrics: no records to write");
    std::ofstream out(path);
    if (!out) throw ValidationError("metrics: cannot write '" + path + "'");
    out << metrics_to_csv(records);
}

std::vector<GridRecord> grid_scan(const SimScenario& scenario, const std::string& param,
                                  const std::vector<double>& values, const RunOptions& options) {
    if (values.empty()) throw ValidationError("grid: no values");
    std::vector<GridRecord> out;
    for (double v : values) {
        SimScenario sc = scenario;
        if (param == "B") {
            sc.risk.similarity_threshold = v;
        } else if (param == "alpha") {
            sc.risk.alpha = v;
        } else if (param == "default_risk") {
            sc.risk.default_risk = v;
        } else if (param == "epsilon_min") {
            sc.epsilon_min = v;
        } else if (param == "epsilon_max") {
            sc.epsilon_max = v;
        } else if (param == "background_prob") {
            sc.click.background_prob = v;
        } else {
            throw ValidationError("grid: unknown parameter '" + param + "'");
        }
        sc.risk.validate();

        RunOptions opts = options;
        opts.keep_trials = true;
        RunResult result = run_experiment(sc, opts);

        // Whole-run aggregates per (arm, seed), trials carry the raw sums.
        struct Agg {
            double eps = 0.0;
            double dwell = 0.0;
            long long n = 0;
            long long clicks = 0;
        };
        std::map<std::pair<std::string, std::uint64_t>, Agg> by_rep;
        for (const auto& t : result.trials) {
            Agg& a = by_rep[{t.arm, t.seed}];
            a.eps += t.epsilon;
            a.dwell += t.dwell_sum;
            a.clicks += t.clicks;
            a.n += 1;
        }
        std::map<std::pair<std::string, std::uint64_t>, double> final_ctr;
        for (const auto& r : result.records) final_ctr[{r.arm, r.seed}] = r.cumulative_ctr;

        for (const auto& [key, a] : by_rep) {
            GridRecord g;
            g.param = param;
            g.value = v;
            g.arm = key.first;
            g.seed = key.second;
            g.mean_precision_top10 = static_cast<double>(a.clicks) / static_cast<double>(a.n);
            g.mean_dwell_minutes = a.dwell / static_cast<double>(a.n);
            g.final_cumulative_ctr = final_ctr[key];
            g.mean_epsilon = a.eps / static_cast<double>(a.n);
            out.push_back(std::move(g));
        }
    }
    return out;
}

std::string grid_to_csv(const std::vector<GridRecord>& records) {
    std::ostringstream out;
    out << "param,value,arm,seed,mean_precision_top10,mean_dwell_minutes,final_cumulative_ctr,"
           "mean_epsilon\n";
    for (const auto& r : records) {
        out << r.param << ',' << fmt6(r.value) << ',' << r.arm << ',' << r.seed << ','
            << fmt6(r.mean_precision_top10) << ',' << fmt6(r.mean_dwell_minutes) << ','
            << fmt6(r.final_cumulative_ctr) << ',' << fmt6(r.mean_epsilon) << '\n';
    }
    return out.str();
}

void write_grid_csv(const std::vector<GridRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ValidationError("grid: cannot write '" + path + "'");
    out << grid_to_csv(records);
}

std::vector<double> parse_range(const std::string& text) {
    double start = 0.0;
    double stop = 0.0;
    double step = 0.0;
    char extra = 0;
    int n = std::sscanf(text.c_str(), "%lf:%lf:%lf%c", &start, &stop, &step, &extra);
    if (n == 1) return {start};
    if (n != 3) throw ValidationError("range: expected start:stop:step, got '" + text + "'");
    if (step <= 0.0 || stop < start) throw ValidationError("range: need step > 0 and stop >= start");
    std::vector<double> out;
    for (double v = start; v <= stop + step * 0.5; v += step) out.push_back(v);
    return out;
}

}  // namespace riskrank
