// Command-line front end: run a scenario, validate one, or scan a parameter.

#include <cstdint>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "riskrank/harness.hpp"

namespace {

std::vector<std::string> split_csv(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : text) {
        if (ch == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

riskrank::RunOptions make_options(const std::string& seeds_csv, const std::string& arms_csv,
                                  bool parallel) {
    riskrank::RunOptions opts;
    for (const auto& s : split_csv(seeds_csv)) opts.seeds.push_back(std::stoull(s));
    for (const auto& a : split_csv(arms_csv)) {
        auto arm = riskrank::arm_from_label(a);
        if (!arm) throw riskrank::ValidationError("unknown arm '" + a + "'");
        opts.arms.push_back(*arm);
    }
    opts.exec = parallel ? riskrank::Execution::Parallel : riskrank::Execution::Serial;
    return opts;
}

void print_summary(const riskrank::RunResult& result) {
    struct Agg {
        double dwell = 0.0;
        double epsilon = 0.0;
        long long clicks = 0;
        long long n = 0;
    };
    std::map<std::string, Agg> by_arm;
    for (const auto& t : result.trials) {
        Agg& a = by_arm[t.arm];
        a.dwell += t.dwell_sum;
        a.epsilon += t.epsilon;
        a.clicks += t.clicks;
        a.n += 1;
    }
    for (const auto& [arm, a] : by_arm) {
        double n = static_cast<double>(a.n);
        std::printf("%-8s  precision@10 %.4f   dwell/request %.3f min   mean epsilon %.4f\n",
                    arm.c_str(), static_cast<double>(a.clicks) / n, a.dwell / n, a.epsilon / n);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"risk-aware contextual document ranking harness"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_path;
    std::string seeds_csv;
    std::string arms_csv;
    std::string param_spec;
    bool parallel = false;

    CLI::App* run = app.add_subcommand("run", "run a scenario and write the per-day metrics CSV");
    run->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("--out", out_path, "output CSV path")->required();
    run->add_option("--seeds", seeds_csv, "comma-separated seed list (default: scenario seeds)");
    run->add_option("--arms", arms_csv, "comma-separated arms from baseline,rm,full");
    run->add_flag("--parallel", parallel, "run replications with OpenMP");

    CLI::App* validate = app.add_subcommand("validate", "check a scenario file and exit");
    validate->add_option("--scenario", scenario_path, "scenario JSON file")->required();

    CLI::App* grid = app.add_subcommand("grid", "rerun the scenario over a parameter range");
    grid->add_option("--scenario", scenario_path, "scenario JSON file")->required();
    grid->add_option("--param", param_spec, "name=start:stop:step, e.g. B=0.7:0.95:0.05")->required();
    grid->add_option("--out", out_path, "output CSV path")->required();
    grid->add_option("--seeds", seeds_csv, "comma-separated seed list (default: scenario seeds)");
    grid->add_option("--arms", arms_csv, "comma-separated arms from baseline,rm,full");
    grid->add_flag("--parallel", parallel, "run replications with OpenMP");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) {
            riskrank::SimScenario sc = riskrank::SimScenario::load_file(scenario_path);
            std::printf("scenario '%s' OK: %d days x %d trials, %zu situations, %zu docs, %zu arms, %zu seeds\n",
                        sc.name.c_str(), sc.days, sc.trials_per_day, sc.situations.size(),
                        sc.corpus.size(), sc.arms.size(), sc.seeds.size());
            return 0;
        }

        riskrank::SimScenario sc = riskrank::SimScenario::load_file(scenario_path);
        riskrank::RunOptions opts = make_options(seeds_csv, arms_csv, parallel);

        if (run->parsed()) {
            riskrank::RunResult result = riskrank::run_experiment(sc, opts);
            riskrank::write_metrics_csv(result.records, out_path);
            print_summary(result);
            std::printf("wrote %zu rows to %s\n", result.records.size(), out_path.c_str());
            return 0;
        }

        // grid
        auto eq = param_spec.find('=');
        if (eq == std::string::npos) {
            throw riskrank::ValidationError("--param must look like name=start:stop:step");
        }
        std::string param = param_spec.substr(0, eq);
        std::vector<double> values = riskrank::parse_range(param_spec.substr(eq + 1));
        std::vector<riskrank::GridRecord> records = riskrank::grid_scan(sc, param, values, opts);
        riskrank::write_grid_csv(records, out_path);
        std::printf("wrote %zu rows to %s\n", records.size(), out_path.c_str());
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
