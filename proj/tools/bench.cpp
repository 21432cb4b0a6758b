// Compares the serial reference kernels against their OpenMP versions:
// document scoring, nearest-case scan, centroid search, and whole-scenario
// replications. Results must match bitwise; this tool reports wall time.

#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "riskrank/harness.hpp"
#include "riskrank/rng.hpp"

using namespace riskrank;

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

Corpus synth_corpus(std::size_t docs, std::size_t vocab, std::size_t terms_per_doc) {
    Corpus c;
    for (std::size_t i = 0; i < docs; ++i) {
        Rng rng(Rng::mix(42, i));
        std::map<std::string, double> tf;
        while (tf.size() < terms_per_doc) {
            tf["t" + std::to_string(rng.uniform_below(vocab))] = 1.0 + static_cast<double>(rng.uniform_below(4));
        }
        c.add_document("d" + std::to_string(i), std::move(tf));
    }
    c.finalize();
    return c;
}

OntologySet synth_ontologies() {
    std::vector<std::pair<std::string, std::string>> edges;
    // Three-level tree, fanout 8 then 8: 73 concepts.
    for (int i = 0; i < 8; ++i) {
        edges.emplace_back("root", "a" + std::to_string(i));
        for (int j = 0; j < 8; ++j) {
            edges.emplace_back("a" + std::to_string(i), "a" + std::to_string(i) + "_" + std::to_string(j));
        }
    }
    std::vector<Ontology> ontos;
    std::vector<std::string> dims = {"Location", "Time", "Social"};
    for (const auto& d : dims) ontos.push_back(Ontology::from_edges(d, "root", edges));
    return OntologySet(ContextSchema(dims), std::move(ontos));
}

Situation synth_situation(std::uint64_t key) {
    Rng rng(key);
    Situation s;
    for (int d = 0; d < 3; ++d) {
        s.concepts.push_back("a" + std::to_string(rng.uniform_below(8)) + "_" +
                             std::to_string(rng.uniform_below(8)));
    }
    return s;
}

void report(const char* name, double serial_ms, double parallel_ms, bool identical) {
    std::printf("%-28s serial %9.2f ms   parallel %9.2f ms   speedup %5.2fx   %s\n", name, serial_ms,
                parallel_ms, parallel_ms > 0 ? serial_ms / parallel_ms : 0.0,
                identical ? "identical" : "MISMATCH");
}

}  // namespace

int main() {
    std::printf("threads available: %d\n\n", max_threads());

    {
        Corpus corpus = synth_corpus(20000, 4000, 24);
        Query q = Query::from_terms({"t1", "t2", "t3", "t10", "t20"});
        std::vector<ScoredDocument> serial;
        std::vector<ScoredDocument> parallel;
        auto t0 = std::chrono::steady_clock::now();
        for (int rep = 0; rep < 20; ++rep) {
            serial = score_all_documents(corpus, q, nullptr, 0.3, 7, static_cast<std::uint64_t>(rep),
                                         Execution::Serial);
        }
        double s_ms = ms_since(t0);
        t0 = std::chrono::steady_clock::now();
        for (int rep = 0; rep < 20; ++rep) {
            parallel = score_all_documents(corpus, q, nullptr, 0.3, 7, static_cast<std::uint64_t>(rep),
                                           Execution::Parallel);
        }
        double p_ms = ms_since(t0);
        bool same = serial.size() == parallel.size();
        for (std::size_t i = 0; same && i < serial.size(); ++i) {
            same = serial[i].doc_id == parallel[i].doc_id && serial[i].score == parallel[i].score &&
                   serial[i].provenance == parallel[i].provenance;
        }
        report("score 20k docs x20", s_ms, p_ms, same);
    }

    {
        OntologySet ontos = synth_ontologies();
        Corpus corpus = synth_corpus(50, 200, 10);
        CaseBase base;
        for (std::uint64_t i = 0; i < 5000; ++i) {
            base.insert_or_update(synth_situation(i), {}, corpus, ontos);
        }
        Situation probe = synth_situation(999999);
        auto t0 = std::chrono::steady_clock::now();
        std::optional<Retrieved> rs;
        for (int rep = 0; rep < 50; ++rep) rs = base.retrieve_nearest(probe, ontos, Execution::Serial);
        double s_ms = ms_since(t0);
        t0 = std::chrono::steady_clock::now();
        std::optional<Retrieved> rp;
        for (int rep = 0; rep < 50; ++rep) rp = base.retrieve_nearest(probe, ontos, Execution::Parallel);
        double p_ms = ms_since(t0);
        report("nearest over 5k cases x50", s_ms, p_ms,
               rs && rp && rs->index == rp->index && rs->similarity == rp->similarity);

        CaseBase crit;
        for (std::uint64_t i = 0; i < 128; ++i) crit.seed_critical(synth_situation(i), ontos);
        t0 = std::chrono::steady_clock::now();
        auto cs = crit.critical_centroid(ontos, Execution::Serial);
        double cs_ms = ms_since(t0);
        t0 = std::chrono::steady_clock::now();
        auto cp = crit.critical_centroid(ontos, Execution::Parallel);
        double cp_ms = ms_since(t0);
        report("centroid over 128 members", cs_ms, cp_ms, cs && cp && cs->concepts == cp->concepts);
    }

    {
        const char* data_dir = std::getenv("RISKRANK_DATA_DIR");
        std::string scenario_path =
            std::string(data_dir ? data_dir : "data") + "/scenarios/default.json";
        try {
            SimScenario sc = SimScenario::load_file(scenario_path);
            RunOptions serial_opts;
            serial_opts.keep_trials = false;
            auto t0 = std::chrono::steady_clock::now();
            RunResult rs = run_experiment(sc, serial_opts);
            double s_ms = ms_since(t0);
            RunOptions par_opts = serial_opts;
            par_opts.exec = Execution::Parallel;
            t0 = std::chrono::steady_clock::now();
            RunResult rp = run_experiment(sc, par_opts);
            double p_ms = ms_since(t0);
            report("default scenario, all arms", s_ms, p_ms,
                   metrics_to_csv(rs.records) == metrics_to_csv(rp.records));
        } catch (const std::exception& e) {
            std::printf("scenario benchmark skipped: %s\n", e.what());
        }
    }
    return 0;
}
