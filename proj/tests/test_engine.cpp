#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "oracle.hpp"
#include "riskrank/engine.hpp"

using riskrank::Corpus;
using riskrank::ContextSchema;
using riskrank::epsilon_from_risk;
using riskrank::Execution;
using riskrank::Ontology;
using riskrank::OntologySet;
using riskrank::Provenance;
using riskrank::Query;
using riskrank::QueryOutcome;
using riskrank::RankingEngine;
using riskrank::RankParams;
using riskrank::RiskConfig;
using riskrank::score_all_documents;
using riskrank::Situation;

namespace {

OntologySet three_dim_set() {
    std::vector<Ontology> onts;
    std::vector<std::string> dims = {"D1", "D2", "D3"};
    for (const auto& d : dims) {
        onts.push_back(Ontology::from_edges(d, "root", {{"root", "A"}, {"A", "B"}, {"A", "C"}}));
    }
    return OntologySet(ContextSchema(dims), std::move(onts));
}

Situation sit(std::vector<std::string> concepts) {
    Situation s;
    s.concepts = std::move(concepts);
    return s;
}

Corpus demo_corpus() {
    Corpus c;
    c.add_document("doc_a", {{"alpha", 2.0}, {"shared", 1.0}});
    c.add_document("doc_b", {{"beta", 1.0}, {"shared", 1.0}});
    c.add_document("doc_c", {{"alpha", 1.0}, {"beta", 1.0}});
    c.add_document("doc_d", {{"gamma", 3.0}});
    c.add_document("doc_e", {{"alpha", 1.0}, {"gamma", 1.0}});
    c.finalize();
    return c;
}

RankParams params(double emin, double emax, std::uint64_t seed) {
    RankParams p;
    p.epsilon_min = emin;
    p.epsilon_max = emax;
    p.seed = seed;
    return p;
}

}  // namespace

TEST_CASE("epsilon schedule: formula values and clamping") {
    RankParams p = params(0.1, 0.9, 1);
    CHECK(epsilon_from_risk(0.0, p) == 0.9);  // epsilon_max at zero risk

    RankParams p2 = params(0.1, 1.0, 1);
    CHECK(epsilon_from_risk(1.0, p2) == 0.1);  // epsilon_min when epsilon_max = 1

    RankParams p3 = params(0.0, 1.0, 1);
    CHECK(epsilon_from_risk(0.5, p3) == doctest::Approx(0.5).epsilon(1e-15));

    // epsilon_max < 1 pushes the formula under epsilon_min; clamp holds
    RankParams p4 = params(0.0, 0.8, 1);
    CHECK(epsilon_from_risk(1.0, p4) == 0.0);
    CHECK(epsilon_from_risk(0.8, p4) == doctest::Approx(0.0).epsilon(1e-12));  // 0.8 - 0.8
    RankParams p5 = params(0.2, 0.8, 1);
    CHECK(epsilon_from_risk(1.0, p5) == 0.2);

    CHECK_THROWS_AS(epsilon_from_risk(-0.1, p), riskrank::DomainError);
    CHECK_THROWS_AS(epsilon_from_risk(1.1, p), riskrank::DomainError);

    RankParams bad = params(0.9, 0.1, 1);
    CHECK_THROWS_AS(epsilon_from_risk(0.5, bad), riskrank::DomainError);
    RankParams zero_list = params(0.0, 1.0, 1);
    zero_list.list_size = 0;
    CHECK_THROWS_AS(zero_list.validate(), riskrank::DomainError);
    RankParams bad_override = params(0.0, 1.0, 1);
    bad_override.epsilon_override = 1.5;
    CHECK_THROWS_AS(bad_override.validate(), riskrank::DomainError);
}

TEST_CASE("epsilon schedule is non-increasing in risk, strictly inside the clamp window") {
    RankParams p = params(0.05, 0.85, 1);
    double prev = 1.0;
    for (int i = 0; i <= 100; ++i) {
        double r = static_cast<double>(i) / 100.0;
        double e = epsilon_from_risk(r, p);
        CHECK(e >= p.epsilon_min);
        CHECK(e <= p.epsilon_max);
        CHECK(e <= prev + 1e-15);
        prev = e;
    }
    // strict decrease while unclamped: risks 0 and 0.4 both stay in window
    CHECK(epsilon_from_risk(0.1, p) > epsilon_from_risk(0.2, p));
}

TEST_CASE("scoring branches: epsilon 0 never explores, epsilon 1 always does") {
    Corpus corpus = demo_corpus();
    Query q = Query::from_terms({"alpha"});

    auto none = score_all_documents(corpus, q, nullptr, 0.0, 7, 0, Execution::Serial);
    for (const auto& s : none) {
        CHECK(s.provenance != Provenance::Random);
        // without an interest, every non-random score is the query cosine
        CHECK(s.provenance == Provenance::Query);
    }

    auto all = score_all_documents(corpus, q, nullptr, 1.0, 7, 0, Execution::Serial);
    for (const auto& s : all) {
        CHECK(s.provenance == Provenance::Random);
        CHECK(s.score >= 0.0);
        CHECK(s.score < 1.0);
    }

    CHECK_THROWS_AS(score_all_documents(corpus, q, nullptr, 1.5, 7, 0, Execution::Serial),
                    riskrank::DomainError);
    Corpus raw;
    raw.add_document("x", {{"a", 1.0}});
    CHECK_THROWS_AS(score_all_documents(raw, q, nullptr, 0.5, 7, 0, Execution::Serial),
                    riskrank::CorpusError);
}

TEST_CASE("random-provenance frequency tracks epsilon") {
    Corpus corpus = demo_corpus();
    Query q = Query::from_terms({"alpha"});
    for (double eps : {0.1, 0.3, 0.7}) {
        long long random_count = 0;
        long long total = 0;
        for (std::uint64_t trial = 0; trial < 20000; ++trial) {
            auto scored = score_all_documents(corpus, q, nullptr, eps, 42, trial, Execution::Serial);
            for (const auto& s : scored) {
                ++total;
                if (s.provenance == Provenance::Random) ++random_count;
            }
        }
        double freq = static_cast<double>(random_count) / static_cast<double>(total);
        CHECK(total == 100000);
        CHECK(std::abs(freq - eps) <= 0.01);
    }
}

TEST_CASE("query-branch scores equal the independent cosine oracle") {
    Corpus corpus = demo_corpus();
    Query q = Query::from_weights({{"alpha", 1.0}, {"beta", 0.5}});
    std::map<std::string, double> qm = {{"alpha", 1.0}, {"beta", 0.5}};

    auto scored = score_all_documents(corpus, q, nullptr, 0.0, 3, 5, Execution::Serial);
    for (const auto& s : scored) {
        std::map<std::string, double> dm;
        for (const auto& [t, w] : corpus.document(s.doc_id).weights.entries()) dm[t] = w;
        CHECK(s.score == doctest::Approx(oracle::cosine(qm, dm)).epsilon(1e-12));
    }
}

TEST_CASE("scoring is deterministic in (seed, trial) and varies across trials") {
    Corpus corpus = demo_corpus();
    Query q = Query::from_terms({"alpha"});
    auto a = score_all_documents(corpus, q, nullptr, 0.5, 99, 4, Execution::Serial);
    auto b = score_all_documents(corpus, q, nullptr, 0.5, 99, 4, Execution::Serial);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].doc_id == b[i].doc_id);
        CHECK(a[i].score == b[i].score);
        CHECK(a[i].provenance == b[i].provenance);
    }
    auto c = score_all_documents(corpus, q, nullptr, 0.5, 99, 5, Execution::Serial);
    bool any_diff = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].score != c[i].score || a[i].provenance != c[i].provenance) any_diff = true;
    }
    CHECK(any_diff);
}

TEST_CASE("cold start at full exploitation: default risk 1 with epsilon_max 1 gives epsilon 0") {
    RiskConfig risk;  // default_risk 1.0
    RankParams p = params(0.0, 1.0, 17);
    RankingEngine engine(three_dim_set(), demo_corpus(), risk, p);

    QueryOutcome out = engine.process_query(sit({"B", "C", "A"}), Query::from_terms({"alpha"}));
    CHECK(out.epsilon == 0.0);
    CHECK(out.risk.defaulted);
    CHECK(out.risk.aggregate == 1.0);
    CHECK_FALSE(out.retrieved_case.has_value());
    CHECK_FALSE(out.risk.rm.has_value());
    CHECK_FALSE(out.risk.rc.has_value());
    CHECK_FALSE(out.risk.rv.has_value());

    // ranking equals the pure query-cosine order with id tie-break
    std::map<std::string, double> qm = {{"alpha", 1.0}};
    std::vector<std::pair<std::string, double>> expect;
    for (const auto& d : engine.corpus().documents()) {
        std::map<std::string, double> dm;
        for (const auto& [t, w] : d.weights.entries()) dm[t] = w;
        expect.emplace_back(d.id, oracle::cosine(qm, dm));
    }
    std::sort(expect.begin(), expect.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    REQUIRE(out.ranked.size() == expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i) {
        CHECK(out.ranked[i].doc_id == expect[i].first);
        CHECK(out.ranked[i].score == doctest::Approx(expect[i].second).epsilon(1e-12));
    }
}

TEST_CASE("list size truncates the ranking") {
    RiskConfig risk;
    RankParams p = params(0.0, 1.0, 17);
    p.list_size = 3;
    RankingEngine engine(three_dim_set(), demo_corpus(), risk, p);
    QueryOutcome out = engine.process_query(sit({"B", "C", "A"}), Query::from_terms({"alpha"}));
    CHECK(out.ranked.size() == 3);
}

TEST_CASE("all risk components at zero drive epsilon to epsilon_max") {
    // No critical seeds and sub-1 default risk: CS stays empty forever, so
    // R_m and R_c are unavailable and only the CTR estimator counts.
    RiskConfig risk;
    risk.default_risk = 0.9;
    RankParams p = params(0.0, 0.8, 23);
    RankingEngine engine(three_dim_set(), demo_corpus(), risk, p);

    Situation s1 = sit({"B", "B", "B"});
    Situation s2 = sit({"root", "root", "root"});
    Query q = Query::from_terms({"alpha"});

    // s1: one list, one click -> CTR 1. s2: two lists, one click -> CTR 0.5.
    QueryOutcome o1 = engine.process_query(s1, q);
    engine.feedback(s1, o1.ranked, {o1.ranked.front().doc_id});
    QueryOutcome o2 = engine.process_query(s2, q);
    engine.feedback(s2, o2.ranked, {o2.ranked.front().doc_id});
    QueryOutcome o3 = engine.process_query(s2, q);
    engine.feedback(s2, o3.ranked, {});

    CHECK(engine.case_base().critical().empty());

    QueryOutcome out = engine.process_query(s1, q);
    // population CTRs {1, 0.5}: mean 0.75, sigma 0.25, floor 0.25; the
    // retrieved case's CTR 1 sits at the top of the band -> R_v = 0
    CHECK_FALSE(out.risk.rm.has_value());
    CHECK_FALSE(out.risk.rc.has_value());
    REQUIRE(out.risk.rv.has_value());
    CHECK(*out.risk.rv == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_FALSE(out.risk.defaulted);
    CHECK(out.risk.aggregate == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(out.epsilon == doctest::Approx(p.epsilon_max).epsilon(1e-12));
}

TEST_CASE("epsilon override pins the exploration rate regardless of risk") {
    RiskConfig risk;
    RankParams p = params(0.0, 0.8, 31);
    p.epsilon_override = 0.0;
    RankingEngine engine(three_dim_set(), demo_corpus(), risk, p);

    Situation s = sit({"B", "C", "A"});
    Query q = Query::from_terms({"alpha"});
    for (int t = 0; t < 5; ++t) {
        QueryOutcome out = engine.process_query(s, q);
        CHECK(out.epsilon == 0.0);
        for (const auto& d : out.ranked) CHECK(d.provenance != Provenance::Random);
        engine.feedback(s, out.ranked, {out.ranked.front().doc_id});
    }
    // risk is still computed and recorded even though epsilon ignores it
    QueryOutcome out = engine.process_query(s, q);
    CHECK(out.risk.aggregate >= 0.0);
    CHECK(out.retrieved_case.has_value());
}

TEST_CASE("feedback rejects clicks on documents that were not shown") {
    RiskConfig risk;
    RankParams p = params(0.0, 1.0, 5);
    p.list_size = 2;
    RankingEngine engine(three_dim_set(), demo_corpus(), risk, p);
    Situation s = sit({"B", "C", "A"});
    QueryOutcome out = engine.process_query(s, Query::from_terms({"alpha"}));
    REQUIRE(out.ranked.size() == 2);
    std::string hidden = "doc_d";
    bool shown = false;
    for (const auto& d : out.ranked) {
        if (d.doc_id == hidden) shown = true;
    }
    REQUIRE_FALSE(shown);
    CHECK_THROWS_AS(engine.feedback(s, out.ranked, {hidden}), riskrank::ClickedNotShownError);
}

TEST_CASE("a situation whose stored risk reaches 1 is promoted into the critical set") {
    // With the cold-start default risk of 1 and no other estimators, the
    // first feedback stores risk 1 and promotes; the second confirms the
    // fixed point once R_m and R_c see the now-critical situation.
    RiskConfig risk;  // default_risk 1.0
    RankParams p = params(0.0, 1.0, 11);
    RankingEngine engine(three_dim_set(), demo_corpus(), risk, p);

    Situation s = sit({"B", "B", "B"});
    Query q = Query::from_terms({"alpha"});

    QueryOutcome o1 = engine.process_query(s, q);
    engine.feedback(s, o1.ranked, {});
    CHECK(engine.case_base().critical().size() == 1);
    CHECK(engine.case_base().is_critical(s));
    CHECK(engine.case_base().case_at(0).risk_history == std::vector<double>{1.0});

    QueryOutcome o2 = engine.process_query(s, q);
    // the situation now coincides with the critical centroid: R_m = 1; the
    // observed concept risks are all 1: R_c = 1; stats still insufficient
    REQUIRE(o2.risk.rm.has_value());
    CHECK(*o2.risk.rm == 1.0);
    REQUIRE(o2.risk.rc.has_value());
    CHECK(*o2.risk.rc == doctest::Approx(1.0).epsilon(1e-12));
    // R_c sums three mu*cv products of 1/3 each, so the aggregate sits within
    // one ulp of 1 and epsilon within one ulp of epsilon_min = 0
    CHECK(o2.epsilon == doctest::Approx(0.0).epsilon(1e-12));

    engine.feedback(s, o2.ranked, {});
    CHECK(engine.case_base().case_at(0).risk_history == std::vector<double>{1.0, 1.0});
    CHECK(*engine.case_base().case_at(0).situation.risk == 1.0);
    CHECK(engine.case_base().critical().size() == 1);  // no duplicate entry
}

TEST_CASE("unknown situations and malformed annotations are rejected") {
    RiskConfig risk;
    RankParams p = params(0.0, 1.0, 13);
    RankingEngine engine(three_dim_set(), demo_corpus(), risk, p);
    CHECK_THROWS_AS(engine.process_query(sit({"B", "C", "nope"}), Query::from_terms({"alpha"})),
                    riskrank::UnknownConceptError);
    CHECK_THROWS_AS(engine.process_query(sit({"B", "C"}), Query::from_terms({"alpha"})),
                    riskrank::DimensionMismatchError);
    CHECK_THROWS_AS(engine.annotate_concept_risk("D9", "A", 0.5), riskrank::DimensionMismatchError);
    CHECK_THROWS_AS(engine.annotate_concept_risk("D1", "zz", 0.5), riskrank::UnknownConceptError);
    CHECK_THROWS_AS(engine.seed_critical_situation(sit({"zz", "B", "B"})),
                    riskrank::UnknownConceptError);
}

TEST_CASE("equal scores break ties by ascending document id") {
    Corpus c;
    c.add_document("m_same", {{"alpha", 1.0}});
    c.add_document("a_same", {{"alpha", 1.0}});
    c.add_document("z_same", {{"alpha", 1.0}});
    c.add_document("other", {{"beta", 2.0}});
    c.finalize();
    RiskConfig risk;
    RankParams p = params(0.0, 1.0, 101);
    RankingEngine engine(three_dim_set(), std::move(c), risk, p);
    QueryOutcome out = engine.process_query(sit({"B", "C", "A"}), Query::from_terms({"alpha"}));
    REQUIRE(out.ranked.size() == 4);
    CHECK(out.ranked[0].doc_id == "a_same");
    CHECK(out.ranked[1].doc_id == "m_same");
    CHECK(out.ranked[2].doc_id == "z_same");
    CHECK(out.ranked[3].doc_id == "other");
}
