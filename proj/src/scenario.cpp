#include "riskrank/scenario.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "json_util.hpp"
#include "riskrank/rng.hpp"

namespace riskrank {

const char* arm_label(Arm a) {
    switch (a) {
        case Arm::Baseline: return "baseline";
        case Arm::RmOnly: return "rm";
        case Arm::Full: return "full";
    }
    return "?";
}

std::optional<Arm> arm_from_label(const std::string& label) {
    if (label == "baseline") return Arm::Baseline;
    if (label == "rm") return Arm::RmOnly;
    if (label == "full") return Arm::Full;
    return std::nullopt;
}

Corpus generate_corpus(const CorpusGenSpec& spec, std::unordered_map<std::string, std::string>* doc_topic) {
    if (spec.topics.empty() && spec.filler_docs == 0) {
        throw ValidationError("corpus generator: nothing to generate");
    }
    if (spec.tf_max < 1) throw ValidationError("corpus generator: tf_max must be >= 1");
    if (spec.noise_per_doc > 0 && spec.noise_terms <= 0) {
        throw ValidationError("corpus generator: noise_per_doc needs noise_terms");
    }

    std::vector<std::string> noise_pool;
    noise_pool.reserve(static_cast<std::size_t>(std::max(spec.noise_terms, 0)));
    for (int i = 0; i < spec.noise_terms; ++i) {
        noise_pool.push_back("noise" + std::to_string(i));
    }

    // One stream per document keyed by (seed, topic index, doc index); the
    // corpus never depends on generation order.
    auto pick_distinct = [](Rng& rng, std::size_t pool, int want, std::vector<std::size_t>& out) {
        out.clear();
        std::vector<std::size_t> idx(pool);
        for (std::size_t i = 0; i < pool; ++i) idx[i] = i;
        int take = std::min<int>(want, static_cast<int>(pool));
        for (int k = 0; k < take; ++k) {
            std::size_t j = k + static_cast<std::size_t>(rng.uniform_below(pool - k));
            std::swap(idx[k], idx[j]);
            out.push_back(idx[k]);
        }
    };

    Corpus corpus;
    std::vector<std::size_t> picked;
    for (std::size_t t = 0; t < spec.topics.size(); ++t) {
        const auto& topic = spec.topics[t];
        if (topic.name.empty() || topic.name == "filler") {
            throw ValidationError("corpus generator: bad topic name");
        }
        if (topic.terms.empty()) {
            throw ValidationError("corpus generator: topic '" + topic.name + "' has no terms");
        }
        int per_doc = topic.terms_per_doc > 0 ? topic.terms_per_doc
                                              : std::min<int>(8, static_cast<int>(topic.terms.size()));
        int tf_lo = topic.tf_min > 0 ? topic.tf_min : 1;
        int tf_hi = topic.tf_max > 0 ? topic.tf_max : spec.tf_max;
        if (tf_hi < tf_lo) throw ValidationError("corpus generator: topic '" + topic.name + "' tf range");
        for (int d = 0; d < topic.docs; ++d) {
            Rng rng(Rng::mix(Rng::mix(spec.seed, t + 1), static_cast<std::uint64_t>(d)));
            std::map<std::string, double> tf;
            pick_distinct(rng, topic.terms.size(), per_doc, picked);
            for (std::size_t i : picked) {
                tf[topic.terms[i]] =
                    static_cast<double>(tf_lo) + static_cast<double>(rng.uniform_below(tf_hi - tf_lo + 1));
            }
            pick_distinct(rng, noise_pool.size(), spec.noise_per_doc, picked);
            for (std::size_t i : picked) {
                tf[noise_pool[i]] = 1.0 + static_cast<double>(rng.uniform_below(spec.tf_max));
            }
            std::ostringstream id;
            id << topic.name << '_' << (d < 100 ? (d < 10 ? "00" : "0") : "") << d;
            if (doc_topic) (*doc_topic)[id.str()] = topic.name;
            corpus.add_document(id.str(), std::move(tf));
        }
    }
    for (int d = 0; d < spec.filler_docs; ++d) {
        Rng rng(Rng::mix(Rng::mix(spec.seed, 0), static_cast<std::uint64_t>(d)));
        std::map<std::string, double> tf;
        pick_distinct(rng, noise_pool.size(), spec.filler_terms_per_doc, picked);
        for (std::size_t i : picked) {
            tf[noise_pool[i]] = 1.0 + static_cast<double>(rng.uniform_below(spec.tf_max));
        }
        if (tf.empty()) throw ValidationError("corpus generator: filler docs need noise terms");
        std::ostringstream id;
        id << "filler_" << (d < 100 ? (d < 10 ? "00" : "0") : "") << d;
        corpus.add_document(id.str(), std::move(tf));
    }
    corpus.finalize();
    return corpus;
}

namespace {

using nlohmann::json;

double get_number(const json& j, const char* key, double fallback, bool required = false) {
    auto it = j.find(key);
    if (it == j.end()) {
        if (required) throw ValidationError(std::string("scenario: missing field '") + key + "'");
        return fallback;
    }
    if (!it->is_number()) throw ValidationError(std::string("scenario: field '") + key + "' must be a number");
    return it->get<double>();
}

std::map<std::string, double> topic_probs(const json& j, const std::string& where) {
    std::map<std::string, double> out;
    if (!j.is_object()) throw ValidationError("scenario: " + where + " must map topic -> probability");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!it.value().is_number()) throw ValidationError("scenario: " + where + " probabilities must be numbers");
        double p = it.value().get<double>();
        if (p < 0.0 || p > 1.0) throw ValidationError("scenario: " + where + " probability out of [0, 1]");
        out[it.key()] = p;
    }
    return out;
}

CorpusGenSpec parse_genspec(const json& j) {
    CorpusGenSpec spec;
    spec.seed = static_cast<std::uint64_t>(get_number(j, "seed", 1));
    spec.noise_terms = static_cast<int>(get_number(j, "noise_terms", 0));
    spec.noise_per_doc = static_cast<int>(get_number(j, "noise_per_doc", 0));
    spec.filler_docs = static_cast<int>(get_number(j, "filler_docs", 0));
    spec.filler_terms_per_doc = static_cast<int>(get_number(j, "filler_terms_per_doc", 4));
    spec.tf_max = static_cast<int>(get_number(j, "tf_max", 4));
    if (!j.contains("topics") || !j["topics"].is_array()) {
        throw ValidationError("scenario: corpus generator needs a topics array");
    }
    for (const auto& jt : j["topics"]) {
        CorpusGenSpec::Topic t;
        if (!jt.contains("name") || !jt["name"].is_string()) {
            throw ValidationError("scenario: every topic needs a name");
        }
        t.name = jt["name"].get<std::string>();
        t.docs = static_cast<int>(get_number(jt, "docs", 0, true));
        t.terms_per_doc = static_cast<int>(get_number(jt, "terms_per_doc", 0));
        t.tf_min = static_cast<int>(get_number(jt, "tf_min", 0));
        t.tf_max = static_cast<int>(get_number(jt, "tf_max", 0));
        if (!jt.contains("terms") || !jt["terms"].is_array()) {
            throw ValidationError("scenario: topic '" + t.name + "' needs a terms array");
        }
        for (const auto& term : jt["terms"]) t.terms.push_back(term.get<std::string>());
        spec.topics.push_back(std::move(t));
    }
    return spec;
}

}  // namespace

SimScenario SimScenario::from_json_text(const std::string& text, const std::string& base_dir) {
    json j = detail::parse_json(text, "scenario");
    if (!j.is_object()) throw ValidationError("scenario: expected a JSON object");

    SimScenario sc;
    sc.name = j.value("name", std::string("unnamed"));
    sc.days = static_cast<int>(get_number(j, "days", 28));
    sc.trials_per_day = static_cast<int>(get_number(j, "trials_per_day", 100));
    sc.shift_day = static_cast<int>(get_number(j, "shift_day", 0));
    sc.engine_seed = static_cast<std::uint64_t>(get_number(j, "engine_seed", 0x5eed));

    if (!j.contains("seeds") || !j["seeds"].is_array() || j["seeds"].empty()) {
        throw ValidationError("scenario: seeds must be a nonempty array");
    }
    for (const auto& s : j["seeds"]) sc.seeds.push_back(s.get<std::uint64_t>());

    if (!j.contains("arms") || !j["arms"].is_array() || j["arms"].empty()) {
        throw ValidationError("scenario: arms must be a nonempty array");
    }
    for (const auto& a : j["arms"]) {
        auto arm = arm_from_label(a.get<std::string>());
        if (!arm) throw ValidationError("scenario: unknown arm '" + a.get<std::string>() + "'");
        sc.arms.push_back(*arm);
    }

    if (!j.contains("dimensions") || !j["dimensions"].is_array()) {
        throw ValidationError("scenario: dimensions must be an array");
    }
    std::vector<std::string> dims;
    for (const auto& d : j["dimensions"]) dims.push_back(d.get<std::string>());

    if (!j.contains("ontologies") || !j["ontologies"].is_array()) {
        throw ValidationError("scenario: ontologies must be an array");
    }
    std::vector<Ontology> ontos;
    for (const auto& jo : j["ontologies"]) {
        if (jo.is_string()) {
            std::filesystem::path p = jo.get<std::string>();
            if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
            ontos.push_back(Ontology::load_file(p.string()));
        } else {
            ontos.push_back(Ontology::from_json_text(jo.dump(), "(inline)"));
        }
    }
    sc.ontologies = OntologySet(ContextSchema(dims), std::move(ontos));

    if (!j.contains("corpus") || !j["corpus"].is_object()) {
        throw ValidationError("scenario: corpus must be an object");
    }
    if (j["corpus"].contains("generate")) {
        sc.corpus = generate_corpus(parse_genspec(j["corpus"]["generate"]), &sc.doc_topic);
    } else if (j["corpus"].contains("file")) {
        std::filesystem::path p = j["corpus"]["file"].get<std::string>();
        if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
        sc.corpus = Corpus::load_jsonl(p.string());
        if (j["corpus"].contains("doc_topics")) {
            for (auto it = j["corpus"]["doc_topics"].begin(); it != j["corpus"]["doc_topics"].end(); ++it) {
                sc.doc_topic[it.key()] = it.value().get<std::string>();
            }
        }
    } else {
        throw ValidationError("scenario: corpus needs either generate or file");
    }

    if (j.contains("risk")) {
        const auto& jr = j["risk"];
        if (jr.contains("lambda")) {
            sc.risk.lambda_m = get_number(jr["lambda"], "m", sc.risk.lambda_m);
            sc.risk.lambda_c = get_number(jr["lambda"], "c", sc.risk.lambda_c);
            sc.risk.lambda_v = get_number(jr["lambda"], "v", sc.risk.lambda_v);
        }
        sc.risk.similarity_threshold = get_number(jr, "B", sc.risk.similarity_threshold);
        sc.risk.alpha = get_number(jr, "alpha", sc.risk.alpha);
        sc.risk.default_risk = get_number(jr, "default_risk", sc.risk.default_risk);
    }
    if (j.contains("rank")) {
        const auto& jr = j["rank"];
        sc.epsilon_min = get_number(jr, "epsilon_min", sc.epsilon_min);
        sc.epsilon_max = get_number(jr, "epsilon_max", sc.epsilon_max);
        sc.list_size = static_cast<std::size_t>(get_number(jr, "list_size", 10));
    }

    if (j.contains("critical_situations")) {
        for (const auto& js : j["critical_situations"]) {
            sc.critical_seeds.push_back(detail::situation_from_json(sc.ontologies, js));
        }
    }
    if (j.contains("concept_risks")) {
        for (auto dim = j["concept_risks"].begin(); dim != j["concept_risks"].end(); ++dim) {
            for (auto it = dim.value().begin(); it != dim.value().end(); ++it) {
                ConceptAnnotation a;
                a.dimension = dim.key();
                a.concept_name = it.key();
                if (it.value().is_number()) {
                    a.cv = it.value().get<double>();
                } else {
                    a.cv = get_number(it.value(), "cv", 0.0, true);
                    a.weight = static_cast<std::uint64_t>(get_number(it.value(), "weight", 1));
                }
                sc.annotations.push_back(std::move(a));
            }
        }
    }

    if (j.contains("click")) {
        const auto& jc = j["click"];
        sc.click.background_prob = get_number(jc, "background_prob", sc.click.background_prob);
        sc.click.dwell_mean_relevant = get_number(jc, "dwell_mean_relevant", sc.click.dwell_mean_relevant);
        sc.click.dwell_mean_irrelevant =
            get_number(jc, "dwell_mean_irrelevant", sc.click.dwell_mean_irrelevant);
        sc.click.click_seed = static_cast<std::uint64_t>(get_number(jc, "click_seed", sc.click.click_seed));
    }

    if (!j.contains("situations") || !j["situations"].is_array() || j["situations"].empty()) {
        throw ValidationError("scenario: situations must be a nonempty array");
    }
    for (const auto& js : j["situations"]) {
        ScenarioSituation s;
        s.name = js.value("name", std::string());
        s.class_label = js.value("class", std::string("default"));
        if (!js.contains("context")) throw ValidationError("scenario: situation needs a context");
        s.context = detail::situation_from_json(sc.ontologies, js["context"]);
        if (!js.contains("query")) throw ValidationError("scenario: situation needs a query");
        if (js["query"].is_array()) {
            std::vector<std::string> terms;
            for (const auto& t : js["query"]) terms.push_back(t.get<std::string>());
            s.query = Query::from_terms(terms);
        } else {
            std::map<std::string, double> w;
            for (auto it = js["query"].begin(); it != js["query"].end(); ++it) {
                w[it.key()] = it.value().get<double>();
            }
            s.query = Query::from_weights(w);
        }
        s.weight = static_cast<int>(get_number(js, "weight", 1));
        if (js.contains("relevance")) {
            const auto& jr = js["relevance"];
            if (jr.contains("always")) s.relevance_always = topic_probs(jr["always"], "relevance.always");
            if (jr.contains("first_half")) {
                s.relevance_first = topic_probs(jr["first_half"], "relevance.first_half");
            }
            if (jr.contains("second_half")) {
                s.relevance_second = topic_probs(jr["second_half"], "relevance.second_half");
            }
        }
        sc.situations.push_back(std::move(s));
    }

    for (std::size_t i = 0; i < sc.situations.size(); ++i) {
        for (int w = 0; w < sc.situations[i].weight; ++w) sc.schedule.push_back(i);
    }

    sc.validate();
    return sc;
}

SimScenario SimScenario::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("scenario: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_json_text(buf.str(), std::filesystem::path(path).parent_path().string());
}

void SimScenario::validate() const {
    if (days < 1) throw ValidationError("scenario: days must be >= 1");
    if (trials_per_day < 1) throw ValidationError("scenario: trials_per_day must be >= 1");
    if (shift_day < 0 || shift_day > days + 1) throw ValidationError("scenario: shift_day out of range");
    std::set<std::uint64_t> seed_set(seeds.begin(), seeds.end());
    if (seed_set.size() != seeds.size()) throw ValidationError("scenario: duplicate seeds");
    std::set<std::string> arm_set;
    for (Arm a : arms) {
        if (!arm_set.insert(arm_label(a)).second) throw ValidationError("scenario: duplicate arms");
    }
    risk.validate();
    RankParams rp;
    rp.epsilon_min = epsilon_min;
    rp.epsilon_max = epsilon_max;
    rp.list_size = list_size;
    rp.validate();
    if (corpus.size() < list_size) {
        throw ValidationError("scenario: corpus smaller than the ranked list");
    }
    if (click.background_prob < 0.0 || click.background_prob > 1.0) {
        throw ValidationError("scenario: background_prob out of [0, 1]");
    }
    if (click.dwell_mean_relevant < 0.0 || click.dwell_mean_irrelevant < 0.0) {
        throw ValidationError("scenario: dwell means must be nonnegative");
    }

    std::set<std::string> names;
    std::set<std::string> topics;
    for (const auto& [doc, topic] : doc_topic) topics.insert(topic);
    for (const auto& s : situations) {
        if (s.name.empty()) throw ValidationError("scenario: situation without a name");
        if (!names.insert(s.name).second) throw ValidationError("scenario: duplicate situation '" + s.name + "'");
        if (s.weight < 1) throw ValidationError("scenario: situation '" + s.name + "' weight must be >= 1");
        bool any_term = false;
        for (const auto& [term, w] : s.query.weights.entries()) {
            (void)w;
            if (corpus.doc_frequency(term) > 0) any_term = true;
        }
        if (!any_term) {
            throw ValidationError("scenario: situation '" + s.name + "' query matches no corpus term");
        }
        for (const auto* window : {&s.relevance_always, &s.relevance_first, &s.relevance_second}) {
            for (const auto& [topic, p] : *window) {
                (void)p;
                if (!topics.count(topic)) {
                    throw ValidationError("scenario: situation '" + s.name + "' references unknown topic '" +
                                          topic + "'");
                }
            }
        }
    }
    for (const auto& a : annotations) {
        std::size_t d = ontologies.schema().index_of(a.dimension);
        if (!ontologies.ontology(d).contains(a.concept_name)) {
            throw UnknownConceptError("scenario: annotated concept '" + a.concept_name +
                                      "' not in ontology '" + a.dimension + "'");
        }
        if (a.cv < 0.0 || a.cv > 1.0) throw ValidationError("scenario: annotation cv out of [0, 1]");
    }
}

const std::map<std::string, double>& SimScenario::window(const ScenarioSituation& s, int day) const {
    if (shift_day > 0 && day >= shift_day) return s.relevance_second;
    return s.relevance_first;
}

double SimScenario::relevance_prob(const ScenarioSituation& s, const std::string& doc_id, int day) const {
    auto it = doc_topic.find(doc_id);
    if (it == doc_topic.end()) return 0.0;
    const std::string& topic = it->second;
    double p = 0.0;
    if (auto a = s.relevance_always.find(topic); a != s.relevance_always.end()) p = a->second;
    const auto& win = window(s, day);
    if (auto w = win.find(topic); w != win.end()) p = std::max(p, w->second);
    return p;
}

RankingEngine SimScenario::make_engine(Arm arm, std::uint64_t run_seed, Execution exec) const {
    RiskConfig rc = risk;
    if (arm == Arm::RmOnly) {
        rc.lambda_m = 1.0;
        rc.lambda_c = 0.0;
        rc.lambda_v = 0.0;
    }
    RankParams rp;
    rp.epsilon_min = epsilon_min;
    rp.epsilon_max = epsilon_max;
    rp.list_size = list_size;
    rp.exec = exec;
    rp.seed = Rng::mix(Rng::mix(engine_seed, run_seed), static_cast<std::uint64_t>(arm));
    if (arm == Arm::Baseline) rp.epsilon_override = 0.0;

    RankingEngine engine(ontologies, corpus, rc, rp);
    for (const auto& s : critical_seeds) engine.seed_critical_situation(s);
    for (const auto& a : annotations) {
        engine.annotate_concept_risk(a.dimension, a.concept_name, a.cv, a.weight);
    }
    return engine;
}

}  // namespace riskrank
