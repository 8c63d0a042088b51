// Command-line front end. Structured results go to stdout as JSON lines;
// --stats and diagnostics go to stderr.

#include <chrono>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "embanks/embanks.hpp"
#include "json.hpp"

using nlohmann::json;
using namespace embanks;

namespace {

struct Common {
    bool stats = false;
};

struct ScoreOptions {
    double lambda = 0.2;
    std::string combine = "additive";
    std::string edgeScore = "as-written";
    std::size_t maxCandidates = 2000;
    double mu = 0.5;
    bool steiner = false;

    void add(CLI::App* cmd) {
        cmd->add_option("--lambda", lambda, "Node-score weight in [0,1]")->capture_default_str();
        cmd->add_option("--combine", combine, "additive or multiplicative")->capture_default_str();
        cmd->add_option("--edge-score", edgeScore, "as-written or reciprocal-sum")->capture_default_str();
        cmd->add_option("--max-candidates", maxCandidates, "Candidate cap per search, 0 = none")
            ->capture_default_str();
        cmd->add_option("--mu", mu, "Activation attenuation")->capture_default_str();
        cmd->add_flag("--steiner", steiner, "Drop answers that strictly contain another answer");
    }

    SearchConfig config(std::size_t k) const {
        SearchConfig c;
        c.k = k;
        c.maxCandidates = maxCandidates;
        c.mu = mu;
        c.steinerFilter = steiner;
        c.score.lambda = lambda;
        if (combine == "additive") c.score.combine = Combine::additive;
        else if (combine == "multiplicative") c.score.combine = Combine::multiplicative;
        else throw std::invalid_argument("unknown --combine '" + combine + "'");
        if (edgeScore == "as-written") c.score.edgeVariant = EdgeScoreVariant::as_written;
        else if (edgeScore == "reciprocal-sum") c.score.edgeVariant = EdgeScoreVariant::reciprocal_sum;
        else throw std::invalid_argument("unknown --edge-score '" + edgeScore + "'");
        c.score.validate();
        return c;
    }
};

struct EngineOptions {
    std::size_t k = 10;
    std::size_t limit = 100;
    double gamma = 0.5;
    std::size_t refetch = 3;
    std::uint64_t budget = 0;
    std::string algo1 = "backward";
    std::string algo2 = "bidi";
    std::string policy = "keyword";
    std::uint64_t seed = 1;
    ScoreOptions score;

    void add(CLI::App* cmd) {
        cmd->add_option("--k", k, "Answers to return")->capture_default_str();
        cmd->add_option("--limit", limit, "Cluster-level answers collected in phase 1")->capture_default_str();
        cmd->add_option("--gamma", gamma, "Score-drop ratio that triggers a re-fetch")->capture_default_str();
        cmd->add_option("--refetch", refetch, "Maximum re-fetch rounds")->capture_default_str();
        cmd->add_option("--budget", budget, "Extra bytes for clusters beyond phase-1 answers")->capture_default_str();
        cmd->add_option("--algo1", algo1, "Phase-1 search: backward or bidi")->capture_default_str();
        cmd->add_option("--algo2", algo2, "Phase-2 search: backward or bidi")->capture_default_str();
        cmd->add_option("--policy", policy, "Extra clusters: none, keyword or keyword-random")->capture_default_str();
        cmd->add_option("--seed", seed, "Seed for random extra-cluster selection")->capture_default_str();
        score.add(cmd);
    }

    EngineConfig config() const {
        EngineConfig c;
        c.phase1Limit = limit;
        c.phase1Algorithm = parse_algorithm(algo1);
        c.phase2Algorithm = parse_algorithm(algo2);
        c.gamma = gamma;
        c.maxRefetch = refetch;
        c.memoryBudgetBytes = budget;
        c.extraClusterPolicy = parse_extra_policy(policy);
        c.rngSeed = seed;
        c.search = score.config(k);
        c.validate();
        return c;
    }
};

json answer_json(std::size_t rank, const ScoredAnswer& a, const std::function<std::string(NodeId)>& text) {
    json edges = json::array();
    for (const auto& e : a.tree.edges) edges.push_back({e.parent, e.child, e.weight});
    json texts = json::object();
    for (auto u : a.tree.nodes) texts[std::to_string(u)] = text(u);
    return {{"rank", rank},     {"score", a.score},
            {"N", a.N},         {"E", a.E},
            {"root", a.tree.root}, {"nodes", a.tree.nodes},
            {"edges", edges},   {"keyword_nodes", a.tree.keywordNodes},
            {"text", texts}};
}

void emit(const json& j) { std::cout << j.dump() << '\n'; }

void print_stats(bool enabled, double seconds, const SearchStats& s) {
    if (!enabled) return;
    std::cerr << json{{"time_s", seconds}, {"nodes_touched", s.nodesTouched}, {"nodes_explored", s.nodesExplored}}.dump()
              << '\n';
}

double since(std::chrono::steady_clock::time_point t) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

IngestSpec schema_for(const std::string& schema, const std::string& data) {
    return load_schema(schema.empty() ? std::filesystem::path(data) / "schema.txt" : std::filesystem::path(schema));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Disk-backed keyword search over relational data graphs"};
    app.require_subcommand(1);
    Common common;
    app.add_flag("--stats", common.stats, "Print time and node counts to stderr");

    // ingest
    std::string schemaPath, dataDir, outDir;
    bool noPrune = false, indexRelations = false;
    auto* ingestCmd = app.add_subcommand("ingest", "Load TSV tables into a store");
    ingestCmd->add_option("--schema", schemaPath, "Schema file")->required();
    ingestCmd->add_option("--data", dataDir, "Directory of <table>.tsv files")->required();
    ingestCmd->add_option("--out", outDir, "Store directory")->required();
    ingestCmd->add_flag("--no-prune", noPrune, "Keep tuples of key-only relations");
    ingestCmd->add_flag("--index-relations", indexRelations, "Index relation names as terms");
    ingestCmd->add_flag("--stats", common.stats, "Print time and node counts to stderr");

    // cluster
    std::string algo = "greedymin", edgeCombiner = "invsum", prestige = "sum", store;
    std::uint32_t size = 100;
    std::uint64_t clusterSeed = 1;
    bool tables = false;
    auto* clusterCmd = app.add_subcommand("cluster", "Cluster an ingested store and write cluster files");
    clusterCmd->add_option("--algo", algo, "close1, greedymin, connection or adjacency")->capture_default_str();
    clusterCmd->add_option("--size", size, "Maximum cluster size")->capture_default_str();
    clusterCmd->add_option("--edge-combiner", edgeCombiner, "invsum, harmonic or min")->capture_default_str();
    clusterCmd->add_option("--prestige", prestige, "sum, max or avg")->capture_default_str();
    clusterCmd->add_option("--store", store, "Store directory")->required();
    clusterCmd->add_option("--seed", clusterSeed, "Seed for randomized algorithms")->capture_default_str();
    clusterCmd->add_flag("--tables", tables, "Also store entry/exit cost tables");
    clusterCmd->add_flag("--stats", common.stats, "Print time and node counts to stderr");

    // query
    std::string query;
    EngineOptions engine;
    auto* queryCmd = app.add_subcommand("query", "Two-phase keyword query over a clustered store");
    queryCmd->add_option("--store", store, "Store directory")->required();
    engine.add(queryCmd);
    queryCmd->add_option("keywords", query, "Query terms")->required();
    queryCmd->add_flag("--stats", common.stats, "Print time and node counts to stderr");

    // baseline
    std::string baselineAlgo = "bidi";
    std::size_t baselineK = 10;
    ScoreOptions baselineScore;
    auto* baselineCmd = app.add_subcommand("baseline", "Single-phase search over the full graph");
    baselineCmd->add_option("--data", dataDir, "Directory of <table>.tsv files")->required();
    baselineCmd->add_option("--schema", schemaPath, "Schema file (default: <data>/schema.txt)");
    baselineCmd->add_option("--algo", baselineAlgo, "backward or bidi")->capture_default_str();
    baselineCmd->add_option("--k", baselineK, "Answers to return")->capture_default_str();
    baselineCmd->add_flag("--no-prune", noPrune, "Keep tuples of key-only relations");
    baselineCmd->add_flag("--index-relations", indexRelations, "Index relation names as terms");
    baselineScore.add(baselineCmd);
    baselineCmd->add_option("keywords", query, "Query terms")->required();
    baselineCmd->add_flag("--stats", common.stats, "Print time and node counts to stderr");

    // compare
    std::string queriesFile;
    EngineOptions compareEngine;
    auto* compareCmd = app.add_subcommand("compare", "Precision of the two-phase engine against the baseline");
    compareCmd->add_option("--store", store, "Store directory")->required();
    compareCmd->add_option("--data", dataDir, "Directory of <table>.tsv files")->required();
    compareCmd->add_option("--schema", schemaPath, "Schema file (default: <data>/schema.txt)");
    compareCmd->add_option("--queries", queriesFile, "One query per line")->required();
    compareCmd->add_option("--baseline-algo", baselineAlgo, "backward or bidi")->capture_default_str();
    compareCmd->add_flag("--no-prune", noPrune, "Keep tuples of key-only relations");
    compareCmd->add_flag("--index-relations", indexRelations, "Index relation names as terms");
    compareEngine.add(compareCmd);
    compareCmd->add_flag("--stats", common.stats, "Print time and node counts to stderr");

    // synth
    std::string specPath;
    auto* synthCmd = app.add_subcommand("synth", "Generate a synthetic bibliographic corpus");
    synthCmd->add_option("--spec", specPath, "JSON spec")->required();
    synthCmd->add_option("--out", outDir, "Output directory")->required();
    synthCmd->add_flag("--stats", common.stats, "Print time and node counts to stderr");

    CLI11_PARSE(app, argc, argv);
    const auto start = std::chrono::steady_clock::now();

    try {
        if (*ingestCmd) {
            auto spec = load_schema(schemaPath);
            auto db = load_database(spec, dataDir, !noPrune);
            for (const auto& w : db.warnings) std::cerr << "warning: " << w << '\n';
            const auto idx = build_index(db.meta, {indexRelations});
            std::filesystem::create_directories(outDir);
            write_tuples(db.graph, db.meta, std::filesystem::path(outDir) / "tuples.emg",
                         std::filesystem::path(outDir) / "text.dat");
            write_keyword_index(idx, std::filesystem::path(outDir) / "index.kwi");
            emit({{"command", "ingest"},
                  {"nodes", db.graph.node_count()},
                  {"slots", db.graph.slot_count()},
                  {"terms", idx.term_count()},
                  {"warnings", db.warnings.size()},
                  {"estimated_bytes", estimate_memory(db.graph).bytes}});
            print_stats(common.stats, since(start), {});
        } else if (*clusterCmd) {
            const std::filesystem::path dir(store);
            auto [g, meta] = read_tuples(dir / "tuples.emg", dir / "text.dat");
            const auto idx = read_keyword_index(dir / "index.kwi");
            const auto cl = run_clustering(parse_cluster_algorithm(algo), g, size, clusterSeed);
            const WeightConfig wcfg{parse_edge_combiner(edgeCombiner), parse_prestige_combiner(prestige)};
            write_cluster_store(dir, g, meta, idx, cl, wcfg, tables);
            const auto cg = read_compressed_graph(dir / "graph.emb");
            emit({{"command", "cluster"},
                  {"algorithm", algo},
                  {"clusters", cl.cluster_count()},
                  {"superedges", cg.clusterGraph.slot_count()},
                  {"node_graph_bytes", estimate_memory(g).bytes},
                  {"cluster_graph_bytes", estimate_memory(cg.clusterGraph).bytes}});
            print_stats(common.stats, since(start), {});
        } else if (*queryCmd) {
            const Store st(store);
            const auto r = two_phase_query(st, query, engine.config());
            for (std::size_t i = 0; i < r.answers.size(); ++i)
                emit(answer_json(i + 1, r.answers[i], [&](NodeId u) { return r.nodeText.at(u); }));
            emit({{"expanded_clusters", r.expandedClusterIds},
                  {"phase1_answers", r.phase1Answers.size()},
                  {"refetch_events", r.refetchEvents}});
            print_stats(common.stats, since(start), r.stats);
        } else if (*baselineCmd) {
            auto db = load_database(schema_for(schemaPath, dataDir), dataDir, !noPrune);
            const auto idx = build_index(db.meta, {indexRelations});
            const auto r = single_phase_query(db.graph, idx, query, parse_algorithm(baselineAlgo),
                                              baselineScore.config(baselineK));
            for (std::size_t i = 0; i < r.answers.size(); ++i)
                emit(answer_json(i + 1, r.answers[i], [&](NodeId u) { return db.meta.text[u]; }));
            print_stats(common.stats, since(start), r.stats);
        } else if (*compareCmd) {
            const Store st(store);
            auto db = load_database(schema_for(schemaPath, dataDir), dataDir, !noPrune);
            const auto idx = build_index(db.meta, {indexRelations});
            const auto cfg = compareEngine.config();
            std::ifstream in(queriesFile);
            if (!in) throw std::runtime_error("cannot open " + queriesFile);
            std::vector<QueryComparison> rows;
            SearchStats total;
            std::string line;
            while (std::getline(in, line)) {
                if (tokenize(line).empty()) continue;
                QueryComparison q;
                try {
                    const auto sys = two_phase_query(st, line, cfg);
                    const auto base =
                        single_phase_query(db.graph, idx, line, parse_algorithm(baselineAlgo), cfg.search);
                    q = compare_precision(sys.answers, base.answers);
                    total += sys.stats;
                } catch (const NoAnswerError&) {
                }
                q.query = line;
                emit({{"query", q.query},
                      {"exact_overlap", q.exactOverlap},
                      {"acceptable", q.acceptableCount},
                      {"system_answers", q.systemCount},
                      {"baseline_answers", q.baselineCount}});
                rows.push_back(q);
            }
            const auto report = summarize(std::move(rows));
            emit({{"queries", report.perQuery.size()},
                  {"mean_exact_overlap", report.meanExactOverlap},
                  {"mean_acceptable", report.meanAcceptable}});
            print_stats(common.stats, since(start), total);
        } else if (*synthCmd) {
            const auto spec = load_synth_spec(specPath);
            generate_synthetic(spec, outDir);
            emit({{"command", "synth"},
                  {"papers", spec.papers},
                  {"authors", spec.authors},
                  {"seed", spec.seed}});
            print_stats(common.stats, since(start), {});
        }
    } catch (const NoAnswerError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
