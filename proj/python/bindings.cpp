#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "embanks/embanks.hpp"

namespace py = pybind11;
using namespace embanks;

namespace {

py::dict answer_dict(const ScoredAnswer& a, const std::function<std::string(NodeId)>& text) {
    py::list edges;
    for (const auto& e : a.tree.edges) edges.append(py::make_tuple(e.parent, e.child, e.weight));
    py::dict d;
    d["score"] = a.score;
    d["N"] = a.N;
    d["E"] = a.E;
    d["root"] = a.tree.root;
    d["nodes"] = a.tree.nodes;
    d["edges"] = edges;
    d["keyword_nodes"] = a.tree.keywordNodes;
    if (text) {
        py::dict texts;
        for (auto u : a.tree.nodes) texts[py::int_(u)] = text(u);
        d["text"] = texts;
    }
    return d;
}

py::dict stats_dict(const SearchStats& s) {
    py::dict d;
    d["nodes_touched"] = s.nodesTouched;
    d["nodes_explored"] = s.nodesExplored;
    d["answers_emitted"] = s.answersEmitted;
    d["seconds"] = s.elapsedSeconds;
    return d;
}

SearchConfig search_config(std::size_t k, std::size_t maxCandidates, double mu, double lambda, bool steiner) {
    SearchConfig cfg;
    cfg.k = k;
    cfg.maxCandidates = maxCandidates;
    cfg.mu = mu;
    cfg.score.lambda = lambda;
    cfg.steinerFilter = steiner;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Disk-backed keyword search over relational data graphs";

    py::register_exception<NoAnswerError>(m, "NoAnswerError", PyExc_LookupError);
    py::register_exception<StoreError>(m, "StoreError", PyExc_IOError);
    py::register_exception<IngestError>(m, "IngestError", PyExc_ValueError);

    py::class_<DataGraph>(m, "Graph")
        .def_property_readonly("node_count", &DataGraph::node_count)
        .def_property_readonly("slot_count", &DataGraph::slot_count)
        .def("out_edges",
             [](const DataGraph& g, NodeId u) {
                 if (u >= g.node_count()) throw py::index_error("node out of range");
                 py::list out;
                 const auto r = g.out_slots(u);
                 for (EdgeSlot s = r.first; s < r.last; ++s)
                     out.append(py::make_tuple(g.target(s), g.weight(s), g.is_forward(s)));
                 return out;
             })
        .def("prestige", [](const DataGraph& g) { return std::vector<float>(g.prestige().begin(), g.prestige().end()); })
        .def("estimated_bytes", [](const DataGraph& g) { return estimate_memory(g).bytes; });

    py::class_<IngestResult>(m, "Database")
        .def_property_readonly("graph", [](const IngestResult& d) -> const DataGraph& { return d.graph; },
                               py::return_value_policy::reference_internal)
        .def_property_readonly("text", [](const IngestResult& d) { return d.meta.text; })
        .def_property_readonly("warnings", [](const IngestResult& d) { return d.warnings; });

    py::class_<KeywordIndex>(m, "KeywordIndex")
        .def_property_readonly("term_count", &KeywordIndex::term_count)
        .def("lookup", [](const KeywordIndex& idx, const std::string& term) {
            const auto p = idx.lookup(normalize_term(term));
            return std::vector<std::uint32_t>(p.begin(), p.end());
        });

    py::class_<Clustering>(m, "Clustering")
        .def_property_readonly("cluster_count", &Clustering::cluster_count)
        .def_property_readonly("node_mapping", [](const Clustering& c) { return c.nodeMapping; })
        .def_readonly("max_cluster_size", &Clustering::maxClusterSize)
        .def("members", [](const Clustering& c, ClusterId id) {
            if (id >= c.cluster_count()) throw py::index_error("cluster out of range");
            const auto mem = c.members(id);
            return std::vector<NodeId>(mem.begin(), mem.end());
        });

    py::class_<Store>(m, "Store")
        .def(py::init<std::filesystem::path>(), py::arg("dir"))
        .def_property_readonly("cluster_count", [](const Store& s) { return s.compressed().clustering.cluster_count(); })
        .def_property_readonly("cluster_reads", &Store::cluster_reads);

    m.def("tokenize", &tokenize, py::arg("text"));
    m.def("estimate_memory", [](std::uint64_t nodes, std::uint64_t slots) { return estimate_memory(nodes, slots).bytes; },
          py::arg("nodes"), py::arg("slots"));

    m.def(
        "synth",
        [](const std::string& specJson, const std::filesystem::path& out) {
            generate_synthetic(parse_synth_spec(specJson), out);
        },
        py::arg("spec_json"), py::arg("out_dir"), "Write a synthetic corpus and its schema.txt.");

    m.def(
        "load_database",
        [](const std::filesystem::path& schema, const std::filesystem::path& data, bool prune) {
            py::gil_scoped_release release;
            return load_database(load_schema(schema), data, prune);
        },
        py::arg("schema"), py::arg("data_dir"), py::arg("prune") = true);

    m.def(
        "build_index", [](const IngestResult& db, bool relations) { return build_index(db.meta, {relations}); },
        py::arg("db"), py::arg("index_relations") = false);

    m.def(
        "cluster",
        [](const DataGraph& g, const std::string& algo, std::uint32_t size, std::uint64_t seed) {
            py::gil_scoped_release release;
            return run_clustering(parse_cluster_algorithm(algo), g, size, seed);
        },
        py::arg("graph"), py::arg("algorithm") = "greedymin", py::arg("size") = 100, py::arg("seed") = 1);

    m.def(
        "write_store",
        [](const std::filesystem::path& dir, const IngestResult& db, const KeywordIndex& idx, const Clustering& cl,
           const std::string& edgeCombiner, const std::string& prestige) {
            py::gil_scoped_release release;
            std::filesystem::create_directories(dir);
            write_tuples(db.graph, db.meta, dir / "tuples.emg", dir / "text.dat");
            write_keyword_index(idx, dir / "index.kwi");
            write_cluster_store(dir, db.graph, db.meta, idx, cl,
                                {parse_edge_combiner(edgeCombiner), parse_prestige_combiner(prestige)});
        },
        py::arg("dir"), py::arg("db"), py::arg("index"), py::arg("clustering"), py::arg("edge_combiner") = "invsum",
        py::arg("prestige") = "sum");

    m.def(
        "query",
        [](const Store& store, const std::string& q, std::size_t k, std::size_t limit, double gamma,
           std::size_t refetch, std::uint64_t budget, const std::string& algo1, const std::string& algo2,
           const std::string& policy, std::uint64_t seed, std::size_t maxCandidates, double mu, double lambda,
           bool steiner) {
            EngineConfig cfg;
            cfg.search = search_config(k, maxCandidates, mu, lambda, steiner);
            cfg.phase1Limit = limit;
            cfg.gamma = gamma;
            cfg.maxRefetch = refetch;
            cfg.memoryBudgetBytes = budget;
            cfg.phase1Algorithm = parse_algorithm(algo1);
            cfg.phase2Algorithm = parse_algorithm(algo2);
            cfg.extraClusterPolicy = parse_extra_policy(policy);
            cfg.rngSeed = seed;
            QueryResult r;
            {
                py::gil_scoped_release release;
                r = two_phase_query(store, q, cfg);
            }
            py::list answers;
            for (const auto& a : r.answers) answers.append(answer_dict(a, [&](NodeId u) { return r.nodeText.at(u); }));
            py::dict out;
            out["answers"] = answers;
            out["expanded_clusters"] = r.expandedClusterIds;
            out["phase1_answers"] = r.phase1Answers.size();
            out["refetch_events"] = r.refetchEvents;
            out["stats"] = stats_dict(r.stats);
            return out;
        },
        py::arg("store"), py::arg("query"), py::arg("k") = 10, py::arg("limit") = 100, py::arg("gamma") = 0.5,
        py::arg("refetch") = 3, py::arg("budget") = 0, py::arg("algo1") = "backward", py::arg("algo2") = "bidi",
        py::arg("policy") = "keyword", py::arg("seed") = 1, py::arg("max_candidates") = 2000, py::arg("mu") = 0.5,
        py::arg("lambda_") = 0.2, py::arg("steiner") = false);

    m.def(
        "search",
        [](const IngestResult& db, const KeywordIndex& idx, const std::string& q, const std::string& algo,
           std::size_t k, std::size_t maxCandidates, double mu, double lambda, bool steiner) {
            SearchResult r;
            {
                py::gil_scoped_release release;
                r = single_phase_query(db.graph, idx, q, parse_algorithm(algo),
                                       search_config(k, maxCandidates, mu, lambda, steiner));
            }
            py::list answers;
            for (const auto& a : r.answers) answers.append(answer_dict(a, [&](NodeId u) { return db.meta.text[u]; }));
            py::dict out;
            out["answers"] = answers;
            out["stats"] = stats_dict(r.stats);
            return out;
        },
        py::arg("db"), py::arg("index"), py::arg("query"), py::arg("algorithm") = "bidi", py::arg("k") = 10,
        py::arg("max_candidates") = 2000, py::arg("mu") = 0.5, py::arg("lambda_") = 0.2, py::arg("steiner") = false);
}
