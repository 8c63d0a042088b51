#include "embanks/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <queue>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace embanks {
namespace {

std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(line.substr(start));
            return out;
        }
        out.emplace_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::vector<std::string> words(std::string_view line) {
    std::vector<std::string> out;
    std::istringstream in{std::string(line)};
    std::string w;
    while (in >> w) out.push_back(w);
    return out;
}

void chomp(std::string& s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
}

std::pair<std::string, std::string> split_column_ref(const std::string& ref, std::size_t lineNo) {
    const auto dot = ref.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == ref.size())
        throw IngestError("schema line " + std::to_string(lineNo) + ": expected <table>.<column>, got '" +
                          ref + "'");
    return {ref.substr(0, dot), ref.substr(dot + 1)};
}

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    [[nodiscard]] std::size_t column(const std::string& name, const std::string& table) const {
        const auto it = std::find(columns.begin(), columns.end(), name);
        if (it == columns.end())
            throw IngestError("table '" + table + "' has no column '" + name + "'");
        return static_cast<std::size_t>(it - columns.begin());
    }
};

Table read_table(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open " + path.string());
    Table t;
    std::string line;
    if (!std::getline(in, line)) return t;
    chomp(line);
    t.columns = split(line, '\t');
    std::size_t lineNo = 1;
    while (std::getline(in, line)) {
        ++lineNo;
        chomp(line);
        if (line.empty()) continue;
        auto fields = split(line, '\t');
        if (fields.size() != t.columns.size())
            throw IngestError(path.string() + ":" + std::to_string(lineNo) + ": expected " +
                              std::to_string(t.columns.size()) + " fields, found " +
                              std::to_string(fields.size()));
        t.rows.push_back(std::move(fields));
    }
    return t;
}

}  // namespace

void IngestSpec::validate() const {
    std::unordered_set<std::string> names;
    for (const auto& t : tables) {
        if (!names.insert(t.name).second) throw IngestError("duplicate table '" + t.name + "'");
    }
    if (tables.size() > 0xFFFF) throw IngestError("too many tables");
    for (const auto& fk : foreignKeys) {
        if (!names.count(fk.fromTable))
            throw IngestError("foreign key references unknown table '" + fk.fromTable + "'");
        if (!names.count(fk.toTable))
            throw IngestError("foreign key references unknown table '" + fk.toTable + "'");
    }
    if (!(forwardWeightDefault > 0.0f)) throw IngestError("forward weight default must be positive");
}

std::optional<std::uint16_t> IngestSpec::table_index(const std::string& name) const {
    for (std::size_t i = 0; i < tables.size(); ++i)
        if (tables[i].name == name) return static_cast<std::uint16_t>(i);
    return std::nullopt;
}

IngestSpec parse_schema(std::string_view text) {
    IngestSpec spec;
    std::size_t lineNo = 0;
    for (auto& raw : split(text, '\n')) {
        ++lineNo;
        chomp(raw);
        const auto hash = raw.find('#');
        const std::string line = raw.substr(0, hash);
        const auto tok = words(line);
        if (tok.empty()) continue;
        const auto where = "schema line " + std::to_string(lineNo) + ": ";
        if (tok[0] == "table") {
            if (tok.size() < 2) throw IngestError(where + "table needs a name");
            TableSpec t{tok[1], {}, std::nullopt};
            for (std::size_t i = 2; i < tok.size(); ++i) {
                const auto eq = tok[i].find('=');
                if (eq == std::string::npos) throw IngestError(where + "expected key=value, got '" + tok[i] + "'");
                const auto key = tok[i].substr(0, eq);
                const auto value = tok[i].substr(eq + 1);
                if (key == "text") {
                    if (!value.empty())
                        for (auto& c : split(value, ',')) t.textColumns.push_back(c);
                } else if (key == "prestige") {
                    t.prestigeColumn = value;
                } else {
                    throw IngestError(where + "unknown table attribute '" + key + "'");
                }
            }
            spec.tables.push_back(std::move(t));
        } else if (tok[0] == "fk") {
            if (tok.size() != 4 || tok[2] != "->")
                throw IngestError(where + "expected 'fk <t1>.<c1> -> <t2>.<c2>'");
            auto [t1, c1] = split_column_ref(tok[1], lineNo);
            auto [t2, c2] = split_column_ref(tok[3], lineNo);
            spec.foreignKeys.push_back({t1, c1, t2, c2});
        } else if (tok[0] == "weight") {
            if (tok.size() != 2) throw IngestError(where + "expected 'weight <value>'");
            try {
                spec.forwardWeightDefault = std::stof(tok[1]);
            } catch (const std::exception&) {
                throw IngestError(where + "bad weight '" + tok[1] + "'");
            }
        } else {
            throw IngestError(where + "unknown directive '" + tok[0] + "'");
        }
    }
    spec.validate();
    return spec;
}

IngestSpec load_schema(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open schema " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_schema(buf.str());
}

IngestResult ingest(const IngestSpec& spec, const std::filesystem::path& dataDir) {
    spec.validate();
    std::vector<Table> tables;
    tables.reserve(spec.tables.size());
    for (const auto& t : spec.tables) tables.push_back(read_table(dataDir / (t.name + ".tsv")));

    IngestResult result;
    std::vector<NodeId> firstNode(tables.size() + 1, 0);
    for (std::size_t t = 0; t < tables.size(); ++t)
        firstNode[t + 1] = firstNode[t] + static_cast<NodeId>(tables[t].rows.size());

    result.meta.relationNames.reserve(spec.tables.size());
    for (const auto& t : spec.tables) result.meta.relationNames.push_back(t.name);
    result.meta.relation.reserve(firstNode.back());
    result.meta.text.reserve(firstNode.back());

    std::vector<std::vector<std::size_t>> textCols(tables.size());
    for (std::size_t t = 0; t < tables.size(); ++t) {
        for (const auto& c : spec.tables[t].textColumns)
            textCols[t].push_back(tables[t].column(c, spec.tables[t].name));
        for (const auto& row : tables[t].rows) {
            std::string text;
            for (auto c : textCols[t]) {
                if (row[c].empty()) continue;
                if (!text.empty()) text += ' ';
                text += row[c];
            }
            result.meta.relation.push_back(static_cast<std::uint16_t>(t));
            result.meta.text.push_back(std::move(text));
        }
    }

    // node type = relation id
    GraphBuilder typed;
    for (std::size_t t = 0; t < tables.size(); ++t)
        for (std::size_t r = 0; r < tables[t].rows.size(); ++r)
            typed.add_node(0.0f, static_cast<std::uint16_t>(t));

    std::vector<std::uint64_t> inDegree(firstNode.back(), 0);
    const float w = spec.forwardWeightDefault;
    for (const auto& fk : spec.foreignKeys) {
        const auto from = *spec.table_index(fk.fromTable);
        const auto to = *spec.table_index(fk.toTable);
        const auto fromCol = tables[from].column(fk.fromColumn, fk.fromTable);
        const auto toCol = tables[to].column(fk.toColumn, fk.toTable);
        std::unordered_map<std::string, NodeId> key;
        key.reserve(tables[to].rows.size());
        for (std::size_t r = 0; r < tables[to].rows.size(); ++r)
            key.emplace(tables[to].rows[r][toCol], firstNode[to] + static_cast<NodeId>(r));
        for (std::size_t r = 0; r < tables[from].rows.size(); ++r) {
            const auto& value = tables[from].rows[r][fromCol];
            if (value.empty()) continue;
            const auto it = key.find(value);
            if (it == key.end()) {
                result.warnings.push_back(fk.fromTable + ".tsv:" + std::to_string(r + 2) +
                                          ": dangling reference " + fk.fromColumn + "=" + value +
                                          " -> " + fk.toTable + "." + fk.toColumn);
                continue;
            }
            const NodeId u = firstNode[from] + static_cast<NodeId>(r);
            typed.add_link(u, it->second, w, w);
            ++inDegree[it->second];
        }
    }

    for (std::size_t t = 0; t < tables.size(); ++t) {
        const auto& col = spec.tables[t].prestigeColumn;
        const auto c = col ? std::optional(tables[t].column(*col, spec.tables[t].name)) : std::nullopt;
        for (std::size_t r = 0; r < tables[t].rows.size(); ++r) {
            const NodeId u = firstNode[t] + static_cast<NodeId>(r);
            float p = static_cast<float>(inDegree[u]);
            if (c) {
                const auto& s = tables[t].rows[r][*c];
                try {
                    p = std::stof(s);
                } catch (const std::exception&) {
                    throw IngestError(spec.tables[t].name + ".tsv:" + std::to_string(r + 2) +
                                      ": bad prestige value '" + s + "'");
                }
                if (!(p >= 0.0f))
                    throw IngestError(spec.tables[t].name + ".tsv:" + std::to_string(r + 2) +
                                      ": negative prestige");
            }
            typed.set_prestige(u, p);
        }
    }
    result.graph = typed.build();
    return result;
}

PruneResult prune_transitive(const DataGraph& g, const IngestSpec& schema) {
    const NodeId n = g.node_count();
    std::vector<std::uint8_t> removed(n, 0);
    for (NodeId u = 0; u < n; ++u) {
        const auto t = g.node_type(u);
        removed[u] = t < schema.tables.size() && schema.tables[t].key_only();
    }

    PruneResult out;
    out.newId.assign(n, kNoNode);
    GraphBuilder b;
    for (NodeId u = 0; u < n; ++u)
        if (!removed[u]) out.newId[u] = b.add_node(g.prestige(u), g.node_type(u));

    using Entry = std::pair<double, NodeId>;
    std::unordered_map<NodeId, double> dist;
    std::map<NodeId, double> reached;
    for (NodeId x = 0; x < n; ++x) {
        if (removed[x]) continue;
        const auto r = g.out_slots(x);
        dist.clear();
        reached.clear();
        std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
        for (EdgeSlot s = r.first; s < r.last; ++s) {
            const NodeId y = g.target(s);
            if (!removed[y]) {
                b.add_edge(out.newId[x], out.newId[y], g.weight(s), g.is_forward(s), g.priority(s));
                continue;
            }
            const double d = g.weight(s);
            auto [it, fresh] = dist.try_emplace(y, d);
            if (fresh || d < it->second) {
                it->second = d;
                heap.emplace(d, y);
            }
        }
        while (!heap.empty()) {
            const auto [d, w] = heap.top();
            heap.pop();
            if (d > dist[w]) continue;
            const auto rw = g.out_slots(w);
            for (EdgeSlot s = rw.first; s < rw.last; ++s) {
                const NodeId y = g.target(s);
                const double nd = d + g.weight(s);
                if (!removed[y]) {
                    if (y == x) continue;
                    auto [it, fresh] = reached.try_emplace(y, nd);
                    if (!fresh && nd < it->second) it->second = nd;
                    continue;
                }
                auto [it, fresh] = dist.try_emplace(y, nd);
                if (fresh || nd < it->second) {
                    it->second = nd;
                    heap.emplace(nd, y);
                }
            }
        }
        for (const auto& [y, d] : reached)
            b.add_edge(out.newId[x], out.newId[y], static_cast<float>(d), x < y, 1.0f);
    }
    out.graph = b.build();
    return out;
}

NodeMeta remap_meta(const NodeMeta& meta, const std::vector<NodeId>& newId) {
    NodeMeta out;
    out.relationNames = meta.relationNames;
    std::size_t kept = 0;
    for (auto id : newId) kept += id != kNoNode;
    out.relation.resize(kept);
    out.text.resize(kept);
    for (std::size_t old = 0; old < newId.size(); ++old) {
        if (newId[old] == kNoNode) continue;
        out.relation[newId[old]] = meta.relation[old];
        out.text[newId[old]] = meta.text[old];
    }
    return out;
}

IngestResult load_database(const IngestSpec& spec, const std::filesystem::path& dataDir, bool prune) {
    auto result = ingest(spec, dataDir);
    result.graph = assign_backward_weights(result.graph, spec.forwardWeightDefault);
    const bool anyKeyOnly =
        std::any_of(spec.tables.begin(), spec.tables.end(), [](const auto& t) { return t.key_only(); });
    if (prune && anyKeyOnly) {
        auto pruned = prune_transitive(result.graph, spec);
        result.meta = remap_meta(result.meta, pruned.newId);
        result.graph = std::move(pruned.graph);
    }
    return result;
}

}  // namespace embanks
