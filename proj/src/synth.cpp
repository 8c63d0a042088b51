#include "embanks/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "json.hpp"

namespace embanks {
namespace {

using Rng = std::mt19937_64;

std::uint32_t uniform(Rng& rng, std::uint32_t n) {
    return std::uniform_int_distribution<std::uint32_t>(0, n - 1)(rng);
}

bool coin(Rng& rng, double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; }

class Zipf {
public:
    Zipf(std::uint32_t n, double s) : cdf_(n) {
        double total = 0.0;
        for (std::uint32_t r = 0; r < n; ++r) {
            total += 1.0 / std::pow(static_cast<double>(r + 1), s);
            cdf_[r] = total;
        }
        for (auto& c : cdf_) c /= total;
    }
    std::uint32_t operator()(Rng& rng) const {
        const double x = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
        const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), x);
        return static_cast<std::uint32_t>(std::min<std::size_t>(it - cdf_.begin(), cdf_.size() - 1));
    }

private:
    std::vector<double> cdf_;
};

/// Picks a partner from the same community with probability locality.
std::uint32_t pick_partner(Rng& rng, const std::vector<std::vector<std::uint32_t>>& byCommunity,
                           std::uint32_t community, std::uint32_t total, double locality) {
    const auto& local = byCommunity[community];
    if (!local.empty() && coin(rng, locality)) return local[uniform(rng, static_cast<std::uint32_t>(local.size()))];
    return uniform(rng, total);
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + path.string());
}

}  // namespace

SynthSpec parse_synth_spec(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    if (!j.is_object()) throw std::invalid_argument("synth spec must be a JSON object");
    SynthSpec s;
    for (const auto& [key, v] : j.items()) {
        if (key == "papers") s.papers = v.get<std::uint32_t>();
        else if (key == "authors") s.authors = v.get<std::uint32_t>();
        else if (key == "writes") s.writes = v.get<std::uint32_t>();
        else if (key == "cites") s.cites = v.get<std::uint32_t>();
        else if (key == "communities") s.communities = v.get<std::uint32_t>();
        else if (key == "vocabulary") s.vocabulary = v.get<std::uint32_t>();
        else if (key == "title_words") s.titleWords = v.get<std::uint32_t>();
        else if (key == "zipf") s.zipf = v.get<double>();
        else if (key == "locality") s.locality = v.get<double>();
        else if (key == "high_terms") s.highTerms = v.get<std::map<std::string, double>>();
        else if (key == "low_terms") s.lowTerms = v.get<std::map<std::string, std::uint32_t>>();
        else if (key == "seed") s.seed = v.get<std::uint64_t>();
        else throw std::invalid_argument("unknown synth spec key '" + key + "'");
    }
    return s;
}

SynthSpec load_synth_spec(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_synth_spec(buf.str());
}

void generate_synthetic(const SynthSpec& spec, const std::filesystem::path& outDir) {
    std::filesystem::create_directories(outDir);
    Rng rng(spec.seed);
    const std::uint32_t k = std::max<std::uint32_t>(1, spec.communities);

    std::vector<std::uint32_t> paperCommunity(spec.papers), authorCommunity(spec.authors);
    std::vector<std::vector<std::uint32_t>> papersIn(k), authorsIn(k);
    for (std::uint32_t p = 0; p < spec.papers; ++p) {
        paperCommunity[p] = uniform(rng, k);
        papersIn[paperCommunity[p]].push_back(p);
    }
    for (std::uint32_t a = 0; a < spec.authors; ++a) {
        authorCommunity[a] = uniform(rng, k);
        authorsIn[authorCommunity[a]].push_back(a);
    }

    std::vector<std::string> titles(spec.papers);
    if (spec.vocabulary > 0) {
        const Zipf zipf(spec.vocabulary, spec.zipf);
        for (auto& t : titles)
            for (std::uint32_t w = 0; w < spec.titleWords; ++w) {
                if (!t.empty()) t += ' ';
                t += "w" + std::to_string(zipf(rng));
            }
    }
    for (const auto& [term, fraction] : spec.highTerms)
        for (auto& t : titles)
            if (coin(rng, fraction)) t += (t.empty() ? "" : " ") + term;
    for (const auto& [term, count] : spec.lowTerms) {
        std::vector<std::uint32_t> ids(spec.papers);
        for (std::uint32_t p = 0; p < spec.papers; ++p) ids[p] = p;
        const auto n = std::min<std::uint32_t>(count, spec.papers);
        for (std::uint32_t i = 0; i < n; ++i) {
            std::swap(ids[i], ids[i + uniform(rng, spec.papers - i)]);
            auto& t = titles[ids[i]];
            t += (t.empty() ? "" : " ") + term;
        }
    }

    std::ostringstream paper, author, writes, cites;
    paper << "id\ttitle\n";
    for (std::uint32_t p = 0; p < spec.papers; ++p) paper << p << '\t' << titles[p] << '\n';
    author << "id\tname\n";
    for (std::uint32_t a = 0; a < spec.authors; ++a)
        author << a << '\t' << "author" << a << " s" << uniform(rng, 200) << '\n';

    writes << "paper_id\tauthor_id\n";
    if (spec.papers > 0 && spec.authors > 0) {
        std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
        for (std::uint64_t tries = 0; seen.size() < spec.writes && tries < 20ull * spec.writes + 100; ++tries) {
            const auto p = uniform(rng, spec.papers);
            const auto a = pick_partner(rng, authorsIn, paperCommunity[p], spec.authors, spec.locality);
            if (seen.emplace(p, a).second) writes << p << '\t' << a << '\n';
        }
    }
    cites << "citing\tcited\n";
    if (spec.papers > 1) {
        std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
        for (std::uint64_t tries = 0; seen.size() < spec.cites && tries < 20ull * spec.cites + 100; ++tries) {
            const auto p = uniform(rng, spec.papers);
            const auto q = pick_partner(rng, papersIn, paperCommunity[p], spec.papers, spec.locality);
            if (p != q && seen.emplace(p, q).second) cites << p << '\t' << q << '\n';
        }
    }

    write_text(outDir / "schema.txt",
               "table paper text=title\n"
               "table author text=name\n"
               "table writes\n"
               "table cites\n"
               "fk writes.paper_id -> paper.id\n"
               "fk writes.author_id -> author.id\n"
               "fk cites.citing -> paper.id\n"
               "fk cites.cited -> paper.id\n");
    write_text(outDir / "paper.tsv", paper.str());
    write_text(outDir / "author.tsv", author.str());
    write_text(outDir / "writes.tsv", writes.str());
    write_text(outDir / "cites.tsv", cites.str());
}

}  // namespace embanks
