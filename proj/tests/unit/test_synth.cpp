#include <gtest/gtest.h>

#include <fstream>
#include <iterator>
#include <set>

#include "oracles.hpp"

using namespace embanks;
namespace fs = std::filesystem;

namespace {

std::vector<std::string> lines(const fs::path& p) {
    std::ifstream in(p);
    std::vector<std::string> out;
    for (std::string l; std::getline(in, l);) out.push_back(l);
    return out;
}

std::string bytes(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST(Synth, ParsesSpecAndRejectsUnknownKeys) {
    const auto s = parse_synth_spec(R"({"papers": 50, "high_terms": {"xml": 0.2}, "low_terms": {"soumen": 3}, "seed": 9})");
    EXPECT_EQ(s.papers, 50u);
    EXPECT_DOUBLE_EQ(s.highTerms.at("xml"), 0.2);
    EXPECT_EQ(s.lowTerms.at("soumen"), 3u);
    EXPECT_EQ(s.seed, 9u);
    EXPECT_EQ(s.authors, SynthSpec{}.authors);
    EXPECT_THROW(parse_synth_spec(R"({"paperz": 5})"), std::invalid_argument);
    EXPECT_ANY_THROW(parse_synth_spec("not json"));
}

TEST(Synth, GeneratesRequestedShape) {
    SynthSpec s;
    s.papers = 200;
    s.authors = 60;
    s.writes = 400;
    s.cites = 300;
    s.highTerms = {{"xml", 0.25}};
    s.lowTerms = {{"soumen", 4}};
    const auto dir = embanks::testing::temp_dir("synth");
    generate_synthetic(s, dir);
    EXPECT_EQ(lines(dir / "paper.tsv").size(), 201u);
    EXPECT_EQ(lines(dir / "author.tsv").size(), 61u);
    const auto writes = lines(dir / "writes.tsv");
    EXPECT_EQ(writes.size(), 401u);
    EXPECT_EQ(std::set<std::string>(writes.begin(), writes.end()).size(), writes.size());
    EXPECT_EQ(lines(dir / "cites.tsv").size(), 301u);

    const auto db = load_database(load_schema(dir / "schema.txt"), dir);
    EXPECT_EQ(db.graph.node_count(), 260u);
    const auto idx = build_index(db.meta);
    EXPECT_EQ(idx.lookup("soumen").size(), 4u);
    EXPECT_GT(idx.lookup("xml").size(), 30u);
    EXPECT_LT(idx.lookup("xml").size(), 70u);
}

TEST(Synth, SameSpecSameBytes) {
    SynthSpec s;
    s.papers = 100;
    s.authors = 30;
    s.writes = 150;
    s.cites = 120;
    const auto a = embanks::testing::temp_dir("synth-a"), b = embanks::testing::temp_dir("synth-b");
    generate_synthetic(s, a);
    generate_synthetic(s, b);
    for (const char* f : {"schema.txt", "paper.tsv", "author.tsv", "writes.tsv", "cites.tsv"})
        EXPECT_EQ(bytes(a / f), bytes(b / f)) << f;
    s.seed = 2;
    generate_synthetic(s, b);
    EXPECT_NE(bytes(a / "paper.tsv"), bytes(b / "paper.tsv"));
}
