#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

namespace embanks {

/// Parameters of a DBLP-shaped corpus: papers, authors, writes and cites.
struct SynthSpec {
    std::uint32_t papers = 1000;
    std::uint32_t authors = 300;
    std::uint32_t writes = 2500;
    std::uint32_t cites = 3000;
    std::uint32_t communities = 10;
    std::uint32_t vocabulary = 2000;
    std::uint32_t titleWords = 6;
    double zipf = 1.0;
    /// probability that a link stays inside its community
    double locality = 0.8;
    /// term -> fraction of papers whose title contains it
    std::map<std::string, double> highTerms;
    /// term -> exact number of papers whose title contains it
    std::map<std::string, std::uint32_t> lowTerms;
    std::uint64_t seed = 1;
};

/// Reads the JSON form; unknown keys are rejected.
SynthSpec parse_synth_spec(const std::string& json);
SynthSpec load_synth_spec(const std::filesystem::path& path);

/// Writes schema.txt, paper.tsv, author.tsv, writes.tsv and cites.tsv.
/// Identical specs give byte-identical files.
void generate_synthetic(const SynthSpec& spec, const std::filesystem::path& outDir);

}  // namespace embanks
