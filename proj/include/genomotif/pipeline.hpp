#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "genomotif/align.hpp"
#include "genomotif/dbg.hpp"
#include "genomotif/kmercount.hpp"
#include "genomotif/mcl.hpp"
#include "genomotif/overlap.hpp"
#include "genomotif/seqcore.hpp"

namespace genomotif {

// Smallest L such that contigs of length >= L hold at least half the bases.
std::size_t n50(std::span<const std::size_t> lengths);

// Identity of `contig` against the genome window it aligns to, on the better
// strand: exact substrings score 1.0; otherwise the window is located by
// local alignment and identity is matches / columns of a global alignment
// of the whole contig against that window.
double contig_identity(const Sequence& contig, const Sequence& genome);

// Read pairs whose truth intervals overlap by at least min_overlap bases,
// as index pairs (i < j) into `truth`.
std::vector<std::pair<std::size_t, std::size_t>> true_overlaps(std::span<const ReadOrigin> truth,
                                                               std::size_t min_overlap);

// Single-k assembly repeated over ascending k, feeding each round's contigs
// back in as extra reads.
std::vector<Contig> assemble_multi_k(std::span<const Read> reads, std::span<const unsigned> ks,
                                     const CountConfig& count, const GraphParams& graph);

struct PipelineConfig {
    SynthParams synth{10000, 150, 10.0, 0.0, 1, Placement::Tiled};
    std::vector<unsigned> k{21};
    CountConfig count;
    GraphParams graph;
    unsigned overlap_k = 17;
    std::size_t max_occ = 32;
    std::size_t min_shared = 1;
    std::size_t min_overlap = 30;
    ScoringScheme scoring;
    int x_drop = 20;
    long long min_score = 0;
    MclParams mcl;
    unsigned threads = 1;
};

struct Summary {
    std::size_t genome_length = 0;
    std::size_t reads = 0;
    std::size_t contigs = 0;
    std::size_t total_contig_bases = 0;
    std::size_t longest_contig = 0;
    std::size_t n50 = 0;
    double identity = 0.0;
    std::size_t candidate_pairs = 0;
    std::size_t true_overlaps = 0;
    std::size_t recovered_overlaps = 0;
    double recall = 0.0;
    std::size_t alignments = 0;
    std::size_t clusters = 0;
};

// Artifact names inside a pipeline output directory.
namespace artifact {
inline constexpr const char* kGenome = "genome.fa";
inline constexpr const char* kReads = "reads.fq";
inline constexpr const char* kTruth = "truth.tsv";
inline constexpr const char* kCounts = "counts.tsv";
inline constexpr const char* kHistogram = "hist.tsv";
inline constexpr const char* kContigs = "contigs.fa";
inline constexpr const char* kOverlaps = "overlaps.tsv";
inline constexpr const char* kAlignments = "alignments.tsv";
inline constexpr const char* kClusters = "clusters.tsv";
inline constexpr const char* kSummary = "summary.json";
inline constexpr const char* kTiming = "timing.json";
}  // namespace artifact

std::vector<ReadOrigin> read_truth(std::istream& in);

// Recomputes the summary from the artifacts in `dir`; min_overlap as above.
Summary emit_summary(const std::filesystem::path& dir, std::size_t min_overlap = 30);
std::string summary_json(const Summary& s);

struct StageTiming {
    std::string stage;
    double seconds = 0.0;
};

// Runs generate -> count -> contigs -> overlap -> align -> cluster into `dir`
// and writes summary.json (deterministic) and timing.json (wall clock).
Summary run_pipeline(const PipelineConfig& cfg, const std::filesystem::path& dir,
                     std::vector<StageTiming>* timings = nullptr);

// Builds a symmetric weighted graph over `ids` from (id, id, weight) edges;
// the larger weight wins for repeated pairs.
struct WeightedEdge {
    std::string a;
    std::string b;
    double weight = 0.0;
};
SparseMatrix<double> graph_from_edges(std::span<const WeightedEdge> edges, std::vector<std::string>& ids);

}  // namespace genomotif
