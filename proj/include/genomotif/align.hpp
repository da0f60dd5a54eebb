#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "genomotif/seqcore.hpp"

namespace genomotif {

// Linear gap scoring: match > 0 > mismatch, gap.
struct ScoringScheme {
    int match = 1;
    int mismatch = -1;
    int gap = -1;

    void validate() const;
    int substitution(std::uint8_t a, std::uint8_t b) const noexcept { return a == b ? match : mismatch; }
};

// Alignments cover [qstart, qend) of the query and [tstart, tend) of the target.
// Target coordinates are always on the forward strand of the target. The edit
// path is an extended CIGAR using '=', 'X', 'I' (query-only symbol) and 'D'
// (target-only symbol).
struct AlignmentResult {
    int score = 0;
    std::size_t qstart = 0, qend = 0;
    std::size_t tstart = 0, tend = 0;
    Strand strand = Strand::Forward;
    std::optional<std::string> edit_path;

    friend bool operator==(const AlignmentResult&, const AlignmentResult&) = default;
};

struct SeedPair {
    std::size_t query_id = 0;
    std::size_t query_offset = 0;
    std::size_t target_id = 0;
    std::size_t target_offset = 0;
    unsigned k = 0;
    // Reverse: the query k-mer equals the reverse complement of the target k-mer.
    Strand strand = Strand::Forward;

    friend bool operator==(const SeedPair&, const SeedPair&) = default;
};

inline constexpr std::size_t kMaxAlignLength = 2'000'000;

AlignmentResult needleman_wunsch(const Sequence& a, const Sequence& b, const ScoringScheme& s = {},
                                 bool edit_path = false);
AlignmentResult smith_waterman(const Sequence& a, const Sequence& b, const ScoringScheme& s = {},
                               bool edit_path = false);

// Matches, mismatches and gap columns of an edit path.
struct PathStats {
    std::size_t matches = 0, mismatches = 0, insertions = 0, deletions = 0;
    std::size_t columns() const noexcept { return matches + mismatches + insertions + deletions; }
    double identity() const noexcept {
        return columns() == 0 ? 1.0 : static_cast<double>(matches) / static_cast<double>(columns());
    }
};
PathStats path_stats(const std::string& edit_path);

// Score-only global and local DP in row-major order, used as independent
// checks of the traceback routines and the wave-front evaluation.
int global_score_rowmajor(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b, const ScoringScheme& s);
int local_score_rowmajor(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b, const ScoringScheme& s);
// Global score computed anti-diagonal by anti-diagonal.
int global_score_wavefront(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b, const ScoringScheme& s);

// One-sided X-drop extension from the origin of a and b.
struct XdropExtension {
    int score = 0;              // best prefix-alignment score (>= 0, empty extension scores 0)
    std::size_t query_len = 0;  // symbols of a consumed by the best extension
    std::size_t target_len = 0;
    std::size_t antidiagonals = 0;  // anti-diagonals that held at least one live cell
    std::size_t cells = 0;
};

XdropExtension xdrop_extend_one_side(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
                                     const ScoringScheme& s, int x_drop);

AlignmentResult xdrop_extend(const Sequence& a, const Sequence& b, const SeedPair& seed, const ScoringScheme& s,
                             int x_drop);

enum class AlignMode { NW, SW, XDrop };

const char* align_mode_name(AlignMode m) noexcept;

struct AlignPair {
    std::reference_wrapper<const Sequence> query;
    std::reference_wrapper<const Sequence> target;
    std::optional<SeedPair> seed;
};

struct AlignOutcome {
    AlignmentResult result;
    std::string error;  // non-empty when the pair failed
    bool ok() const noexcept { return error.empty(); }
};

// Positionally matches `pairs`; failures are recorded per slot.
std::vector<AlignOutcome> batch_align(std::span<const AlignPair> pairs, const ScoringScheme& s, AlignMode mode,
                                      int x_drop = 20, unsigned threads = 1);

// qid qlen qstart qend strand tid tlen tstart tend score mode
struct AlignmentRecord {
    std::string qid;
    std::size_t qlen = 0;
    std::string tid;
    std::size_t tlen = 0;
    AlignmentResult result;
    AlignMode mode = AlignMode::NW;
};

void write_alignment_tsv(std::ostream& out, const AlignmentRecord& r);
std::vector<AlignmentRecord> read_alignment_tsv(std::istream& in);

}  // namespace genomotif
