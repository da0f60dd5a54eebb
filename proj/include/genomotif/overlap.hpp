#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "genomotif/align.hpp"
#include "genomotif/seqcore.hpp"
#include "genomotif/spsemiring.hpp"

namespace genomotif {

inline constexpr std::size_t kDefaultMaxOcc = 8;

// Rows are distinct k-mers in ascending packed order, columns are sequences.
// Each stored entry is a SeedCount with count 1 whose positions record the
// first occurrence of the k-mer in that sequence; `occurrences` runs parallel
// to the stored values and holds the full occurrence count.
struct KmerSeqMatrix {
    unsigned k = 0;
    bool canonical = true;
    Alphabet alphabet = Alphabet::Dna;
    std::size_t max_occ = kDefaultMaxOcc;
    std::vector<std::uint64_t> kmers;
    SparseMatrix<SeedCount> matrix;
    std::vector<std::uint32_t> occurrences;

    std::size_t rows() const noexcept { return matrix.rows(); }
    std::size_t sequences() const noexcept { return matrix.cols(); }
};

// K-mers present in more than max_occ distinct sequences are dropped.
// Canonical mode applies to DNA; protein k-mers are always indexed as spelled.
KmerSeqMatrix build_kmer_seq_matrix(std::span<const Sequence> seqs, unsigned k, std::size_t max_occ = kDefaultMaxOcc,
                                    bool canonical = true);

struct CandidatePair {
    std::size_t i = 0;
    std::size_t j = 0;
    std::size_t shared = 0;
    SeedPair seed;

    friend bool operator==(const CandidatePair&, const CandidatePair&) = default;
};

// transpose(S) * T over the seed-count semiring, sorted by (i, j). Passing the
// same object twice, or using the one-argument form, compares a set with
// itself and reports each unordered pair once with i < j.
std::vector<CandidatePair> candidates_spgemm(const KmerSeqMatrix& s, const KmerSeqMatrix& t, unsigned threads = 1);
std::vector<CandidatePair> candidates_spgemm(const KmerSeqMatrix& self, unsigned threads = 1);

// Streams S through a hash table built from T's index. S is filtered with
// T's max_occ. With self = true, S must be the sequences T was built from.
std::vector<CandidatePair> candidates_hashjoin(std::span<const Sequence> s, const KmerSeqMatrix& t, bool self = false);

// Brute-force reference: sequences i, j share a k-mer that survives the filter.
std::vector<CandidatePair> candidates_bruteforce(std::span<const Sequence> s, std::span<const Sequence> t, unsigned k,
                                                 std::size_t max_occ = kDefaultMaxOcc, bool canonical = true,
                                                 bool self = false);

struct ExtendOutcome {
    std::size_t pair_index = 0;
    AlignOutcome outcome;
};

// X-drop extension from every pair's seed. Pairs with fewer than min_shared
// shared k-mers, failures and scores below min_score are dropped; survivors
// keep the input order. Query = s[i], target = t[j].
std::vector<ExtendOutcome> seed_extend_all(std::span<const CandidatePair> pairs, std::span<const Sequence> s,
                                           std::span<const Sequence> t, const ScoringScheme& scheme, int x_drop,
                                           long long min_score, std::size_t min_shared = 1, unsigned threads = 1);

// idA idB shared_kmers seedposA seedposB
void write_overlap_tsv(std::ostream& out, std::span<const CandidatePair> pairs, std::span<const std::string> ids_a,
                       std::span<const std::string> ids_b);

struct OverlapRecord {
    std::string id_a;
    std::string id_b;
    std::size_t shared = 0;
    std::size_t pos_a = 0;
    std::size_t pos_b = 0;
};
std::vector<OverlapRecord> read_overlap_tsv(std::istream& in);

}  // namespace genomotif
