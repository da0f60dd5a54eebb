#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include <absl/container/flat_hash_map.h>

#include "genomotif/seqcore.hpp"

namespace genomotif {

inline constexpr std::uint64_t kDefaultHashSeed = 1;

class BloomFilter {
public:
    // `bits` is rounded up to a power of two (minimum 64).
    BloomFilter(std::uint64_t bits, unsigned hashes, std::uint64_t seed = kDefaultHashSeed);

    // Returns whether every probe bit was already set, then sets them.
    bool test_and_set(std::uint64_t key) noexcept;
    bool contains(std::uint64_t key) const noexcept;

    bool test_and_set(const Kmer& m) noexcept { return test_and_set(m.packed); }
    bool contains(const Kmer& m) const noexcept { return contains(m.packed); }

    std::uint64_t bits() const noexcept { return mask_ + 1; }
    unsigned hashes() const noexcept { return hashes_; }
    std::uint64_t inserted() const noexcept { return inserted_; }

    // (1 - e^{-hn/m})^h
    static double analytic_fpr(double n, double m, unsigned h);

private:
    std::uint64_t mask_;
    unsigned hashes_;
    std::uint64_t seed_;
    std::uint64_t inserted_ = 0;
    std::vector<std::uint64_t> words_;
};

struct KmerEntry {
    std::uint32_t count = 0;
    std::array<std::uint32_t, 4> left{};   // symbol preceding the k-mer (DNA only)
    std::array<std::uint32_t, 4> right{};  // symbol following the k-mer (DNA only)

    friend bool operator==(const KmerEntry&, const KmerEntry&) = default;
};

struct CountConfig {
    bool canonical = true;
    std::uint32_t min_count = 2;
    std::uint64_t bloom_bits = 0;  // 0: 8 bits per distinct k-mer, estimated with HyperLogLog
    unsigned bloom_hashes = 3;
    std::uint64_t hash_seed = kDefaultHashSeed;
    std::size_t max_entries = 0;   // 0: unbounded
};

class KmerCountTable {
public:
    using Map = absl::flat_hash_map<std::uint64_t, KmerEntry>;

    KmerCountTable() = default;
    KmerCountTable(unsigned k, Alphabet alphabet, bool canonical)
        : k_(k), alphabet_(alphabet), canonical_(canonical) {}

    unsigned k() const noexcept { return k_; }
    Alphabet alphabet() const noexcept { return alphabet_; }
    bool canonical() const noexcept { return canonical_; }
    std::size_t size() const noexcept { return map_.size(); }
    bool empty() const noexcept { return map_.empty(); }

    const KmerEntry* find(std::uint64_t packed) const {
        auto it = map_.find(packed);
        return it == map_.end() ? nullptr : &it->second;
    }
    const KmerEntry* find(const Kmer& m) const { return find(m.packed); }

    const Map& entries() const noexcept { return map_; }
    Map& mutable_entries() noexcept { return map_; }

    // Entries ordered by packed k-mer value.
    std::vector<std::pair<std::uint64_t, KmerEntry>> sorted() const;

    friend bool operator==(const KmerCountTable& a, const KmerCountTable& b) {
        return a.k_ == b.k_ && a.alphabet_ == b.alphabet_ && a.canonical_ == b.canonical_ && a.map_ == b.map_;
    }

private:
    unsigned k_ = 0;
    Alphabet alphabet_ = Alphabet::Dna;
    bool canonical_ = false;
    Map map_;
};

// One k-mer occurrence in a read, oriented to the stored key. Neighbor symbols
// are -1 at read boundaries.
struct KmerOccurrence {
    std::uint64_t key;
    std::int8_t left;
    std::int8_t right;
};

// Calls fn(KmerOccurrence) for every window of `s`. In canonical mode a
// minus-strand occurrence reports the complemented successor as its left
// neighbor and the complemented predecessor as its right neighbor.
template <typename Fn>
void for_each_occurrence(const Sequence& s, unsigned k, bool canonical, Fn&& fn) {
    const bool tallies = s.alphabet() == Alphabet::Dna;
    for_each_kmer(s, k, [&](std::size_t pos, std::uint64_t packed) {
        const std::int8_t prev = pos > 0 && tallies ? static_cast<std::int8_t>(s.at(pos - 1)) : std::int8_t{-1};
        const std::int8_t next = pos + k < s.size() && tallies ? static_cast<std::int8_t>(s.at(pos + k)) : std::int8_t{-1};
        if (canonical) {
            const std::uint64_t rc = reverse_complement_packed(packed, k);
            if (rc < packed) {
                const auto comp = [](std::int8_t c) {
                    return c < 0 ? c : static_cast<std::int8_t>(complement_code(static_cast<std::uint8_t>(c)));
                };
                fn(KmerOccurrence{rc, comp(next), comp(prev)});
                return;
            }
        }
        fn(KmerOccurrence{packed, prev, next});
    });
}

inline void add_occurrence(KmerEntry& e, std::int8_t left, std::int8_t right, std::uint32_t times = 1) noexcept {
    e.count += times;
    if (left >= 0) e.left[static_cast<std::size_t>(left)] += times;
    if (right >= 0) e.right[static_cast<std::size_t>(right)] += times;
}

// Estimated number of distinct k-mers (HyperLogLog pre-scan).
double estimate_distinct_kmers(std::span<const Read> reads, unsigned k, bool canonical, std::uint64_t seed);

std::uint64_t default_bloom_bits(double distinct_estimate);

// Two-pass counting: a Bloom filter admits k-mers seen at least twice (plus
// false positives) into the table, the second pass counts admitted k-mers
// exactly, and entries below max(2, min_count) are dropped.
KmerCountTable count_kmers(std::span<const Read> reads, unsigned k, const CountConfig& cfg = {});

struct Histogram {
    std::map<std::uint64_t, std::uint64_t> bins;  // multiplicity -> distinct k-mers

    friend bool operator==(const Histogram&, const Histogram&) = default;
};

Histogram kmer_histogram(const KmerCountTable& t);

// kmer \t count \t leftA,leftC,leftG,leftT \t rightA,rightC,rightG,rightT
void write_table_tsv(std::ostream& out, const KmerCountTable& t);
KmerCountTable read_table_tsv(std::istream& in, bool canonical, Alphabet alphabet = Alphabet::Dna);
void write_histogram_tsv(std::ostream& out, const Histogram& h);

}  // namespace genomotif
