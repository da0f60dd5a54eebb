#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "genomotif/seqcore.hpp"

namespace genomotif {

// Bottom-s MinHash: the s smallest distinct hash values of the canonical
// k-mers seen so far, kept sorted ascending.
struct MinHashSketch {
    unsigned k = 21;
    std::size_t s = 1000;
    std::uint64_t seed = 1;
    std::vector<std::uint64_t> values;

    void insert_hash(std::uint64_t h);
    void insert_kmer(const Kmer& m);
    void insert_sequence(const Sequence& seq);

    friend bool operator==(const MinHashSketch&, const MinHashSketch&) = default;
};

MinHashSketch minhash_build(std::span<const Sequence> seqs, unsigned k, std::size_t s, std::uint64_t seed);
MinHashSketch minhash_build(const Sequence& seq, unsigned k, std::size_t s, std::uint64_t seed);
MinHashSketch minhash_build(std::span<const Kmer> kmers, unsigned k, std::size_t s, std::uint64_t seed);

MinHashSketch minhash_merge(const MinHashSketch& a, const MinHashSketch& b);
double minhash_jaccard(const MinHashSketch& a, const MinHashSketch& b);

// HyperLogLog with 2^b six-bit registers (stored one per byte).
struct HllSketch {
    unsigned k = 21;
    unsigned b = 14;
    std::uint64_t seed = 1;
    std::vector<std::uint8_t> registers;

    HllSketch() = default;
    HllSketch(unsigned k_, unsigned b_, std::uint64_t seed_);

    void insert_hash(std::uint64_t h) noexcept {
        const std::size_t bucket = h >> (64 - b);
        const std::uint64_t rest = h << b;
        const unsigned max_rank = 64 - b + 1;
        const unsigned rank = rest == 0 ? max_rank : static_cast<unsigned>(__builtin_clzll(rest)) + 1;
        const auto r = static_cast<std::uint8_t>(rank < max_rank ? rank : max_rank);
        if (registers[bucket] < r) registers[bucket] = r;
    }
    void insert_kmer(const Kmer& m);
    void insert_packed(std::uint64_t packed, Alphabet alphabet);
    void insert_sequence(const Sequence& seq);

    friend bool operator==(const HllSketch&, const HllSketch&) = default;
};

HllSketch hll_build(std::span<const Sequence> seqs, unsigned k, unsigned b, std::uint64_t seed);
HllSketch hll_build(std::span<const Kmer> kmers, unsigned k, unsigned b, std::uint64_t seed);
HllSketch hll_merge(const HllSketch& a, const HllSketch& b);
double hll_estimate(const HllSketch& a);

struct DistanceMatrix {
    std::vector<std::string> ids;
    std::vector<double> values;  // row-major n x n

    std::size_t size() const noexcept { return ids.size(); }
    double at(std::size_t i, std::size_t j) const { return values[i * ids.size() + j]; }
};

DistanceMatrix all_pairs_jaccard(std::span<const MinHashSketch> sketches, std::vector<std::string> ids = {});

void write_distance_tsv(std::ostream& out, const DistanceMatrix& d);

// Versioned JSON: {"version":1,"type":"minhash"|"hll","k":..,"s"|"b":..,"seed":..,"values"|"registers":[..]}
std::string to_json(const MinHashSketch& s, const std::string& name = {});
std::string to_json(const HllSketch& s, const std::string& name = {});
MinHashSketch minhash_from_json(const std::string& text);
HllSketch hll_from_json(const std::string& text);

}  // namespace genomotif
