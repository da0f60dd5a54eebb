#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "genomotif/kmercount.hpp"
#include "genomotif/seqcore.hpp"

namespace genomotif {

enum class CommMode { BulkAllToAll, AsyncOneSided };

const char* comm_mode_name(CommMode m) noexcept;
CommMode parse_comm_mode(const std::string& name);

struct DistConfig {
    std::size_t p = 1;
    CommMode mode = CommMode::AsyncOneSided;
    std::size_t buffer = 1024;      // B: records per destination buffer
    std::size_t combiner = 0;       // H: heavy-hitter combiner entries, 0 disables it
    std::size_t phase_cap = 0;      // bulk mode: occurrences generated per rank per phase, 0 = one phase
    std::uint64_t owner_seed = kDefaultHashSeed;

    void validate() const;
};

// Payload model: a single occurrence costs a packed k-mer plus one byte for
// its extension pair; a combined record with count > 1 costs a k-mer, a
// 32-bit count and eight bytes of packed tallies.
inline constexpr std::size_t kSingleRecordBytes = 8 + 1;
inline constexpr std::size_t kCombinedRecordBytes = 8 + 4 + 8;

struct CommMetrics {
    std::size_t p = 1;
    CommMode mode = CommMode::AsyncOneSided;
    std::size_t buffer = 0;
    std::size_t combiner = 0;

    std::uint64_t occurrences = 0;     // both passes
    std::uint64_t remote_kmers = 0;    // occurrences owned by another rank (before combining)
    std::uint64_t local_kmers = 0;
    std::uint64_t records_sent = 0;    // remote records after combining
    std::uint64_t messages = 0;
    std::uint64_t bytes = 0;
    std::uint64_t phases = 0;          // barriers over both passes (bulk mode)
    std::uint64_t phases_per_pass = 0;
    std::uint64_t peak_buffered = 0;   // largest total buffer occupancy on one rank
    std::uint64_t combiner_hits = 0;
    std::vector<std::uint64_t> received;          // remote records received per rank
    std::vector<std::uint64_t> pair_messages;     // p x p, row = sender, both passes
    std::vector<std::uint64_t> pass_pair_messages;  // p x p, one pass
    std::vector<std::uint64_t> pair_records;      // p x p, both passes

    double remote_fraction() const noexcept {
        return occurrences == 0 ? 0.0 : static_cast<double>(remote_kmers) / static_cast<double>(occurrences);
    }
};

std::size_t owner_of(std::uint64_t packed, std::size_t p, std::uint64_t seed);
inline std::size_t owner_of(const Kmer& m, std::size_t p, std::uint64_t seed) { return owner_of(m.packed, p, seed); }

// max received / mean received
double imbalance_factor(const CommMetrics& m);
double imbalance_factor(std::span<const std::uint64_t> received);

struct DistResult {
    KmerCountTable table;
    CommMetrics metrics;
};

// Simulates distributed two-pass counting on p ranks. The table equals
// count_kmers(reads, k, ccfg) for every configuration.
DistResult run_dist_count(std::span<const Read> reads, unsigned k, const DistConfig& dcfg, const CountConfig& ccfg = {});

// {p, mode, B, H, messages, bytes, remote_fraction, phases, peak_buffered, imbalance, combiner_hits}
std::string metrics_json(const CommMetrics& m);

}  // namespace genomotif
