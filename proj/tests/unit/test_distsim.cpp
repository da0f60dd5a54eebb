#include <gtest/gtest.h>

#include <json.hpp>
#include <random>

#include "genomotif/distsim.hpp"
#include "oracles.hpp"

using namespace genomotif;

namespace {

std::vector<Read> random_reads(std::mt19937_64& rng, std::size_t n, std::size_t len, const char* alphabet = "ACGT") {
    std::vector<Read> out;
    for (std::size_t i = 0; i < n; ++i) out.emplace_back("r" + std::to_string(i), encode_sequence(oracle::random_dna(rng, len, alphabet)));
    return out;
}

}  // namespace

TEST(Dist, ConfigAndModeNames) {
    EXPECT_EQ(parse_comm_mode("bulk"), CommMode::BulkAllToAll);
    EXPECT_STREQ(comm_mode_name(CommMode::AsyncOneSided), "async");
    EXPECT_THROW(parse_comm_mode("mpi"), InvalidParameter);
    DistConfig c;
    c.p = 0;
    EXPECT_THROW(c.validate(), InvalidParameter);
    c.p = 2;
    c.buffer = 0;
    EXPECT_THROW(c.validate(), InvalidParameter);
}

TEST(Dist, OwnerIsStableAndInRange) {
    for (std::uint64_t key = 0; key < 1000; ++key) {
        const auto o = owner_of(key, 7, 1);
        EXPECT_LT(o, 7u);
        EXPECT_EQ(o, owner_of(key, 7, 1));
        EXPECT_EQ(owner_of(key, 1, 1), 0u);
    }
}

TEST(Dist, TableIdenticalAcrossConfigurations) {
    std::mt19937_64 rng(1);
    auto reads = random_reads(rng, 150, 120, "ACG");
    const auto shared = oracle::random_dna(rng, 300);
    for (int i = 0; i < 20; ++i) reads.emplace_back("s", encode_sequence(shared.substr(rng() % 150, 150)));
    CountConfig ccfg;
    ccfg.min_count = 2;
    const auto expected = count_kmers(reads, 15, ccfg);
    ASSERT_FALSE(expected.empty());
    for (std::size_t p : {1u, 2u, 4u, 8u}) {
        for (auto mode : {CommMode::BulkAllToAll, CommMode::AsyncOneSided}) {
            for (std::size_t b : {16u, 1024u}) {
                for (std::size_t h : {0u, 64u}) {
                    DistConfig d;
                    d.p = p;
                    d.mode = mode;
                    d.buffer = b;
                    d.combiner = h;
                    d.phase_cap = mode == CommMode::BulkAllToAll ? 500 : 0;
                    const auto r = run_dist_count(reads, 15, d, ccfg);
                    EXPECT_EQ(r.table, expected) << p << " " << comm_mode_name(mode) << " " << b << " " << h;
                    EXPECT_EQ(r.metrics.local_kmers + r.metrics.remote_kmers, r.metrics.occurrences);
                }
            }
        }
    }
}

TEST(Dist, RemoteFractionOnUniformInput) {
    std::mt19937_64 rng(2);
    const auto reads = random_reads(rng, 400, 150);
    for (std::size_t p : {2u, 4u, 8u}) {
        DistConfig d;
        d.p = p;
        const auto m = run_dist_count(reads, 21, d).metrics;
        const double expected = static_cast<double>(p - 1) / static_cast<double>(p);
        EXPECT_NEAR(m.remote_fraction(), expected, 0.01);
        EXPECT_LT(imbalance_factor(m), 1.1);
    }
}

TEST(Dist, DoublingBufferHalvesAsyncMessages) {
    std::mt19937_64 rng(3);
    const auto reads = random_reads(rng, 300, 150);
    DistConfig d;
    d.p = 4;
    d.buffer = 32;
    const auto small = run_dist_count(reads, 21, d).metrics;
    d.buffer = 64;
    const auto large = run_dist_count(reads, 21, d).metrics;
    for (std::size_t x = 0; x < 16; ++x) {
        const double half = static_cast<double>(small.pass_pair_messages[x]) / 2.0;
        EXPECT_LE(std::abs(static_cast<double>(large.pass_pair_messages[x]) - half), 1.0);
    }
    EXPECT_EQ(small.records_sent, large.records_sent);
    EXPECT_EQ(small.bytes, large.bytes);
}

TEST(Dist, BulkPhasesAndMessages) {
    std::mt19937_64 rng(4);
    const auto reads = random_reads(rng, 40, 100);
    DistConfig d;
    d.p = 4;
    d.mode = CommMode::BulkAllToAll;
    d.buffer = 8;
    d.phase_cap = 100;
    const auto m = run_dist_count(reads, 21, d).metrics;
    // 10 reads of 80 k-mers per rank: 800 occurrences in phases of 100.
    EXPECT_EQ(m.phases_per_pass, 8u);
    EXPECT_EQ(m.phases, 16u);
    EXPECT_LE(m.peak_buffered, 100u);
    std::uint64_t records = 0;
    for (const auto r : m.pair_records) records += r;
    EXPECT_EQ(records, m.records_sent);
    EXPECT_GE(m.messages * 8, m.records_sent);
}

TEST(Dist, CombinerCutsHotRankTraffic) {
    std::mt19937_64 rng(5);
    auto reads = random_reads(rng, 200, 150);
    for (int i = 0; i < 200; ++i) reads.emplace_back("hot", encode_sequence(std::string(150, 'A')));
    const std::uint64_t hot = make_kmer(std::string(21, 'A')).packed;
    DistConfig d;
    d.p = 16;
    const auto plain = run_dist_count(reads, 21, d);
    d.combiner = 64;
    const auto combined = run_dist_count(reads, 21, d);
    EXPECT_EQ(plain.table, combined.table);
    const std::size_t owner = owner_of(hot, d.p, d.owner_seed);
    EXPECT_GE(plain.metrics.received[owner], 10 * combined.metrics.received[owner]);
    EXPECT_GT(combined.metrics.combiner_hits, 0u);
    EXPECT_LT(combined.metrics.bytes, plain.metrics.bytes);
}

TEST(Dist, MetricsJsonAndImbalance) {
    std::mt19937_64 rng(6);
    const auto reads = random_reads(rng, 20, 100);
    DistConfig d;
    d.p = 3;
    const auto m = run_dist_count(reads, 21, d).metrics;
    const auto j = nlohmann::json::parse(metrics_json(m));
    EXPECT_EQ(j.at("p"), 3);
    EXPECT_EQ(j.at("mode"), "async");
    EXPECT_TRUE(j.at("imbalance").is_number());
    d.p = 1;
    const auto single = run_dist_count(reads, 21, d).metrics;
    EXPECT_THROW(imbalance_factor(single), NoTraffic);
    EXPECT_TRUE(nlohmann::json::parse(metrics_json(single)).at("imbalance").is_null());
    EXPECT_DOUBLE_EQ(imbalance_factor(std::vector<std::uint64_t>{2, 4, 6}), 1.5);
}

TEST(Dist, CapacityAndEmptyInput) {
    std::mt19937_64 rng(7);
    auto reads = random_reads(rng, 5, 200);
    reads.push_back(reads[0]);
    CountConfig c;
    c.max_entries = 10;
    DistConfig d;
    d.p = 2;
    EXPECT_THROW(run_dist_count(reads, 21, d, c), CapacityExceeded);
    EXPECT_TRUE(run_dist_count({}, 21, d).table.empty());
}
