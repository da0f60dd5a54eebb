#include "genomotif/kmercount.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "genomotif/hash.hpp"
#include "genomotif/sketch.hpp"

namespace genomotif {

BloomFilter::BloomFilter(std::uint64_t bits, unsigned hashes, std::uint64_t seed)
    : hashes_(hashes), seed_(seed) {
    if (hashes == 0) throw InvalidParameter("Bloom filter needs at least one hash function");
    bits = std::bit_ceil(std::max<std::uint64_t>(bits, 64));
    mask_ = bits - 1;
    words_.assign(bits / 64, 0);
}

// Double hashing: probe i is h1 + i*h2 (h2 forced odd so probes are distinct
// modulo a power of two).
bool BloomFilter::test_and_set(std::uint64_t key) noexcept {
    const std::uint64_t h1 = hash_packed(key, seed_);
    const std::uint64_t h2 = hash_packed(key, seed_ + 0x632be59bd9b4e019ULL) | 1;
    bool present = true;
    for (unsigned i = 0; i < hashes_; ++i) {
        const std::uint64_t bit = (h1 + i * h2) & mask_;
        const std::uint64_t word_bit = std::uint64_t{1} << (bit & 63);
        auto& w = words_[bit >> 6];
        if (!(w & word_bit)) {
            present = false;
            w |= word_bit;
        }
    }
    if (!present) ++inserted_;
    return present;
}

bool BloomFilter::contains(std::uint64_t key) const noexcept {
    const std::uint64_t h1 = hash_packed(key, seed_);
    const std::uint64_t h2 = hash_packed(key, seed_ + 0x632be59bd9b4e019ULL) | 1;
    for (unsigned i = 0; i < hashes_; ++i) {
        const std::uint64_t bit = (h1 + i * h2) & mask_;
        if (!(words_[bit >> 6] & (std::uint64_t{1} << (bit & 63)))) return false;
    }
    return true;
}

double BloomFilter::analytic_fpr(double n, double m, unsigned h) {
    return std::pow(1.0 - std::exp(-static_cast<double>(h) * n / m), static_cast<double>(h));
}

std::vector<std::pair<std::uint64_t, KmerEntry>> KmerCountTable::sorted() const {
    std::vector<std::pair<std::uint64_t, KmerEntry>> out(map_.begin(), map_.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

double estimate_distinct_kmers(std::span<const Read> reads, unsigned k, bool canonical, std::uint64_t seed) {
    HllSketch hll(k, 12, seed);
    for (const auto& r : reads) {
        for_each_occurrence(r.seq, k, canonical, [&](const KmerOccurrence& occ) {
            hll.insert_hash(hash_packed(occ.key, seed));
        });
    }
    return hll_estimate(hll);
}

std::uint64_t default_bloom_bits(double distinct_estimate) {
    return std::bit_ceil(static_cast<std::uint64_t>(8.0 * std::max(distinct_estimate, 1.0)));
}

KmerCountTable count_kmers(std::span<const Read> reads, unsigned k, const CountConfig& cfg) {
    const Alphabet alphabet = reads.empty() ? Alphabet::Dna : reads.front().seq.alphabet();
    check_k(alphabet, k);
    if (cfg.canonical && alphabet != Alphabet::Dna) {
        throw UnsupportedAlphabet("canonical counting requires the DNA alphabet");
    }
    for (const auto& r : reads) {
        if (r.seq.alphabet() != alphabet) throw UnsupportedAlphabet("reads mix alphabets");
    }

    KmerCountTable table(k, alphabet, cfg.canonical);
    if (reads.empty()) return table;

    const std::uint64_t bits = cfg.bloom_bits != 0
        ? cfg.bloom_bits
        : default_bloom_bits(estimate_distinct_kmers(reads, k, cfg.canonical, cfg.hash_seed));
    BloomFilter bloom(bits, cfg.bloom_hashes, cfg.hash_seed);

    auto& map = table.mutable_entries();
    for (const auto& r : reads) {
        for_each_occurrence(r.seq, k, cfg.canonical, [&](const KmerOccurrence& occ) {
            if (bloom.test_and_set(occ.key)) {
                map.try_emplace(occ.key);
                if (cfg.max_entries != 0 && map.size() > cfg.max_entries) {
                    throw CapacityExceeded("k-mer table exceeds " + std::to_string(cfg.max_entries) + " entries");
                }
            }
        });
    }
    for (const auto& r : reads) {
        for_each_occurrence(r.seq, k, cfg.canonical, [&](const KmerOccurrence& occ) {
            auto it = map.find(occ.key);
            if (it != map.end()) add_occurrence(it->second, occ.left, occ.right);
        });
    }
    const std::uint32_t threshold = std::max<std::uint32_t>(2, cfg.min_count);
    absl::erase_if(map, [&](const auto& kv) { return kv.second.count < threshold; });
    return table;
}

Histogram kmer_histogram(const KmerCountTable& t) {
    Histogram h;
    for (const auto& [key, e] : t.entries()) ++h.bins[e.count];
    return h;
}

void write_table_tsv(std::ostream& out, const KmerCountTable& t) {
    for (const auto& [key, e] : t.sorted()) {
        out << kmer_to_string(Kmer{key, static_cast<std::uint8_t>(t.k()), t.alphabet()}) << '\t' << e.count << '\t'
            << e.left[0] << ',' << e.left[1] << ',' << e.left[2] << ',' << e.left[3] << '\t'
            << e.right[0] << ',' << e.right[1] << ',' << e.right[2] << ',' << e.right[3] << '\n';
    }
}

KmerCountTable read_table_tsv(std::istream& in, bool canonical, Alphabet alphabet) {
    KmerCountTable t;
    std::string line;
    std::size_t line_no = 0;
    bool first = true;
    auto parse_tallies = [&](const std::string& field, std::array<std::uint32_t, 4>& out) {
        std::istringstream ss(field);
        char comma;
        if (!(ss >> out[0] >> comma >> out[1] >> comma >> out[2] >> comma >> out[3])) {
            throw ParseError(line_no, "malformed tally field '" + field + "'");
        }
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string kmer, left, right;
        KmerEntry e;
        if (!(ss >> kmer >> e.count >> left >> right)) throw ParseError(line_no, "expected 4 tab-separated fields");
        Kmer m;
        try {
            m = make_kmer(kmer, alphabet);
        } catch (const Error& err) {
            throw ParseError(line_no, err.what());
        }
        if (first) {
            t = KmerCountTable(m.k, alphabet, canonical);
            first = false;
        } else if (m.k != t.k()) {
            throw ParseError(line_no, "k-mer length differs from previous rows");
        }
        parse_tallies(left, e.left);
        parse_tallies(right, e.right);
        t.mutable_entries()[m.packed] = e;
    }
    return t;
}

void write_histogram_tsv(std::ostream& out, const Histogram& h) {
    for (const auto& [mult, n] : h.bins) out << mult << '\t' << n << '\n';
}

}  // namespace genomotif
