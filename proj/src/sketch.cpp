#include "genomotif/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <iterator>
#include <ostream>

#include <json.hpp>

#include "genomotif/hash.hpp"

namespace genomotif {

namespace {

std::uint64_t kmer_hash(std::uint64_t packed, unsigned k, Alphabet alphabet, std::uint64_t seed) {
    if (alphabet == Alphabet::Dna) packed = canonical_packed(packed, k);
    return hash_packed(packed, seed);
}

void check_minhash_compatible(const MinHashSketch& a, const MinHashSketch& b) {
    if (a.k != b.k || a.s != b.s || a.seed != b.seed) {
        throw SketchMismatch("MinHash sketches differ in k, s or seed");
    }
}

void check_hll_compatible(const HllSketch& a, const HllSketch& b) {
    if (a.b != b.b || a.seed != b.seed || a.k != b.k) {
        throw SketchMismatch("HLL sketches differ in precision, k or seed");
    }
}

}  // namespace

void MinHashSketch::insert_hash(std::uint64_t h) {
    if (s == 0) return;
    if (values.size() == s && h >= values.back()) return;
    auto it = std::lower_bound(values.begin(), values.end(), h);
    if (it != values.end() && *it == h) return;
    values.insert(it, h);
    if (values.size() > s) values.pop_back();
}

void MinHashSketch::insert_kmer(const Kmer& m) {
    insert_hash(kmer_hash(m.packed, m.k, m.alphabet, seed));
}

void MinHashSketch::insert_sequence(const Sequence& seq) {
    for_each_kmer(seq, k, [&](std::size_t, std::uint64_t packed) {
        insert_hash(kmer_hash(packed, k, seq.alphabet(), seed));
    });
}

MinHashSketch minhash_build(std::span<const Sequence> seqs, unsigned k, std::size_t s, std::uint64_t seed) {
    if (s < 1) throw InvalidParameter("sketch size must be >= 1");
    MinHashSketch sk{k, s, seed, {}};
    for (const auto& seq : seqs) {
        check_k(seq.alphabet(), k);
        sk.insert_sequence(seq);
    }
    return sk;
}

MinHashSketch minhash_build(const Sequence& seq, unsigned k, std::size_t s, std::uint64_t seed) {
    return minhash_build(std::span<const Sequence>(&seq, 1), k, s, seed);
}

MinHashSketch minhash_build(std::span<const Kmer> kmers, unsigned k, std::size_t s, std::uint64_t seed) {
    if (s < 1) throw InvalidParameter("sketch size must be >= 1");
    MinHashSketch sk{k, s, seed, {}};
    for (const auto& m : kmers) {
        if (m.k != k) throw KMismatch("k-mer length differs from sketch k");
        sk.insert_kmer(m);
    }
    return sk;
}

MinHashSketch minhash_merge(const MinHashSketch& a, const MinHashSketch& b) {
    check_minhash_compatible(a, b);
    MinHashSketch out{a.k, a.s, a.seed, {}};
    std::set_union(a.values.begin(), a.values.end(), b.values.begin(), b.values.end(),
                   std::back_inserter(out.values));
    if (out.values.size() > out.s) out.values.resize(out.s);
    return out;
}

double minhash_jaccard(const MinHashSketch& a, const MinHashSketch& b) {
    check_minhash_compatible(a, b);
    // Walk the merged order; stop after the s smallest values of the union.
    std::size_t i = 0, j = 0, taken = 0, shared = 0;
    while (taken < a.s && (i < a.values.size() || j < b.values.size())) {
        if (j == b.values.size() || (i < a.values.size() && a.values[i] < b.values[j])) {
            ++i;
        } else if (i == a.values.size() || b.values[j] < a.values[i]) {
            ++j;
        } else {
            ++shared;
            ++i;
            ++j;
        }
        ++taken;
    }
    if (taken == 0) return 1.0;  // two empty sets
    return static_cast<double>(shared) / static_cast<double>(taken);
}

// ---------------------------------------------------------------------------

HllSketch::HllSketch(unsigned k_, unsigned b_, std::uint64_t seed_) : k(k_), b(b_), seed(seed_) {
    if (b < 4 || b > 16) throw InvalidPrecision("HLL precision must be in [4, 16], got " + std::to_string(b));
    registers.assign(std::size_t{1} << b, 0);
}

void HllSketch::insert_kmer(const Kmer& m) { insert_hash(kmer_hash(m.packed, m.k, m.alphabet, seed)); }

void HllSketch::insert_packed(std::uint64_t packed, Alphabet alphabet) {
    insert_hash(kmer_hash(packed, k, alphabet, seed));
}

void HllSketch::insert_sequence(const Sequence& seq) {
    for_each_kmer(seq, k, [&](std::size_t, std::uint64_t packed) {
        insert_hash(kmer_hash(packed, k, seq.alphabet(), seed));
    });
}

HllSketch hll_build(std::span<const Sequence> seqs, unsigned k, unsigned b, std::uint64_t seed) {
    HllSketch sk(k, b, seed);
    for (const auto& seq : seqs) {
        check_k(seq.alphabet(), k);
        sk.insert_sequence(seq);
    }
    return sk;
}

HllSketch hll_build(std::span<const Kmer> kmers, unsigned k, unsigned b, std::uint64_t seed) {
    HllSketch sk(k, b, seed);
    for (const auto& m : kmers) {
        if (m.k != k) throw KMismatch("k-mer length differs from sketch k");
        sk.insert_kmer(m);
    }
    return sk;
}

HllSketch hll_merge(const HllSketch& a, const HllSketch& b) {
    check_hll_compatible(a, b);
    HllSketch out = a;
    for (std::size_t i = 0; i < out.registers.size(); ++i) {
        out.registers[i] = std::max(out.registers[i], b.registers[i]);
    }
    return out;
}

double hll_estimate(const HllSketch& a) {
    const double m = static_cast<double>(a.registers.size());
    double alpha;
    switch (a.registers.size()) {
        case 16: alpha = 0.673; break;
        case 32: alpha = 0.697; break;
        case 64: alpha = 0.709; break;
        default: alpha = 0.7213 / (1.0 + 1.079 / m); break;
    }
    double sum = 0.0;
    std::size_t zeros = 0;
    for (const auto r : a.registers) {
        sum += std::ldexp(1.0, -static_cast<int>(r));
        if (r == 0) ++zeros;
    }
    const double raw = alpha * m * m / sum;
    if (raw <= 2.5 * m && zeros > 0) {
        return m * std::log(m / static_cast<double>(zeros));
    }
    return raw;
}

// ---------------------------------------------------------------------------

DistanceMatrix all_pairs_jaccard(std::span<const MinHashSketch> sketches, std::vector<std::string> ids) {
    const std::size_t n = sketches.size();
    if (ids.empty()) {
        for (std::size_t i = 0; i < n; ++i) ids.push_back("genome_" + std::to_string(i));
    }
    if (ids.size() != n) throw InvalidParameter("identifier count differs from sketch count");
    for (std::size_t i = 1; i < n; ++i) check_minhash_compatible(sketches[0], sketches[i]);
    DistanceMatrix d{std::move(ids), std::vector<double>(n * n, 1.0)};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = minhash_jaccard(sketches[i], sketches[j]);
            d.values[i * n + j] = v;
            d.values[j * n + i] = v;
        }
    }
    return d;
}

void write_distance_tsv(std::ostream& out, const DistanceMatrix& d) {
    out << "id";
    for (const auto& id : d.ids) out << '\t' << id;
    out << '\n';
    const auto old_flags = out.flags();
    const auto old_prec = out.precision();
    out << std::fixed << std::setprecision(6);
    for (std::size_t i = 0; i < d.size(); ++i) {
        out << d.ids[i];
        for (std::size_t j = 0; j < d.size(); ++j) out << '\t' << d.at(i, j);
        out << '\n';
    }
    out.flags(old_flags);
    out.precision(old_prec);
}

std::string to_json(const MinHashSketch& s, const std::string& name) {
    nlohmann::ordered_json j;
    j["version"] = 1;
    j["type"] = "minhash";
    if (!name.empty()) j["name"] = name;
    j["k"] = s.k;
    j["s"] = s.s;
    j["seed"] = s.seed;
    j["values"] = s.values;
    return j.dump();
}

std::string to_json(const HllSketch& s, const std::string& name) {
    nlohmann::ordered_json j;
    j["version"] = 1;
    j["type"] = "hll";
    if (!name.empty()) j["name"] = name;
    j["k"] = s.k;
    j["b"] = s.b;
    j["seed"] = s.seed;
    j["registers"] = s.registers;
    return j.dump();
}

MinHashSketch minhash_from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        if (j.at("type") != "minhash") throw ParseError(1, "not a minhash sketch");
        MinHashSketch s;
        s.k = j.at("k").get<unsigned>();
        s.s = j.at("s").get<std::size_t>();
        s.seed = j.at("seed").get<std::uint64_t>();
        s.values = j.at("values").get<std::vector<std::uint64_t>>();
        if (!std::is_sorted(s.values.begin(), s.values.end()) || s.values.size() > s.s ||
            std::adjacent_find(s.values.begin(), s.values.end()) != s.values.end()) {
            throw ParseError(1, "minhash values must be sorted, distinct and at most s");
        }
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(1, e.what());
    }
}

HllSketch hll_from_json(const std::string& text) {
    try {
        const auto j = nlohmann::json::parse(text);
        if (j.at("type") != "hll") throw ParseError(1, "not an hll sketch");
        HllSketch s(j.at("k").get<unsigned>(), j.at("b").get<unsigned>(), j.at("seed").get<std::uint64_t>());
        auto regs = j.at("registers").get<std::vector<std::uint8_t>>();
        if (regs.size() != s.registers.size()) throw ParseError(1, "register count does not match precision");
        for (auto r : regs) {
            if (r > 64 - s.b + 1) throw ParseError(1, "register value out of range");
        }
        s.registers = std::move(regs);
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(1, e.what());
    }
}

}  // namespace genomotif
