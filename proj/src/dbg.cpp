#include "genomotif/dbg.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>

#include <absl/container/flat_hash_set.h>

namespace genomotif {

namespace {

ExtensionCode complemented(ExtensionCode c) {
    if (c.is_unique()) return ExtensionCode::unique(complement_code(c.symbol));
    return c;
}

}  // namespace

ExtensionCode classify_extension(std::span<const std::uint32_t, 4> tallies, std::uint32_t hi, std::uint32_t lo) {
    unsigned at_lo = 0;
    int strong = -1;
    unsigned at_hi = 0;
    for (std::size_t i = 0; i < 4; ++i) {
        if (tallies[i] >= lo) ++at_lo;
        if (tallies[i] >= hi) {
            ++at_hi;
            strong = static_cast<int>(i);
        }
    }
    if (at_hi == 1) {
        bool others_weak = true;
        for (std::size_t i = 0; i < 4; ++i) {
            if (static_cast<int>(i) != strong && tallies[i] >= lo) others_weak = false;
        }
        if (others_weak) return ExtensionCode::unique(static_cast<std::uint8_t>(strong));
    }
    if (at_lo >= 2) return ExtensionCode::fork();
    return ExtensionCode::terminal();
}

ExtensionCode DeBruijnGraph::left_of(std::uint64_t oriented) const {
    const std::uint64_t key = key_of(oriented);
    const Vertex* v = find(key);
    if (v == nullptr) return ExtensionCode::terminal();
    return key == oriented ? v->left : complemented(v->right);
}

ExtensionCode DeBruijnGraph::right_of(std::uint64_t oriented) const {
    const std::uint64_t key = key_of(oriented);
    const Vertex* v = find(key);
    if (v == nullptr) return ExtensionCode::terminal();
    return key == oriented ? v->right : complemented(v->left);
}

DeBruijnGraph build_dbg(const KmerCountTable& t, const GraphParams& params) {
    if (t.alphabet() != Alphabet::Dna) throw UnsupportedAlphabet("de Bruijn graph requires DNA k-mers");
    if (params.hi < 1 || params.lo > params.hi) throw InvalidParameter("thresholds must satisfy hi >= 1 and lo <= hi");
    DeBruijnGraph g(t.k(), t.canonical(), params);
    auto& vertices = g.mutable_vertices();
    vertices.reserve(t.size());
    for (const auto& [key, e] : t.entries()) {
        if (e.count < params.min_count) continue;
        vertices.emplace(key, Vertex{e.count, classify_extension(e.left, params.hi, params.lo),
                                     classify_extension(e.right, params.hi, params.lo)});
    }
    return g;
}

std::vector<Contig> generate_contigs(const DeBruijnGraph& g, SeedOrder order) {
    const unsigned k = g.k();
    const std::uint64_t mask = kmer_mask(Alphabet::Dna, k);
    const unsigned top_shift = 2 * (k - 1);

    std::vector<std::pair<std::uint64_t, std::uint32_t>> seeds;
    seeds.reserve(g.size());
    for (const auto& [key, v] : g.vertices()) seeds.emplace_back(key, v.count);
    if (order == SeedOrder::DescendingCount) {
        std::sort(seeds.begin(), seeds.end(), [](const auto& a, const auto& b) {
            return a.second != b.second ? a.second > b.second : a.first < b.first;
        });
    } else {
        std::sort(seeds.begin(), seeds.end());
    }

    absl::flat_hash_set<std::uint64_t> visited;
    visited.reserve(g.size());
    std::vector<Contig> contigs;

    for (const auto& [seed, seed_count] : seeds) {
        if (visited.contains(seed)) continue;
        visited.insert(seed);
        std::size_t kmers = 1;
        std::uint64_t depth_sum = seed_count;

        // Right walk: x -> (x << 2 | c), requiring the successor to point back.
        std::vector<std::uint8_t> right;
        for (std::uint64_t x = seed;;) {
            const ExtensionCode r = g.right_of(x);
            if (!r.is_unique()) break;
            const std::uint64_t y = ((x << 2) | r.symbol) & mask;
            const std::uint64_t ky = g.key_of(y);
            const Vertex* v = g.find(ky);
            if (v == nullptr || visited.contains(ky)) break;
            const ExtensionCode back = g.left_of(y);
            if (!back.is_unique() || back.symbol != (x >> top_shift)) break;
            visited.insert(ky);
            right.push_back(r.symbol);
            depth_sum += v->count;
            ++kmers;
            x = y;
        }

        std::vector<std::uint8_t> left;
        for (std::uint64_t x = seed;;) {
            const ExtensionCode l = g.left_of(x);
            if (!l.is_unique()) break;
            const std::uint64_t y = (std::uint64_t{l.symbol} << top_shift) | (x >> 2);
            const std::uint64_t ky = g.key_of(y);
            const Vertex* v = g.find(ky);
            if (v == nullptr || visited.contains(ky)) break;
            const ExtensionCode back = g.right_of(y);
            if (!back.is_unique() || back.symbol != (x & 3)) break;
            visited.insert(ky);
            left.push_back(l.symbol);
            depth_sum += v->count;
            ++kmers;
            x = y;
        }

        std::vector<std::uint8_t> codes(left.rbegin(), left.rend());
        for (unsigned i = 0; i < k; ++i) codes.push_back(static_cast<std::uint8_t>((seed >> (2 * (k - 1 - i))) & 3));
        codes.insert(codes.end(), right.begin(), right.end());

        Contig c;
        c.seq = Sequence::from_codes(Alphabet::Dna, codes);
        c.kmer_count = kmers;
        c.mean_depth = static_cast<double>(depth_sum) / static_cast<double>(kmers);
        contigs.push_back(std::move(c));
    }

    std::vector<std::pair<std::string, std::size_t>> keys;
    keys.reserve(contigs.size());
    for (std::size_t i = 0; i < contigs.size(); ++i) keys.emplace_back(contigs[i].seq.to_string(), i);
    std::sort(keys.begin(), keys.end(), [](const auto& a, const auto& b) {
        return a.first.size() != b.first.size() ? a.first.size() > b.first.size() : a.first < b.first;
    });
    std::vector<Contig> out;
    out.reserve(contigs.size());
    for (const auto& [text, idx] : keys) {
        out.push_back(std::move(contigs[idx]));
        out.back().id = "contig_" + std::to_string(out.size());
    }
    return out;
}

void write_contigs_fasta(std::ostream& out, std::span<const Contig> contigs) {
    const auto old_flags = out.flags();
    const auto old_prec = out.precision();
    out << std::fixed << std::setprecision(2);
    for (const auto& c : contigs) {
        out << '>' << c.id << " len=" << c.seq.size() << " depth=" << c.mean_depth << '\n'
            << c.seq.to_string() << '\n';
    }
    out.flags(old_flags);
    out.precision(old_prec);
}

}  // namespace genomotif
