#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <absl/container/flat_hash_map.h>

#include "genomotif/kmercount.hpp"
#include "genomotif/seqcore.hpp"

namespace genomotif {

struct ExtensionCode {
    enum class Kind : std::uint8_t { Unique, Fork, Terminal };

    Kind kind = Kind::Terminal;
    std::uint8_t symbol = 0;  // meaningful only for Unique

    static constexpr ExtensionCode unique(std::uint8_t s) { return {Kind::Unique, s}; }
    static constexpr ExtensionCode fork() { return {Kind::Fork, 0}; }
    static constexpr ExtensionCode terminal() { return {Kind::Terminal, 0}; }

    bool is_unique() const noexcept { return kind == Kind::Unique; }

    friend bool operator==(const ExtensionCode&, const ExtensionCode&) = default;
};

// unique(x) iff tally[x] >= hi and every other tally < lo; fork if two or more
// tallies reach lo; terminal otherwise.
ExtensionCode classify_extension(std::span<const std::uint32_t, 4> tallies, std::uint32_t hi, std::uint32_t lo);

struct GraphParams {
    std::uint32_t hi = 2;
    std::uint32_t lo = 2;
    std::uint32_t min_count = 2;
};

struct Vertex {
    std::uint32_t count = 0;
    ExtensionCode left;
    ExtensionCode right;
};

class DeBruijnGraph {
public:
    using Map = absl::flat_hash_map<std::uint64_t, Vertex>;

    DeBruijnGraph() = default;
    DeBruijnGraph(unsigned k, bool canonical, GraphParams params) : k_(k), canonical_(canonical), params_(params) {}

    unsigned k() const noexcept { return k_; }
    bool canonical() const noexcept { return canonical_; }
    const GraphParams& params() const noexcept { return params_; }
    std::size_t size() const noexcept { return vertices_.size(); }
    bool empty() const noexcept { return vertices_.empty(); }

    const Vertex* find(std::uint64_t key) const {
        auto it = vertices_.find(key);
        return it == vertices_.end() ? nullptr : &it->second;
    }
    const Map& vertices() const noexcept { return vertices_; }
    Map& mutable_vertices() noexcept { return vertices_; }

    // Extensions of an oriented k-mer: if `oriented` is stored as its reverse
    // complement, the stored codes are swapped and complemented.
    ExtensionCode left_of(std::uint64_t oriented) const;
    ExtensionCode right_of(std::uint64_t oriented) const;
    std::uint64_t key_of(std::uint64_t oriented) const noexcept {
        return canonical_ ? canonical_packed(oriented, k_) : oriented;
    }

private:
    unsigned k_ = 0;
    bool canonical_ = false;
    GraphParams params_;
    Map vertices_;
};

DeBruijnGraph build_dbg(const KmerCountTable& t, const GraphParams& params = {});

struct Contig {
    std::string id;
    Sequence seq;
    std::size_t kmer_count = 0;
    double mean_depth = 0.0;
};

enum class SeedOrder {
    Deterministic,     // ascending packed value
    DescendingCount,   // descending count, then ascending packed value
};

// Walks maximal unambiguous paths. Every vertex lands in exactly one contig.
// Output is sorted by (length desc, sequence asc) and numbered contig_1..n.
std::vector<Contig> generate_contigs(const DeBruijnGraph& g, SeedOrder order = SeedOrder::DescendingCount);

// >contig_<n> len=<L> depth=<d>
void write_contigs_fasta(std::ostream& out, std::span<const Contig> contigs);

}  // namespace genomotif
