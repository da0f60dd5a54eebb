#include "genomotif/overlap.hpp"

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include <absl/container/flat_hash_map.h>

namespace genomotif {

namespace {

struct FirstHit {
    std::uint32_t pos = 0;
    bool rev = false;
    std::uint32_t count = 0;
};

using KmerHits = std::vector<std::pair<std::uint64_t, FirstHit>>;

bool effective_canonical(Alphabet a, bool canonical) { return canonical && a == Alphabet::Dna; }

// Distinct k-mers of one sequence with their first occurrence, ascending by key.
KmerHits distinct_kmers(const Sequence& s, unsigned k, bool canonical) {
    absl::flat_hash_map<std::uint64_t, FirstHit> hits;
    for_each_kmer(s, k, [&](std::size_t pos, std::uint64_t packed) {
        std::uint64_t key = packed;
        bool rev = false;
        if (canonical) {
            const std::uint64_t rc = reverse_complement_packed(packed, k);
            if (rc < packed) {
                key = rc;
                rev = true;
            }
        }
        auto [it, inserted] = hits.try_emplace(key, FirstHit{static_cast<std::uint32_t>(pos), rev, 0});
        ++it->second.count;
    });
    KmerHits out(hits.begin(), hits.end());
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

Alphabet common_alphabet(std::span<const Sequence> seqs) {
    if (seqs.empty()) return Alphabet::Dna;
    const Alphabet a = seqs.front().alphabet();
    for (const auto& s : seqs) {
        if (s.alphabet() != a) throw InvalidParameter("sequences mix alphabets");
    }
    return a;
}

// Distinct-sequence frequency of every k-mer across a set.
absl::flat_hash_map<std::uint64_t, std::size_t> sequence_frequency(const std::vector<KmerHits>& per_seq) {
    absl::flat_hash_map<std::uint64_t, std::size_t> freq;
    for (const auto& hits : per_seq) {
        for (const auto& [key, hit] : hits) ++freq[key];
    }
    return freq;
}

SeedCount entry_value(std::uint64_t key, const FirstHit& h) {
    SeedCount v;
    v.count = 1;
    v.key = key;
    v.pos_a = h.pos;
    v.pos_b = h.pos;
    v.rev_a = h.rev;
    v.rev_b = h.rev;
    return v;
}

CandidatePair make_pair(std::size_t i, std::size_t j, const SeedCount& v, unsigned k) {
    CandidatePair p;
    p.i = i;
    p.j = j;
    p.shared = v.count;
    p.seed.query_id = i;
    p.seed.target_id = j;
    p.seed.query_offset = v.pos_a;
    p.seed.target_offset = v.pos_b;
    p.seed.k = k;
    p.seed.strand = v.rev_a != v.rev_b ? Strand::Reverse : Strand::Forward;
    return p;
}

void check_compatible(const KmerSeqMatrix& s, const KmerSeqMatrix& t) {
    if (s.k != t.k) throw KMismatch("k-mer sizes differ: " + std::to_string(s.k) + " vs " + std::to_string(t.k));
    if (s.canonical != t.canonical || s.alphabet != t.alphabet) {
        throw KMismatch("k-mer dictionaries use different alphabets or orientation");
    }
}

// Rows of m restricted to `rows` (ascending), renumbered 0..rows.size().
SparseMatrix<SeedCount> select_rows(const SparseMatrix<SeedCount>& m, const std::vector<std::size_t>& rows) {
    std::vector<std::size_t> offsets(rows.size() + 1, 0), cols;
    std::vector<SeedCount> values;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        auto c = m.row_cols(rows[r]);
        auto v = m.row_values(rows[r]);
        cols.insert(cols.end(), c.begin(), c.end());
        values.insert(values.end(), v.begin(), v.end());
        offsets[r + 1] = values.size();
    }
    return SparseMatrix<SeedCount>(rows.size(), m.cols(), std::move(offsets), std::move(cols), std::move(values));
}

}  // namespace

KmerSeqMatrix build_kmer_seq_matrix(std::span<const Sequence> seqs, unsigned k, std::size_t max_occ, bool canonical) {
    KmerSeqMatrix out;
    out.k = k;
    out.max_occ = max_occ;
    out.alphabet = common_alphabet(seqs);
    out.canonical = effective_canonical(out.alphabet, canonical);
    check_k(out.alphabet, k);
    if (seqs.empty()) return out;

    absl::flat_hash_map<std::uint64_t, std::vector<std::pair<std::size_t, FirstHit>>> columns;
    for (std::size_t c = 0; c < seqs.size(); ++c) {
        for (const auto& [key, hit] : distinct_kmers(seqs[c], k, out.canonical)) columns[key].emplace_back(c, hit);
    }
    for (const auto& [key, list] : columns) {
        if (list.size() <= max_occ) out.kmers.push_back(key);
    }
    std::sort(out.kmers.begin(), out.kmers.end());

    std::vector<std::size_t> offsets(out.kmers.size() + 1, 0), col_idx;
    std::vector<SeedCount> values;
    for (std::size_t r = 0; r < out.kmers.size(); ++r) {
        for (const auto& [c, hit] : columns.at(out.kmers[r])) {
            col_idx.push_back(c);
            values.push_back(entry_value(out.kmers[r], hit));
            out.occurrences.push_back(hit.count);
        }
        offsets[r + 1] = values.size();
    }
    out.matrix = SparseMatrix<SeedCount>(out.kmers.size(), seqs.size(), std::move(offsets), std::move(col_idx),
                                         std::move(values));
    return out;
}

std::vector<CandidatePair> candidates_spgemm(const KmerSeqMatrix& s, const KmerSeqMatrix& t, unsigned threads) {
    check_compatible(s, t);
    const bool self = &s == &t;
    SparseMatrix<SeedCount> product;
    if (self) {
        product = spgemm<PairCountSemiring>(transpose(s.matrix), s.matrix, Accumulator::Auto, threads);
    } else {
        // Only k-mers in both dictionaries can contribute; align their rows.
        std::vector<std::size_t> rows_s, rows_t;
        for (std::size_t a = 0, b = 0; a < s.kmers.size() && b < t.kmers.size();) {
            if (s.kmers[a] < t.kmers[b]) {
                ++a;
            } else if (t.kmers[b] < s.kmers[a]) {
                ++b;
            } else {
                rows_s.push_back(a++);
                rows_t.push_back(b++);
            }
        }
        product = spgemm<PairCountSemiring>(transpose(select_rows(s.matrix, rows_s)), select_rows(t.matrix, rows_t),
                                            Accumulator::Auto, threads);
    }
    std::vector<CandidatePair> out;
    for (std::size_t i = 0; i < product.rows(); ++i) {
        auto cols = product.row_cols(i);
        auto vals = product.row_values(i);
        for (std::size_t p = 0; p < cols.size(); ++p) {
            if (self && cols[p] <= i) continue;
            out.push_back(make_pair(i, cols[p], vals[p], s.k));
        }
    }
    return out;
}

std::vector<CandidatePair> candidates_spgemm(const KmerSeqMatrix& self, unsigned threads) {
    return candidates_spgemm(self, self, threads);
}

std::vector<CandidatePair> candidates_hashjoin(std::span<const Sequence> s, const KmerSeqMatrix& t, bool self) {
    std::vector<CandidatePair> out;
    if (s.empty()) return out;
    const Alphabet alphabet = common_alphabet(s);
    if (alphabet != t.alphabet && t.sequences() > 0) throw KMismatch("query and index alphabets differ");
    if (self && s.size() != t.sequences()) throw InvalidParameter("self join needs the indexed sequences");
    const bool canonical = t.sequences() > 0 ? t.canonical : effective_canonical(alphabet, true);
    check_k(alphabet, t.k);

    absl::flat_hash_map<std::uint64_t, std::size_t> index;
    index.reserve(t.kmers.size());
    for (std::size_t r = 0; r < t.kmers.size(); ++r) index.emplace(t.kmers[r], r);

    std::vector<KmerHits> per_seq;
    per_seq.reserve(s.size());
    for (const auto& seq : s) per_seq.push_back(distinct_kmers(seq, t.k, canonical));
    const auto freq = sequence_frequency(per_seq);

    std::vector<SeedCount> acc(t.sequences());
    std::vector<std::size_t> touched;
    for (std::size_t i = 0; i < s.size(); ++i) {
        touched.clear();
        // Keys ascend, so the first hit per target is the smallest shared k-mer.
        for (const auto& [key, hit] : per_seq[i]) {
            if (freq.at(key) > t.max_occ) continue;
            auto it = index.find(key);
            if (it == index.end()) continue;
            auto cols = t.matrix.row_cols(it->second);
            auto vals = t.matrix.row_values(it->second);
            for (std::size_t p = 0; p < cols.size(); ++p) {
                const std::size_t j = cols[p];
                if (self && j <= i) continue;
                SeedCount& a = acc[j];
                if (a.count == 0) {
                    a = entry_value(key, hit);
                    a.pos_b = vals[p].pos_b;
                    a.rev_b = vals[p].rev_b;
                    a.count = 0;
                    touched.push_back(j);
                }
                ++a.count;
            }
        }
        std::sort(touched.begin(), touched.end());
        for (const auto j : touched) {
            out.push_back(make_pair(i, j, acc[j], t.k));
            acc[j] = SeedCount{};
        }
    }
    return out;
}

std::vector<CandidatePair> candidates_bruteforce(std::span<const Sequence> s, std::span<const Sequence> t, unsigned k,
                                                 std::size_t max_occ, bool canonical, bool self) {
    const Alphabet alphabet = common_alphabet(s.empty() ? t : s);
    const bool canon = effective_canonical(alphabet, canonical);
    auto filtered = [&](std::span<const Sequence> seqs) {
        std::vector<KmerHits> per_seq;
        for (const auto& seq : seqs) per_seq.push_back(distinct_kmers(seq, k, canon));
        const auto freq = sequence_frequency(per_seq);
        for (auto& hits : per_seq) {
            std::erase_if(hits, [&](const auto& h) { return freq.at(h.first) > max_occ; });
        }
        return per_seq;
    };
    const auto hs = filtered(s);
    const auto ht = self ? hs : filtered(t);
    std::vector<CandidatePair> out;
    for (std::size_t i = 0; i < hs.size(); ++i) {
        for (std::size_t j = self ? i + 1 : 0; j < ht.size(); ++j) {
            SeedCount v;
            v.count = 0;
            for (const auto& [key, hit] : hs[i]) {
                auto it = std::lower_bound(ht[j].begin(), ht[j].end(), key,
                                           [](const auto& e, std::uint64_t x) { return e.first < x; });
                if (it == ht[j].end() || it->first != key) continue;
                if (v.count == 0) {
                    v.key = key;
                    v.pos_a = hit.pos;
                    v.rev_a = hit.rev;
                    v.pos_b = it->second.pos;
                    v.rev_b = it->second.rev;
                }
                ++v.count;
            }
            if (v.count > 0) out.push_back(make_pair(i, j, v, k));
        }
    }
    return out;
}

std::vector<ExtendOutcome> seed_extend_all(std::span<const CandidatePair> pairs, std::span<const Sequence> s,
                                           std::span<const Sequence> t, const ScoringScheme& scheme, int x_drop,
                                           long long min_score, std::size_t min_shared, unsigned threads) {
    std::vector<AlignPair> jobs;
    std::vector<std::size_t> origin;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
        const auto& c = pairs[p];
        if (c.shared < min_shared) continue;
        if (c.i >= s.size() || c.j >= t.size()) throw IndexOutOfRange("candidate refers to a missing sequence");
        jobs.push_back(AlignPair{std::cref(s[c.i]), std::cref(t[c.j]), c.seed});
        origin.push_back(p);
    }
    const auto results = batch_align(jobs, scheme, AlignMode::XDrop, x_drop, threads);
    std::vector<ExtendOutcome> out;
    for (std::size_t q = 0; q < results.size(); ++q) {
        if (!results[q].ok() || results[q].result.score < min_score) continue;
        out.push_back(ExtendOutcome{origin[q], results[q]});
    }
    return out;
}

void write_overlap_tsv(std::ostream& out, std::span<const CandidatePair> pairs, std::span<const std::string> ids_a,
                       std::span<const std::string> ids_b) {
    for (const auto& p : pairs) {
        if (p.i >= ids_a.size() || p.j >= ids_b.size()) throw IndexOutOfRange("candidate refers to a missing id");
        out << ids_a[p.i] << '\t' << ids_b[p.j] << '\t' << p.shared << '\t' << p.seed.query_offset << '\t'
            << p.seed.target_offset << '\n';
    }
}

std::vector<OverlapRecord> read_overlap_tsv(std::istream& in) {
    std::vector<OverlapRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        OverlapRecord r;
        std::string extra;
        if (!(ss >> r.id_a >> r.id_b >> r.shared >> r.pos_a >> r.pos_b) || (ss >> extra)) {
            throw ParseError(line_no, "expected 5 overlap columns");
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace genomotif
