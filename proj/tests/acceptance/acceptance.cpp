// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any failure.
// Usage: acceptance <path-to-genomotif-cli>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "genomotif/distsim.hpp"
#include "genomotif/pipeline.hpp"
#include "genomotif/sketch.hpp"
#include "oracles.hpp"

using namespace genomotif;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::vector<Read> to_reads(const std::vector<std::string>& texts) {
    std::vector<Read> out;
    out.reserve(texts.size());
    for (std::size_t i = 0; i < texts.size(); ++i) out.emplace_back("r" + std::to_string(i), encode_sequence(texts[i]));
    return out;
}

std::vector<Sequence> to_seqs(const std::vector<std::string>& texts) {
    std::vector<Sequence> out;
    out.reserve(texts.size());
    for (const auto& t : texts) out.push_back(encode_sequence(t));
    return out;
}

// ---------------------------------------------------------------------------
// 1. count_kmers equals the count-then-filter oracle.

// Hash-map variant of the naive oracle; fast enough for 10^6-base inputs.
bool table_matches_naive(const KmerCountTable& t, const std::vector<std::string>& reads, unsigned k, bool canonical,
                         std::uint32_t min_count) {
    std::unordered_map<std::string, oracle::NaiveEntry> table;
    for (const auto& r : reads) {
        for (std::size_t i = 0; i + k <= r.size(); ++i) {
            std::string w = r.substr(i, k);
            int prev = i > 0 ? oracle::code(r[i - 1]) : -1;
            int next = i + k < r.size() ? oracle::code(r[i + k]) : -1;
            if (canonical) {
                std::string rc = oracle::revcomp(w);
                if (rc < w) {
                    w.swap(rc);
                    const int p = next < 0 ? -1 : 3 - next;
                    next = prev < 0 ? -1 : 3 - prev;
                    prev = p;
                }
            }
            auto& e = table[w];
            ++e.count;
            if (prev >= 0) ++e.left[static_cast<std::size_t>(prev)];
            if (next >= 0) ++e.right[static_cast<std::size_t>(next)];
        }
    }
    const std::uint32_t threshold = std::max<std::uint32_t>(2, min_count);
    std::size_t kept = 0;
    for (const auto& [w, e] : table) {
        if (e.count < threshold) continue;
        ++kept;
        const KmerEntry* got = t.find(make_kmer(w));
        if (got == nullptr || got->count != e.count || got->left != e.left || got->right != e.right) return false;
    }
    return kept == t.size();
}

Outcome criterion_kmer_oracle() {
    std::mt19937_64 rng(101);
    const unsigned ks[] = {15, 21, 31};
    const auto t0 = Clock::now();
    std::size_t total_bases = 0, largest = 0, mismatches = 0;
    for (int i = 0; i < 200; ++i) {
        // Reads sampled from a genome at depth 3 with 1% substitutions, so most
        // k-mers repeat; input sizes are log-uniform, the last one is 10^6 bases.
        const double exponent = std::uniform_real_distribution<double>(2.0, 5.3)(rng);
        const std::size_t bases = i == 199 ? 1000000 : static_cast<std::size_t>(std::pow(10.0, exponent));
        const std::size_t read_len = 40 + rng() % 111;
        const std::string genome = oracle::random_dna(rng, std::max<std::size_t>(read_len, bases / 3), i % 7 == 0 ? "ACG" : "ACGT");
        std::vector<std::string> reads;
        std::size_t produced = 0;
        while (produced < bases) {
            std::string r = genome.substr(rng() % (genome.size() - read_len + 1), read_len);
            for (auto& c : r) {
                if (rng() % 100 == 0) c = "ACGT"[rng() % 4];
            }
            if (rng() % 2) r = oracle::revcomp(r);
            produced += r.size();
            reads.push_back(std::move(r));
        }
        total_bases += produced;
        largest = std::max(largest, produced);
        const unsigned k = ks[i % 3];
        CountConfig cfg;
        cfg.canonical = i % 4 != 3;
        cfg.min_count = static_cast<std::uint32_t>(1 + i % 3);
        cfg.hash_seed = static_cast<std::uint64_t>(i);
        const auto table = count_kmers(to_reads(reads), k, cfg);
        if (!table_matches_naive(table, reads, k, cfg.canonical, cfg.min_count)) ++mismatches;
    }
    const double elapsed = seconds_since(t0);
    Outcome o;
    o.pass = mismatches == 0 && elapsed < 60.0 && largest >= 1000000;
    o.detail = "200 inputs, " + std::to_string(total_bases) + " bases (max " + std::to_string(largest) + "), " +
               std::to_string(mismatches) + " mismatches, " + fmt("%.1f s", elapsed) + " (limit 60 s)";
    return o;
}

// ---------------------------------------------------------------------------
// 2. The worked kmerize / count example.

Outcome criterion_worked_example() {
    const auto kmers = kmerize(encode_sequence("CCTAAAGCCTA"), 4);
    std::vector<std::string> spelled;
    for (const auto& m : kmers) spelled.push_back(kmer_to_string(m));
    const std::vector<std::string> expected{"CCTA", "CTAA", "TAAA", "AAAG", "AAGC", "AGCC", "GCCT", "CCTA"};
    bool tables_ok = true;
    for (bool canonical : {true, false}) {
        CountConfig cfg;
        cfg.canonical = canonical;
        const auto t = count_kmers(to_reads({"CCTAAAGCCTA"}), 4, cfg);
        const KmerEntry* e = t.find(make_kmer("CCTA"));
        tables_ok = tables_ok && t.size() == 1 && e != nullptr && e->count == 2;
    }
    return {spelled == expected && tables_ok, "8 k-mers with CCTA twice; table {CCTA:2} in both strand modes"};
}

// ---------------------------------------------------------------------------
// 3. Bloom filter: no false negatives, FPR within 2x of analytic.

Outcome criterion_bloom() {
    std::mt19937_64 rng(303);
    const std::uint64_t n = 100000, probes = 1000000;
    const std::pair<std::uint64_t, unsigned> settings[] = {{1u << 19, 3}, {1u << 20, 4}, {1u << 18, 2}};
    Outcome o;
    for (const auto& [m, h] : settings) {
        BloomFilter f(m, h, rng());
        std::set<std::uint64_t> inserted;
        while (inserted.size() < n) {
            const std::uint64_t key = rng();
            if (inserted.insert(key).second) f.test_and_set(key);
        }
        std::size_t false_neg = 0;
        for (const auto key : inserted) false_neg += !f.contains(key);
        std::size_t false_pos = 0, queried = 0;
        while (queried < probes) {
            const std::uint64_t key = rng();
            if (inserted.count(key)) continue;
            ++queried;
            false_pos += f.contains(key);
        }
        const double measured = static_cast<double>(false_pos) / static_cast<double>(probes);
        const double analytic = BloomFilter::analytic_fpr(n, m, h);
        o.pass = o.pass && false_neg == 0 && measured <= 2.0 * analytic;
        if (!o.detail.empty()) o.detail += "; ";
        o.detail += "(m=" + std::to_string(m) + ",h=" + std::to_string(h) + ") FN " + std::to_string(false_neg) +
                    " FPR " + fmt("%.5f", measured) + " (analytic " + fmt("%.5f", analytic) + ")";
    }
    return o;
}

// ---------------------------------------------------------------------------
// 4. NW / SW / X-drop against exhaustive DP.

Outcome criterion_alignment() {
    const ScoringScheme s{1, -1, -1};
    std::size_t checked = 0, wrong = 0;
    std::vector<std::string> all{""};
    for (std::size_t len = 1; len <= 8; ++len) {
        for (std::size_t bits = 0; bits < (std::size_t{1} << len); ++bits) {
            std::string w(len, 'A');
            for (std::size_t i = 0; i < len; ++i) {
                if (bits >> i & 1u) w[i] = 'C';
            }
            all.push_back(w);
        }
    }
    std::vector<Sequence> enc;
    for (const auto& w : all) enc.push_back(encode_sequence(w));
    for (std::size_t i = 0; i < all.size(); ++i) {
        for (std::size_t j = 0; j < all.size(); ++j) {
            ++checked;
            wrong += needleman_wunsch(enc[i], enc[j], s).score != oracle::nw_score(all[i], all[j], 1, -1, -1);
            wrong += smith_waterman(enc[i], enc[j], s).score != oracle::sw_score(all[i], all[j], 1, -1, -1);
        }
    }
    const std::size_t enumerated = checked;

    std::mt19937_64 rng(404);
    const ScoringScheme schemes[] = {{1, -1, -1}, {2, -3, -2}, {1, -2, -3}};
    for (int t = 0; t < 10000; ++t) {
        const ScoringScheme& sc = schemes[t % 3];
        const std::string a = oracle::random_dna(rng, rng() % 301);
        std::string b;
        if (t % 2 == 0 && !a.empty()) {
            // Related pair: a mutated copy of a slice of a.
            b = a.substr(rng() % a.size());
            for (auto& c : b) {
                if (rng() % 10 == 0) c = "ACGT"[rng() % 4];
            }
        } else {
            b = oracle::random_dna(rng, rng() % 301);
        }
        ++checked;
        const Sequence ea = encode_sequence(a), eb = encode_sequence(b);
        wrong += needleman_wunsch(ea, eb, sc).score != oracle::nw_score(a, b, sc.match, sc.mismatch, sc.gap);
        wrong += smith_waterman(ea, eb, sc).score != oracle::sw_score(a, b, sc.match, sc.mismatch, sc.gap);
    }

    std::size_t xdrop_wrong = 0;
    for (int t = 0; t < 1000; ++t) {
        const unsigned k = 11;
        const std::string core = oracle::random_dna(rng, k);
        std::string a = oracle::random_dna(rng, rng() % 140) + core + oracle::random_dna(rng, rng() % 140);
        std::string b = a;
        for (auto& c : b) {
            if (rng() % 8 == 0) c = "ACGT"[rng() % 4];
        }
        b = b.substr(0, a.find(core)) + core + b.substr(a.find(core) + k);
        b = oracle::random_dna(rng, rng() % 20) + b;
        const std::size_t qa = a.find(core), tb = b.find(core, b.size() - a.size());
        const bool reverse = t % 2 == 1;
        const std::string target = reverse ? oracle::revcomp(b) : b;
        SeedPair seed{0, qa, 0, reverse ? b.size() - tb - k : tb, k, reverse ? Strand::Reverse : Strand::Forward};
        const int x = static_cast<int>(a.size() + b.size()) * s.match;
        const auto r = xdrop_extend(encode_sequence(a), encode_sequence(target), seed, s, x);
        // Unrestricted: the seed plus the best prefix extension on each side.
        const std::string la(a.rbegin() + static_cast<std::ptrdiff_t>(a.size() - qa), a.rend());
        const std::string lb(b.rbegin() + static_cast<std::ptrdiff_t>(b.size() - tb), b.rend());
        const int expected = static_cast<int>(k) * s.match +
                             oracle::best_prefix_score(la, lb, s.match, s.mismatch, s.gap) +
                             oracle::best_prefix_score(a.substr(qa + k), b.substr(tb + k), s.match, s.mismatch, s.gap);
        xdrop_wrong += r.score != expected;
    }
    return {wrong == 0 && xdrop_wrong == 0,
            std::to_string(enumerated) + " enumerated + 10000 random pairs, " + std::to_string(wrong) +
                " NW/SW mismatches; 1000 seeded X-drop pairs, " + std::to_string(xdrop_wrong) + " mismatches"};
}

// ---------------------------------------------------------------------------
// 5. SpGEMM against the dense triple loop.

template <typename SR>
typename SR::value_type random_value(std::mt19937_64& rng, std::size_t r, std::size_t c) {
    if constexpr (std::is_same_v<SR, ArithmeticSemiring>) {
        return std::uniform_real_distribution<double>(-2.0, 2.0)(rng);
    } else if constexpr (std::is_same_v<SR, BooleanSemiring>) {
        return 1;
    } else if constexpr (std::is_same_v<SR, TropicalSemiring>) {
        return static_cast<std::int64_t>(rng() % 41) - 20;
    } else {
        SeedCount v;
        v.count = 1 + rng() % 3;
        v.key = rng() % 7;
        if (rng() % 2) {
            v.pos_a = static_cast<std::uint32_t>(r);
            v.rev_a = rng() % 2;
        } else {
            v.pos_b = static_cast<std::uint32_t>(c);
            v.rev_b = rng() % 2;
        }
        return v;
    }
}

template <typename SR>
std::size_t spgemm_failures(std::uint64_t seed, int instances) {
    using T = typename SR::value_type;
    std::mt19937_64 rng(seed);
    std::size_t failures = 0;
    for (int t = 0; t < instances; ++t) {
        const std::size_t m = 1 + rng() % 32, inner = 1 + rng() % 32, n = 1 + rng() % 32;
        const double density = std::uniform_real_distribution<double>(0.0, 0.6)(rng);
        std::bernoulli_distribution keep(density);
        std::vector<std::vector<T>> da(m, std::vector<T>(inner, SR::zero())), db(inner, std::vector<T>(n, SR::zero()));
        std::vector<Triple<T>> ta, tb;
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < inner; ++j) {
                if (keep(rng)) ta.push_back({i, j, da[i][j] = random_value<SR>(rng, i, j)});
            }
        }
        for (std::size_t i = 0; i < inner; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (keep(rng)) tb.push_back({i, j, db[i][j] = random_value<SR>(rng, i, j)});
            }
        }
        const auto a = sparse_from_triples<SR>(m, inner, ta), b = sparse_from_triples<SR>(inner, n, tb);
        const auto c = spgemm<SR>(a, b, t % 2 ? Accumulator::SortMerge : Accumulator::Dense, 1 + t % 3);
        bool ok = c.well_formed();
        for (std::size_t i = 0; i < m && ok; ++i) {
            for (std::size_t j = 0; j < n && ok; ++j) {
                T expected = SR::zero();
                for (std::size_t x = 0; x < inner; ++x) expected = SR::add(expected, SR::mul(da[i][x], db[x][j]));
                const T* got = c.find(i, j);
                if constexpr (std::is_same_v<SR, ArithmeticSemiring>) {
                    const double g = got ? *got : 0.0;
                    ok = std::abs(g - expected) <= 1e-12 * std::max(std::abs(expected), 1e-300) ||
                         (expected == 0.0 && std::abs(g) < 1e-15);
                } else {
                    ok = got ? (!SR::is_zero(*got) && *got == expected) : SR::is_zero(expected);
                }
            }
        }
        failures += !ok;
    }
    return failures;
}

Outcome criterion_spgemm() {
    const std::size_t fa = spgemm_failures<ArithmeticSemiring>(501, 500);
    const std::size_t fb = spgemm_failures<BooleanSemiring>(502, 500);
    const std::size_t ft = spgemm_failures<TropicalSemiring>(503, 500);
    const std::size_t fp = spgemm_failures<PairCountSemiring>(504, 500);
    return {fa + fb + ft + fp == 0, "500 instances per semiring; failures arithmetic " + std::to_string(fa) +
                                        ", boolean " + std::to_string(fb) + ", tropical " + std::to_string(ft) +
                                        ", pair-count " + std::to_string(fp)};
}

// ---------------------------------------------------------------------------
// 6. Overlap methods agree; recall of true overlaps.

double overlap_recall(double error, std::uint64_t seed) {
    const auto d = synth_generate({20000, 150, 10.0, error, seed, Placement::Random});
    std::vector<Sequence> seqs;
    for (const auto& r : d.reads) seqs.push_back(r.seq);
    std::set<std::pair<std::size_t, std::size_t>> found;
    for (const auto& p : candidates_spgemm(build_kmer_seq_matrix(seqs, 17, 64))) found.emplace(p.i, p.j);
    const auto truth = true_overlaps(d.truth, 30);
    std::size_t hit = 0;
    for (const auto& t : truth) hit += found.count(t);
    return truth.empty() ? 1.0 : static_cast<double>(hit) / static_cast<double>(truth.size());
}

Outcome criterion_overlap() {
    std::mt19937_64 rng(606);
    std::size_t disagreements = 0, total_pairs = 0;
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 1 + rng() % 100;
        const std::string pool = oracle::random_dna(rng, 200 + rng() % 800);
        std::vector<std::string> texts;
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t len = 10 + rng() % 120;
            std::string s = len >= pool.size() ? pool : pool.substr(rng() % (pool.size() - len), len);
            for (auto& c : s) {
                if (rng() % 50 == 0) c = "ACGT"[rng() % 4];
            }
            if (rng() % 2) s = oracle::revcomp(s);
            texts.push_back(s);
        }
        const unsigned k = 9 + static_cast<unsigned>(rng() % 9);
        const std::size_t max_occ = 4 + rng() % 30;
        const auto seqs = to_seqs(texts);
        const auto index = build_kmer_seq_matrix(seqs, k, max_occ);
        const auto a = candidates_spgemm(index);
        const auto b = candidates_hashjoin(seqs, index, true);
        const auto c = candidates_bruteforce(seqs, seqs, k, max_occ, true, true);
        const auto ref = oracle::shared_kmer_pairs(texts, texts, k, max_occ, true, true);
        bool same = a == b && a == c && a.size() == ref.size();
        for (std::size_t x = 0; same && x < a.size(); ++x) {
            same = a[x].i == ref[x].i && a[x].j == ref[x].j && a[x].shared == ref[x].shared;
        }
        disagreements += !same;
        total_pairs += a.size();
    }
    const double r0 = overlap_recall(0.0, 61), r1 = overlap_recall(0.01, 62);
    return {disagreements == 0 && r0 == 1.0 && r1 >= 0.95,
            "100 sets (" + std::to_string(total_pairs) + " pairs), " + std::to_string(disagreements) +
                " disagreements; recall " + fmt("%.4f", r0) + " at 0% error, " + fmt("%.4f", r1) + " at 1% (k=17)"};
}

// ---------------------------------------------------------------------------
// 7. Assembly reconstruction.

bool distinct_canonical_kmers(const std::string& g, unsigned k) {
    std::unordered_map<std::uint64_t, int> seen;
    const Sequence s = encode_sequence(g);
    bool ok = true;
    for_each_kmer(s, k, [&](std::size_t, std::uint64_t packed) {
        if (!seen.emplace(canonical_packed(packed, k), 0).second) ok = false;
    });
    return ok;
}

Outcome criterion_assembly() {
    std::mt19937_64 rng(707);
    std::size_t exact = 0;
    for (int t = 0; t < 50; ++t) {
        std::string g;
        do {
            g = oracle::random_dna(rng, 10000);
        } while (!distinct_canonical_kmers(g, 21));
        // Tiled depth-3 error-free reads: every base covered by exactly three reads.
        std::vector<Read> reads;
        const std::size_t len = 150, stride = 50;
        for (std::size_t start = 0; start + len <= g.size(); start += stride) {
            std::string r = g.substr(start, len);
            if (rng() % 2) r = oracle::revcomp(r);
            reads.emplace_back("r", encode_sequence(r));
        }
        reads.emplace_back("r", encode_sequence(g.substr(0, 100)));
        reads.emplace_back("r", encode_sequence(g.substr(g.size() - 100)));
        const auto contigs = generate_contigs(build_dbg(count_kmers(reads, 21)));
        if (contigs.size() == 1) {
            const std::string c = contigs[0].seq.to_string();
            exact += c == g || c == oracle::revcomp(g);
        }
    }

    double worst = 1.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto d = synth_generate({10000, 150, 10.0, 0.005, seed, Placement::Random});
        GraphParams gp;
        gp.min_count = 2;
        CountConfig cc;
        cc.min_count = 2;
        const auto contigs = generate_contigs(build_dbg(count_kmers(d.reads, 21, cc), gp));
        if (contigs.empty()) {
            worst = 0.0;
            continue;
        }
        worst = std::min(worst, contig_identity(contigs.front().seq, d.genome));
    }
    return {exact == 50 && worst >= 0.995, std::to_string(exact) + "/50 exact single contigs; 0.5% error worst " +
                                               "longest-contig identity " + fmt("%.5f", worst) + " (>= 0.995)"};
}

// ---------------------------------------------------------------------------
// 8. MCL.

SparseMatrix<double> graph_of(const oracle::Dense& d) {
    std::vector<Triple<double>> t;
    for (std::size_t i = 0; i < d.size(); ++i) {
        for (std::size_t j = 0; j < d.size(); ++j) {
            if (d[i][j] != 0.0) t.push_back({i, j, d[i][j]});
        }
    }
    return sparse_from_triples<ArithmeticSemiring>(d.size(), d.size(), t);
}

oracle::Dense clique_graph(const std::vector<std::size_t>& sizes) {
    std::size_t n = 0;
    for (auto s : sizes) n += s;
    oracle::Dense d(n, std::vector<double>(n, 0.0));
    std::size_t base = 0;
    for (auto s : sizes) {
        for (std::size_t i = base; i < base + s; ++i) {
            for (std::size_t j = base; j < base + s; ++j) d[i][j] = i == j ? 0.0 : 1.0;
        }
        base += s;
    }
    return d;
}

void size_multisets(std::size_t count, std::size_t min_size, std::vector<std::size_t>& cur,
                    const std::function<void(const std::vector<std::size_t>&)>& fn) {
    if (cur.size() == count) {
        fn(cur);
        return;
    }
    for (std::size_t s = min_size; s <= 8; ++s) {
        cur.push_back(s);
        size_multisets(count, s, cur, fn);
        cur.pop_back();
    }
}

Outcome criterion_mcl() {
    double worst_stochastic = 0.0;
    auto run = [&](const SparseMatrix<double>& g) {
        const auto trace = mcl_run(g, {});
        for (const double e : trace.max_stochastic_error) worst_stochastic = std::max(worst_stochastic, e);
        return trace.clustering;
    };

    std::size_t clique_graphs = 0, clique_wrong = 0;
    for (std::size_t count = 2; count <= 5; ++count) {
        std::vector<std::size_t> cur;
        size_multisets(count, 3, cur, [&](const std::vector<std::size_t>& sizes) {
            ++clique_graphs;
            const auto c = run(graph_of(clique_graph(sizes)));
            std::vector<std::size_t> expected;
            std::size_t base = 0;
            for (auto s : sizes) {
                for (std::size_t i = 0; i < s; ++i) expected.push_back(base);
                base += s;
            }
            clique_wrong += c.clusters != sizes.size() || c.labels != expected;
        });
    }

    auto bridge = clique_graph({6, 6});
    bridge[5][6] = bridge[6][5] = 1.0;
    const auto bc = run(graph_of(bridge));
    const auto reference = canonical_clustering(oracle::dense_mcl(bridge, 2.0, 1e-8, 1e-8, 100));
    const bool bridge_ok = bc.clusters == 2 && bc.labels == reference.labels;

    std::mt19937_64 rng(808);
    std::size_t refine_wrong = 0;
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 2 + rng() % 60;
        oracle::Dense d(n, std::vector<double>(n, 0.0));
        const std::size_t edges = rng() % (3 * n);
        for (std::size_t e = 0; e < edges; ++e) {
            const std::size_t i = rng() % n, j = rng() % n;
            if (i != j) d[i][j] = d[j][i] = std::uniform_real_distribution<double>(0.1, 3.0)(rng);
        }
        const auto g = graph_of(d);
        const auto comp = connected_components(g);
        const auto c = run(g);
        for (std::size_t v = 0; v < n; ++v) refine_wrong += comp[c.labels[v]] != comp[v];
    }
    return {worst_stochastic <= 1e-9 && clique_wrong == 0 && bridge_ok && refine_wrong == 0,
            "max |colsum-1| " + fmt("%.2e", worst_stochastic) + "; " + std::to_string(clique_graphs) +
                " clique graphs, " + std::to_string(clique_wrong) + " wrong; bridge " +
                (bridge_ok ? "2 clusters = dense reference" : "MISMATCH") + "; refinement violations " +
                std::to_string(refine_wrong) + "/100 graphs"};
}

// ---------------------------------------------------------------------------
// 9. Sketches.

std::vector<Kmer> distinct_kmers(std::mt19937_64& rng, std::size_t n) {
    std::set<std::uint64_t> seen;
    std::vector<Kmer> out;
    while (out.size() < n) {
        const std::uint64_t packed = canonical_packed(rng() & ((std::uint64_t{1} << 42) - 1), 21);
        if (seen.insert(packed).second) out.push_back(Kmer{packed, 21, Alphabet::Dna});
    }
    return out;
}

Outcome criterion_sketch() {
    std::mt19937_64 rng(909);
    const auto keys = distinct_kmers(rng, 100000);
    double sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) sum += hll_estimate(hll_build(keys, 21, 14, seed));
    const double rel = std::abs(sum / 20.0 - 100000.0) / 100000.0;

    const std::vector<Kmer> left(keys.begin(), keys.begin() + 60000), right(keys.begin() + 40000, keys.end());
    const bool merge_ok = hll_merge(hll_build(left, 21, 14, 7), hll_build(right, 21, 14, 7)) == hll_build(keys, 21, 14, 7);

    // |A and B| = i, |A \ B| = |B \ A| = d, so J = i / (i + 2d).
    const std::pair<std::size_t, std::size_t> shapes[] = {{300, 1350}, {1000, 1000}, {1500, 750}, {2700, 150}};
    bool minhash_ok = true;
    std::string per_j;
    for (const auto& [inter, diff] : shapes) {
        int within = 0;
        for (int trial = 0; trial < 100; ++trial) {
            const auto all = distinct_kmers(rng, inter + 2 * diff);
            const std::vector<Kmer> a(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(inter + diff));
            std::vector<Kmer> b(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(inter));
            b.insert(b.end(), all.begin() + static_cast<std::ptrdiff_t>(inter + diff), all.end());
            std::set<std::string> sa, sb;
            for (const auto& m : a) sa.insert(kmer_to_string(m));
            for (const auto& m : b) sb.insert(kmer_to_string(m));
            const double exact = oracle::exact_jaccard(sa, sb);
            const auto seed = static_cast<std::uint64_t>(trial + 1);
            within += std::abs(minhash_jaccard(minhash_build(a, 21, 256, seed), minhash_build(b, 21, 256, seed)) -
                               exact) <= 0.10;
        }
        minhash_ok = minhash_ok && within >= 95;
        per_j += std::to_string(within) + "/100 ";
    }
    return {rel <= 0.02 && merge_ok && minhash_ok, "HLL mean rel error " + fmt("%.4f", rel) + " (<= 0.02); merge " +
                                                      (merge_ok ? "bit-exact" : "DIFFERS") +
                                                      "; MinHash within 0.10 for J=0.1,1/3,0.5,0.9: " + per_j};
}

// ---------------------------------------------------------------------------
// 10. Distributed counting simulation.

Outcome criterion_distsim() {
    std::mt19937_64 rng(1010);
    // Reads from a genome at depth 4, so the final table is non-trivial.
    const std::string genome = oracle::random_dna(rng, 20000);
    std::vector<std::string> texts;
    for (int i = 0; i < 600; ++i) {
        std::string r = genome.substr(rng() % (genome.size() - 150), 150);
        if (rng() % 50 == 0) r[rng() % 150] = 'A';
        texts.push_back(rng() % 2 ? oracle::revcomp(r) : r);
    }
    const auto reads = to_reads(texts);
    const auto expected = count_kmers(reads, 21);
    std::size_t configs = 0, differ = 0;
    for (std::size_t p : {1u, 2u, 4u, 8u}) {
        for (auto mode : {CommMode::BulkAllToAll, CommMode::AsyncOneSided}) {
            for (std::size_t b : {16u, 1024u}) {
                DistConfig d;
                d.p = p;
                d.mode = mode;
                d.buffer = b;
                d.phase_cap = mode == CommMode::BulkAllToAll ? 2000 : 0;
                ++configs;
                differ += !(run_dist_count(reads, 21, d).table == expected);
            }
        }
    }

    // Uniform input: independent random reads.
    std::vector<std::string> uniform;
    for (int i = 0; i < 2000; ++i) uniform.push_back(oracle::random_dna(rng, 150));
    const auto uniform_reads = to_reads(uniform);
    double worst_fraction = 0.0;
    for (std::size_t p : {2u, 4u, 8u}) {
        DistConfig d;
        d.p = p;
        const double f = run_dist_count(uniform_reads, 21, d).metrics.remote_fraction();
        worst_fraction = std::max(worst_fraction, std::abs(f - static_cast<double>(p - 1) / static_cast<double>(p)));
    }

    double worst_halving = 0.0;
    for (std::size_t b : {16u, 64u, 256u}) {
        DistConfig d;
        d.p = 4;
        d.buffer = b;
        const auto small = run_dist_count(uniform_reads, 21, d).metrics;
        d.buffer = 2 * b;
        const auto large = run_dist_count(uniform_reads, 21, d).metrics;
        for (std::size_t x = 0; x < d.p * d.p; ++x) {
            const double dev = std::abs(static_cast<double>(large.pass_pair_messages[x]) -
                                        static_cast<double>(small.pass_pair_messages[x]) / 2.0);
            worst_halving = std::max(worst_halving, dev);
        }
    }

    // 50% skew: poly-A reads alternate rank-wise with background reads whose 21-mers are
    // all distinct, so poly-A is half of all occurrences and the background
    // never combines. The background share of the hot rank's traffic is then
    // recounted by hand and subtracted, leaving the heavy hitter's own records.
    const DistConfig base_cfg = [] {
        DistConfig c;
        c.p = 8;
        return c;
    }();
    const std::uint64_t hot_key = make_kmer(std::string(21, 'A')).packed;
    const std::size_t hot = owner_of(hot_key, base_cfg.p, base_cfg.owner_seed);
    std::unordered_map<std::uint64_t, int> seen{{hot_key, 0}};
    std::vector<std::string> skewed;
    std::uint64_t background_to_hot = 0, hot_remote = 0;
    while (skewed.size() < 4000) {
        const std::size_t rank = skewed.size() % base_cfg.p;
        if ((skewed.size() / base_cfg.p) % 2 == 1) {
            hot_remote += rank != hot ? 130 : 0;
            skewed.push_back(std::string(150, 'A'));
            continue;
        }
        const std::string r = oracle::random_dna(rng, 150);
        std::vector<std::uint64_t> keys;
        for_each_kmer(encode_sequence(r), 21, [&](std::size_t, std::uint64_t packed) {
            keys.push_back(canonical_packed(packed, 21));
        });
        std::set<std::uint64_t> own(keys.begin(), keys.end());
        bool fresh = own.size() == keys.size();
        for (const auto key : keys) fresh = fresh && !seen.count(key);
        if (!fresh) continue;
        for (const auto key : keys) {
            seen.emplace(key, 0);
            background_to_hot += rank != hot && owner_of(key, base_cfg.p, base_cfg.owner_seed) == hot;
        }
        skewed.push_back(r);
    }
    const auto skewed_reads = to_reads(skewed);
    DistConfig d = base_cfg;
    const auto plain = run_dist_count(skewed_reads, 21, d);
    d.combiner = 64;
    const auto combined = run_dist_count(skewed_reads, 21, d);
    // Both passes send every remote record, hence the factor 2.
    const std::uint64_t plain_total = plain.metrics.received[hot], comb_total = combined.metrics.received[hot];
    const bool recount_ok = plain_total == 2 * (background_to_hot + hot_remote) && comb_total >= 2 * background_to_hot;
    const double plain_hot = static_cast<double>(plain_total - 2 * background_to_hot);
    const double comb_hot = recount_ok ? static_cast<double>(comb_total - 2 * background_to_hot) : 0.0;
    const double reduction = comb_hot == 0.0 ? 0.0 : plain_hot / comb_hot;
    const double total_reduction = static_cast<double>(plain_total) / static_cast<double>(std::max<std::uint64_t>(comb_total, 1));
    const bool tables_same = plain.table == combined.table;

    return {differ == 0 && worst_fraction <= 0.01 && worst_halving <= 1.0 && recount_ok &&
                reduction >= 10.0 && tables_same,
            std::to_string(configs) + " configs, " + std::to_string(differ) + " tables differ; remote fraction dev " +
                fmt("%.4f", worst_fraction) + "; halving dev " + fmt("%.1f", worst_halving) +
                " msgs/pair; p=8 hot-k-mer records to hot rank " + fmt("%.0f", plain_hot) + " -> " +
                fmt("%.0f", comb_hot) + " (" + fmt("%.1fx", reduction) + ", recount " + (recount_ok ? "ok" : "MISMATCH") +
                "); all records to hot rank " + fmt("%.1fx", total_reduction) + "; imbalance " +
                fmt("%.2f", imbalance_factor(plain.metrics)) + " -> " + fmt("%.2f", imbalance_factor(combined.metrics))};
}

// ---------------------------------------------------------------------------
// 11. End-to-end pipeline through the CLI.

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome criterion_pipeline(const std::string& cli) {
    const fs::path base = fs::temp_directory_path() / "genomotif_acceptance";
    fs::remove_all(base);
    fs::create_directories(base);
    auto run = [&](const std::string& name, double& secs) {
        const auto t0 = Clock::now();
        const std::string cmd = "\"" + cli + "\" --threads 1 pipeline --genome-len 10000 --error 0 --out \"" +
                                (base / name).string() + "\" > \"" + (base / (name + ".json")).string() + "\"";
        const int rc = std::system(cmd.c_str());
        secs = seconds_since(t0);
        return rc;
    };
    double s1 = 0, s2 = 0;
    const int rc1 = run("a", s1), rc2 = run("b", s2);
    if (rc1 != 0 || rc2 != 0) return {false, "pipeline exited with " + std::to_string(rc1) + "/" + std::to_string(rc2)};
    double identity = 0.0;
    try {
        identity = nlohmann::json::parse(slurp(base / "a.json")).at("identity").get<double>();
    } catch (const std::exception& e) {
        return {false, std::string("bad summary: ") + e.what()};
    }
    std::size_t compared = 0, differ = 0;
    for (const auto& entry : fs::directory_iterator(base / "a")) {
        const auto name = entry.path().filename();
        if (name == artifact::kTiming) continue;  // wall-clock only
        ++compared;
        differ += slurp(entry.path()) != slurp(base / "b" / name);
    }
    differ += slurp(base / "a.json") != slurp(base / "b.json");
    fs::remove_all(base);
    return {identity == 1.0 && std::max(s1, s2) < 30.0 && differ == 0 && compared >= 10,
            "runs " + fmt("%.2f s", s1) + " / " + fmt("%.2f s", s2) + " (limit 30 s); identity " +
                fmt("%.6f", identity) + "; " + std::to_string(compared) + " artifacts + stdout, " +
                std::to_string(differ) + " differ"};
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: acceptance <genomotif-cli>\n";
        return 2;
    }
    const std::string cli = argv[1];
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"kmer-oracle-equivalence", criterion_kmer_oracle},
        {"worked-example", criterion_worked_example},
        {"bloom-behavior", criterion_bloom},
        {"alignment-oracles", criterion_alignment},
        {"spgemm-dense-oracle", criterion_spgemm},
        {"overlap-equivalence-recall", criterion_overlap},
        {"assembly-reconstruction", criterion_assembly},
        {"mcl-properties", criterion_mcl},
        {"sketch-accuracy", criterion_sketch},
        {"distributed-simulation", criterion_distsim},
        {"end-to-end-pipeline", [&] { return criterion_pipeline(cli); }},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        const auto t0 = Clock::now();
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failed += !o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << ' ' << (i + 1) << ' ' << criteria[i].first << " [" << o.detail
                  << "] " << fmt("%.1fs", seconds_since(t0)) << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
