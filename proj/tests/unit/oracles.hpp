#pragma once

// Reference implementations used by the tests. They work on plain strings,
// std::map and dense arrays and share no code with the library kernels.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace oracle {

inline std::string random_dna(std::mt19937_64& rng, std::size_t n, const char* alphabet = "ACGT") {
    const std::size_t size = std::char_traits<char>::length(alphabet);
    std::uniform_int_distribution<std::size_t> d(0, size - 1);
    std::string s(n, 'A');
    for (auto& c : s) c = alphabet[d(rng)];
    return s;
}

inline char complement(char c) {
    switch (c) {
        case 'A': return 'T';
        case 'C': return 'G';
        case 'G': return 'C';
        default: return 'A';
    }
}

inline std::string revcomp(const std::string& s) {
    std::string r(s.rbegin(), s.rend());
    for (auto& c : r) c = complement(c);
    return r;
}

inline int code(char c) {
    switch (c) {
        case 'A': return 0;
        case 'C': return 1;
        case 'G': return 2;
        default: return 3;
    }
}

struct NaiveEntry {
    std::uint32_t count = 0;
    std::array<std::uint32_t, 4> left{};
    std::array<std::uint32_t, 4> right{};
};

// Count every window, canonicalizing by string comparison, then drop entries
// below max(2, min_count).
inline std::map<std::string, NaiveEntry> naive_count(const std::vector<std::string>& reads, unsigned k, bool canonical,
                                                     std::uint32_t min_count) {
    std::map<std::string, NaiveEntry> table;
    for (const auto& r : reads) {
        if (r.size() < k) continue;
        for (std::size_t i = 0; i + k <= r.size(); ++i) {
            std::string w = r.substr(i, k);
            int prev = i > 0 ? code(r[i - 1]) : -1;
            int next = i + k < r.size() ? code(r[i + k]) : -1;
            if (canonical) {
                const std::string rc = revcomp(w);
                if (rc < w) {
                    w = rc;
                    const int new_prev = next < 0 ? -1 : 3 - next;
                    const int new_next = prev < 0 ? -1 : 3 - prev;
                    prev = new_prev;
                    next = new_next;
                }
            }
            auto& e = table[w];
            ++e.count;
            if (prev >= 0) ++e.left[static_cast<std::size_t>(prev)];
            if (next >= 0) ++e.right[static_cast<std::size_t>(next)];
        }
    }
    const std::uint32_t threshold = std::max<std::uint32_t>(2, min_count);
    for (auto it = table.begin(); it != table.end();) {
        it = it->second.count < threshold ? table.erase(it) : std::next(it);
    }
    return table;
}

// Full-matrix DP on strings (linear gaps).
inline int nw_score(const std::string& a, const std::string& b, int match, int mismatch, int gap) {
    std::vector<std::vector<int>> h(a.size() + 1, std::vector<int>(b.size() + 1, 0));
    for (std::size_t i = 0; i <= a.size(); ++i) h[i][0] = static_cast<int>(i) * gap;
    for (std::size_t j = 0; j <= b.size(); ++j) h[0][j] = static_cast<int>(j) * gap;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const int sub = a[i - 1] == b[j - 1] ? match : mismatch;
            h[i][j] = std::max({h[i - 1][j - 1] + sub, h[i - 1][j] + gap, h[i][j - 1] + gap});
        }
    }
    return h[a.size()][b.size()];
}

inline int sw_score(const std::string& a, const std::string& b, int match, int mismatch, int gap) {
    std::vector<std::vector<int>> h(a.size() + 1, std::vector<int>(b.size() + 1, 0));
    int best = 0;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const int sub = a[i - 1] == b[j - 1] ? match : mismatch;
            h[i][j] = std::max({0, h[i - 1][j - 1] + sub, h[i - 1][j] + gap, h[i][j - 1] + gap});
            best = std::max(best, h[i][j]);
        }
    }
    return best;
}

// Best score over all prefix pairs (a[0..i), b[0..j)), empty included:
// the unrestricted one-sided extension.
inline int best_prefix_score(const std::string& a, const std::string& b, int match, int mismatch, int gap) {
    std::vector<std::vector<int>> h(a.size() + 1, std::vector<int>(b.size() + 1, 0));
    int best = 0;
    for (std::size_t i = 0; i <= a.size(); ++i) {
        for (std::size_t j = 0; j <= b.size(); ++j) {
            if (i == 0 && j == 0) continue;
            int v = std::numeric_limits<int>::min() / 2;
            if (i > 0 && j > 0) v = std::max(v, h[i - 1][j - 1] + (a[i - 1] == b[j - 1] ? match : mismatch));
            if (i > 0) v = std::max(v, h[i - 1][j] + gap);
            if (j > 0) v = std::max(v, h[i][j - 1] + gap);
            h[i][j] = v;
            best = std::max(best, v);
        }
    }
    return best;
}

// Score of an explicit edit path (=, X, I, D) with linear gaps.
inline long long path_score(const std::string& path, int match, int mismatch, int gap) {
    long long s = 0;
    for (const char c : path) s += c == '=' ? match : c == 'X' ? mismatch : gap;
    return s;
}

// Distinct k-mers of a string (canonical optional) with first position and
// orientation of the first occurrence.
struct Hit {
    std::size_t pos;
    bool rev;
};
inline std::map<std::string, Hit> distinct_kmers(const std::string& s, unsigned k, bool canonical) {
    std::map<std::string, Hit> out;
    for (std::size_t i = 0; i + k <= s.size(); ++i) {
        std::string w = s.substr(i, k);
        bool rev = false;
        if (canonical) {
            const std::string rc = revcomp(w);
            if (rc < w) {
                w = rc;
                rev = true;
            }
        }
        out.emplace(w, Hit{i, rev});
    }
    return out;
}

struct Pair {
    std::size_t i, j, shared, pos_a, pos_b;
    bool reverse;
    bool operator==(const Pair&) const = default;
    bool operator<(const Pair& o) const { return std::tie(i, j) < std::tie(o.i, o.j); }
};

// All-pairs shared-k-mer oracle with the repeat filter applied within each set.
inline std::vector<Pair> shared_kmer_pairs(const std::vector<std::string>& s, const std::vector<std::string>& t,
                                           unsigned k, std::size_t max_occ, bool canonical, bool self) {
    auto filtered = [&](const std::vector<std::string>& set) {
        std::vector<std::map<std::string, Hit>> per;
        std::map<std::string, std::size_t> freq;
        for (const auto& x : set) {
            per.push_back(distinct_kmers(x, k, canonical));
            for (const auto& [w, h] : per.back()) ++freq[w];
        }
        for (auto& m : per) {
            for (auto it = m.begin(); it != m.end();) it = freq[it->first] > max_occ ? m.erase(it) : std::next(it);
        }
        return per;
    };
    const auto ps = filtered(s);
    const auto pt = self ? ps : filtered(t);
    std::vector<Pair> out;
    for (std::size_t i = 0; i < ps.size(); ++i) {
        for (std::size_t j = self ? i + 1 : 0; j < pt.size(); ++j) {
            Pair p{i, j, 0, 0, 0, false};
            for (const auto& [w, h] : ps[i]) {  // std::map iterates in lexicographic order
                auto it = pt[j].find(w);
                if (it == pt[j].end()) continue;
                if (p.shared == 0) {
                    p.pos_a = h.pos;
                    p.pos_b = it->second.pos;
                    p.reverse = h.rev != it->second.rev;
                }
                ++p.shared;
            }
            if (p.shared > 0) out.push_back(p);
        }
    }
    return out;
}

inline double exact_jaccard(const std::set<std::string>& a, const std::set<std::string>& b) {
    if (a.empty() && b.empty()) return 1.0;
    std::size_t inter = 0;
    for (const auto& x : a) inter += b.count(x);
    return static_cast<double>(inter) / static_cast<double>(a.size() + b.size() - inter);
}

// Dense column-major-agnostic matrix helpers for MCL.
using Dense = std::vector<std::vector<double>>;

// One MCL step on a dense matrix with fixed summation order: ascending k for
// products and ascending row for column sums, matching the sparse kernels.
inline Dense dense_mcl_step(const Dense& m, double r, double prune) {
    const std::size_t n = m.size();
    Dense sq(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            bool any = false;
            for (std::size_t k = 0; k < n; ++k) {
                if (m[i][k] == 0.0 || m[k][j] == 0.0) continue;
                const double prod = m[i][k] * m[k][j];
                acc = any ? acc + prod : 0.0 + prod;
                any = true;
            }
            sq[i][j] = acc;
        }
    }
    auto normalize = [&](Dense& x) {
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += x[i][j];
            if (s > 0.0) {
                for (std::size_t i = 0; i < n; ++i) x[i][j] /= s;
            }
        }
    };
    normalize(sq);
    for (auto& row : sq) {
        for (auto& v : row) v = v == 0.0 ? 0.0 : std::pow(v, r);
    }
    for (std::size_t j = 0; j < n; ++j) {
        double mx = 0.0;
        for (std::size_t i = 0; i < n; ++i) mx = std::max(mx, sq[i][j]);
        for (std::size_t i = 0; i < n; ++i) {
            if (sq[i][j] < prune && sq[i][j] != mx) sq[i][j] = 0.0;
        }
    }
    normalize(sq);
    return sq;
}

// Full dense MCL run: self-loops, iterate to chaos < eps, components of the limit.
inline std::vector<std::size_t> dense_mcl(const Dense& adj, double r, double prune, double eps, unsigned max_iter) {
    const std::size_t n = adj.size();
    Dense m = adj;
    for (std::size_t j = 0; j < n; ++j) {
        double mx = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i != j) mx = std::max(mx, adj[i][j]);
        }
        m[j][j] = mx > 0.0 ? mx : 1.0;
    }
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += m[i][j];
        for (std::size_t i = 0; i < n; ++i) m[i][j] /= s;
    }
    for (unsigned it = 0; it < max_iter; ++it) {
        m = dense_mcl_step(m, r, prune);
        double chaos = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double mx = 0.0, sq = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                mx = std::max(mx, m[i][j]);
                sq += m[i][j] * m[i][j];
            }
            chaos = std::max(chaos, mx - sq);
        }
        if (chaos < eps) break;
    }
    // Components of the nonzero pattern by repeated relaxation of min labels.
    std::vector<std::size_t> label(n);
    for (std::size_t v = 0; v < n; ++v) label[v] = v;
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (m[i][j] == 0.0) continue;
                const std::size_t l = std::min(label[i], label[j]);
                if (label[i] != l || label[j] != l) {
                    label[i] = label[j] = l;
                    changed = true;
                }
            }
        }
    }
    return label;
}

}  // namespace oracle
