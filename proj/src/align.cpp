#include "genomotif/align.hpp"

#include <algorithm>
#include <atomic>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <thread>

namespace genomotif {

namespace {

constexpr int kNegInf = std::numeric_limits<int>::min() / 4;

enum Dir : std::uint8_t { kStop = 0, kDiag = 1, kUp = 2, kLeft = 3 };

void check_length(std::size_t n) {
    if (n > kMaxAlignLength) throw InvalidParameter("sequence exceeds the 2e6-symbol alignment limit");
}

void append_op(std::string& ops, char op) { ops.push_back(op); }

std::string run_length(const std::string& ops) {
    std::string out;
    for (std::size_t i = 0; i < ops.size();) {
        std::size_t j = i;
        while (j < ops.size() && ops[j] == ops[i]) ++j;
        out += std::to_string(j - i);
        out.push_back(ops[i]);
        i = j;
    }
    return out;
}

// Walks the direction matrix back from (i, j); returns the reversed op string
// and the cell where the walk stopped.
std::string trace(const std::vector<std::uint8_t>& dirs, std::size_t cols, std::span<const std::uint8_t> a,
                  std::span<const std::uint8_t> b, std::size_t& i, std::size_t& j) {
    std::string ops;
    for (;;) {
        const std::uint8_t d = dirs[i * cols + j];
        if (d == kStop) break;
        if (d == kDiag) {
            append_op(ops, a[i - 1] == b[j - 1] ? '=' : 'X');
            --i;
            --j;
        } else if (d == kUp) {
            append_op(ops, 'I');
            --i;
        } else {
            append_op(ops, 'D');
            --j;
        }
    }
    std::reverse(ops.begin(), ops.end());
    return ops;
}

}  // namespace

void ScoringScheme::validate() const {
    if (!(match > 0 && mismatch < 0 && gap < 0)) {
        throw InvalidParameter("scoring scheme must satisfy match > 0 > mismatch, gap");
    }
}

AlignmentResult needleman_wunsch(const Sequence& a, const Sequence& b, const ScoringScheme& s, bool edit_path) {
    s.validate();
    check_length(a.size());
    check_length(b.size());
    const auto ac = a.codes();
    const auto bc = b.codes();
    const std::size_t n = ac.size(), m = bc.size();

    AlignmentResult r;
    r.qend = n;
    r.tend = m;
    if (!edit_path) {
        r.score = global_score_rowmajor(ac, bc, s);
        return r;
    }

    const std::size_t cols = m + 1;
    std::vector<std::uint8_t> dirs((n + 1) * cols, kStop);
    std::vector<int> prev(cols), cur(cols);
    for (std::size_t j = 0; j <= m; ++j) {
        prev[j] = static_cast<int>(j) * s.gap;
        if (j > 0) dirs[j] = kLeft;
    }
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = static_cast<int>(i) * s.gap;
        dirs[i * cols] = kUp;
        for (std::size_t j = 1; j <= m; ++j) {
            const int diag = prev[j - 1] + s.substitution(ac[i - 1], bc[j - 1]);
            const int up = prev[j] + s.gap;
            const int left = cur[j - 1] + s.gap;
            int best = diag;
            std::uint8_t d = kDiag;
            if (up > best) {
                best = up;
                d = kUp;
            }
            if (left > best) {
                best = left;
                d = kLeft;
            }
            cur[j] = best;
            dirs[i * cols + j] = d;
        }
        std::swap(prev, cur);
    }
    r.score = prev[m];
    std::size_t i = n, j = m;
    r.edit_path = run_length(trace(dirs, cols, ac, bc, i, j));
    return r;
}

AlignmentResult smith_waterman(const Sequence& a, const Sequence& b, const ScoringScheme& s, bool edit_path) {
    s.validate();
    check_length(a.size());
    check_length(b.size());
    const auto ac = a.codes();
    const auto bc = b.codes();
    const std::size_t n = ac.size(), m = bc.size();
    const std::size_t cols = m + 1;

    std::vector<std::uint8_t> dirs((n + 1) * cols, kStop);
    std::vector<int> prev(cols, 0), cur(cols, 0);
    int best = 0;
    std::size_t bi = 0, bj = 0;
    for (std::size_t i = 1; i <= n; ++i) {
        cur[0] = 0;
        for (std::size_t j = 1; j <= m; ++j) {
            const int diag = prev[j - 1] + s.substitution(ac[i - 1], bc[j - 1]);
            const int up = prev[j] + s.gap;
            const int left = cur[j - 1] + s.gap;
            int h = 0;
            std::uint8_t d = kStop;
            if (diag > h) {
                h = diag;
                d = kDiag;
            }
            if (up > h) {
                h = up;
                d = kUp;
            }
            if (left > h) {
                h = left;
                d = kLeft;
            }
            cur[j] = h;
            dirs[i * cols + j] = d;
            if (h > best) {
                best = h;
                bi = i;
                bj = j;
            }
        }
        std::swap(prev, cur);
    }

    AlignmentResult r;
    r.score = best;
    if (best == 0) {
        if (edit_path) r.edit_path = std::string{};
        return r;
    }
    std::size_t i = bi, j = bj;
    const std::string ops = trace(dirs, cols, ac, bc, i, j);
    r.qstart = i;
    r.qend = bi;
    r.tstart = j;
    r.tend = bj;
    if (edit_path) r.edit_path = run_length(ops);
    return r;
}

PathStats path_stats(const std::string& edit_path) {
    PathStats st;
    std::size_t run = 0;
    for (const char c : edit_path) {
        if (c >= '0' && c <= '9') {
            run = run * 10 + static_cast<std::size_t>(c - '0');
            continue;
        }
        switch (c) {
            case '=': st.matches += run; break;
            case 'X': st.mismatches += run; break;
            case 'I': st.insertions += run; break;
            case 'D': st.deletions += run; break;
            default: throw ParseError(1, std::string("unknown edit op '") + c + "'");
        }
        run = 0;
    }
    return st;
}

int global_score_rowmajor(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b, const ScoringScheme& s) {
    const std::size_t m = b.size();
    std::vector<int> prev(m + 1), cur(m + 1);
    for (std::size_t j = 0; j <= m; ++j) prev[j] = static_cast<int>(j) * s.gap;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = static_cast<int>(i) * s.gap;
        for (std::size_t j = 1; j <= m; ++j) {
            cur[j] = std::max({prev[j - 1] + s.substitution(a[i - 1], b[j - 1]), prev[j] + s.gap, cur[j - 1] + s.gap});
        }
        std::swap(prev, cur);
    }
    return prev[m];
}

int local_score_rowmajor(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b, const ScoringScheme& s) {
    const std::size_t m = b.size();
    std::vector<int> prev(m + 1, 0), cur(m + 1, 0);
    int best = 0;
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= m; ++j) {
            cur[j] = std::max({0, prev[j - 1] + s.substitution(a[i - 1], b[j - 1]), prev[j] + s.gap,
                               cur[j - 1] + s.gap});
            best = std::max(best, cur[j]);
        }
        std::swap(prev, cur);
    }
    return best;
}

int global_score_wavefront(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b, const ScoringScheme& s) {
    const std::size_t n = a.size(), m = b.size();
    // Anti-diagonal d holds cells (i, d - i); buffers are indexed by i.
    std::vector<int> d2(n + 1, kNegInf), d1(n + 1, kNegInf), cur(n + 1, kNegInf);
    d1[0] = 0;
    for (std::size_t d = 1; d <= n + m; ++d) {
        const std::size_t lo = d > m ? d - m : 0;
        const std::size_t hi = std::min(n, d);
        for (std::size_t i = lo; i <= hi; ++i) {
            const std::size_t j = d - i;
            int v = kNegInf;
            if (i > 0 && j > 0) v = std::max(v, d2[i - 1] + s.substitution(a[i - 1], b[j - 1]));
            if (i > 0) v = std::max(v, d1[i - 1] + s.gap);
            if (j > 0) v = std::max(v, d1[i] + s.gap);
            cur[i] = v;
        }
        std::swap(d2, d1);
        std::swap(d1, cur);
        std::fill(cur.begin(), cur.end(), kNegInf);
    }
    return d1[n];
}

XdropExtension xdrop_extend_one_side(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
                                     const ScoringScheme& s, int x_drop) {
    if (x_drop < 0) throw InvalidParameter("X must be >= 0");
    const std::size_t n = a.size(), m = b.size();
    XdropExtension ext;

    struct Diagonal {
        std::vector<int> h;
        std::size_t lo = 1, hi = 0;  // live range; empty when lo > hi
        bool empty() const noexcept { return lo > hi; }
        void reset() {
            if (!empty()) std::fill(h.begin() + static_cast<std::ptrdiff_t>(lo), h.begin() + static_cast<std::ptrdiff_t>(hi) + 1, kNegInf);
            lo = 1;
            hi = 0;
        }
    };
    Diagonal d2{std::vector<int>(n + 1, kNegInf)}, d1{std::vector<int>(n + 1, kNegInf)},
        cur{std::vector<int>(n + 1, kNegInf)};
    d1.h[0] = 0;
    d1.lo = d1.hi = 0;
    int best = 0;

    for (std::size_t d = 1; d <= n + m; ++d) {
        std::size_t lo = d1.lo;
        std::size_t hi = d1.hi + 1;
        if (!d2.empty()) {
            lo = std::min(lo, d2.lo + 1);
            hi = std::max(hi, d2.hi + 1);
        }
        lo = std::max(lo, d > m ? d - m : std::size_t{0});
        hi = std::min({hi, n, d});

        const int floor = best - x_drop;
        std::size_t live_lo = 1, live_hi = 0;
        int diag_best = kNegInf;
        std::size_t diag_best_i = 0;
        for (std::size_t i = lo; i <= hi; ++i) {
            const std::size_t j = d - i;
            int v = kNegInf;
            if (i > 0 && j > 0 && d2.h[i - 1] > kNegInf) v = std::max(v, d2.h[i - 1] + s.substitution(a[i - 1], b[j - 1]));
            if (i > 0 && d1.h[i - 1] > kNegInf) v = std::max(v, d1.h[i - 1] + s.gap);
            if (j > 0 && d1.h[i] > kNegInf) v = std::max(v, d1.h[i] + s.gap);
            ++ext.cells;
            if (v <= kNegInf || v < floor) continue;
            cur.h[i] = v;
            if (live_lo > live_hi) live_lo = i;
            live_hi = i;
            if (v > diag_best) {
                diag_best = v;
                diag_best_i = i;
            }
        }
        if (live_lo > live_hi) break;  // no live cell on this anti-diagonal
        cur.lo = live_lo;
        cur.hi = live_hi;
        ++ext.antidiagonals;
        if (diag_best > best) {
            best = diag_best;
            ext.query_len = diag_best_i;
            ext.target_len = d - diag_best_i;
        }
        // Cells between live_lo and live_hi that were pruned are already -inf.
        std::swap(d2, d1);
        std::swap(d1, cur);
        cur.reset();
    }
    ext.score = best;
    return ext;
}

AlignmentResult xdrop_extend(const Sequence& a, const Sequence& b, const SeedPair& seed, const ScoringScheme& s,
                             int x_drop) {
    s.validate();
    check_length(a.size());
    check_length(b.size());
    const std::size_t k = seed.k;
    if (k == 0 || seed.query_offset + k > a.size() || seed.target_offset + k > b.size()) {
        throw SeedMismatch("seed lies outside the sequences");
    }
    const auto ac = a.codes();
    std::vector<std::uint8_t> bc = b.codes();
    std::size_t toff = seed.target_offset;
    if (seed.strand == Strand::Reverse) {
        std::reverse(bc.begin(), bc.end());
        for (auto& c : bc) c = complement_code(c);
        toff = b.size() - seed.target_offset - k;
    }
    const std::size_t qoff = seed.query_offset;
    if (!std::equal(ac.begin() + static_cast<std::ptrdiff_t>(qoff), ac.begin() + static_cast<std::ptrdiff_t>(qoff + k),
                    bc.begin() + static_cast<std::ptrdiff_t>(toff))) {
        throw SeedMismatch("seed substrings differ");
    }

    const std::span<const std::uint8_t> as(ac), bs(bc);
    const XdropExtension right = xdrop_extend_one_side(as.subspan(qoff + k), bs.subspan(toff + k), s, x_drop);
    std::vector<std::uint8_t> arev(ac.begin(), ac.begin() + static_cast<std::ptrdiff_t>(qoff));
    std::vector<std::uint8_t> brev(bc.begin(), bc.begin() + static_cast<std::ptrdiff_t>(toff));
    std::reverse(arev.begin(), arev.end());
    std::reverse(brev.begin(), brev.end());
    const XdropExtension left = xdrop_extend_one_side(arev, brev, s, x_drop);

    AlignmentResult r;
    r.score = static_cast<int>(k) * s.match + left.score + right.score;
    r.qstart = qoff - left.query_len;
    r.qend = qoff + k + right.query_len;
    const std::size_t tstart = toff - left.target_len;
    const std::size_t tend = toff + k + right.target_len;
    r.strand = seed.strand;
    if (seed.strand == Strand::Reverse) {
        r.tstart = b.size() - tend;
        r.tend = b.size() - tstart;
    } else {
        r.tstart = tstart;
        r.tend = tend;
    }
    return r;
}

const char* align_mode_name(AlignMode m) noexcept {
    switch (m) {
        case AlignMode::NW: return "nw";
        case AlignMode::SW: return "sw";
        case AlignMode::XDrop: return "xdrop";
    }
    return "?";
}

std::vector<AlignOutcome> batch_align(std::span<const AlignPair> pairs, const ScoringScheme& s, AlignMode mode,
                                      int x_drop, unsigned threads) {
    std::vector<AlignOutcome> out(pairs.size());
    auto run_one = [&](std::size_t idx) {
        const AlignPair& p = pairs[idx];
        try {
            switch (mode) {
                case AlignMode::NW: out[idx].result = needleman_wunsch(p.query, p.target, s); break;
                case AlignMode::SW: out[idx].result = smith_waterman(p.query, p.target, s); break;
                case AlignMode::XDrop:
                    if (!p.seed) throw InvalidParameter("X-drop mode requires a seed");
                    out[idx].result = xdrop_extend(p.query, p.target, *p.seed, s, x_drop);
                    break;
            }
        } catch (const std::exception& e) {
            out[idx].error = e.what();
            if (out[idx].error.empty()) out[idx].error = "alignment failed";
        }
    };
    if (threads <= 1 || pairs.size() < 2) {
        for (std::size_t i = 0; i < pairs.size(); ++i) run_one(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < pairs.size(); i = next++) run_one(i);
        });
    }
    pool.clear();
    return out;
}

void write_alignment_tsv(std::ostream& out, const AlignmentRecord& r) {
    out << r.qid << '\t' << r.qlen << '\t' << r.result.qstart << '\t' << r.result.qend << '\t'
        << strand_char(r.result.strand) << '\t' << r.tid << '\t' << r.tlen << '\t' << r.result.tstart << '\t'
        << r.result.tend << '\t' << r.result.score << '\t' << align_mode_name(r.mode) << '\n';
}

std::vector<AlignmentRecord> read_alignment_tsv(std::istream& in) {
    std::vector<AlignmentRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream ss(line);
        AlignmentRecord r;
        char strand = 0;
        std::string mode;
        if (!(ss >> r.qid >> r.qlen >> r.result.qstart >> r.result.qend >> strand >> r.tid >> r.tlen >>
              r.result.tstart >> r.result.tend >> r.result.score >> mode)) {
            throw ParseError(line_no, "expected 11 alignment fields");
        }
        if (strand != '+' && strand != '-') throw ParseError(line_no, "strand must be '+' or '-'");
        r.result.strand = strand == '+' ? Strand::Forward : Strand::Reverse;
        if (mode == "nw") {
            r.mode = AlignMode::NW;
        } else if (mode == "sw") {
            r.mode = AlignMode::SW;
        } else if (mode == "xdrop") {
            r.mode = AlignMode::XDrop;
        } else {
            throw ParseError(line_no, "unknown mode '" + mode + "'");
        }
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace genomotif
