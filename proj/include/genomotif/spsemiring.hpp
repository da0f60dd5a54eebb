#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "genomotif/error.hpp"

namespace genomotif {

// A semiring is a stateless type with
//   value_type, zero(), one(), add(a, b), mul(a, b), is_zero(a),
//   static constexpr bool ordered (prune() is only defined when true).

struct ArithmeticSemiring {
    using value_type = double;
    static constexpr bool ordered = true;
    static constexpr const char* name = "arithmetic";
    static value_type zero() noexcept { return 0.0; }
    static value_type one() noexcept { return 1.0; }
    static value_type add(value_type a, value_type b) noexcept { return a + b; }
    static value_type mul(value_type a, value_type b) noexcept { return a * b; }
    static bool is_zero(value_type a) noexcept { return a == 0.0; }
};

struct BooleanSemiring {
    using value_type = std::uint8_t;
    static constexpr bool ordered = false;
    static constexpr const char* name = "boolean";
    static value_type zero() noexcept { return 0; }
    static value_type one() noexcept { return 1; }
    static value_type add(value_type a, value_type b) noexcept { return (a | b) ? 1 : 0; }
    static value_type mul(value_type a, value_type b) noexcept { return (a && b) ? 1 : 0; }
    static bool is_zero(value_type a) noexcept { return a == 0; }
};

// Max-plus over integers; zero is -infinity (the lowest int64).
struct TropicalSemiring {
    using value_type = std::int64_t;
    static constexpr bool ordered = true;
    static constexpr const char* name = "tropical";
    static constexpr value_type kNegInf = std::numeric_limits<std::int64_t>::min();
    static value_type zero() noexcept { return kNegInf; }
    static value_type one() noexcept { return 0; }
    static value_type add(value_type a, value_type b) noexcept { return std::max(a, b); }
    static value_type mul(value_type a, value_type b) noexcept {
        return (a == kNegInf || b == kNegInf) ? kNegInf : a + b;
    }
    static bool is_zero(value_type a) noexcept { return a == kNegInf; }
};

// Shared-seed bookkeeping for k-mer x sequence products.
//   count   number of shared k-mers (input entries carry 1)
//   key     packed k-mer of the seed
//   pos_a   seed position in the left operand's sequence (kWild: unset)
//   pos_b   seed position in the right operand's sequence (kWild: unset)
//   rev_a / rev_b  orientation of the seed k-mer at pos_a / pos_b
// mul keeps the leftmost set pos_a and the rightmost set pos_b (so one has both
// unset); add sums counts and keeps the seed with the smallest
// (key, pos_a, pos_b, rev_a, rev_b).
struct SeedCount {
    static constexpr std::uint32_t kWild = std::numeric_limits<std::uint32_t>::max();

    std::uint64_t count = 0;
    std::uint64_t key = std::numeric_limits<std::uint64_t>::max();
    std::uint32_t pos_a = kWild;
    std::uint32_t pos_b = kWild;
    bool rev_a = false;
    bool rev_b = false;

    auto seed_tuple() const noexcept { return std::tie(key, pos_a, pos_b, rev_a, rev_b); }

    friend bool operator==(const SeedCount& x, const SeedCount& y) noexcept {
        if (x.count == 0 || y.count == 0) return x.count == y.count;
        return x.count == y.count && x.seed_tuple() == y.seed_tuple();
    }
};

struct PairCountSemiring {
    using value_type = SeedCount;
    static constexpr bool ordered = false;
    static constexpr const char* name = "pair-count";
    static value_type zero() noexcept { return SeedCount{}; }
    static value_type one() noexcept { return SeedCount{1}; }
    static bool is_zero(const value_type& a) noexcept { return a.count == 0; }
    static value_type add(const value_type& a, const value_type& b) noexcept {
        if (a.count == 0) return b;
        if (b.count == 0) return a;
        value_type r = a.seed_tuple() <= b.seed_tuple() ? a : b;
        r.count = a.count + b.count;
        return r;
    }
    static value_type mul(const value_type& a, const value_type& b) noexcept {
        if (a.count == 0 || b.count == 0) return zero();
        value_type r;
        r.count = a.count * b.count;
        r.key = std::min(a.key, b.key);
        if (a.pos_a != SeedCount::kWild) {
            r.pos_a = a.pos_a;
            r.rev_a = a.rev_a;
        } else {
            r.pos_a = b.pos_a;
            r.rev_a = b.rev_a;
        }
        if (b.pos_b != SeedCount::kWild) {
            r.pos_b = b.pos_b;
            r.rev_b = b.rev_b;
        } else {
            r.pos_b = a.pos_b;
            r.rev_b = a.rev_b;
        }
        return r;
    }
};

template <typename T>
struct Triple {
    std::size_t row;
    std::size_t col;
    T value;
};

// Compressed sparse row matrix; columns strictly increase within each row and
// no stored value is the semiring zero.
template <typename T>
class SparseMatrix {
public:
    using value_type = T;

    SparseMatrix() : offsets_(1, 0) {}
    SparseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), offsets_(rows + 1, 0) {}

    // Takes ownership of CSR arrays; the caller guarantees the invariants.
    SparseMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> offsets, std::vector<std::size_t> col_idx,
                 std::vector<T> values)
        : rows_(rows), cols_(cols), offsets_(std::move(offsets)), col_idx_(std::move(col_idx)),
          values_(std::move(values)) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t nnz() const noexcept { return values_.size(); }

    std::span<const std::size_t> offsets() const noexcept { return offsets_; }
    std::span<const std::size_t> col_indices() const noexcept { return col_idx_; }
    std::span<const T> values() const noexcept { return values_; }

    std::span<const std::size_t> row_cols(std::size_t r) const noexcept {
        return std::span<const std::size_t>(col_idx_).subspan(offsets_[r], offsets_[r + 1] - offsets_[r]);
    }
    std::span<const T> row_values(std::size_t r) const noexcept {
        return std::span<const T>(values_).subspan(offsets_[r], offsets_[r + 1] - offsets_[r]);
    }

    // Stored value or nullptr.
    const T* find(std::size_t r, std::size_t c) const noexcept {
        auto cols = row_cols(r);
        auto it = std::lower_bound(cols.begin(), cols.end(), c);
        if (it == cols.end() || *it != c) return nullptr;
        return &values_[offsets_[r] + static_cast<std::size_t>(it - cols.begin())];
    }

    // Checks the CSR invariants (not the no-zero rule, which needs a semiring).
    bool well_formed() const {
        if (offsets_.size() != rows_ + 1 || offsets_.front() != 0 || offsets_.back() != values_.size() ||
            col_idx_.size() != values_.size()) {
            return false;
        }
        for (std::size_t r = 0; r < rows_; ++r) {
            if (offsets_[r] > offsets_[r + 1]) return false;
            for (std::size_t p = offsets_[r]; p < offsets_[r + 1]; ++p) {
                if (col_idx_[p] >= cols_) return false;
                if (p > offsets_[r] && col_idx_[p - 1] >= col_idx_[p]) return false;
            }
        }
        return true;
    }

    friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<std::size_t> offsets_;
    std::vector<std::size_t> col_idx_;
    std::vector<T> values_;
};

// Duplicates are combined with add in input order; results equal to zero are dropped.
template <typename SR>
SparseMatrix<typename SR::value_type> sparse_from_triples(std::size_t rows, std::size_t cols,
                                                          std::span<const Triple<typename SR::value_type>> triples) {
    using T = typename SR::value_type;
    std::vector<std::size_t> order(triples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (const auto& t : triples) {
        if (t.row >= rows || t.col >= cols) {
            throw IndexOutOfRange("triple (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                                  ") outside " + std::to_string(rows) + "x" + std::to_string(cols));
        }
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::tie(triples[a].row, triples[a].col) < std::tie(triples[b].row, triples[b].col);
    });
    std::vector<std::size_t> offsets(rows + 1, 0), col_idx;
    std::vector<T> values;
    for (std::size_t p = 0; p < order.size();) {
        const auto& first = triples[order[p]];
        T acc = first.value;
        std::size_t q = p + 1;
        while (q < order.size() && triples[order[q]].row == first.row && triples[order[q]].col == first.col) {
            acc = SR::add(acc, triples[order[q]].value);
            ++q;
        }
        if (!SR::is_zero(acc)) {
            col_idx.push_back(first.col);
            values.push_back(acc);
            ++offsets[first.row + 1];
        }
        p = q;
    }
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    return SparseMatrix<T>(rows, cols, std::move(offsets), std::move(col_idx), std::move(values));
}

template <typename SR>
SparseMatrix<typename SR::value_type> sparse_from_triples(std::size_t rows, std::size_t cols,
                                                          const std::vector<Triple<typename SR::value_type>>& triples) {
    return sparse_from_triples<SR>(rows, cols, std::span<const Triple<typename SR::value_type>>(triples));
}

template <typename SR>
SparseMatrix<typename SR::value_type> identity_matrix(std::size_t n) {
    std::vector<std::size_t> offsets(n + 1), cols(n);
    std::iota(offsets.begin(), offsets.end(), std::size_t{0});
    std::iota(cols.begin(), cols.end(), std::size_t{0});
    return SparseMatrix<typename SR::value_type>(n, n, std::move(offsets), std::move(cols),
                                                 std::vector<typename SR::value_type>(n, SR::one()));
}

template <typename T>
SparseMatrix<T> transpose(const SparseMatrix<T>& a) {
    std::vector<std::size_t> offsets(a.cols() + 1, 0);
    for (const auto c : a.col_indices()) ++offsets[c + 1];
    std::partial_sum(offsets.begin(), offsets.end(), offsets.begin());
    std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
    std::vector<std::size_t> col_idx(a.nnz());
    std::vector<T> values(a.nnz());
    // Rows are visited in ascending order, so each output row comes out sorted.
    for (std::size_t r = 0; r < a.rows(); ++r) {
        auto cols = a.row_cols(r);
        auto vals = a.row_values(r);
        for (std::size_t p = 0; p < cols.size(); ++p) {
            const std::size_t dst = fill[cols[p]]++;
            col_idx[dst] = r;
            values[dst] = vals[p];
        }
    }
    return SparseMatrix<T>(a.cols(), a.rows(), std::move(offsets), std::move(col_idx), std::move(values));
}

enum class Accumulator { Auto, Dense, SortMerge };

inline constexpr std::size_t kDenseAccumulatorMaxCols = std::size_t{1} << 16;

namespace detail {

template <typename SR>
struct RowProduct {
    std::vector<std::size_t> cols;
    std::vector<typename SR::value_type> values;
};

// Row i of A*B. Products for each output column are folded in ascending k.
template <typename SR>
void multiply_row(const SparseMatrix<typename SR::value_type>& a, const SparseMatrix<typename SR::value_type>& b,
                  std::size_t i, bool dense, std::vector<typename SR::value_type>& acc, std::vector<char>& occupied,
                  RowProduct<SR>& out) {
    using T = typename SR::value_type;
    out.cols.clear();
    out.values.clear();
    auto a_cols = a.row_cols(i);
    auto a_vals = a.row_values(i);
    if (dense) {
        std::vector<std::size_t> touched;
        for (std::size_t p = 0; p < a_cols.size(); ++p) {
            const std::size_t k = a_cols[p];
            auto b_cols = b.row_cols(k);
            auto b_vals = b.row_values(k);
            for (std::size_t q = 0; q < b_cols.size(); ++q) {
                const std::size_t j = b_cols[q];
                const T prod = SR::mul(a_vals[p], b_vals[q]);
                if (!occupied[j]) {
                    occupied[j] = 1;
                    acc[j] = SR::add(SR::zero(), prod);
                    touched.push_back(j);
                } else {
                    acc[j] = SR::add(acc[j], prod);
                }
            }
        }
        std::sort(touched.begin(), touched.end());
        for (const auto j : touched) {
            if (!SR::is_zero(acc[j])) {
                out.cols.push_back(j);
                out.values.push_back(acc[j]);
            }
            occupied[j] = 0;
        }
        return;
    }
    std::vector<std::pair<std::size_t, T>> products;
    for (std::size_t p = 0; p < a_cols.size(); ++p) {
        const std::size_t k = a_cols[p];
        auto b_cols = b.row_cols(k);
        auto b_vals = b.row_values(k);
        for (std::size_t q = 0; q < b_cols.size(); ++q) products.emplace_back(b_cols[q], SR::mul(a_vals[p], b_vals[q]));
    }
    // Stable: equal columns keep ascending-k order.
    std::stable_sort(products.begin(), products.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    for (std::size_t p = 0; p < products.size();) {
        T sum = SR::add(SR::zero(), products[p].second);
        std::size_t q = p + 1;
        while (q < products.size() && products[q].first == products[p].first) sum = SR::add(sum, products[q++].second);
        if (!SR::is_zero(sum)) {
            out.cols.push_back(products[p].first);
            out.values.push_back(sum);
        }
        p = q;
    }
}

}  // namespace detail

// Gustavson row-by-row product C = A*B over SR. Output rows may be computed
// on several threads; each row's result is independent of the thread count.
template <typename SR>
SparseMatrix<typename SR::value_type> spgemm(const SparseMatrix<typename SR::value_type>& a,
                                             const SparseMatrix<typename SR::value_type>& b,
                                             Accumulator strategy = Accumulator::Auto, unsigned threads = 1,
                                             std::size_t max_nnz = 0) {
    using T = typename SR::value_type;
    if (a.cols() != b.rows()) {
        throw DimensionMismatch("cannot multiply " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                                " by " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
    }
    const bool dense = strategy == Accumulator::Dense ||
                       (strategy == Accumulator::Auto && b.cols() <= kDenseAccumulatorMaxCols);
    const std::size_t rows = a.rows();
    std::vector<detail::RowProduct<SR>> products(rows);

    auto work = [&](std::size_t begin, std::size_t end) {
        std::vector<T> acc(dense ? b.cols() : 0);
        std::vector<char> occupied(dense ? b.cols() : 0, 0);
        for (std::size_t i = begin; i < end; ++i) detail::multiply_row<SR>(a, b, i, dense, acc, occupied, products[i]);
    };
    if (threads <= 1 || rows < 2) {
        work(0, rows);
    } else {
        std::vector<std::jthread> pool;
        const std::size_t chunk = (rows + threads - 1) / threads;
        for (std::size_t begin = 0; begin < rows; begin += chunk) {
            pool.emplace_back(work, begin, std::min(rows, begin + chunk));
        }
    }

    std::vector<std::size_t> offsets(rows + 1, 0);
    for (std::size_t i = 0; i < rows; ++i) offsets[i + 1] = offsets[i] + products[i].cols.size();
    if (max_nnz != 0 && offsets.back() > max_nnz) {
        throw CapacityExceeded("product has " + std::to_string(offsets.back()) + " nonzeros, limit " +
                               std::to_string(max_nnz));
    }
    std::vector<std::size_t> col_idx;
    std::vector<T> values;
    col_idx.reserve(offsets.back());
    values.reserve(offsets.back());
    for (auto& p : products) {
        col_idx.insert(col_idx.end(), p.cols.begin(), p.cols.end());
        values.insert(values.end(), p.values.begin(), p.values.end());
    }
    return SparseMatrix<T>(rows, b.cols(), std::move(offsets), std::move(col_idx), std::move(values));
}

// Elementwise add over the union of patterns.
template <typename SR>
SparseMatrix<typename SR::value_type> ewise_add(const SparseMatrix<typename SR::value_type>& a,
                                                const SparseMatrix<typename SR::value_type>& b) {
    using T = typename SR::value_type;
    if (a.rows() != b.rows() || a.cols() != b.cols()) throw DimensionMismatch("ewise_add shape mismatch");
    std::vector<Triple<T>> triples;
    for (const auto* m : {&a, &b}) {
        for (std::size_t r = 0; r < m->rows(); ++r) {
            auto cols = m->row_cols(r);
            auto vals = m->row_values(r);
            for (std::size_t p = 0; p < cols.size(); ++p) triples.push_back({r, cols[p], vals[p]});
        }
    }
    return sparse_from_triples<SR>(a.rows(), a.cols(), triples);
}

// Keeps entries with value >= threshold.
template <typename SR>
SparseMatrix<typename SR::value_type> prune(const SparseMatrix<typename SR::value_type>& a,
                                            typename SR::value_type threshold) {
    using T = typename SR::value_type;
    if constexpr (!SR::ordered) {
        throw UnorderedDomain(std::string("prune needs an ordered domain; ") + SR::name + " has none");
    } else {
        std::vector<std::size_t> offsets(a.rows() + 1, 0), col_idx;
        std::vector<T> values;
        for (std::size_t r = 0; r < a.rows(); ++r) {
            auto cols = a.row_cols(r);
            auto vals = a.row_values(r);
            for (std::size_t p = 0; p < cols.size(); ++p) {
                if (!(vals[p] < threshold)) {
                    col_idx.push_back(cols[p]);
                    values.push_back(vals[p]);
                }
            }
            offsets[r + 1] = values.size();
        }
        return SparseMatrix<T>(a.rows(), a.cols(), std::move(offsets), std::move(col_idx), std::move(values));
    }
}

// Column sums accumulated in ascending row order.
std::vector<double> column_sums(const SparseMatrix<double>& a);

// Scales every nonempty column to sum to one.
SparseMatrix<double> normalize_columns(const SparseMatrix<double>& a);

// Union-find over the pattern of A and its transpose; each label is the
// smallest row index in its component.
template <typename T>
std::vector<std::size_t> connected_components(const SparseMatrix<T>& a) {
    if (a.rows() != a.cols()) throw NotSquare("connected components need a square matrix");
    const std::size_t n = a.rows();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    for (std::size_t r = 0; r < n; ++r) {
        for (const auto c : a.row_cols(r)) {
            const std::size_t x = find(r), y = find(c);
            if (x == y) continue;
            // The smaller index becomes the root, so roots are component minima.
            if (x < y) {
                parent[y] = x;
            } else {
                parent[x] = y;
            }
        }
    }
    std::vector<std::size_t> labels(n);
    for (std::size_t v = 0; v < n; ++v) labels[v] = find(v);
    return labels;
}

// ---------------------------------------------------------------------------
// Matrix Market coordinate format (1-based, sorted by row then column).

enum class MatrixMarketField { Real, Integer, Pattern };

struct MatrixMarketData {
    SparseMatrix<double> matrix;
    MatrixMarketField field = MatrixMarketField::Real;
    bool symmetric = false;
};

// Symmetric files are expanded to both triangles. Pattern entries read as 1.
MatrixMarketData read_matrix_market(std::istream& in);
void write_matrix_market(std::ostream& out, const SparseMatrix<double>& a,
                         MatrixMarketField field = MatrixMarketField::Real);

}  // namespace genomotif
