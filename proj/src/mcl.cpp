#include "genomotif/mcl.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <absl/container/flat_hash_map.h>

namespace genomotif {

void MclParams::validate() const {
    if (!(inflation > 1.0)) throw InvalidParameter("inflation must exceed 1");
    if (expansion < 2) throw InvalidParameter("expansion must be at least 2");
    if (!(prune >= 0.0)) throw InvalidParameter("prune threshold must be nonnegative");
    if (max_iterations < 1) throw InvalidParameter("max_iterations must be at least 1");
    if (!(epsilon > 0.0)) throw InvalidParameter("epsilon must be positive");
}

namespace {

constexpr double kStochasticTolerance = 1e-9;

void check_stochastic(const SparseMatrix<double>& m) {
    if (m.rows() != m.cols()) throw NotSquare("MCL needs a square matrix");
    const auto sums = column_sums(m);
    for (std::size_t c = 0; c < sums.size(); ++c) {
        if (std::abs(sums[c] - 1.0) > kStochasticTolerance) {
            throw NotStochastic("column " + std::to_string(c) + " sums to " + std::to_string(sums[c]));
        }
    }
}

SparseMatrix<double> matrix_power(const SparseMatrix<double>& m, unsigned e, unsigned threads) {
    SparseMatrix<double> result;
    bool have_result = false;
    SparseMatrix<double> base = m;
    for (;;) {
        if (e & 1u) {
            result = have_result ? spgemm<ArithmeticSemiring>(result, base, Accumulator::Auto, threads) : base;
            have_result = true;
        }
        e >>= 1;
        if (e == 0) break;
        base = spgemm<ArithmeticSemiring>(base, base, Accumulator::Auto, threads);
    }
    return result;
}

SparseMatrix<double> inflate(const SparseMatrix<double>& m, double r) {
    std::vector<std::size_t> offsets(m.offsets().begin(), m.offsets().end());
    std::vector<std::size_t> cols(m.col_indices().begin(), m.col_indices().end());
    std::vector<double> values(m.values().begin(), m.values().end());
    for (auto& v : values) v = std::pow(v, r);
    return SparseMatrix<double>(m.rows(), m.cols(), std::move(offsets), std::move(cols), std::move(values));
}

// Drops entries below the threshold but never a column's largest entry, so
// no column empties out.
SparseMatrix<double> prune_keep_max(const SparseMatrix<double>& m, double threshold) {
    std::vector<double> col_max(m.cols(), 0.0);
    for (std::size_t p = 0; p < m.nnz(); ++p) {
        col_max[m.col_indices()[p]] = std::max(col_max[m.col_indices()[p]], m.values()[p]);
    }
    std::vector<std::size_t> offsets(m.rows() + 1, 0), cols;
    std::vector<double> values;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto rc = m.row_cols(r);
        auto rv = m.row_values(r);
        for (std::size_t p = 0; p < rc.size(); ++p) {
            if (rv[p] >= threshold || rv[p] == col_max[rc[p]]) {
                cols.push_back(rc[p]);
                values.push_back(rv[p]);
            }
        }
        offsets[r + 1] = values.size();
    }
    return SparseMatrix<double>(m.rows(), m.cols(), std::move(offsets), std::move(cols), std::move(values));
}

double max_stochastic_error(const SparseMatrix<double>& m) {
    double worst = 0.0;
    for (const double s : column_sums(m)) worst = std::max(worst, std::abs(s - 1.0));
    return worst;
}

}  // namespace

double mcl_chaos(const SparseMatrix<double>& m) {
    std::vector<double> col_max(m.cols(), 0.0), col_sq(m.cols(), 0.0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
        auto rc = m.row_cols(r);
        auto rv = m.row_values(r);
        for (std::size_t p = 0; p < rc.size(); ++p) {
            col_max[rc[p]] = std::max(col_max[rc[p]], rv[p]);
            col_sq[rc[p]] += rv[p] * rv[p];
        }
    }
    double chaos = 0.0;
    for (std::size_t c = 0; c < m.cols(); ++c) chaos = std::max(chaos, col_max[c] - col_sq[c]);
    return chaos;
}

MclStep mcl_iterate(const SparseMatrix<double>& m, const MclParams& p) {
    p.validate();
    check_stochastic(m);
    const auto expanded = normalize_columns(matrix_power(m, p.expansion, p.threads));
    MclStep step;
    step.matrix = normalize_columns(prune_keep_max(inflate(expanded, p.inflation), p.prune));
    step.chaos = mcl_chaos(step.matrix);
    return step;
}

MclTrace mcl_run(const SparseMatrix<double>& adjacency, const MclParams& p) {
    p.validate();
    if (adjacency.rows() != adjacency.cols()) throw NotSquare("adjacency matrix must be square");
    for (const double v : adjacency.values()) {
        if (v < 0.0) throw NegativeWeight("adjacency weights must be nonnegative");
    }
    const std::size_t n = adjacency.rows();
    std::vector<double> loop(n, 0.0);
    std::vector<Triple<double>> triples;
    for (std::size_t r = 0; r < n; ++r) {
        auto rc = adjacency.row_cols(r);
        auto rv = adjacency.row_values(r);
        for (std::size_t q = 0; q < rc.size(); ++q) {
            if (rc[q] == r) continue;
            triples.push_back({r, rc[q], rv[q]});
            loop[rc[q]] = std::max(loop[rc[q]], rv[q]);
        }
    }
    for (std::size_t v = 0; v < n; ++v) triples.push_back({v, v, loop[v] > 0.0 ? loop[v] : 1.0});

    MclTrace trace;
    SparseMatrix<double> m = normalize_columns(sparse_from_triples<ArithmeticSemiring>(n, n, triples));
    while (trace.iterations < p.max_iterations && n > 0) {
        MclStep step = mcl_iterate(m, p);
        ++trace.iterations;
        trace.chaos.push_back(step.chaos);
        trace.max_stochastic_error.push_back(max_stochastic_error(step.matrix));
        m = std::move(step.matrix);
        if (step.chaos < p.epsilon) break;
    }
    const auto labels = connected_components(m);
    trace.clustering = canonical_clustering(labels);
    return trace;
}

Clustering mcl_cluster(const SparseMatrix<double>& adjacency, const MclParams& p) {
    return mcl_run(adjacency, p).clustering;
}

Clustering canonical_clustering(std::span<const std::size_t> group) {
    absl::flat_hash_map<std::size_t, std::size_t> first;
    Clustering c;
    c.labels.resize(group.size());
    for (std::size_t v = 0; v < group.size(); ++v) {
        auto [it, inserted] = first.try_emplace(group[v], v);
        c.labels[v] = it->second;
    }
    c.clusters = first.size();
    return c;
}

void write_clusters_tsv(std::ostream& out, const Clustering& c, std::span<const std::string> ids) {
    for (std::size_t v = 0; v < c.labels.size(); ++v) {
        if (ids.empty()) {
            out << v << '\t' << c.labels[v] << '\n';
        } else {
            out << ids[v] << '\t' << ids[c.labels[v]] << '\n';
        }
    }
}

}  // namespace genomotif
