#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "genomotif/spsemiring.hpp"

namespace genomotif {

struct MclParams {
    double inflation = 2.0;
    unsigned expansion = 2;
    double prune = 1e-8;
    unsigned max_iterations = 100;
    double epsilon = 1e-8;
    unsigned threads = 1;

    void validate() const;
};

struct Clustering {
    std::vector<std::size_t> labels;  // label = smallest member index
    std::size_t clusters = 0;
};

struct MclStep {
    SparseMatrix<double> matrix;
    double chaos = 0.0;
};

// max over columns of (column max - column sum of squares)
double mcl_chaos(const SparseMatrix<double>& m);

// M^e (repeated squaring), normalize, inflate, prune, normalize.
MclStep mcl_iterate(const SparseMatrix<double>& m, const MclParams& p);

struct MclTrace {
    Clustering clustering;
    unsigned iterations = 0;
    std::vector<double> chaos;
    std::vector<double> max_stochastic_error;  // per iterate, max |column sum - 1|
};

// Adds self-loops (largest off-diagonal weight in the column, 1 for isolated
// vertices), normalizes and iterates until chaos < epsilon.
MclTrace mcl_run(const SparseMatrix<double>& adjacency, const MclParams& p);
Clustering mcl_cluster(const SparseMatrix<double>& adjacency, const MclParams& p = {});

// Builds canonical labels from any per-vertex grouping.
Clustering canonical_clustering(std::span<const std::size_t> group);

// vertex_id \t cluster_id; cluster ids are the canonical labels.
void write_clusters_tsv(std::ostream& out, const Clustering& c, std::span<const std::string> ids = {});

}  // namespace genomotif
