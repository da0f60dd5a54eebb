#include "genomotif/spsemiring.hpp"

#include <cctype>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace genomotif {

std::vector<double> column_sums(const SparseMatrix<double>& a) {
    std::vector<double> sums(a.cols(), 0.0);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        auto cols = a.row_cols(r);
        auto vals = a.row_values(r);
        for (std::size_t p = 0; p < cols.size(); ++p) sums[cols[p]] += vals[p];
    }
    return sums;
}

SparseMatrix<double> normalize_columns(const SparseMatrix<double>& a) {
    for (const double v : a.values()) {
        if (v < 0.0) throw NegativeValue("normalize_columns needs nonnegative values");
    }
    const std::vector<double> sums = column_sums(a);
    std::vector<std::size_t> offsets(a.offsets().begin(), a.offsets().end());
    std::vector<std::size_t> col_idx(a.col_indices().begin(), a.col_indices().end());
    std::vector<double> values(a.values().begin(), a.values().end());
    for (std::size_t p = 0; p < values.size(); ++p) {
        const double s = sums[col_idx[p]];
        if (s > 0.0) values[p] /= s;
    }
    return SparseMatrix<double>(a.rows(), a.cols(), std::move(offsets), std::move(col_idx), std::move(values));
}

namespace {

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace

MatrixMarketData read_matrix_market(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw ParseError(1, "empty Matrix Market stream");
    ++line_no;
    std::istringstream header(line);
    std::string banner, object, format, field, symmetry;
    header >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || lower(object) != "matrix" || lower(format) != "coordinate") {
        throw ParseError(line_no, "expected '%%MatrixMarket matrix coordinate' banner");
    }
    MatrixMarketData data;
    field = lower(field);
    if (field == "real" || field == "double") {
        data.field = MatrixMarketField::Real;
    } else if (field == "integer") {
        data.field = MatrixMarketField::Integer;
    } else if (field == "pattern") {
        data.field = MatrixMarketField::Pattern;
    } else {
        throw ParseError(line_no, "unsupported field '" + field + "'");
    }
    symmetry = lower(symmetry);
    if (symmetry == "symmetric") {
        data.symmetric = true;
    } else if (symmetry != "general") {
        throw ParseError(line_no, "unsupported symmetry '" + symmetry + "'");
    }

    std::size_t rows = 0, cols = 0, entries = 0;
    for (;;) {
        if (!std::getline(in, line)) throw ParseError(line_no, "missing size line");
        ++line_no;
        if (line.empty() || line[0] == '%') continue;
        std::istringstream ss(line);
        if (!(ss >> rows >> cols >> entries)) throw ParseError(line_no, "malformed size line");
        break;
    }
    std::vector<Triple<double>> triples;
    triples.reserve(data.symmetric ? 2 * entries : entries);
    std::size_t seen = 0;
    while (seen < entries && std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '%') continue;
        std::istringstream ss(line);
        std::size_t r = 0, c = 0;
        double v = 1.0;
        if (!(ss >> r >> c)) throw ParseError(line_no, "malformed entry");
        if (data.field != MatrixMarketField::Pattern && !(ss >> v)) throw ParseError(line_no, "missing value");
        if (r < 1 || c < 1 || r > rows || c > cols) throw ParseError(line_no, "index out of range");
        triples.push_back({r - 1, c - 1, v});
        if (data.symmetric && r != c) triples.push_back({c - 1, r - 1, v});
        ++seen;
    }
    if (seen != entries) throw ParseError(line_no, "fewer entries than declared");
    data.matrix = sparse_from_triples<ArithmeticSemiring>(rows, cols, triples);
    return data;
}

void write_matrix_market(std::ostream& out, const SparseMatrix<double>& a, MatrixMarketField field) {
    const char* name = field == MatrixMarketField::Real ? "real" : field == MatrixMarketField::Integer ? "integer" : "pattern";
    out << "%%MatrixMarket matrix coordinate " << name << " general\n";
    out << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
    const auto old_prec = out.precision();
    out << std::setprecision(17);
    for (std::size_t r = 0; r < a.rows(); ++r) {
        auto cols = a.row_cols(r);
        auto vals = a.row_values(r);
        for (std::size_t p = 0; p < cols.size(); ++p) {
            out << r + 1 << ' ' << cols[p] + 1;
            if (field == MatrixMarketField::Real) {
                out << ' ' << vals[p];
            } else if (field == MatrixMarketField::Integer) {
                out << ' ' << static_cast<long long>(std::llround(vals[p]));
            }
            out << '\n';
        }
    }
    out.precision(old_prec);
}

}  // namespace genomotif
