#include "krylow/matrix_market.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "krylow/errors.hpp"

namespace krylow {

namespace {

struct Csr {
    int64_t n = 0;
    std::vector<int64_t> row_ptr;
    std::vector<int64_t> col_idx;
    std::vector<double> vals;
};

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

}  // namespace

MatVecOperator adjacency_from_matrix_market(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("matrix market: cannot open file " + path);

    long lineno = 0;
    std::string line;
    if (!std::getline(in, line)) throw ParseError("matrix market: empty file", 1);
    ++lineno;

    std::istringstream head(line);
    std::string banner, object, format, field, symmetry;
    head >> banner >> object >> format >> field >> symmetry;
    if (banner != "%%MatrixMarket" || lower(object) != "matrix")
        throw ParseError("matrix market: bad banner '" + line + "'", lineno);
    format = lower(format);
    field = lower(field);
    symmetry = lower(symmetry);
    if (format != "coordinate")
        throw ParseError("matrix market: only coordinate format is supported", lineno);
    const bool pattern = field == "pattern";
    if (!pattern && field != "real" && field != "integer")
        throw ParseError("matrix market: unsupported field '" + field + "'", lineno);
    const bool symmetric = symmetry == "symmetric";
    if (!symmetric && symmetry != "general")
        throw ParseError("matrix market: unsupported symmetry '" + symmetry + "'", lineno);

    int64_t rows = -1, cols = -1, nnz = -1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '%') continue;
        std::istringstream sz(line);
        if (!(sz >> rows >> cols >> nnz))
            throw ParseError("matrix market: malformed size line '" + line + "'", lineno);
        break;
    }
    if (rows < 0) throw ParseError("matrix market: missing size line", lineno);
    if (rows != cols)
        throw ValidationError("matrix market: adjacency matrix must be square, got " +
                              std::to_string(rows) + "x" + std::to_string(cols));

    // duplicates summed; symmetric storage mirrored; general averaged below
    std::map<std::pair<int64_t, int64_t>, double> entries;
    int64_t seen = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '%') continue;
        std::istringstream es(line);
        int64_t i, j;
        double v = 1.0;
        if (!(es >> i >> j) || (!pattern && !(es >> v)))
            throw ParseError("matrix market: malformed entry '" + line + "'", lineno);
        if (i < 1 || i > rows || j < 1 || j > cols)
            throw ValidationError("matrix market: index (" + std::to_string(i) + "," +
                                  std::to_string(j) + ") out of bounds at line " +
                                  std::to_string(lineno));
        entries[{i - 1, j - 1}] += v;
        ++seen;
    }
    if (seen != nnz)
        throw ParseError("matrix market: header declares " + std::to_string(nnz) +
                         " entries, file has " + std::to_string(seen), lineno);

    std::map<std::pair<int64_t, int64_t>, double> sym;
    if (symmetric) {
        for (const auto& [ij, v] : entries) {
            sym[ij] += v;
            if (ij.first != ij.second) sym[{ij.second, ij.first}] += v;
        }
    } else {
        for (const auto& [ij, v] : entries) {
            sym[ij] += 0.5 * v;
            sym[{ij.second, ij.first}] += 0.5 * v;
        }
    }

    auto csr = std::make_shared<Csr>();
    csr->n = rows;
    csr->row_ptr.assign(rows + 1, 0);
    for (const auto& [ij, v] : sym)
        if (v != 0.0) ++csr->row_ptr[ij.first + 1];
    for (int64_t i = 0; i < rows; ++i) csr->row_ptr[i + 1] += csr->row_ptr[i];
    csr->col_idx.resize(csr->row_ptr[rows]);
    csr->vals.resize(csr->row_ptr[rows]);
    std::vector<int64_t> fill(csr->row_ptr.begin(), csr->row_ptr.end() - 1);
    for (const auto& [ij, v] : sym) {
        if (v == 0.0) continue;
        const int64_t pos = fill[ij.first]++;
        csr->col_idx[pos] = ij.second;
        csr->vals[pos] = v;
    }

    auto apply = [csr](const DenseMatrix& x, DenseMatrix& y) {
        for (int col = 0; col < x.cols(); ++col) {
            const double* u = x.col(col);
            double* out = y.col(col);
            for (int64_t i = 0; i < csr->n; ++i) {
                double acc = 0.0;
                for (int64_t p = csr->row_ptr[i]; p < csr->row_ptr[i + 1]; ++p)
                    acc += csr->vals[p] * u[csr->col_idx[p]];
                out[i] = acc;
            }
        }
    };
    return MatVecOperator(rows, "matrix_market(" + path + ")", apply);
}

void write_matrix_market_pattern(const std::string& path, int64_t n,
                                 const std::vector<std::pair<int64_t, int64_t>>& edges) {
    std::ofstream out(path);
    if (!out) throw ValidationError("matrix market: cannot write file " + path);
    out << "%%MatrixMarket matrix coordinate pattern symmetric\n";
    out << n << " " << n << " " << edges.size() << "\n";
    for (const auto& [i, j] : edges) {
        if (i < 1 || i > n || j < 1 || j > n)
            throw ValidationError("matrix market: edge index out of bounds");
        // symmetric storage keeps the lower triangle
        out << std::max(i, j) << " " << std::min(i, j) << "\n";
    }
}

}  // namespace krylow
