#include "krylow/dense_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "krylow/errors.hpp"

namespace krylow {

DenseMatrix DenseMatrix::identity(int n) {
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::diag(const std::vector<double>& d) {
    const int n = static_cast<int>(d.size());
    DenseMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = d[i];
    return m;
}

DenseMatrix DenseMatrix::from_columns(int rows, const std::vector<std::vector<double>>& cols) {
    DenseMatrix m(rows, static_cast<int>(cols.size()));
    for (int j = 0; j < m.cols(); ++j) {
        if (static_cast<int>(cols[j].size()) != rows)
            throw ValidationError("from_columns: column length mismatch");
        std::copy(cols[j].begin(), cols[j].end(), m.col(j));
    }
    return m;
}

static void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ValidationError(std::string(op) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                              std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                              std::to_string(b.cols()));
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
    require_same_shape(a, b, "operator+");
    DenseMatrix c = a;
    for (size_t i = 0; i < c.size(); ++i) c.data()[i] += b.data()[i];
    return c;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) {
    require_same_shape(a, b, "operator-");
    DenseMatrix c = a;
    for (size_t i = 0; i < c.size(); ++i) c.data()[i] -= b.data()[i];
    return c;
}

DenseMatrix operator*(double s, const DenseMatrix& a) {
    DenseMatrix c = a;
    for (size_t i = 0; i < c.size(); ++i) c.data()[i] *= s;
    return c;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) throw ValidationError("matmul: inner dimension mismatch");
    DenseMatrix c(a.rows(), b.cols());
    const int m = a.rows(), k = a.cols(), n = b.cols();
    // column-of-C accumulation: streaming axpy over columns of A
    for (int j = 0; j < n; ++j) {
        double* cj = c.col(j);
        const double* bj = b.col(j);
        for (int l = 0; l < k; ++l) {
            const double blj = bj[l];
            if (blj == 0.0) continue;
            const double* al = a.col(l);
            for (int i = 0; i < m; ++i) cj[i] += al[i] * blj;
        }
    }
    return c;
}

DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.rows() != b.rows()) throw ValidationError("matmul_tn: inner dimension mismatch");
    DenseMatrix c(a.cols(), b.cols());
    const int m = a.rows();
    for (int j = 0; j < b.cols(); ++j) {
        const double* bj = b.col(j);
        double* cj = c.col(j);
        for (int i = 0; i < a.cols(); ++i) {
            const double* ai = a.col(i);
            double s = 0.0;
            for (int l = 0; l < m; ++l) s += ai[l] * bj[l];
            cj[i] = s;
        }
    }
    return c;
}

DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.cols()) throw ValidationError("matmul_nt: inner dimension mismatch");
    DenseMatrix c(a.rows(), b.rows());
    const int m = a.rows(), k = a.cols();
    for (int l = 0; l < k; ++l) {
        const double* al = a.col(l);
        const double* bl = b.col(l);
        for (int j = 0; j < b.rows(); ++j) {
            const double blj = bl[j];
            if (blj == 0.0) continue;
            double* cj = c.col(j);
            for (int i = 0; i < m; ++i) cj[i] += al[i] * blj;
        }
    }
    return c;
}

DenseMatrix transpose(const DenseMatrix& a) {
    DenseMatrix t(a.cols(), a.rows());
    for (int j = 0; j < a.cols(); ++j)
        for (int i = 0; i < a.rows(); ++i) t(j, i) = a(i, j);
    return t;
}

double frob_norm_sq(const DenseMatrix& a) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a.data()[i] * a.data()[i];
    return s;
}

double frob_norm(const DenseMatrix& a) { return std::sqrt(frob_norm_sq(a)); }

double dot(const DenseMatrix& a, const DenseMatrix& b) {
    require_same_shape(a, b, "dot");
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a.data()[i] * b.data()[i];
    return s;
}

double trace(const DenseMatrix& a) {
    double s = 0.0;
    const int n = std::min(a.rows(), a.cols());
    for (int i = 0; i < n; ++i) s += a(i, i);
    return s;
}

DenseMatrix block(const DenseMatrix& a, int r0, int r1, int c0, int c1) {
    if (r0 < 0 || r1 > a.rows() || c0 < 0 || c1 > a.cols() || r0 > r1 || c0 > c1)
        throw ValidationError("block: index range out of bounds");
    DenseMatrix b(r1 - r0, c1 - c0);
    for (int j = c0; j < c1; ++j)
        std::copy(a.col(j) + r0, a.col(j) + r1, b.col(j - c0));
    return b;
}

DenseMatrix leading_columns(const DenseMatrix& a, int c) { return block(a, 0, a.rows(), 0, c); }

DenseMatrix hcat(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    if (a.rows() != b.rows()) throw ValidationError("hcat: row count mismatch");
    DenseMatrix c(a.rows(), a.cols() + b.cols());
    for (int j = 0; j < a.cols(); ++j) std::copy(a.col(j), a.col(j) + a.rows(), c.col(j));
    for (int j = 0; j < b.cols(); ++j) std::copy(b.col(j), b.col(j) + b.rows(), c.col(a.cols() + j));
    return c;
}

bool is_symmetric(const DenseMatrix& a, double tol) {
    if (a.rows() != a.cols()) return false;
    const double bound = tol * std::max(1.0, frob_norm(a));
    for (int j = 0; j < a.cols(); ++j)
        for (int i = j + 1; i < a.rows(); ++i)
            if (std::abs(a(i, j) - a(j, i)) > bound) return false;
    return true;
}

DenseMatrix symmetrize(const DenseMatrix& a) {
    if (a.rows() != a.cols()) throw ValidationError("symmetrize: matrix not square");
    DenseMatrix s(a.rows(), a.cols());
    for (int j = 0; j < a.cols(); ++j)
        for (int i = 0; i < a.rows(); ++i) s(i, j) = 0.5 * (a(i, j) + a(j, i));
    return s;
}

void require_symmetric(const DenseMatrix& a, const char* what, double tol) {
    if (a.rows() != a.cols())
        throw ValidationError(std::string(what) + ": matrix not square (" + std::to_string(a.rows()) +
                              "x" + std::to_string(a.cols()) + ")");
    if (!is_symmetric(a, tol))
        throw ValidationError(std::string(what) + ": matrix not symmetric within tolerance");
}

}  // namespace krylow
