#pragma once

#include <cstddef>
#include <vector>

namespace krylow {

/// Column-major dense matrix of IEEE doubles. The workhorse container for
/// bases, projections and small reference matrices; sized for desk-scale
/// dense work, matrix-free operators handle anything large.
class DenseMatrix {
public:
    DenseMatrix() = default;
    DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, 0.0) {}

    static DenseMatrix zeros(int rows, int cols) { return DenseMatrix(rows, cols); }
    static DenseMatrix identity(int n);
    static DenseMatrix diag(const std::vector<double>& d);
    static DenseMatrix from_columns(int rows, const std::vector<std::vector<double>>& cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    double& operator()(int i, int j) { return data_[static_cast<size_t>(j) * rows_ + i]; }
    double operator()(int i, int j) const { return data_[static_cast<size_t>(j) * rows_ + i]; }

    double* col(int j) { return data_.data() + static_cast<size_t>(j) * rows_; }
    const double* col(int j) const { return data_.data() + static_cast<size_t>(j) * rows_; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    size_t size() const { return data_.size(); }

    bool operator==(const DenseMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<double> data_;
};

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix operator*(double s, const DenseMatrix& a);

/// C = A * B
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
/// C = A^T * B
DenseMatrix matmul_tn(const DenseMatrix& a, const DenseMatrix& b);
/// C = A * B^T
DenseMatrix matmul_nt(const DenseMatrix& a, const DenseMatrix& b);

DenseMatrix transpose(const DenseMatrix& a);

double frob_norm(const DenseMatrix& a);
double frob_norm_sq(const DenseMatrix& a);
double dot(const DenseMatrix& a, const DenseMatrix& b);
double trace(const DenseMatrix& a);

/// Copy of rows [r0, r1) and columns [c0, c1).
DenseMatrix block(const DenseMatrix& a, int r0, int r1, int c0, int c1);
/// Copy of the first c columns.
DenseMatrix leading_columns(const DenseMatrix& a, int c);
/// [a b] side by side.
DenseMatrix hcat(const DenseMatrix& a, const DenseMatrix& b);

/// Symmetry within |M(i,j) - M(j,i)| <= tol * max(1, ||M||_F).
bool is_symmetric(const DenseMatrix& a, double tol = 1e-12);
/// (M + M^T)/2
DenseMatrix symmetrize(const DenseMatrix& a);

/// Throws ValidationError unless the matrix is square and symmetric.
void require_symmetric(const DenseMatrix& a, const char* what, double tol = 1e-12);

}  // namespace krylow
