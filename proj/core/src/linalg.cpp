#include "krylow/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "krylow/errors.hpp"

namespace krylow {

namespace {

double off_diagonal_norm(const DenseMatrix& a) {
    double s = 0.0;
    for (int j = 0; j < a.cols(); ++j)
        for (int i = 0; i < a.rows(); ++i)
            if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
}

// Cyclic-by-rows Jacobi with threshold sweeps. Stops when the off-diagonal
// Frobenius mass drops below 1e-14 * ||M||_F; throws after kJacobiMaxSweeps.
void jacobi_eig(DenseMatrix& a, DenseMatrix& v, int max_sweeps) {
    const int n = a.rows();
    v = DenseMatrix::identity(n);
    const double target = 1e-14 * frob_norm(a);
    for (int sweep = 1; sweep <= max_sweeps; ++sweep) {
        const double off = off_diagonal_norm(a);
        if (off <= target) return;
        // early sweeps skip entries that cannot reduce the mass meaningfully
        const double thresh = (sweep < 4) ? 0.2 * off / (static_cast<double>(n) * n) : 0.0;
        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::abs(apq) <= thresh || apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                double t;
                if (std::abs(theta) > 1e150) {
                    t = 1.0 / (2.0 * theta);
                } else {
                    t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                    if (theta < 0.0) t = -t;
                }
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                const double app = a(p, p), aqq = a(q, q);
                a(p, p) = app - t * apq;
                a(q, q) = aqq + t * apq;
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                double* colp = a.col(p);
                double* colq = a.col(q);
                for (int i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    const double aip = colp[i], aiq = colq[i];
                    colp[i] = aip - s * (aiq + tau * aip);
                    colq[i] = aiq + s * (aip - tau * aiq);
                }
                for (int i = 0; i < n; ++i) {
                    if (i == p || i == q) continue;
                    a(p, i) = colp[i];
                    a(q, i) = colq[i];
                }
                double* vp = v.col(p);
                double* vq = v.col(q);
                for (int i = 0; i < n; ++i) {
                    const double vip = vp[i], viq = vq[i];
                    vp[i] = vip - s * (viq + tau * vip);
                    vq[i] = viq + s * (vip - tau * viq);
                }
            }
        }
    }
    if (off_diagonal_norm(a) > target)
        throw NumericalError("jacobi_eig: no convergence after " + std::to_string(max_sweeps) +
                             " sweeps");
}

// Householder reduction of a symmetric matrix to tridiagonal form with
// accumulated transformations (EISPACK tred2 lineage). On exit d holds the
// diagonal, e the subdiagonal (e[0] unused), v the orthogonal factor.
void tred2(DenseMatrix& v, std::vector<double>& d, std::vector<double>& e) {
    const int n = v.rows();
    for (int j = 0; j < n; ++j) d[j] = v(n - 1, j);

    for (int i = n - 1; i > 0; --i) {
        double scale = 0.0, h = 0.0;
        for (int k = 0; k < i; ++k) scale += std::abs(d[k]);
        if (scale == 0.0) {
            e[i] = d[i - 1];
            for (int j = 0; j < i; ++j) {
                d[j] = v(i - 1, j);
                v(i, j) = 0.0;
                v(j, i) = 0.0;
            }
        } else {
            for (int k = 0; k < i; ++k) {
                d[k] /= scale;
                h += d[k] * d[k];
            }
            double f = d[i - 1];
            double g = std::sqrt(h);
            if (f > 0.0) g = -g;
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            for (int j = 0; j < i; ++j) e[j] = 0.0;

            for (int j = 0; j < i; ++j) {
                f = d[j];
                v(j, i) = f;
                g = e[j] + v(j, j) * f;
                for (int k = j + 1; k <= i - 1; ++k) {
                    g += v(k, j) * d[k];
                    e[k] += v(k, j) * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for (int j = 0; j < i; ++j) {
                e[j] /= h;
                f += e[j] * d[j];
            }
            const double hh = f / (h + h);
            for (int j = 0; j < i; ++j) e[j] -= hh * d[j];
            for (int j = 0; j < i; ++j) {
                f = d[j];
                g = e[j];
                for (int k = j; k <= i - 1; ++k) v(k, j) -= f * e[k] + g * d[k];
                d[j] = v(i - 1, j);
                v(i, j) = 0.0;
            }
        }
        d[i] = h;
    }

    for (int i = 0; i < n - 1; ++i) {
        v(n - 1, i) = v(i, i);
        v(i, i) = 1.0;
        const double h = d[i + 1];
        if (h != 0.0) {
            for (int k = 0; k <= i; ++k) d[k] = v(k, i + 1) / h;
            for (int j = 0; j <= i; ++j) {
                double g = 0.0;
                for (int k = 0; k <= i; ++k) g += v(k, i + 1) * v(k, j);
                for (int k = 0; k <= i; ++k) v(k, j) -= g * d[k];
            }
        }
        for (int k = 0; k <= i; ++k) v(k, i + 1) = 0.0;
    }
    for (int j = 0; j < n; ++j) {
        d[j] = v(n - 1, j);
        v(n - 1, j) = 0.0;
    }
    v(n - 1, n - 1) = 1.0;
    e[0] = 0.0;
}

// Implicit-shift QL on a symmetric tridiagonal (d, e), rotations applied to
// the columns of v when accumulate is set.
void tql2(DenseMatrix& v, std::vector<double>& d, std::vector<double>& e, bool accumulate) {
    const int n = static_cast<int>(d.size());
    for (int i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;

    const double eps = std::ldexp(1.0, -52);
    double f = 0.0, tst1 = 0.0;
    for (int l = 0; l < n; ++l) {
        tst1 = std::max(tst1, std::abs(d[l]) + std::abs(e[l]));
        int m = l;
        while (m < n && std::abs(e[m]) > eps * tst1) ++m;
        if (m > l) {
            int iter = 0;
            do {
                if (++iter > 60)
                    throw NumericalError("tql2: no convergence after 60 iterations at index " +
                                         std::to_string(l));
                double g = d[l];
                double p = (d[l + 1] - g) / (2.0 * e[l]);
                double r = std::hypot(p, 1.0);
                if (p < 0.0) r = -r;
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                const double dl1 = d[l + 1];
                double h = g - d[l];
                for (int i = l + 2; i < n; ++i) d[i] -= h;
                f += h;

                p = d[m];
                double c = 1.0, c2 = 1.0, c3 = 1.0;
                const double el1 = e[l + 1];
                double s = 0.0, s2 = 0.0;
                for (int i = m - 1; i >= l; --i) {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = std::hypot(p, e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if (accumulate) {
                        double* vi = v.col(i);
                        double* vi1 = v.col(i + 1);
                        for (int k = 0; k < v.rows(); ++k) {
                            const double hk = vi1[k];
                            vi1[k] = s * vi[k] + c * hk;
                            vi[k] = c * vi[k] - s * hk;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
            } while (std::abs(e[l]) > eps * tst1);
        }
        d[l] += f;
        e[l] = 0.0;
    }
}

void sort_ascending(std::vector<double>& d, DenseMatrix* v) {
    const int n = static_cast<int>(d.size());
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return d[a] < d[b]; });
    std::vector<double> ds(n);
    for (int i = 0; i < n; ++i) ds[i] = d[idx[i]];
    d = std::move(ds);
    if (v) {
        DenseMatrix vs(v->rows(), v->cols());
        for (int i = 0; i < n; ++i)
            std::copy(v->col(idx[i]), v->col(idx[i]) + v->rows(), vs.col(i));
        *v = std::move(vs);
    }
}

void normalize_signs(DenseMatrix& v) {
    for (int j = 0; j < v.cols(); ++j) {
        double* c = v.col(j);
        int arg = 0;
        double best = 0.0;
        for (int i = 0; i < v.rows(); ++i)
            if (std::abs(c[i]) > best) {
                best = std::abs(c[i]);
                arg = i;
            }
        if (c[arg] < 0.0)
            for (int i = 0; i < v.rows(); ++i) c[i] = -c[i];
    }
}

void check_eig_input(const DenseMatrix& m, int size_cap) {
    require_symmetric(m, "sym_eig");
    if (m.rows() > size_cap)
        throw ResourceError("sym_eig: dimension " + std::to_string(m.rows()) +
                            " exceeds dense size cap " + std::to_string(size_cap));
}

}  // namespace

SpectralDecomposition sym_eig(const DenseMatrix& m, EigMethod method, int size_cap) {
    check_eig_input(m, size_cap);
    const int n = m.rows();
    SpectralDecomposition out;
    out.eigenvalues.resize(n);
    if (n == 0) {
        out.eigenvectors = DenseMatrix(0, 0);
        return out;
    }
    if (method == EigMethod::automatic)
        method = n <= kJacobiMaxDim ? EigMethod::jacobi : EigMethod::tridiagonal_ql;

    if (method == EigMethod::jacobi) {
        DenseMatrix a = symmetrize(m);
        jacobi_eig(a, out.eigenvectors, kJacobiMaxSweeps);
        for (int i = 0; i < n; ++i) out.eigenvalues[i] = a(i, i);
    } else {
        out.eigenvectors = symmetrize(m);
        std::vector<double> e(n, 0.0);
        tred2(out.eigenvectors, out.eigenvalues, e);
        tql2(out.eigenvectors, out.eigenvalues, e, true);
    }
    sort_ascending(out.eigenvalues, &out.eigenvectors);
    normalize_signs(out.eigenvectors);
    return out;
}

std::vector<double> sym_eigvals(const DenseMatrix& m, int size_cap) {
    check_eig_input(m, size_cap);
    const int n = m.rows();
    if (n == 0) return {};
    DenseMatrix work = symmetrize(m);
    std::vector<double> d(n), e(n, 0.0);
    tred2(work, d, e);
    tql2(work, d, e, false);
    sort_ascending(d, nullptr);
    return d;
}

DenseMatrix apply_matfun(const DenseMatrix& m, const ScalarFunction& f) {
    require_symmetric(m, "apply_matfun");
    SpectralDecomposition dec = sym_eig(m);
    const int n = m.rows();
    DenseMatrix scaled = dec.eigenvectors;
    for (int j = 0; j < n; ++j) {
        const double lam = dec.eigenvalues[j];
        if (!f.in_domain(lam))
            throw DomainError("apply_matfun: " + f.name() + " undefined at eigenvalue " +
                              std::to_string(lam));
        const double flam = f(lam);
        double* c = scaled.col(j);
        for (int i = 0; i < n; ++i) c[i] *= flam;
    }
    return symmetrize(matmul_nt(scaled, dec.eigenvectors));
}

DenseMatrix truncate_sym(const DenseMatrix& x, int k) {
    require_symmetric(x, "truncate_sym");
    if (k < 0) throw ValidationError("truncate_sym: k must be >= 0");
    const int n = x.rows();
    if (k >= n) return x;
    if (k == 0) return DenseMatrix::zeros(n, n);

    SpectralDecomposition dec = sym_eig(x);
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
        return std::abs(dec.eigenvalues[a]) > std::abs(dec.eigenvalues[b]);
    });
    DenseMatrix vk(n, k);
    for (int j = 0; j < k; ++j) {
        const double lam = dec.eigenvalues[idx[j]];
        const double* src = dec.eigenvectors.col(idx[j]);
        double* dst = vk.col(j);
        for (int i = 0; i < n; ++i) dst[i] = src[i] * lam;
    }
    DenseMatrix vk_plain(n, k);
    for (int j = 0; j < k; ++j)
        std::copy(dec.eigenvectors.col(idx[j]), dec.eigenvectors.col(idx[j]) + n, vk_plain.col(j));
    return symmetrize(matmul_nt(vk, vk_plain));
}

OrthResult orth_basis(const DenseMatrix& y, double tol, double scale) {
    if (tol < 0.0) throw ValidationError("orth_basis: tol must be >= 0");
    const int n = y.rows(), m = y.cols();
    const double ref = scale >= 0.0 ? scale : frob_norm(y);
    const double threshold = tol * ref;

    DenseMatrix v(n, m);  // at most m columns kept
    DenseMatrix r(m, m);
    int rank = 0;
    std::vector<double> w(n);
    for (int j = 0; j < m; ++j) {
        std::copy(y.col(j), y.col(j) + n, w.begin());
        for (int pass = 0; pass < 2; ++pass) {
            for (int i = 0; i < rank; ++i) {
                const double* vi = v.col(i);
                double c = 0.0;
                for (int t = 0; t < n; ++t) c += vi[t] * w[t];
                for (int t = 0; t < n; ++t) w[t] -= c * vi[t];
                r(i, j) += c;
            }
        }
        double nrm = 0.0;
        for (int t = 0; t < n; ++t) nrm += w[t] * w[t];
        nrm = std::sqrt(nrm);
        if (nrm > threshold && nrm > 0.0) {
            double* vc = v.col(rank);
            for (int t = 0; t < n; ++t) vc[t] = w[t] / nrm;
            r(rank, j) = nrm;
            ++rank;
        }
    }
    OrthResult out;
    out.v = leading_columns(v, rank);
    out.r = block(r, 0, rank, 0, m);
    out.rank = rank;
    return out;
}

double rel_error(const DenseMatrix& exact, const DenseMatrix& approx) {
    if (exact.rows() != approx.rows() || exact.cols() != approx.cols())
        throw ValidationError("rel_error: shape mismatch");
    const double denom = frob_norm(exact);
    if (denom == 0.0) throw DomainError("rel_error: exact matrix has zero norm");
    return frob_norm(exact - approx) / denom;
}

}  // namespace krylow
