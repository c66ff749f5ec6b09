#include "krylow/block_lanczos.hpp"

#include <string>

#include "krylow/errors.hpp"

namespace krylow {

int BlockLanczosResult::dim_at(int s) const {
    if (s < 0 || s > iterations)
        throw ValidationError("dim_at: s = " + std::to_string(s) + " outside [0, " +
                              std::to_string(iterations) + "]");
    int d = 0;
    for (int i = 0; i < s; ++i) d += widths[i];
    return d;
}

namespace {

// Iteration state: blocks[0..cur] are V_0..V_cur, ms[i] = M_i and rs[i] = R_i
// (1-based, index 0 unused). blocks.back() is the pending block one past the
// assembled basis.
struct Engine {
    const MatVecOperator& op;
    double tol;
    std::vector<DenseMatrix> blocks;
    std::vector<DenseMatrix> ms;
    std::vector<DenseMatrix> rs;
    DenseMatrix r0;
    int64_t matvecs = 0;

    Engine(const MatVecOperator& o, double t) : op(o), tol(t) {
        ms.emplace_back();
        rs.emplace_back();
    }

    void init(const DenseMatrix& omega) {
        if (omega.rows() != op.dim())
            throw ValidationError("block_lanczos: start block has " +
                                  std::to_string(omega.rows()) + " rows, operator dimension is " +
                                  std::to_string(op.dim()));
        if (frob_norm(omega) == 0.0)
            throw ValidationError("block_lanczos: start block is zero");
        OrthResult o = orth_basis(omega, tol);
        blocks.push_back(std::move(o.v));
        r0 = std::move(o.r);
    }

    void step() {
        const int i = static_cast<int>(blocks.size());  // computing V_i
        const DenseMatrix& vprev = blocks[i - 1];
        const int n = static_cast<int>(op.dim());
        if (vprev.cols() == 0) {  // zero width persists; iteration is a no-op
            blocks.emplace_back(n, 0);
            ms.emplace_back(0, 0);
            rs.emplace_back(0, 0);
            return;
        }
        DenseMatrix y = op.apply_block(vprev);
        matvecs += vprev.cols();
        const double scale = frob_norm(y);  // deflation reference, pre-projection
        if (i >= 2 && blocks[i - 2].cols() > 0) y = y - matmul_nt(blocks[i - 2], rs[i - 1]);
        DenseMatrix m_i = symmetrize(matmul_tn(vprev, y));
        y = y - matmul(vprev, m_i);
        for (int pass = 0; pass < 2; ++pass) {
            for (const DenseMatrix& vb : blocks) {
                if (vb.cols() == 0) continue;
                y = y - matmul(vb, matmul_tn(vb, y));
            }
        }
        OrthResult o = orth_basis(y, tol, scale);
        blocks.push_back(std::move(o.v));
        ms.push_back(std::move(m_i));
        rs.push_back(std::move(o.r));
    }

    BlockLanczosResult assemble(int q) const {
        BlockLanczosResult res;
        res.iterations = q;
        res.deflation_tol = tol;
        res.op_label = op.label();
        res.op_dim = op.dim();
        res.op_id = op.instance_id();
        res.matvecs = matvecs;
        res.r0 = r0;
        res.widths.resize(q);
        int d_total = 0;
        std::vector<int> offset(q, 0);
        for (int b = 0; b < q; ++b) {
            res.widths[b] = blocks[b].cols();
            offset[b] = d_total;
            d_total += res.widths[b];
        }
        const int n = static_cast<int>(op.dim());
        res.q_basis = DenseMatrix(n, d_total);
        for (int b = 0; b < q; ++b)
            for (int j = 0; j < res.widths[b]; ++j)
                std::copy(blocks[b].col(j), blocks[b].col(j) + n,
                          res.q_basis.col(offset[b] + j));
        res.t_proj = DenseMatrix(d_total, d_total);
        for (int i = 1; i <= q; ++i) {
            const DenseMatrix& m = ms[i];
            const int o = offset[i - 1];
            for (int cj = 0; cj < m.cols(); ++cj)
                for (int ci = 0; ci < m.rows(); ++ci) res.t_proj(o + ci, o + cj) = m(ci, cj);
        }
        for (int i = 1; i <= q - 1; ++i) {
            const DenseMatrix& r = rs[i];  // w_i x w_{i-1}
            const int ro = offset[i], co = offset[i - 1];
            for (int cj = 0; cj < r.cols(); ++cj)
                for (int ci = 0; ci < r.rows(); ++ci) {
                    res.t_proj(ro + ci, co + cj) = r(ci, cj);
                    res.t_proj(co + cj, ro + ci) = r(ci, cj);
                }
        }
        res.v_pending = blocks[q];
        res.r_pending = rs[q];
        return res;
    }

    // Rebuild the state a finished run left behind.
    void restore(const BlockLanczosResult& res) {
        const int n = static_cast<int>(op.dim());
        r0 = res.r0;
        matvecs = res.matvecs;
        int off = 0;
        for (int b = 0; b < res.iterations; ++b) {
            const int w = res.widths[b];
            blocks.push_back(block(res.q_basis, 0, n, off, off + w));
            off += w;
        }
        std::vector<int> offset(res.iterations, 0);
        for (int b = 1; b < res.iterations; ++b) offset[b] = offset[b - 1] + res.widths[b - 1];
        for (int i = 1; i <= res.iterations; ++i) {
            const int o = offset[i - 1], w = res.widths[i - 1];
            ms.push_back(block(res.t_proj, o, o + w, o, o + w));
            if (i <= res.iterations - 1)
                rs.push_back(block(res.t_proj, offset[i], offset[i] + res.widths[i], o, o + w));
        }
        blocks.push_back(res.v_pending);
        rs.push_back(res.r_pending);
    }
};

}  // namespace

BlockLanczosResult block_lanczos(const MatVecOperator& op, const DenseMatrix& omega, int q,
                                 double defl_tol) {
    if (q < 1) throw ValidationError("block_lanczos: q must be >= 1");
    if (omega.cols() < 1) throw ValidationError("block_lanczos: block width must be >= 1");
    Engine eng(op, defl_tol);
    eng.init(omega);
    for (int i = 1; i <= q; ++i) eng.step();
    return eng.assemble(q);
}

DenseMatrix lanczos_fom(const BlockLanczosResult& res, const ScalarFunction& f) {
    const int w0 = res.r0.rows();
    DenseMatrix ft = apply_matfun(res.t_proj, f);
    return matmul(res.q_basis, matmul(block(ft, 0, ft.rows(), 0, w0), res.r0));
}

DenseMatrix lanczos_quadform(const BlockLanczosResult& res, const ScalarFunction& f) {
    const int w0 = res.r0.rows();
    DenseMatrix ft = apply_matfun(res.t_proj, f);
    return matmul_tn(res.r0, matmul(block(ft, 0, w0, 0, w0), res.r0));
}

BlockLanczosResult extend_lanczos(const BlockLanczosResult& res, const MatVecOperator& op,
                                  int extra) {
    if (extra < 0) throw ValidationError("extend_lanczos: extra must be >= 0");
    if (op.instance_id() != res.op_id || op.dim() != res.op_dim)
        throw ValidationError("extend_lanczos: operator mismatch (run was on '" + res.op_label +
                              "', got '" + op.label() + "')");
    if (extra == 0) return res;
    Engine eng(op, res.deflation_tol);
    eng.restore(res);
    for (int i = 0; i < extra; ++i) eng.step();
    return eng.assemble(res.iterations + extra);
}

std::pair<DenseMatrix, int> leading_principal(const BlockLanczosResult& res, int s) {
    if (s < 1 || s > res.iterations)
        throw ValidationError("leading_principal: s = " + std::to_string(s) + " outside [1, " +
                              std::to_string(res.iterations) + "]");
    const int d = res.dim_at(s);
    return {leading_columns(res.q_basis, d), d};
}

}  // namespace krylow
