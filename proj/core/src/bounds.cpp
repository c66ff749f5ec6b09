#include "krylow/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "krylow/errors.hpp"
#include "krylow/linalg.hpp"

namespace krylow {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLn2 = 0.6931471805599453094172321;
constexpr double kPi = 3.14159265358979323846;
constexpr double kE = 2.718281828459045235360287;
}  // namespace

double chebyshev(int m, double x) {
    if (m < 0) throw ValidationError("chebyshev: degree must be >= 0");
    if (m == 0) return 1.0;
    if (m == 1) return x;
    double tkm1 = 1.0, tk = x;
    for (int i = 2; i <= m; ++i) {
        const double next = 2.0 * x * tk - tkm1;
        tkm1 = tk;
        tk = next;
    }
    return tk;
}

double chebyshev_closed_form(int m, double x) {
    if (m < 0) throw ValidationError("chebyshev: degree must be >= 0");
    if (std::abs(x) < 1.0)
        throw ValidationError("chebyshev_closed_form: requires |x| >= 1");
    const double s = std::sqrt(x * x - 1.0);
    return 0.5 * (std::pow(x + s, m) + std::pow(x - s, m));
}

double chebyshev_log_abs(int m, double x) {
    if (m == 0) return 0.0;
    const double ax = std::abs(x);
    if (ax <= 1.0) {
        const double v = std::abs(chebyshev(m, x));
        return v == 0.0 ? kNegInf : std::log(v);
    }
    // |T_m(x)| = T_m(|x|) = 0.5 e^{m t}(1 + e^{-2mt}), t = log(|x| + sqrt(x^2-1))
    const double t = std::log(ax + std::sqrt(ax * ax - 1.0));
    return m * t - kLn2 + std::log1p(std::exp(-2.0 * m * t));
}

PolyCandidate PolyCandidate::coefficients(std::vector<double> c, std::string name) {
    PolyCandidate p;
    p.kind_ = Kind::coefficients;
    p.coeffs_ = std::move(c);
    p.degree_ = 0;
    for (int i = 0; i < static_cast<int>(p.coeffs_.size()); ++i)
        if (p.coeffs_[i] != 0.0) p.degree_ = i;
    p.name_ = std::move(name);
    return p;
}

PolyCandidate PolyCandidate::monomial(int degree) {
    if (degree < 0) throw ValidationError("PolyCandidate::monomial: degree must be >= 0");
    PolyCandidate p;
    p.kind_ = Kind::monomial;
    p.degree_ = degree;
    p.name_ = "monomial(" + std::to_string(degree) + ")";
    return p;
}

PolyCandidate PolyCandidate::taylor_exp_shifted(int s, double z_shift) {
    if (s < 1) throw ValidationError("PolyCandidate::taylor_exp_shifted: s must be >= 1");
    PolyCandidate p;
    p.kind_ = Kind::taylor_exp;
    p.degree_ = s - 1;
    p.a_ = z_shift;
    p.name_ = "taylor_exp_shifted(deg " + std::to_string(s - 1) + ")";
    return p;
}

PolyCandidate PolyCandidate::chebyshev_exp_gap(int s, double z_n, double z_k1) {
    if (s < 2) throw ValidationError("PolyCandidate::chebyshev_exp_gap: s must be >= 2");
    if (!(z_k1 > z_n))
        throw ValidationError("PolyCandidate::chebyshev_exp_gap: degenerate tail interval");
    PolyCandidate p;
    p.kind_ = Kind::chebyshev_exp;
    p.degree_ = s - 1;
    p.a_ = z_n;
    p.b_ = z_k1;
    p.name_ = "chebyshev_exp_gap(deg " + std::to_string(s - 1) + ")";
    return p;
}

PolyCandidate PolyCandidate::chebyshev_scaled(int degree, double z_n, double z_k1, double z_k) {
    if (degree < 1) throw ValidationError("PolyCandidate::chebyshev_scaled: degree must be >= 1");
    if (!(z_k1 > z_n))
        throw ValidationError("PolyCandidate::chebyshev_scaled: degenerate tail interval");
    PolyCandidate p;
    p.kind_ = Kind::chebyshev_scaled;
    p.degree_ = degree;
    p.a_ = z_n;
    p.b_ = z_k1;
    p.c_ = z_k;
    const double w_k = (2.0 * z_k - z_k1 - z_n) / (z_k1 - z_n);
    if (chebyshev_log_abs(degree, w_k) == kNegInf)
        throw ValidationError("PolyCandidate::chebyshev_scaled: normalization point is a root");
    p.name_ = "chebyshev_scaled(deg " + std::to_string(degree) + ")";
    return p;
}

double PolyCandidate::eval(double z) const {
    switch (kind_) {
        case Kind::coefficients:
            return horner(coeffs_, z);
        case Kind::monomial:
            return std::pow(z, degree_);
        case Kind::taylor_exp: {
            const double w = z - a_;
            double term = 1.0, sum = 1.0;
            for (int i = 1; i <= degree_; ++i) {
                term *= w / i;
                sum += term;
            }
            return sum;
        }
        case Kind::chebyshev_exp: {
            const double eta = (z - b_) / (b_ - a_);
            return (1.0 + z - a_) * chebyshev(degree_ - 1, 1.0 + 2.0 * eta);
        }
        case Kind::chebyshev_scaled: {
            const double w = (2.0 * z - b_ - a_) / (b_ - a_);
            const double w_k = (2.0 * c_ - b_ - a_) / (b_ - a_);
            return chebyshev(degree_, w) / chebyshev(degree_, w_k);
        }
    }
    return 0.0;
}

double PolyCandidate::log_abs(double z) const {
    switch (kind_) {
        case Kind::coefficients: {
            const double v = std::abs(horner(coeffs_, z));
            return v == 0.0 ? kNegInf : std::log(v);
        }
        case Kind::monomial:
            if (degree_ == 0) return 0.0;
            return z == 0.0 ? kNegInf : degree_ * std::log(std::abs(z));
        case Kind::taylor_exp: {
            const double w = z - a_;
            if (w < 0.0) {
                const double v = std::abs(eval(z));
                return v == 0.0 ? kNegInf : std::log(v);
            }
            if (w == 0.0) return 0.0;  // p = 1
            const double lw = std::log(w);
            double acc = kNegInf;
            for (int i = 0; i <= degree_; ++i)
                acc = log_sum_exp(acc, i * lw - std::lgamma(i + 1.0));
            return acc;
        }
        case Kind::chebyshev_exp: {
            const double factor = std::abs(1.0 + z - a_);
            if (factor == 0.0) return kNegInf;
            const double eta = (z - b_) / (b_ - a_);
            return std::log(factor) + chebyshev_log_abs(degree_ - 1, 1.0 + 2.0 * eta);
        }
        case Kind::chebyshev_scaled: {
            const double w = (2.0 * z - b_ - a_) / (b_ - a_);
            const double w_k = (2.0 * c_ - b_ - a_) / (b_ - a_);
            return chebyshev_log_abs(degree_, w) - chebyshev_log_abs(degree_, w_k);
        }
    }
    return kNegInf;
}

EValue E_candidate(const SpectrumSplit& spec, const PolyCandidate& p) {
    const int n = spec.n(), k = spec.k();
    double log_ratio_max = kNegInf;
    for (int i = 1; i <= k; ++i) {
        const double lp = p.log_abs(spec.z(i));
        if (lp == kNegInf) return {kInf, kInf};  // p vanishes on the head
        log_ratio_max = std::max(log_ratio_max, 2.0 * (spec.log_abs_f(i) - lp));
    }
    if (k == 0) log_ratio_max = 0.0;
    double log_tail = kNegInf;
    for (int i = k + 1; i <= n; ++i) log_tail = log_sum_exp(log_tail, 2.0 * p.log_abs(spec.z(i)));
    if (log_tail == kNegInf) return {0.0, kNegInf};
    const double lv = log_tail + log_ratio_max;
    return {std::exp(lv), lv};
}

double E_omega_candidate(const SpectrumSplit& spec, const PolyCandidate& p,
                         const DenseMatrix& omega_k, const DenseMatrix& omega_tail) {
    const int n = spec.n(), k = spec.k();
    if (omega_k.rows() != k)
        throw ValidationError("E_omega_candidate: Omega_k must have k rows");
    if (omega_tail.rows() != n - k)
        throw ValidationError("E_omega_candidate: Omega_tail must have n-k rows");
    if (omega_k.cols() != omega_tail.cols())
        throw ValidationError("E_omega_candidate: column count mismatch");
    if (omega_k.cols() < k)
        throw ValidationError("E_omega_candidate: sketch width below k");

    // pinv(Omega_k) = Omega_k^T (Omega_k Omega_k^T)^{-1}
    DenseMatrix gram = symmetrize(matmul_nt(omega_k, omega_k));
    SpectralDecomposition dec = sym_eig(gram);
    const double lam_max = dec.eigenvalues.empty() ? 0.0 : dec.eigenvalues.back();
    for (double lam : dec.eigenvalues)
        if (lam <= 1e-12 * std::max(1.0, lam_max))
            throw ValidationError("E_omega_candidate: Omega_k is rank-deficient");
    DenseMatrix inv_scaled = dec.eigenvectors;
    for (int j = 0; j < inv_scaled.cols(); ++j) {
        const double inv = 1.0 / dec.eigenvalues[j];
        for (int i = 0; i < inv_scaled.rows(); ++i) inv_scaled(i, j) *= inv;
    }
    DenseMatrix gram_inv = matmul_nt(inv_scaled, dec.eigenvectors);
    DenseMatrix pinv = matmul(transpose(omega_k), gram_inv);  // l x k

    DenseMatrix scaled_tail = omega_tail;
    for (int i = 0; i < n - k; ++i) {
        const double pv = p.eval(spec.z(k + 1 + i));
        for (int j = 0; j < scaled_tail.cols(); ++j) scaled_tail(i, j) *= pv;
    }
    const double factor = frob_norm_sq(matmul(scaled_tail, pinv));

    double log_ratio_max = kNegInf;
    for (int i = 1; i <= k; ++i) {
        const double lp = p.log_abs(spec.z(i));
        if (lp == kNegInf) return kInf;
        log_ratio_max = std::max(log_ratio_max, 2.0 * (spec.log_abs_f(i) - lp));
    }
    if (k == 0) log_ratio_max = 0.0;
    return factor * std::exp(log_ratio_max);
}

std::vector<PolyCandidate> registered_candidates(const SpectrumSplit& spec, int s) {
    if (s < 1) throw ValidationError("registered_candidates: s must be >= 1");
    std::vector<PolyCandidate> out;
    const int n = spec.n(), k = spec.k();

    if (spec.f().kind() == ScalarFunction::Kind::polynomial) {
        const int deg = *spec.f().poly_degree();
        if (deg <= s - 1) out.push_back(PolyCandidate::coefficients(spec.f().coeffs(), "p=f"));
    }
    for (int d = 0; d <= s - 1; ++d) out.push_back(PolyCandidate::monomial(d));

    const bool has_tail = k >= 1 && k < n;
    if (has_tail && spec.z(k + 1) > spec.z(n)) {
        const double z_n = spec.z(n), z_k1 = spec.z(k + 1), z_k = spec.z(k);
        for (int d = 1; d <= s - 1; ++d) {
            try {
                out.push_back(PolyCandidate::chebyshev_scaled(d, z_n, z_k1, z_k));
            } catch (const ValidationError&) {
                // normalization point fell on a root; candidate not usable
            }
        }
    }
    if (spec.f().is_exp_family()) {
        out.push_back(PolyCandidate::taylor_exp_shifted(s, spec.z_min()));
        if (s >= 2 && has_tail && spec.z(k + 1) > spec.z(n))
            out.push_back(PolyCandidate::chebyshev_exp_gap(s, spec.z(n), spec.z(k + 1)));
    }
    return out;
}

EUpperResult E_upper(const SpectrumSplit& spec, int s) {
    EUpperResult best;
    best.value = kInf;
    best.log_value = kInf;
    for (const PolyCandidate& p : registered_candidates(spec, s)) {
        const EValue e = E_candidate(spec, p);
        if (e.log_value < best.log_value) {
            best.value = e.value;
            best.log_value = e.log_value;
            best.argmin_kind = p.kind_name();
        }
    }
    return best;
}

double poly_err_exp(int r, double lambda_min, double lambda_max) {
    if (r < 0) throw ValidationError("poly_err_exp: r must be >= 0");
    if (lambda_max < lambda_min)
        throw ValidationError("poly_err_exp: lambda_max must be >= lambda_min");
    const double gamma = lambda_max - lambda_min;
    if (gamma == 0.0) return 0.0;
    return std::exp((2.0 * r + 2.0) * std::log(gamma) - (4.0 * r + 3.0) * kLn2 -
                    std::lgamma(2.0 * r + 3.0));
}

double constant_C(double delta, int k, int l) {
    if (!(delta > 0.0 && delta < 1.0))
        throw ValidationError("constant_C: delta must lie in (0,1)");
    if (k < 1 || l < k) throw ValidationError("constant_C: need l >= k >= 1");
    const double log2d = std::log(2.0 / delta);
    return 2.0 * kE * (2.0 * log2d + 1.0) *
           std::pow(2.0 * std::sqrt(kPi * k) / delta, 2.0 / (l - k + 1.0)) *
           (static_cast<double>(k) / (l - k + 1.0));
}

double constant_Chat(double delta) {
    if (!(delta > 0.0 && delta < 1.0))
        throw ValidationError("constant_Chat: delta must lie in (0,1)");
    return 2.0 * kPi * (1.0 + 6.0 * std::log(2.0 / delta)) / (delta * delta);
}

std::string bound_kind_name(BoundKind kind) {
    switch (kind) {
        case BoundKind::thm35_tail:
            return "thm35_tail";
        case BoundKind::thm35_expectation:
            return "thm35_expectation";
        case BoundKind::cor41:
            return "cor41";
        case BoundKind::cor42:
            return "cor42";
        case BoundKind::thm51:
            return "thm51";
    }
    return "?";
}

namespace {

// sup |f - p| over [a, b] for the degree-d Chebyshev interpolant of f,
// estimated on a dense grid. Fallback surrogate for functions without an
// analytic interpolation bound.
double cheb_interp_sup_err(const ScalarFunction& f, double a, double b, int d) {
    if (a == b) return 0.0;
    const int m = d;  // m+1 nodes -> degree m interpolant
    std::vector<double> x(m + 1), fx(m + 1), w(m + 1);
    for (int j = 0; j <= m; ++j) {
        const double t = std::cos(j * kPi / m);
        x[j] = 0.5 * (a + b) + 0.5 * (b - a) * t;
        fx[j] = f(x[j]);
        w[j] = (j % 2 == 0 ? 1.0 : -1.0) * ((j == 0 || j == m) ? 0.5 : 1.0);
    }
    double sup = 0.0;
    const int grid = 1537;
    for (int g = 0; g < grid; ++g) {
        const double xx = a + (b - a) * g / (grid - 1.0);
        double num = 0.0, den = 0.0;
        bool at_node = false;
        double node_val = 0.0;
        for (int j = 0; j <= m; ++j) {
            const double diff = xx - x[j];
            if (diff == 0.0) {
                at_node = true;
                node_val = fx[j];
                break;
            }
            const double c = w[j] / diff;
            num += c * fx[j];
            den += c;
        }
        const double pv = at_node ? node_val : num / den;
        sup = std::max(sup, std::abs(f(xx) - pv));
    }
    return sup;
}

struct PolyTerm {
    double value;
    std::string label;
    double surrogate = 0.0;
};

PolyTerm poly_term_for(const SpectrumSplit& spec, double factor, int r, double f_op_norm) {
    PolyTerm t{0.0, "poly_term", 0.0};
    const auto& f = spec.f();
    if (f.is_exp_family()) {
        t.surrogate = poly_err_exp(r, spec.z_min(), spec.z_max());
        t.value = factor * t.surrogate * f_op_norm;
    } else if (f.kind() == ScalarFunction::Kind::polynomial && *f.poly_degree() <= 2 * r + 1) {
        t.value = 0.0;
    } else {
        t.surrogate = cheb_interp_sup_err(f, spec.lambda_min(), spec.lambda_max(), 2 * r + 1);
        t.value = factor * t.surrogate;
        t.label = "poly_term_numerical";
    }
    return t;
}

}  // namespace

double BoundReport::recombine() const {
    const double poly = components.count("poly_term") ? components.at("poly_term")
                                                      : components.at("poly_term_numerical");
    if (bound_name == "cor41" || bound_name == "cor42") {
        return poly + std::sqrt(1.0 + components.at("E_factor")) * components.at("tail_norm");
    }
    const double tail = components.at("tail_norm");
    return poly + std::sqrt(tail * tail + components.at("E_term"));
}

BoundReport assemble_bound(BoundKind kind, const SpectrumSplit& spec, int l, int s, int r,
                           std::optional<double> delta, std::optional<double> f_op_norm) {
    const int k = spec.k();
    BoundReport rep;
    rep.bound_name = bound_kind_name(kind);
    rep.k = k;
    rep.l = l;
    rep.s = s;
    rep.r = r;
    rep.delta = delta;
    if (k < 1) throw ValidationError("assemble_bound: k must be >= 1");
    if (s < 1) throw ValidationError("assemble_bound: s must be >= 1");
    if (r < 0) throw ValidationError("assemble_bound: r must be >= 0");

    const double fa2 = f_op_norm.value_or(std::exp(spec.log_f_op_norm()));
    const double log_tail_sq = spec.log_tail_norm_sq();
    const double tail = spec.tail_norm();
    rep.components["tail_norm"] = tail;

    const bool single_vector = kind == BoundKind::thm51;
    const double factor = single_vector ? 4.0 * std::sqrt(static_cast<double>(k + s))
                                        : 4.0 * std::sqrt(static_cast<double>(l) * s);

    const PolyTerm poly = poly_term_for(spec, factor, r, fa2);
    rep.components[poly.label] = poly.value;
    if (poly.surrogate != 0.0) rep.components["poly_surrogate"] = poly.surrogate;

    switch (kind) {
        case BoundKind::thm35_tail:
        case BoundKind::thm35_expectation: {
            double constant;
            if (kind == BoundKind::thm35_tail) {
                if (!delta) throw ValidationError("thm35_tail: delta required");
                constant = 5.0 * constant_C(*delta, k, l);
            } else {
                if (l - k < 2)
                    throw ValidationError("thm35_expectation: requires l - k >= 2, got l - k = " +
                                          std::to_string(l - k));
                constant = 5.0 * k / (l - k - 1.0);
            }
            const EUpperResult e = E_upper(spec, s);
            rep.components["E_upper"] = e.value;
            rep.components["E_constant"] = constant;
            const double log_e_term = std::log(constant) + e.log_value;
            rep.components["E_term"] = std::exp(log_e_term);
            rep.value = poly.value + std::exp(0.5 * log_sum_exp(log_tail_sq, log_e_term));
            break;
        }
        case BoundKind::cor41: {
            if (!spec.f().is_exp_family())
                throw ValidationError("cor41: bound is specific to the exponential");
            if (l - k < 2) throw ValidationError("cor41: requires l - k >= 2");
            const double gamma_1n = spec.z_max() - spec.z_min();
            if (s < kE * gamma_1n)
                throw ValidationError("cor41: requires s >= e*gamma_{1,n} = " +
                                      std::to_string(kE * gamma_1n));
            const double taylor_ratio =
                std::exp(s * std::log(std::max(gamma_1n, 1e-300)) - std::lgamma(s + 1.0));
            const double e_factor =
                5.0 * k / ((l - k - 1.0) * (1.0 - taylor_ratio) * (1.0 - taylor_ratio));
            rep.components["taylor_ratio"] = taylor_ratio;
            rep.components["E_factor"] = e_factor;
            rep.components["poly_term_proof_variant"] =
                4.0 * std::sqrt(static_cast<double>(l) * s) * fa2 *
                std::exp((2.0 * r + 2.0) * std::log(std::max(gamma_1n, 1e-300)) -
                         std::lgamma(2.0 * r + 3.0));
            rep.value = poly.value +
                        std::exp(0.5 * log_sum_exp(0.0, std::log(e_factor)) + 0.5 * log_tail_sq);
            break;
        }
        case BoundKind::cor42: {
            if (!spec.f().is_exp_family())
                throw ValidationError("cor42: bound is specific to the exponential");
            if (l - k < 2) throw ValidationError("cor42: requires l - k >= 2");
            const GammaQuantities g = gamma_quantities(spec);
            const double gamma_1k = g.gamma(1, k);
            const double gamma_1n = g.gamma(1, spec.n());
            const double gamma_kn = g.gamma(k, spec.n());
            double threshold = 2.0;
            if (gamma_1k > 0.0) {
                if (gamma_kn <= 0.0 || gamma_1n <= gamma_kn)
                    throw ValidationError("cor42: s-threshold undefined for this spectrum");
                threshold = 2.0 + gamma_1k / std::log(gamma_1n / gamma_kn);
            }
            if (s < threshold)
                throw ValidationError("cor42: requires s >= 2 + gamma_{1,k}/log(gamma_{1,n}/gamma_{k,n}) = " +
                                      std::to_string(threshold));
            const double log_e_factor =
                (-2.0 * (s - 2.0) * std::sqrt(g.big_gamma) + 3.0 * gamma_kn) * kLn2 +
                std::log(80.0 * k / (l - k - 1.0));
            rep.components["Gamma"] = g.big_gamma;
            rep.components["gamma_kn"] = gamma_kn;
            rep.components["E_factor"] = std::exp(log_e_factor);
            rep.components["poly_term_proof_variant"] =
                4.0 * std::sqrt(static_cast<double>(l) * s) * fa2 *
                std::exp((2.0 * r + 2.0) * std::log(std::max(gamma_1n, 1e-300)) -
                         std::lgamma(2.0 * r + 3.0));
            rep.value = poly.value +
                        std::exp(0.5 * log_sum_exp(0.0, log_e_factor) + 0.5 * log_tail_sq);
            break;
        }
        case BoundKind::thm51: {
            if (!delta) throw ValidationError("thm51: delta required");
            if (k < 2) throw ValidationError("thm51: gamma_min needs k >= 2");
            const GammaQuantities g = gamma_quantities(spec);
            if (g.gamma_min <= 0.0)
                throw ValidationError("thm51: requires gamma_min > 0 (repeated head eigenvalues)");
            const double chat = constant_Chat(*delta);
            const EUpperResult e = E_upper(spec, s);
            const double log_e_term = std::log(chat) + 4.0 * std::log(static_cast<double>(k)) -
                                      2.0 * (k - 1.0) * std::log(g.gamma_min) + e.log_value;
            rep.components["E_upper"] = e.value;
            rep.components["C_hat"] = chat;
            rep.components["gamma_min"] = g.gamma_min;
            rep.components["E_term"] = std::exp(log_e_term);
            rep.value = poly.value + std::exp(0.5 * log_sum_exp(log_tail_sq, log_e_term));
            break;
        }
    }
    return rep;
}

}  // namespace krylow
