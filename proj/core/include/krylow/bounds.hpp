#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "krylow/dense_matrix.hpp"
#include "krylow/spectrum.hpp"

namespace krylow {

/// Chebyshev polynomial T_m(x) by three-term recurrence; for |x| >= 1 the
/// closed form 0.5((x+sqrt(x^2-1))^m + (x-sqrt(x^2-1))^m) is available and
/// the two agree.
double chebyshev(int m, double x);
double chebyshev_closed_form(int m, double x);
/// log |T_m(x)|, stable for large |x| and large m.
double chebyshev_log_abs(int m, double x);

/// Degree-bounded polynomial evaluated on the bound axis z. Candidates
/// feed the E quantities; magnitudes are available in logs so exponential
/// spectra stay representable.
class PolyCandidate {
public:
    /// sum_i c_i z^i
    static PolyCandidate coefficients(std::vector<double> c, std::string name = "coefficients");
    /// z^d
    static PolyCandidate monomial(int degree);
    /// truncated exponential Taylor series around z_shift, degree s-1
    static PolyCandidate taylor_exp_shifted(int s, double z_shift);
    /// (1 + z - z_n) T_{s-2}(1 + 2 eta(z)), eta = (z - z_{k1})/(z_{k1} - z_n)
    static PolyCandidate chebyshev_exp_gap(int s, double z_n, double z_k1);
    /// T_d((2z - z_{k1} - z_n)/(z_{k1} - z_n)) scaled to 1 at z_k
    static PolyCandidate chebyshev_scaled(int degree, double z_n, double z_k1, double z_k);

    int degree() const { return degree_; }
    const std::string& kind_name() const { return name_; }

    double eval(double z) const;
    /// log |p(z)|; -inf at zeros.
    double log_abs(double z) const;

private:
    enum class Kind { coefficients, monomial, taylor_exp, chebyshev_exp, chebyshev_scaled };
    Kind kind_;
    int degree_ = 0;
    std::string name_;
    std::vector<double> coeffs_;
    double a_ = 0.0, b_ = 0.0, c_ = 0.0;  // kind-specific parameters
};

/// ||p(Lambda_tail)||_F^2 * max_{i<=k} |f(lambda_i)/p(lambda_i)|^2.
/// +inf when p vanishes on a head eigenvalue. log_value carries the same
/// quantity out of double range.
struct EValue {
    double value = 0.0;
    double log_value = 0.0;
};
EValue E_candidate(const SpectrumSplit& spec, const PolyCandidate& p);

/// Sketch-dependent variant ||p(Lambda_tail) Omega_tail pinv(Omega_k)||_F^2
/// * max ratio^2. Omega_k is k x l (rows follow the |f|-descending order),
/// Omega_tail is (n-k) x l.
double E_omega_candidate(const SpectrumSplit& spec, const PolyCandidate& p,
                         const DenseMatrix& omega_k, const DenseMatrix& omega_tail);

/// Upper bound of E(s; f) over the registered candidate families: p = f for
/// low-degree polynomial f, a monomial scan, a scaled-Chebyshev scan, and
/// for the exponential the shifted Taylor and gap-Chebyshev constructions.
struct EUpperResult {
    double value = 0.0;
    double log_value = 0.0;
    std::string argmin_kind;
};
EUpperResult E_upper(const SpectrumSplit& spec, int s);
std::vector<PolyCandidate> registered_candidates(const SpectrumSplit& spec, int s);

/// Chebyshev interpolation error surrogate for exp on an interval of width
/// gamma: gamma^(2r+2) / (2^(4r+3) (2r+2)!), via log-gamma.
double poly_err_exp(int r, double lambda_min, double lambda_max);

/// C_{delta,k,l} = 2e(2log(2/delta)+1)(2 sqrt(pi k)/delta)^(2/(l-k+1)) k/(l-k+1)
double constant_C(double delta, int k, int l);

/// Chat_delta = 2 pi (1 + 6 log(2/delta)) / delta^2
double constant_Chat(double delta);

enum class BoundKind { thm35_tail, thm35_expectation, cor41, cor42, thm51 };
std::string bound_kind_name(BoundKind kind);

/// Assembled right-hand side of one of the theorem statements, with the
/// labeled components it was combined from.
struct BoundReport {
    std::string bound_name;
    double value = 0.0;
    std::map<std::string, double> components;
    int k = 0, l = 0, s = 0, r = 0;
    std::optional<double> delta;

    /// Recombine value from components; used to audit the report.
    double recombine() const;
};

/// params: l, s, r always; delta for the tail-probability kinds. The
/// operator 2-norm of f(A) defaults to the exact symmetric value
/// max_i |f(lambda_i)| unless overridden.
BoundReport assemble_bound(BoundKind kind, const SpectrumSplit& spec, int l, int s, int r,
                           std::optional<double> delta = std::nullopt,
                           std::optional<double> f_op_norm = std::nullopt);

}  // namespace krylow
