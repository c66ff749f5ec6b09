#pragma once

#include <optional>
#include <string>
#include <vector>

namespace krylow {

/// Scalar function f applied to eigenvalues. exp_scaled(t) is exp(t*x),
/// covering exp(A) (t = 1) and thermal exp(-beta*A) (t = -beta).
/// polynomial and power_series both hold coefficient sequences
/// (c0 + c1 x + ...); polynomial additionally exposes an exact degree, which
/// the exactness-sensitive callers (Lanczos exactness, bound assembly) use.
class ScalarFunction {
public:
    enum class Kind { identity, exp_scaled, log, polynomial, power_series };

    static ScalarFunction identity();
    static ScalarFunction exp_scaled(double t);
    static ScalarFunction log();
    static ScalarFunction polynomial(std::vector<double> coeffs);
    static ScalarFunction power_series(std::vector<double> coeffs);

    Kind kind() const { return kind_; }
    double scale() const { return t_; }
    const std::vector<double>& coeffs() const { return coeffs_; }

    double operator()(double x) const;
    bool in_domain(double x) const;

    /// Exact degree for polynomial kind (trailing zero coefficients ignored);
    /// nullopt for every other kind.
    std::optional<int> poly_degree() const;

    bool is_exp_family() const { return kind_ == Kind::exp_scaled; }

    std::string name() const;

private:
    ScalarFunction(Kind kind, double t, std::vector<double> coeffs)
        : kind_(kind), t_(t), coeffs_(std::move(coeffs)) {}

    Kind kind_;
    double t_;
    std::vector<double> coeffs_;
};

/// Horner evaluation of a coefficient sequence (c0 + c1 x + ...).
double horner(const std::vector<double>& coeffs, double x);

}  // namespace krylow
