#pragma once

#include <vector>

#include "krylow/scalar_function.hpp"

namespace krylow {

/// Eigenvalues of A ordered so |f(lambda_1)| >= ... >= |f(lambda_n)|, split
/// into a head of size k and the tail. All bound evaluation happens on the
/// "bound axis" z: z = t*lambda for f = exp_scaled(t) (the exp-specific
/// constructions live on the t*A axis), z = lambda otherwise. Magnitudes of
/// f are kept as logs so enormous exponential ranges stay representable.
class SpectrumSplit {
public:
    SpectrumSplit(std::vector<double> eigenvalues, int k, ScalarFunction f);

    int n() const { return static_cast<int>(lambda_.size()); }
    int k() const { return k_; }
    const ScalarFunction& f() const { return f_; }

    /// 1-based access in |f|-descending order.
    double lambda(int i) const { return lambda_[i - 1]; }
    double z(int i) const { return z_[i - 1]; }
    double log_abs_f(int i) const { return log_abs_f_[i - 1]; }

    const std::vector<double>& lambdas() const { return lambda_; }
    const std::vector<double>& z_values() const { return z_; }

    double z_min() const { return z_min_; }
    double z_max() const { return z_max_; }
    double lambda_min() const { return lambda_min_; }
    double lambda_max() const { return lambda_max_; }

    /// log sum_{i>k} f(lambda_i)^2 and log sum_i f(lambda_i)^2.
    double log_tail_norm_sq() const { return log_tail_norm_sq_; }
    double log_total_norm_sq() const { return log_total_norm_sq_; }
    /// ||f(Lambda_{n\k})||_F; +inf when it overflows.
    double tail_norm() const;
    /// max_i |f(lambda_i)| = ||f(A)||_2 (log).
    double log_f_op_norm() const { return log_f_op_norm_; }

private:
    std::vector<double> lambda_;
    std::vector<double> z_;
    std::vector<double> log_abs_f_;
    int k_;
    ScalarFunction f_;
    double z_min_, z_max_, lambda_min_, lambda_max_;
    double log_tail_norm_sq_, log_total_norm_sq_, log_f_op_norm_;
};

/// Spectral gap quantities on the bound axis, 1-based in |f|-descending
/// order: gamma(i,j) = z_i - z_j, Gamma = min{1, 2 gamma(k,k+1)/gamma(k+1,n)}
/// (a zero-width tail interval resolves to Gamma = 1), gamma_min = smallest
/// normalized pairwise head gap (0 when the axis is degenerate).
struct GammaQuantities {
    std::vector<double> z;  // |f|-descending
    int k = 0;

    double gamma(int i, int j) const { return z[i - 1] - z[j - 1]; }
    double big_gamma = 0.0;
    double gamma_min = 0.0;
};

GammaQuantities gamma_quantities(const SpectrumSplit& spec);

/// log(e^a + e^b) tolerant of -inf inputs.
double log_sum_exp(double a, double b);

}  // namespace krylow
