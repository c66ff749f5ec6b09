#include "krylow/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "krylow/errors.hpp"

namespace krylow {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log |f(lambda)| without forming f(lambda); exp_scaled is exact in logs.
double log_abs_f_at(const ScalarFunction& f, double lambda) {
    if (f.kind() == ScalarFunction::Kind::exp_scaled) return f.scale() * lambda;
    const double v = std::abs(f(lambda));
    return v == 0.0 ? kNegInf : std::log(v);
}

}  // namespace

double log_sum_exp(double a, double b) {
    if (a == kNegInf) return b;
    if (b == kNegInf) return a;
    const double m = std::max(a, b);
    return m + std::log1p(std::exp(std::min(a, b) - m));
}

SpectrumSplit::SpectrumSplit(std::vector<double> eigenvalues, int k, ScalarFunction f)
    : k_(k), f_(std::move(f)) {
    const int n = static_cast<int>(eigenvalues.size());
    if (n == 0) throw ValidationError("SpectrumSplit: empty spectrum");
    if (k < 0 || k > n)
        throw ValidationError("SpectrumSplit: k = " + std::to_string(k) + " outside [0, " +
                              std::to_string(n) + "]");
    for (double lam : eigenvalues)
        if (!f_.in_domain(lam))
            throw DomainError("SpectrumSplit: " + f_.name() + " undefined at eigenvalue " +
                              std::to_string(lam));

    std::vector<double> logf(n);
    for (int i = 0; i < n; ++i) logf[i] = log_abs_f_at(f_, eigenvalues[i]);
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return logf[a] > logf[b]; });

    lambda_.resize(n);
    log_abs_f_.resize(n);
    z_.resize(n);
    const bool exp_axis = f_.kind() == ScalarFunction::Kind::exp_scaled;
    const double t = f_.scale();
    for (int i = 0; i < n; ++i) {
        lambda_[i] = eigenvalues[idx[i]];
        log_abs_f_[i] = logf[idx[i]];
        z_[i] = exp_axis ? t * lambda_[i] : lambda_[i];
    }
    for (int i = 0; i + 1 < n; ++i)
        if (log_abs_f_[i] < log_abs_f_[i + 1])
            throw NumericalError("SpectrumSplit: |f| ordering violated after sort");

    lambda_min_ = *std::min_element(lambda_.begin(), lambda_.end());
    lambda_max_ = *std::max_element(lambda_.begin(), lambda_.end());
    z_min_ = *std::min_element(z_.begin(), z_.end());
    z_max_ = *std::max_element(z_.begin(), z_.end());

    log_total_norm_sq_ = kNegInf;
    log_tail_norm_sq_ = kNegInf;
    log_f_op_norm_ = log_abs_f_[0];
    for (int i = 0; i < n; ++i) {
        log_total_norm_sq_ = log_sum_exp(log_total_norm_sq_, 2.0 * log_abs_f_[i]);
        if (i >= k_) log_tail_norm_sq_ = log_sum_exp(log_tail_norm_sq_, 2.0 * log_abs_f_[i]);
    }
}

double SpectrumSplit::tail_norm() const { return std::exp(0.5 * log_tail_norm_sq_); }

GammaQuantities gamma_quantities(const SpectrumSplit& spec) {
    GammaQuantities g;
    g.z = spec.z_values();
    g.k = spec.k();
    const int n = spec.n(), k = spec.k();
    if (n < k + 1)
        throw ValidationError("gamma_quantities: need n >= k+1 for the tail gap");

    const double gap_kk1 = g.gamma(k, k + 1);
    const double gap_k1n = g.gamma(k + 1, n);
    if (gap_k1n == 0.0) {
        g.big_gamma = 1.0;  // zero-width tail interval cannot limit the gap
    } else {
        g.big_gamma = std::min(1.0, 2.0 * gap_kk1 / gap_k1n);
    }

    if (k >= 2) {
        const double span = std::abs(spec.z_max() - spec.z_min());
        if (span == 0.0) {
            g.gamma_min = 0.0;
        } else {
            double best = std::numeric_limits<double>::infinity();
            for (int i = 1; i <= k; ++i)
                for (int j = i + 1; j <= k; ++j)
                    best = std::min(best, std::abs(g.gamma(i, j)));
            g.gamma_min = best / span;
        }
    }
    return g;
}

}  // namespace krylow
