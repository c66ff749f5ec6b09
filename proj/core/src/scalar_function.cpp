#include "krylow/scalar_function.hpp"

#include <cmath>

#include "krylow/errors.hpp"

namespace krylow {

double horner(const std::vector<double>& coeffs, double x) {
    double v = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * x + *it;
    return v;
}

ScalarFunction ScalarFunction::identity() { return {Kind::identity, 1.0, {}}; }
ScalarFunction ScalarFunction::exp_scaled(double t) { return {Kind::exp_scaled, t, {}}; }
ScalarFunction ScalarFunction::log() { return {Kind::log, 1.0, {}}; }
ScalarFunction ScalarFunction::polynomial(std::vector<double> coeffs) {
    return {Kind::polynomial, 1.0, std::move(coeffs)};
}
ScalarFunction ScalarFunction::power_series(std::vector<double> coeffs) {
    return {Kind::power_series, 1.0, std::move(coeffs)};
}

double ScalarFunction::operator()(double x) const {
    switch (kind_) {
        case Kind::identity:
            return x;
        case Kind::exp_scaled:
            return std::exp(t_ * x);
        case Kind::log:
            if (x <= 0.0) throw DomainError("log undefined at eigenvalue " + std::to_string(x));
            return std::log(x);
        case Kind::polynomial:
        case Kind::power_series:
            return horner(coeffs_, x);
    }
    return 0.0;  // unreachable
}

bool ScalarFunction::in_domain(double x) const {
    return kind_ != Kind::log || x > 0.0;
}

std::optional<int> ScalarFunction::poly_degree() const {
    if (kind_ != Kind::polynomial) return std::nullopt;
    int deg = -1;
    for (int i = 0; i < static_cast<int>(coeffs_.size()); ++i)
        if (coeffs_[i] != 0.0) deg = i;
    return deg < 0 ? 0 : deg;
}

std::string ScalarFunction::name() const {
    switch (kind_) {
        case Kind::identity:
            return "identity";
        case Kind::exp_scaled:
            return "exp_scaled(" + std::to_string(t_) + ")";
        case Kind::log:
            return "log";
        case Kind::polynomial:
            return "polynomial(deg " + std::to_string(*poly_degree()) + ")";
        case Kind::power_series:
            return "power_series(" + std::to_string(coeffs_.size()) + " terms)";
    }
    return "?";
}

}  // namespace krylow
