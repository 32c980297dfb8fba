#include "uedge/hermite.hpp"

#include "uedge/error.hpp"

#include <cmath>
#include <vector>

namespace uedge {

double std_normal_pdf(double x) { return inv_sqrt_2pi * std::exp(-0.5 * x * x); }

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double std_normal_pdf(std::span<const double> x) {
    double q = 0.0;
    for (double v : x) q += v * v;
    return std::pow(inv_sqrt_2pi, static_cast<double>(x.size())) * std::exp(-0.5 * q);
}

double hermite_he(int k, double x) {
    if (k < 0) throw InvalidArgument("Hermite degree must be >= 0");
    double prev = 1.0;
    if (k == 0) return prev;
    double cur = x;
    for (int i = 1; i < k; ++i) {
        const double next = x * cur - i * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

void hermite_all(double x, std::span<double> out) {
    if (out.empty()) return;
    out[0] = 1.0;
    if (out.size() > 1) out[1] = x;
    for (std::size_t i = 1; i + 1 < out.size(); ++i) {
        out[i + 1] = x * out[i] - static_cast<double>(i) * out[i - 1];
    }
}

double hermite_tensor(const MultiIndex& nu, std::span<const double> x) {
    if (x.size() != nu.dimension()) throw InvalidArgument("hermite_tensor dimension mismatch");
    double v = 1.0;
    for (std::size_t k = 0; k < x.size(); ++k) v *= hermite_he(nu[k], x[k]);
    return v;
}

namespace {

// Antiderivative G_k with G_k(-inf) = 0.
double hermite_antiderivative(int k, double x) {
    if (std::isinf(x)) return (k == 0 && x > 0) ? 1.0 : 0.0;
    if (k == 0) return std_normal_cdf(x);
    return -hermite_he(k - 1, x) * std_normal_pdf(x);
}

} // namespace

double hermite_gauss_integral(int k, double a, double b) {
    if (k < 0) throw InvalidArgument("Hermite degree must be >= 0");
    if (!(a <= b)) return a == b ? 0.0 : -hermite_gauss_integral(k, b, a);
    if (k == 0) {
        // difference of upper tails is more accurate on the right half-line
        if (a > 0.0) {
            return 0.5 * std::erfc(a / std::numbers::sqrt2) - 0.5 * std::erfc(b / std::numbers::sqrt2);
        }
    }
    return hermite_antiderivative(k, b) - hermite_antiderivative(k, a);
}

} // namespace uedge
