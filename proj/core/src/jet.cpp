#include "uedge/jet.hpp"

#include "uedge/error.hpp"

#include <algorithm>
#include <cmath>

namespace uedge {

Jet2::Jet2(int order) : order_(order) {
    if (order < 0) throw InvalidArgument("jet order must be >= 0");
    c_.assign(static_cast<std::size_t>(order + 1) * static_cast<std::size_t>(order + 1), 0.0);
}

Jet2 Jet2::constant(int order, double c) {
    Jet2 j(order);
    j.c_[0] = c;
    return j;
}

Jet2 Jet2::variable(int order, int k, double x0) {
    Jet2 j = constant(order, x0);
    if (order >= 1) j.coeff(k == 0 ? 1 : 0, k == 0 ? 0 : 1) = 1.0;
    return j;
}

Jet2& Jet2::operator+=(const Jet2& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
}

Jet2& Jet2::operator-=(const Jet2& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
}

Jet2& Jet2::operator*=(double s) {
    for (auto& v : c_) v *= s;
    return *this;
}

Jet2 operator*(const Jet2& a, const Jet2& b) {
    const int N = a.order_;
    Jet2 out(N);
    for (int a1 = 0; a1 <= N; ++a1) {
        for (int a2 = 0; a1 + a2 <= N; ++a2) {
            const double x = a.coeff(a1, a2);
            if (x == 0.0) continue;
            for (int b1 = 0; a1 + a2 + b1 <= N; ++b1) {
                for (int b2 = 0; a1 + a2 + b1 + b2 <= N; ++b2) {
                    out.coeff(a1 + b1, a2 + b2) += x * b.coeff(b1, b2);
                }
            }
        }
    }
    return out;
}

Jet2 pow(const Jet2& u, double p) {
    const double u0 = u.value();
    if (!(u0 > 0.0)) throw SingularityError("jet power needs a positive base value");
    const int N = u.order();
    Jet2 h = u;
    h.coeff(0, 0) = 0.0;
    h *= 1.0 / u0;
    // (1 + h)^p = sum_k binom(p, k) h^k; h has no constant term so k <= N suffices
    Jet2 sum = Jet2::constant(N, 1.0);
    Jet2 power = Jet2::constant(N, 1.0);
    double binom = 1.0;
    for (int k = 1; k <= N; ++k) {
        binom *= (p - (k - 1)) / k;
        power = power * h;
        sum += power * binom;
    }
    return sum * std::pow(u0, p);
}

double DerivativeJet::at(const MultiIndex& alpha) const {
    for (std::size_t i = 0; i < alphas.size(); ++i) {
        if (alphas[i] == alpha) return values[i];
    }
    throw UnsupportedOrder("derivative " + alpha.to_string() + " is not in the jet");
}

double DerivativeJet::max_abs() const {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

double g_value(std::span<const double> x, double w_bar) {
    if (x.size() != 2) throw InvalidArgument("g is defined on R^2");
    const double var = x[1] - x[0] * x[0];
    if (!(var > 0.0)) throw SingularityError("g undefined: x2 - x1^2 <= 0");
    return (x[0] - w_bar) / std::sqrt(var);
}

DerivativeJet g_value_and_jet(std::span<const double> x_bar, double w_bar, int order) {
    if (x_bar.size() != 2) throw InvalidArgument("g is defined on R^2");
    if (order < 0) throw InvalidArgument("jet order must be >= 0");
    if (!(x_bar[1] - x_bar[0] * x_bar[0] > 0.0)) {
        throw SingularityError("g undefined at base point: x2 - x1^2 <= 0");
    }
    const Jet2 x1 = Jet2::variable(order, 0, x_bar[0]);
    const Jet2 x2 = Jet2::variable(order, 1, x_bar[1]);
    const Jet2 g = (x1 - Jet2::constant(order, w_bar)) * pow(x2 - x1 * x1, -0.5);

    DerivativeJet jet;
    jet.base.assign(x_bar.begin(), x_bar.end());
    jet.order = order;
    for (const MultiIndex& alpha : enumerate_multi_indices(2, order)) {
        jet.alphas.push_back(alpha);
        jet.values.push_back(alpha.factorial() * g.coeff(alpha[0], alpha[1]));
    }
    return jet;
}

} // namespace uedge
