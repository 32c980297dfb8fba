#pragma once

#include "uedge/multi_index.hpp"

#include <span>
#include <vector>

namespace uedge {

/// Truncated Taylor polynomial in two variables, sum_{a+b <= N} c_{ab} h1^a h2^b.
class Jet2 {
public:
    explicit Jet2(int order);
    static Jet2 constant(int order, double c);
    /// x_k + h_k around value x0 (k = 0 or 1).
    static Jet2 variable(int order, int k, double x0);

    int order() const noexcept { return order_; }
    double coeff(int a, int b) const { return c_[index(a, b)]; }
    double& coeff(int a, int b) { return c_[index(a, b)]; }
    double value() const { return c_[0]; }

    Jet2& operator+=(const Jet2& o);
    Jet2& operator-=(const Jet2& o);
    Jet2& operator*=(double s);
    friend Jet2 operator+(Jet2 a, const Jet2& b) { return a += b; }
    friend Jet2 operator-(Jet2 a, const Jet2& b) { return a -= b; }
    friend Jet2 operator*(Jet2 a, double s) { return a *= s; }
    friend Jet2 operator*(const Jet2& a, const Jet2& b);

    /// u^p via the binomial series around u(0); requires u(0) > 0.
    friend Jet2 pow(const Jet2& u, double p);

private:
    std::size_t index(int a, int b) const {
        return static_cast<std::size_t>(a) * static_cast<std::size_t>(order_ + 1) + static_cast<std::size_t>(b);
    }
    int order_;
    std::vector<double> c_; // (N+1) x (N+1), entries with a + b > N stay zero
};

/// Partial derivatives D^alpha g(x0) for |alpha| <= order.
struct DerivativeJet {
    std::vector<double> base;
    int order = 0;
    std::vector<MultiIndex> alphas;
    std::vector<double> values;

    double at(const MultiIndex& alpha) const;
    /// max |D^alpha g| over 0 <= |alpha| <= order.
    double max_abs() const;
};

/// g(x) = (x1 - w_bar) / sqrt(x2 - x1^2) at x_bar with all partials to `order`.
/// Throws SingularityError when x2 - x1^2 <= 0, InvalidArgument for a bad point.
DerivativeJet g_value_and_jet(std::span<const double> x_bar, double w_bar, int order);

/// Direct evaluation of g; throws SingularityError off the domain.
double g_value(std::span<const double> x, double w_bar);

} // namespace uedge
