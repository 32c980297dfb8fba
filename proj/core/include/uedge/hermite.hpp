#pragma once

#include "uedge/multi_index.hpp"

#include <numbers>
#include <span>

namespace uedge {

inline constexpr double inv_sqrt_2pi = 0.3989422804014327;

double std_normal_pdf(double x);
double std_normal_cdf(double x);
/// Standard normal density on R^d.
double std_normal_pdf(std::span<const double> x);

/// Probabilists' Hermite polynomial He_k(x), from He_{k+1} = x He_k - k He_{k-1}.
double hermite_he(int k, double x);

/// Fills out[k] = He_k(x) for k = 0 .. out.size() - 1.
void hermite_all(double x, std::span<double> out);

/// prod_k He_{nu_k}(x_k); (-D)^nu phi(x) = hermite_tensor(nu, x) phi(x).
double hermite_tensor(const MultiIndex& nu, std::span<const double> x);

/// Integral of He_k(u) phi(u) over [a, b]; endpoints may be infinite.
/// Uses the antiderivative -He_{k-1} phi for k >= 1 and Phi for k = 0.
double hermite_gauss_integral(int k, double a, double b);

} // namespace uedge
