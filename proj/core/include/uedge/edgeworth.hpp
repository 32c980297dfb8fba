#pragma once

#include "uedge/cumulants.hpp"
#include "uedge/polynomial.hpp"
#include "uedge/set_spec.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace uedge {

/// P~_j(z) = sum_{m=1}^{j} 1/m! sum over ordered tuples (j_1..j_m) of
/// positive integers with j_1 + ... + j_m = j of
/// prod_k chi_{j_k+2}(z) / (j_k+2)!.
/// Nonzero terms have order in [j + 2, 3j] and use cumulants up to order j + 2.
/// Throws UnsupportedOrder unless 1 <= j <= c.max_order() - 2.
Polynomial pj_polynomial(int j, const CumulantSet& c);

/// The signed measure sum_{j=0}^{s-2} n^{-j/2} P~_j(-D) phi, stored as
/// Hermite-basis coefficient tables: z^nu in P~_j maps to He_nu(x) phi(x).
class EdgeworthExpansion {
public:
    int dimension() const noexcept { return dimension_; }
    int order() const noexcept { return order_; }
    std::int64_t sample_size() const noexcept { return n_; }
    const CumulantSet& cumulants() const noexcept { return cumulants_; }

    /// Hermite coefficients of P~_j for j = 0 .. order() - 2 (j = 0 is the constant 1).
    const Polynomial& hermite(int j) const;

    /// Polynomial factor 1 + sum_j n^{-j/2} sum_nu a_{j,nu} He_nu(x); density = weight * phi.
    double weight(std::span<const double> x) const;
    /// Signed density at x (may be negative).
    double density(std::span<const double> x) const;
    /// Q~((-inf, t]) for d = 1 through the exact Hermite antiderivative.
    /// Throws DimensionError when d != 1.
    double cdf_1d(double t) const;

    /// Flattened correction terms with n^{-j/2} folded in.
    struct Term {
        MultiIndex nu;
        double coeff;
    };
    std::span<const Term> correction_terms() const noexcept { return terms_; }
    int max_axis_degree() const noexcept { return max_axis_degree_; }

private:
    friend EdgeworthExpansion build_expansion(const CumulantSet&, std::int64_t, int);
    friend EdgeworthExpansion expansion_from_json(std::string_view);
    EdgeworthExpansion(CumulantSet c, std::int64_t n, int s, std::vector<Polynomial> pj);

    int dimension_;
    int order_;
    std::int64_t n_;
    CumulantSet cumulants_;
    std::vector<Polynomial> hermite_; // index j, j = 0..s-2
    std::vector<Term> terms_;
    int max_axis_degree_ = 0;
};

/// Throws StandardizationError for non-standardized cumulants,
/// UnsupportedOrder unless 2 <= s <= c.max_order(), InvalidArgument for n < 1.
EdgeworthExpansion build_expansion(const CumulantSet& c, std::int64_t n, int s);

/// Standard normal on R^d as an (s = 2) expansion.
EdgeworthExpansion gaussian_expansion(int d);

/// JSON layout: {"d","s","n","cumulants":[[[nu...],value],...],
///               "hermite":[{"j":j,"terms":[[[nu...],coeff],...]},...]}
std::string to_json(const EdgeworthExpansion& e, int indent = 2);
EdgeworthExpansion expansion_from_json(std::string_view text);

enum class MeasureMethod { Quadrature, GaussianImportanceMC };

struct MeasureBudget {
    std::uint64_t mc_samples = 1'000'000;
    double target_error = 0.0;   ///< 0 disables the convergence check
    std::uint64_t seed = 1;      ///< MC stream seed
    int nodes_per_panel = 16;    ///< Gauss-Legendre nodes per unit-width panel pair
    unsigned workers = 1;
};

struct MeasureResult {
    double value = 0.0;
    double error = 0.0;     ///< quadrature: two-resolution difference; MC: standard error
    bool converged = true;
};

/// Signed measure of A. Quadrature handles boxes and half-lines exactly via
/// per-axis Hermite antiderivatives, and balls / half-spaces (d <= 3) by
/// Gauss-Legendre product rules truncated at radius 12. MC draws standard
/// normal points and weights them by the Hermite factor.
MeasureResult set_measure(const EdgeworthExpansion& e, const SetSpec& A, MeasureMethod method,
                          const MeasureBudget& budget = {});

} // namespace uedge
