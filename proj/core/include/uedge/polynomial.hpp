#pragma once

#include "uedge/multi_index.hpp"

#include <map>
#include <span>

namespace uedge {

/// Sparse real polynomial in d variables, z^nu -> coefficient.
///
/// Exact zeros are never stored, so an empty table is the zero polynomial.
/// Used both for the homogeneous chi_j(z) pieces and for their (possibly
/// non-homogeneous) products and sums.
class Polynomial {
public:
    using Terms = std::map<MultiIndex, double>;

    Polynomial() = default;
    explicit Polynomial(std::size_t dimension) : dimension_(dimension) {}

    std::size_t dimension() const noexcept { return dimension_; }
    const Terms& terms() const noexcept { return terms_; }
    bool is_zero() const noexcept { return terms_.empty(); }

    double coefficient(const MultiIndex& nu) const;
    /// Adds c * z^nu (drops the entry if the sum is exactly zero).
    void add_term(const MultiIndex& nu, double c);

    /// Lowest / highest order carrying a nonzero coefficient; -1 for zero.
    int min_degree() const;
    int max_degree() const;
    bool is_homogeneous() const { return min_degree() == max_degree(); }

    double evaluate(std::span<const double> z) const;

    Polynomial& operator+=(const Polynomial& other);
    Polynomial& operator*=(double scale);
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
    friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

private:
    std::size_t dimension_ = 0;
    Terms terms_;
};

} // namespace uedge
