#pragma once

#include "uedge/dataset.hpp"
#include "uedge/linalg.hpp"
#include "uedge/multi_index.hpp"
#include "uedge/polynomial.hpp"

#include <memory>
#include <span>
#include <vector>

namespace uedge {

/// Shared canonical index table for (d, max_order); cached process-wide.
std::shared_ptr<const MultiIndexTable> canonical_table(int d, int max_order);

/// Values indexed by every multi-index of order in [min_order, max_order],
/// stored in graded lexicographic order.
class OrderTable {
public:
    int dimension() const noexcept { return dimension_; }
    int max_order() const noexcept { return max_order_; }
    int min_order() const noexcept { return min_order_; }

    /// Entry for nu; throws UnsupportedOrder outside the stored order range.
    double at(const MultiIndex& nu) const;
    void set(const MultiIndex& nu, double value);

    /// Multi-indices in storage order, paired with values().
    std::span<const MultiIndex> indices() const;
    std::span<const double> values() const noexcept { return values_; }

protected:
    OrderTable(int d, int max_order, int min_order);
    std::size_t slot(const MultiIndex& nu) const;

    int dimension_;
    int max_order_;
    int min_order_;
    std::shared_ptr<const MultiIndexTable> table_;
    std::size_t offset_ = 0; // index of the first stored multi-index in table_
    std::vector<double> values_;
};

/// Raw moments E[X^nu] for every |nu| <= max_order; entry at nu = 0 is 1.
class MomentSet : public OrderTable {
public:
    MomentSet(int d, int max_order);
};

/// Cumulants chi_nu for 1 <= |nu| <= max_order.
class CumulantSet : public OrderTable {
public:
    CumulantSet(int d, int max_order);

    /// First-order cumulants zero and second-order cumulants the identity,
    /// both within `tol`.
    bool standardized(double tol = 1e-9) const;

    CumulantSet& operator+=(const CumulantSet& other);
    CumulantSet& operator*=(double scale);
    friend CumulantSet operator+(CumulantSet a, const CumulantSet& b) { return a += b; }
    friend CumulantSet operator*(double s, CumulantSet a) { return a *= s; }
};

/// Sample moments (1/n) sum_i X_i^nu.
MomentSet raw_moments(const Dataset& data, int max_order);

/// Moment -> cumulant conversion through the recursion obtained from
/// d/dt_k M(t) = (d/dt_k K(t)) M(t) with M = exp(K):
///   m_nu = sum_{mu <= nu - e_k} C(nu - e_k, mu) kappa_{mu + e_k} m_{nu - e_k - mu}.
/// Throws InvalidArgument when m_0 != 1.
CumulantSet moments_to_cumulants(const MomentSet& m);
MomentSet cumulants_to_moments(const CumulantSet& c);

/// Cumulants of A X given the cumulants of X (multilinear transformation of
/// the cumulant tensors). A must be d x d.
CumulantSet transform_cumulants(const CumulantSet& c, const Matrix& A);

/// Average over units of the cumulants of V^{-1/2} X_i up to order s.
/// Throws StandardizationError when V is not SPD, InvalidArgument for s < 2
/// or empty input, UnsupportedOrder when a unit's table is too short.
CumulantSet averaged_standardized_cumulants(std::span<const CumulantSet> units, int s,
                                            const Matrix& V);

/// Cumulants of the empirical law of V^{-1/2} X (points not centered).
CumulantSet averaged_standardized_cumulants(const Dataset& data, int s, const Matrix& V);

/// chi_j(z) = j! sum_{|nu| = j} chi_nu / nu! z^nu. Throws UnsupportedOrder
/// unless 1 <= j <= c.max_order().
Polynomial chi_poly(int j, const CumulantSet& c);

} // namespace uedge
