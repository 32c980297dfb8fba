#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <map>
#include <string>
#include <vector>

namespace uedge {

/// A multi-index nu = (nu_1, ..., nu_d) of nonnegative integers.
///
/// Comparison is graded lexicographic: lower order first, then within an
/// order the index with the larger leading entry comes first, so for d = 2
/// the order-2 block is (2,0), (1,1), (0,2).
class MultiIndex {
public:
    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> entries);
    MultiIndex(std::initializer_list<int> entries);

    /// Zero multi-index of dimension d.
    static MultiIndex zero(std::size_t d);
    /// Unit vector e_k of dimension d.
    static MultiIndex unit(std::size_t d, std::size_t k);

    std::size_t dimension() const noexcept { return entries_.size(); }
    int order() const noexcept { return order_; }
    int operator[](std::size_t k) const { return entries_[k]; }
    const std::vector<int>& entries() const noexcept { return entries_; }

    MultiIndex operator+(const MultiIndex& other) const;
    /// Entrywise difference; throws InvalidArgument when a component goes negative.
    MultiIndex operator-(const MultiIndex& other) const;

    /// True when every entry is <= the matching entry of `other`.
    bool dominated_by(const MultiIndex& other) const;

    /// nu_1! * ... * nu_d!
    double factorial() const;

    std::string to_string() const;

    bool operator==(const MultiIndex& other) const { return entries_ == other.entries_; }
    std::strong_ordering operator<=>(const MultiIndex& other) const;

private:
    std::vector<int> entries_;
    int order_ = 0;
};

/// All multi-indices of dimension d with |nu| <= max_order, graded lexicographic.
/// Throws InvalidArgument for d == 0 or max_order < 0.
std::vector<MultiIndex> enumerate_multi_indices(int d, int max_order);

/// Multi-indices with |nu| == order exactly, in the same canonical order.
std::vector<MultiIndex> multi_indices_of_order(int d, int order);

/// Product of binomial coefficients prod_k C(nu_k, mu_k).
double multi_binomial(const MultiIndex& nu, const MultiIndex& mu);

/// Ordered table of multi-indices with O(log n) position lookup.
class MultiIndexTable {
public:
    MultiIndexTable() = default;
    explicit MultiIndexTable(std::vector<MultiIndex> indices);

    std::size_t size() const noexcept { return indices_.size(); }
    const MultiIndex& operator[](std::size_t i) const { return indices_[i]; }
    const std::vector<MultiIndex>& indices() const noexcept { return indices_; }

    /// Position of nu, or npos.
    std::size_t find(const MultiIndex& nu) const;
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    std::vector<MultiIndex> indices_;
    std::map<MultiIndex, std::size_t> position_;
};

double factorial(int k);
double binomial(int n, int k);

} // namespace uedge
