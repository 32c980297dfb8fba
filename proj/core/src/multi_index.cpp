#include "uedge/multi_index.hpp"

#include "uedge/error.hpp"

#include <algorithm>
#include <numeric>

namespace uedge {

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
    for (int e : entries_) {
        if (e < 0) {
            throw InvalidArgument("multi-index entries must be nonnegative");
        }
    }
    order_ = std::accumulate(entries_.begin(), entries_.end(), 0);
}

MultiIndex::MultiIndex(std::initializer_list<int> entries)
    : MultiIndex(std::vector<int>(entries)) {}

MultiIndex MultiIndex::zero(std::size_t d) { return MultiIndex(std::vector<int>(d, 0)); }

MultiIndex MultiIndex::unit(std::size_t d, std::size_t k) {
    std::vector<int> e(d, 0);
    e.at(k) = 1;
    return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::operator+(const MultiIndex& other) const {
    if (other.dimension() != dimension()) {
        throw InvalidArgument("multi-index dimension mismatch");
    }
    std::vector<int> e(entries_);
    for (std::size_t k = 0; k < e.size(); ++k) e[k] += other.entries_[k];
    return MultiIndex(std::move(e));
}

MultiIndex MultiIndex::operator-(const MultiIndex& other) const {
    if (other.dimension() != dimension()) {
        throw InvalidArgument("multi-index dimension mismatch");
    }
    std::vector<int> e(entries_);
    for (std::size_t k = 0; k < e.size(); ++k) e[k] -= other.entries_[k];
    return MultiIndex(std::move(e));
}

bool MultiIndex::dominated_by(const MultiIndex& other) const {
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        if (entries_[k] > other.entries_[k]) return false;
    }
    return true;
}

double MultiIndex::factorial() const {
    double f = 1.0;
    for (int e : entries_) f *= uedge::factorial(e);
    return f;
}

std::string MultiIndex::to_string() const {
    std::string s = "(";
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        if (k) s += ',';
        s += std::to_string(entries_[k]);
    }
    return s + ")";
}

std::strong_ordering MultiIndex::operator<=>(const MultiIndex& other) const {
    if (auto c = order_ <=> other.order_; c != 0) return c;
    if (auto c = entries_.size() <=> other.entries_.size(); c != 0) return c;
    for (std::size_t k = 0; k < entries_.size(); ++k) {
        // larger leading entry sorts first
        if (auto c = other.entries_[k] <=> entries_[k]; c != 0) return c;
    }
    return std::strong_ordering::equal;
}

namespace {

void fill_order(int d, int remaining, std::size_t pos, std::vector<int>& cur,
                std::vector<MultiIndex>& out) {
    if (pos + 1 == static_cast<std::size_t>(d)) {
        cur[pos] = remaining;
        out.emplace_back(cur);
        return;
    }
    for (int v = remaining; v >= 0; --v) {
        cur[pos] = v;
        fill_order(d, remaining - v, pos + 1, cur, out);
    }
}

} // namespace

std::vector<MultiIndex> multi_indices_of_order(int d, int order) {
    if (d <= 0) throw InvalidArgument("dimension must be >= 1");
    if (order < 0) throw InvalidArgument("order must be >= 0");
    std::vector<MultiIndex> out;
    std::vector<int> cur(static_cast<std::size_t>(d), 0);
    fill_order(d, order, 0, cur, out);
    return out;
}

std::vector<MultiIndex> enumerate_multi_indices(int d, int max_order) {
    if (d <= 0) throw InvalidArgument("dimension must be >= 1");
    if (max_order < 0) throw InvalidArgument("max_order must be >= 0");
    std::vector<MultiIndex> out;
    for (int r = 0; r <= max_order; ++r) {
        auto block = multi_indices_of_order(d, r);
        out.insert(out.end(), block.begin(), block.end());
    }
    return out;
}

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    k = std::min(k, n - k);
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
}

double multi_binomial(const MultiIndex& nu, const MultiIndex& mu) {
    double b = 1.0;
    for (std::size_t k = 0; k < nu.dimension(); ++k) b *= binomial(nu[k], mu[k]);
    return b;
}

MultiIndexTable::MultiIndexTable(std::vector<MultiIndex> indices) : indices_(std::move(indices)) {
    for (std::size_t i = 0; i < indices_.size(); ++i) position_.emplace(indices_[i], i);
}

std::size_t MultiIndexTable::find(const MultiIndex& nu) const {
    auto it = position_.find(nu);
    return it == position_.end() ? npos : it->second;
}

} // namespace uedge
