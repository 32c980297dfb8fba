#include "uedge/polynomial.hpp"

#include "uedge/error.hpp"

#include <cmath>

namespace uedge {

double Polynomial::coefficient(const MultiIndex& nu) const {
    auto it = terms_.find(nu);
    return it == terms_.end() ? 0.0 : it->second;
}

void Polynomial::add_term(const MultiIndex& nu, double c) {
    if (nu.dimension() != dimension_) {
        throw InvalidArgument("polynomial term dimension mismatch");
    }
    if (c == 0.0) return;
    auto [it, inserted] = terms_.try_emplace(nu, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0.0) terms_.erase(it);
    }
}

int Polynomial::min_degree() const {
    return terms_.empty() ? -1 : terms_.begin()->first.order();
}

int Polynomial::max_degree() const {
    return terms_.empty() ? -1 : terms_.rbegin()->first.order();
}

double Polynomial::evaluate(std::span<const double> z) const {
    if (z.size() != dimension_) throw InvalidArgument("polynomial evaluation dimension mismatch");
    double sum = 0.0;
    for (const auto& [nu, c] : terms_) {
        double mono = c;
        for (std::size_t k = 0; k < dimension_; ++k) mono *= std::pow(z[k], nu[k]);
        sum += mono;
    }
    return sum;
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
    if (dimension_ == 0) dimension_ = other.dimension_;
    if (other.dimension_ != dimension_ && !other.is_zero()) {
        throw InvalidArgument("polynomial dimension mismatch");
    }
    for (const auto& [nu, c] : other.terms_) add_term(nu, c);
    return *this;
}

Polynomial& Polynomial::operator*=(double scale) {
    if (scale == 0.0) {
        terms_.clear();
        return *this;
    }
    for (auto& [nu, c] : terms_) c *= scale;
    return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.dimension_ != b.dimension_) throw InvalidArgument("polynomial dimension mismatch");
    Polynomial out(a.dimension_);
    for (const auto& [nu, ca] : a.terms_) {
        for (const auto& [mu, cb] : b.terms_) out.add_term(nu + mu, ca * cb);
    }
    return out;
}

} // namespace uedge
