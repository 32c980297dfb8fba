#include "uedge/char_function.hpp"

#include "uedge/error.hpp"

#include <cmath>

namespace uedge {

CharFunctionHandle CharFunctionHandle::analytic(int dimension, Closure phi, std::string name) {
    if (dimension < 1) throw InvalidArgument("characteristic function dimension must be >= 1");
    if (!phi) throw InvalidArgument("empty characteristic function closure");
    CharFunctionHandle h;
    h.dimension_ = dimension;
    h.closure_ = std::move(phi);
    h.name_ = std::move(name);
    return h;
}

CharFunctionHandle CharFunctionHandle::empirical(Dataset data) {
    CharFunctionHandle h;
    h.dimension_ = static_cast<int>(data.dimension());
    h.name_ = data.provenance().family.empty() ? "empirical" : "empirical:" + data.provenance().family;
    h.data_ = std::make_shared<const Dataset>(std::move(data));
    return h;
}

std::complex<double> CharFunctionHandle::operator()(std::span<const double> t) const {
    if (static_cast<int>(t.size()) != dimension_) throw InvalidArgument("cf argument dimension mismatch");
    if (closure_) return closure_(t);
    const Dataset& data = *data_;
    const std::size_t n = data.size();
    double re = 0.0, im = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto u = data.point(i);
        double phase = 0.0;
        for (std::size_t k = 0; k < u.size(); ++k) phase += t[k] * u[k];
        re += std::cos(phase);
        im += std::sin(phase);
    }
    const auto nn = static_cast<double>(n);
    return {re / nn, im / nn};
}

std::complex<double> eval_cf(const CharFunctionHandle& h, std::span<const double> t) { return h(t); }

} // namespace uedge
