#pragma once

#include "uedge/dataset.hpp"

#include <complex>
#include <functional>
#include <memory>
#include <span>
#include <string>

namespace uedge {

/// Characteristic function of either a closed-form law or the empirical
/// measure (1/n) sum_j delta_{u_j} of a dataset.
class CharFunctionHandle {
public:
    using Closure = std::function<std::complex<double>(std::span<const double>)>;

    static CharFunctionHandle analytic(int dimension, Closure phi, std::string name = {});
    static CharFunctionHandle empirical(Dataset data);

    int dimension() const noexcept { return dimension_; }
    const std::string& name() const noexcept { return name_; }
    /// Non-null for empirical handles.
    const Dataset* dataset() const noexcept { return data_.get(); }

    std::complex<double> operator()(std::span<const double> t) const;

private:
    CharFunctionHandle() = default;
    int dimension_ = 0;
    std::string name_;
    Closure closure_;
    std::shared_ptr<const Dataset> data_;
};

/// Throws InvalidArgument when t has the wrong dimension.
std::complex<double> eval_cf(const CharFunctionHandle& h, std::span<const double> t);

} // namespace uedge
