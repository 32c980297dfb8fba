#pragma once

#include "uedge/set_spec.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace uedge {

using ScoredFunction = std::function<double(std::span<const double>)>;

/// Tensor grid [-radius, radius]^d with the given step; the origin is always included.
struct ProbeGrid {
    double radius = 12.0;
    double step = 0.05;
};

struct GridSup {
    double value = 0.0;
    std::vector<double> argmax;
};

/// max over the probe grid of |f(x)| / (1 + |x|^s). A lower bound for
/// M_s(f) = sup_x |f(x)| / (1 + |x|^s).
GridSup m_s_norm(const ScoredFunction& f, int s, int d, const ProbeGrid& grid = {});

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

/// Standard-Gaussian mass of the eps-shell {x : dist(x, boundary of A) <= eps},
/// estimated from `samples` draws.
McEstimate gaussian_oscillation(const SetSpec& A, double eps, std::uint64_t samples = 1'000'000,
                                std::uint64_t seed = 1);

} // namespace uedge
