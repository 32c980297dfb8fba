#include "uedge/functionals.hpp"

#include "uedge/error.hpp"
#include "uedge/rng.hpp"

#include <cmath>
#include <random>

namespace uedge {

GridSup m_s_norm(const ScoredFunction& f, int s, int d, const ProbeGrid& grid) {
    if (d < 1) throw InvalidArgument("dimension must be >= 1");
    if (s < 0) throw InvalidArgument("growth order must be >= 0");
    if (!(grid.step > 0.0) || !(grid.radius >= 0.0)) throw InvalidArgument("bad probe grid");
    const auto per_axis = static_cast<std::size_t>(std::floor(grid.radius / grid.step + 1e-9));
    const std::size_t side = 2 * per_axis + 1;
    const auto dd = static_cast<std::size_t>(d);

    GridSup best;
    std::vector<double> x(dd, 0.0);
    std::vector<std::size_t> counter(dd, 0);
    auto score = [&] {
        double r2 = 0.0;
        for (double v : x) r2 += v * v;
        const double ratio = std::abs(f(x)) / (1.0 + std::pow(std::sqrt(r2), s));
        if (ratio > best.value || best.argmax.empty()) {
            best.value = ratio;
            best.argmax = x;
        }
    };
    score(); // origin
    for (;;) {
        for (std::size_t k = 0; k < dd; ++k) {
            x[k] = (static_cast<double>(counter[k]) - static_cast<double>(per_axis)) * grid.step;
        }
        score();
        std::size_t k = 0;
        while (k < dd && ++counter[k] == side) counter[k++] = 0;
        if (k == dd) break;
    }
    return best;
}

McEstimate gaussian_oscillation(const SetSpec& A, double eps, std::uint64_t samples, std::uint64_t seed) {
    if (!(eps > 0.0)) throw InvalidArgument("oscillation radius must be > 0");
    if (samples == 0) throw InvalidArgument("sample budget must be positive");
    Stream rng(derive_seed(seed, {hash_string("oscillation")}));
    std::normal_distribution<double> normal;
    std::vector<double> x(A.dimension());
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < samples; ++i) {
        for (auto& v : x) v = normal(rng);
        if (A.boundary_distance(x) <= eps) ++hits;
    }
    const double p = static_cast<double>(hits) / static_cast<double>(samples);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(samples))};
}

} // namespace uedge
