#include "uedge/bootstrap.hpp"

#include "uedge/cumulants.hpp"
#include "uedge/parallel.hpp"
#include "uedge/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace uedge {

namespace {

struct MeanCov {
    Vector mean;
    Matrix cov;
};

MeanCov mean_cov(const Dataset& data) {
    const auto n = data.size();
    const auto d = static_cast<Eigen::Index>(data.dimension());
    MeanCov mc{Vector::Zero(d), Matrix::Zero(d, d)};
    for (std::size_t i = 0; i < n; ++i) mc.mean += Eigen::Map<const Vector>(data.point(i).data(), d);
    mc.mean /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const Vector c = Eigen::Map<const Vector>(data.point(i).data(), d) - mc.mean;
        mc.cov.noalias() += c * c.transpose();
    }
    mc.cov /= static_cast<double>(n);
    return mc;
}

constexpr std::size_t draw_chunk = 4096;

} // namespace

SampleStats sample_stats(const Dataset& data, int s) {
    if (data.size() < 2) throw InvalidArgument("sample statistics need n >= 2");
    if (s < 1) throw InvalidArgument("moment order s must be >= 1");
    auto [mean, cov] = mean_cov(data);
    SampleStats st;
    st.n = data.size();
    st.s = s;
    st.mean = std::move(mean);
    st.cov = std::move(cov);
    std::tie(st.lambda_min, st.lambda_max) = eigen_range(st.cov);
    st.lambda_min = std::max(0.0, st.lambda_min);

    const auto indices = enumerate_multi_indices(static_cast<int>(data.dimension()), s);
    std::vector<double> mixed(indices.size(), 0.0);
    double abs_sum = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const auto x = data.point(i);
        double r2 = 0.0;
        for (double v : x) r2 += v * v;
        abs_sum += std::pow(r2, 0.5 * s);
        for (std::size_t m = 1; m < indices.size(); ++m) {
            double p = 1.0;
            for (std::size_t k = 0; k < x.size(); ++k) p *= std::pow(std::abs(x[k]), indices[m][k]);
            mixed[m] += p;
        }
    }
    const auto nn = static_cast<double>(data.size());
    st.abs_moment = abs_sum / nn;
    for (std::size_t m = 1; m < indices.size(); ++m) st.max_mixed_moment = std::max(st.max_mixed_moment, mixed[m] / nn);
    return st;
}

EventFlags event_checks(const Dataset& data, int s, const EventThresholds& th) {
    if (!(th.rho_bar > 0.0 && th.c1 > 0.0 && th.c2 > 0.0 && th.c3 > 0.0)) {
        throw InvalidArgument("event thresholds must be positive");
    }
    const SampleStats st = sample_stats(data, s);
    EventFlags f;
    f.e0_stat = st.abs_moment;
    f.e0 = st.abs_moment <= th.rho_bar;
    f.e1_stat = st.lambda_min;
    f.e1 = st.lambda_min >= th.c1;
    f.e2_stat = st.max_mixed_moment;
    f.e2 = st.max_mixed_moment <= th.c2;
    f.e3_lambda_max = st.lambda_max;
    f.e3 = st.lambda_max <= th.c3;
    if (data.dimension() == 2) {
        const std::vector<double> base{st.mean[0], st.mean[1]};
        f.e3_jet_max = g_value_and_jet(base, st.mean[0], s + 3).max_abs();
        f.e3 = f.e3 && *f.e3_jet_max <= th.c3;
    }
    return f;
}

BootstrapDraws bootstrap_draws(const Dataset& data, std::size_t B, std::uint64_t seed, unsigned workers) {
    if (B == 0) throw InvalidArgument("bootstrap needs B >= 1");
    const auto [mean, cov] = mean_cov(data);
    const SymmetricRoot root = symmetric_root(cov);
    const std::size_t n = data.size();
    const std::size_t d = data.dimension();
    const double root_n = std::sqrt(static_cast<double>(n));
    const auto values = data.values();

    BootstrapDraws out;
    out.dimension = d;
    out.values.resize(B * d);
    const std::size_t chunks = (B + draw_chunk - 1) / draw_chunk;
    parallel_for(chunks, workers, [&](std::size_t c) {
        Vector sum(static_cast<Eigen::Index>(d));
        Vector y(static_cast<Eigen::Index>(d));
        const std::size_t end = std::min(B, (c + 1) * draw_chunk);
        for (std::size_t b = c * draw_chunk; b < end; ++b) {
            Stream rng(derive_seed(seed, {b}));
            if (d == 1) {
                double s1 = 0.0;
                for (std::size_t i = 0; i < n; ++i) s1 += values[rng.below(n)];
                out.values[b] = root_n * root.inv_root(0, 0) * (s1 / static_cast<double>(n) - mean[0]);
                continue;
            }
            sum.setZero();
            for (std::size_t i = 0; i < n; ++i) {
                const double* p = values.data() + rng.below(n) * d;
                for (std::size_t k = 0; k < d; ++k) sum[static_cast<Eigen::Index>(k)] += p[k];
            }
            y.noalias() = root_n * (root.inv_root * (sum / static_cast<double>(n) - mean));
            for (std::size_t k = 0; k < d; ++k) out.values[b * d + k] = y[static_cast<Eigen::Index>(k)];
        }
    });
    return out;
}

EdgeworthExpansion empirical_edgeworth(const Dataset& data, int s) {
    const auto [mean, cov] = mean_cov(data);
    symmetric_root(cov);
    const std::vector<double> shift(mean.data(), mean.data() + mean.size());
    std::vector<double> neg(shift.size());
    std::transform(shift.begin(), shift.end(), neg.begin(), [](double v) { return -v; });
    const Dataset centered = data.shifted(neg);
    const CumulantSet c = averaged_standardized_cumulants(centered, s, cov);
    return build_expansion(c, static_cast<std::int64_t>(data.size()), s);
}

// ---------------------------------------------------------------- empirical measure

EmpiricalMeasure::EmpiricalMeasure(const BootstrapDraws& draws)
    : EmpiricalMeasure(draws.dimension, draws.values) {}

EmpiricalMeasure::EmpiricalMeasure(std::size_t dimension, std::vector<double> points)
    : dimension_(dimension), count_(dimension ? points.size() / dimension : 0), points_(std::move(points)) {
    if (dimension_ == 0 || count_ == 0 || points_.size() % dimension_ != 0) {
        throw InvalidArgument("empirical measure needs a nonempty point cloud");
    }
    if (dimension_ == 1) {
        sorted_ = points_;
        std::sort(sorted_.begin(), sorted_.end());
    }
}

double EmpiricalMeasure::cdf(double t) const {
    if (dimension_ != 1) throw DimensionError("cdf requires a one-dimensional measure");
    const auto it = std::upper_bound(sorted_.begin(), sorted_.end(), t);
    return static_cast<double>(it - sorted_.begin()) / static_cast<double>(count_);
}

double EmpiricalMeasure::measure(const SetSpec& A) const {
    if (A.dimension() != dimension_) throw DimensionError("set dimension does not match measure");
    if (const auto* h = std::get_if<HalfLine>(&A.shape())) return cdf(h->upper);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < count_; ++i) {
        if (A.contains({points_.data() + i * dimension_, dimension_})) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(count_);
}

double EmpiricalMeasure::enlarged_measure(const SetSpec& A, double eta) const {
    if (!(eta >= 0.0)) throw InvalidArgument("enlargement radius must be >= 0");
    if (A.dimension() != dimension_) throw DimensionError("set dimension does not match measure");
    if (const auto* h = std::get_if<HalfLine>(&A.shape())) return cdf(h->upper + eta);
    std::size_t hits = 0;
    for (std::size_t i = 0; i < count_; ++i) {
        if (A.in_enlargement({points_.data() + i * dimension_, dimension_}, eta)) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(count_);
}

double enlargement_deviation(const SetSpec& A, double eta, const EmpiricalMeasure& q_emp) {
    return q_emp.enlarged_measure(A, eta) - q_emp.measure(A);
}

// ---------------------------------------------------------------- t statistic

TstatDraws tstat_bootstrap(const Dataset& W, std::size_t B, std::uint64_t seed, unsigned workers) {
    if (W.dimension() != 1) throw InvalidArgument("t-statistic bootstrap needs one-dimensional data");
    if (B == 0) throw InvalidArgument("bootstrap needs B >= 1");
    const auto w = W.values();
    if (std::all_of(w.begin(), w.end(), [&](double v) { return v == w[0]; })) {
        throw InvalidArgument("t-statistic bootstrap needs at least two distinct values");
    }
    const std::size_t n = w.size();
    double w_bar = 0.0;
    for (double v : w) w_bar += v;
    w_bar /= static_cast<double>(n);
    std::vector<double> dev(n);
    for (std::size_t i = 0; i < n; ++i) dev[i] = w[i] - w_bar;
    const auto nn = static_cast<double>(n);
    const double root_n = std::sqrt(nn);

    std::vector<double> slots(B);
    const std::size_t chunks = (B + draw_chunk - 1) / draw_chunk;
    parallel_for(chunks, workers, [&](std::size_t c) {
        const std::size_t end = std::min(B, (c + 1) * draw_chunk);
        for (std::size_t b = c * draw_chunk; b < end; ++b) {
            Stream rng(derive_seed(seed, {b}));
            const std::size_t first = rng.below(n);
            bool all_equal = true;
            double s1 = dev[first], s2 = dev[first] * dev[first];
            for (std::size_t i = 1; i < n; ++i) {
                const std::size_t idx = rng.below(n);
                all_equal = all_equal && w[idx] == w[first];
                s1 += dev[idx];
                s2 += dev[idx] * dev[idx];
            }
            const double m = s1 / nn;
            const double var = s2 / nn - m * m;
            slots[b] = (all_equal || !(var > 0.0)) ? std::numeric_limits<double>::quiet_NaN()
                                                   : root_n * m / std::sqrt(var);
        }
    });
    TstatDraws out;
    out.requested = B;
    out.values.reserve(B);
    for (double v : slots) {
        if (std::isnan(v)) {
            ++out.degenerate;
        } else {
            out.values.push_back(v);
        }
    }
    return out;
}

double tstat_cdf(const std::vector<double>& sorted_values, double t) {
    if (sorted_values.empty()) throw InvalidArgument("no non-degenerate draws");
    const auto it = std::upper_bound(sorted_values.begin(), sorted_values.end(), t);
    return static_cast<double>(it - sorted_values.begin()) / static_cast<double>(sorted_values.size());
}

TstatFunctional::TstatFunctional(const SampleStats& stats, double w_bar)
    : mean_(stats.mean), root_(), w_bar_(w_bar), n_(stats.n) {
    if (stats.mean.size() != 2) throw InvalidArgument("t functional needs (W, W^2) sample moments");
    root_ = symmetric_root(stats.cov).root;
}

std::optional<double> TstatFunctional::value(std::span<const double> x) const {
    if (x.size() != 2) throw InvalidArgument("t functional is defined on R^2");
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_));
    const double y1 = mean_[0] + scale * (root_(0, 0) * x[0] + root_(0, 1) * x[1]);
    const double y2 = mean_[1] + scale * (root_(1, 0) * x[0] + root_(1, 1) * x[1]);
    const double var = y2 - y1 * y1;
    if (!(var > 0.0)) return std::nullopt;
    return std::sqrt(static_cast<double>(n_)) * (y1 - w_bar_) / std::sqrt(var);
}

int TstatFunctional::indicator(double t, std::span<const double> x, std::uint64_t& singular) const {
    const auto v = value(x);
    if (!v) {
        ++singular;
        return 0;
    }
    return *v <= t ? 1 : 0;
}

int fhat_indicator(double t, std::span<const double> x, const TstatFunctional& f, std::uint64_t& singular) {
    return f.indicator(t, x, singular);
}

TstatMeasureCurve edgeworth_tstat_measure(std::span<const double> t_grid, const EdgeworthExpansion& e,
                                          const TstatFunctional& f, std::uint64_t samples,
                                          std::uint64_t seed, unsigned workers) {
    if (samples == 0) throw InvalidArgument("MC budget must be positive");
    if (e.dimension() != 2) throw InvalidArgument("t functional expansion must be two-dimensional");
    constexpr std::uint64_t chunk = 1u << 16;
    const std::uint64_t chunks = (samples + chunk - 1) / chunk;
    std::vector<std::vector<std::pair<double, double>>> parts(chunks);
    std::vector<std::uint64_t> singular(chunks, 0);
    parallel_for(chunks, workers, [&](std::size_t c) {
        Stream rng(derive_seed(seed, {0x75u, c}));
        std::normal_distribution<double> normal;
        const std::uint64_t end = std::min<std::uint64_t>(samples, (c + 1) * chunk);
        auto& part = parts[c];
        part.reserve(end - c * chunk);
        double x[2];
        for (std::uint64_t i = c * chunk; i < end; ++i) {
            x[0] = normal(rng);
            x[1] = normal(rng);
            const auto v = f.value(x);
            if (!v) {
                ++singular[c];
                continue;
            }
            part.emplace_back(*v, e.weight(x));
        }
    });
    std::vector<std::pair<double, double>> all;
    TstatMeasureCurve out;
    out.samples = samples;
    for (std::size_t c = 0; c < chunks; ++c) {
        all.insert(all.end(), parts[c].begin(), parts[c].end());
        out.singular += singular[c];
    }
    std::sort(all.begin(), all.end());
    std::vector<double> t(t_grid.begin(), t_grid.end());
    std::vector<std::size_t> order(t.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return t[a] < t[b]; });

    const auto N = static_cast<double>(samples);
    out.t = t;
    out.value.assign(t.size(), 0.0);
    out.std_error.assign(t.size(), 0.0);
    std::size_t pos = 0;
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t i : order) {
        while (pos < all.size() && all[pos].first <= t[i]) {
            s1 += all[pos].second;
            s2 += all[pos].second * all[pos].second;
            ++pos;
        }
        const double mean = s1 / N;
        out.value[i] = mean;
        out.std_error[i] = std::sqrt(std::max(0.0, s2 / N - mean * mean) / N);
    }
    return out;
}

TstatMeasure edgeworth_tstat_measure(double t, const EdgeworthExpansion& e, const TstatFunctional& f,
                                     std::uint64_t samples, std::uint64_t seed) {
    const double grid[1] = {t};
    const auto curve = edgeworth_tstat_measure(grid, e, f, samples, seed, 1);
    return {curve.value[0], curve.std_error[0], curve.singular};
}

} // namespace uedge
