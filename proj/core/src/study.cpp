#include "uedge/study.hpp"

#include "uedge/bootstrap.hpp"
#include "uedge/edgeworth.hpp"
#include "uedge/error.hpp"
#include "uedge/hermite.hpp"
#include "uedge/parallel.hpp"
#include "uedge/rng.hpp"
#include "uedge/set_spec.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#ifndef UEDGE_VERSION
#define UEDGE_VERSION "dev"
#endif

namespace uedge {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

// Index of the first grid point >= z (grid.size() when none).
struct GridBinner {
    std::span<const double> t;
    bool uniform = false;
    double t0 = 0.0, inv_h = 0.0;

    explicit GridBinner(std::span<const double> grid) : t(grid) {
        if (t.size() >= 2) {
            const double h = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
            uniform = h > 0.0;
            for (std::size_t i = 1; uniform && i < t.size(); ++i) {
                uniform = std::abs(t[i] - (t.front() + h * static_cast<double>(i))) <= 1e-9 * (1.0 + std::abs(t[i]));
            }
            t0 = t.front();
            inv_h = uniform ? 1.0 / h : 0.0;
        }
    }

    std::size_t operator()(double z) const {
        const std::size_t G = t.size();
        if (!uniform) return static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), z) - t.begin());
        const double pos = std::ceil((z - t0) * inv_h);
        std::size_t idx = pos <= 0.0 ? 0 : (pos >= static_cast<double>(G) ? G : static_cast<std::size_t>(pos));
        while (idx > 0 && t[idx - 1] >= z) --idx;
        while (idx < G && t[idx] < z) ++idx;
        return idx;
    }
};

double sup_abs_diff(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

void check_grid(const RateStudyConfig& cfg) {
    if (cfg.n_grid.size() < 4) throw InvalidArgument("n grid needs at least 4 points");
    for (std::size_t i = 0; i < cfg.n_grid.size(); ++i) {
        if (cfg.n_grid[i] < 2 || (i > 0 && cfg.n_grid[i] <= cfg.n_grid[i - 1])) {
            throw InvalidArgument("n grid must be strictly increasing with n >= 2");
        }
    }
    if (cfg.s < 2) throw InvalidArgument("expansion order s must be >= 2");
    if (cfg.reps < 1) throw InvalidArgument("reps must be >= 1");
    if (cfg.t_grid.empty() || !std::is_sorted(cfg.t_grid.begin(), cfg.t_grid.end())) {
        throw InvalidArgument("t grid must be nonempty and sorted");
    }
}

StudyRecord make_record(const RateStudyConfig& cfg, std::int64_t n, int rep, int s, double value, double band,
                        std::uint64_t seed) {
    return {cfg.family, theta_label(cfg.theta), n, rep, s, "sup_dev", value, band,
            band > value ? "inconclusive" : "ok", seed};
}

} // namespace

double dkw_half_width(std::uint64_t M) {
    if (M == 0) throw InvalidArgument("DKW band needs M >= 1");
    return std::sqrt(std::log(2.0 / 0.01) / (2.0 * static_cast<double>(M)));
}

std::vector<double> default_t_grid() { return make_grid(-5.0, 5.0, 0.025); }

SumCdf exact_sum_cdf_mc(const Family& f, std::int64_t n, std::uint64_t M, std::span<const double> t_grid,
                        std::uint64_t seed, unsigned workers) {
    if (f.dimension != 1) throw DimensionError("sum CDF is defined for one-dimensional families");
    if (n < 1 || M == 0) throw InvalidArgument("sum CDF needs n >= 1 and M >= 1");
    if (t_grid.empty() || !std::is_sorted(t_grid.begin(), t_grid.end())) {
        throw InvalidArgument("t grid must be nonempty and sorted");
    }
    const FamilyMoments fm = family_mean_cov(f);
    const double sigma = symmetric_root(fm.cov).root(0, 0);
    const double mu = fm.mean[0];
    const auto nn = static_cast<double>(n);
    const double scale = 1.0 / (sigma * std::sqrt(nn));
    const GridBinner binner(t_grid);
    const std::size_t G = t_grid.size();

    constexpr std::uint64_t chunk = 1u << 20;
    const std::uint64_t chunks = (M + chunk - 1) / chunk;
    std::vector<std::vector<std::uint64_t>> counts(chunks);
    parallel_for(chunks, workers, [&](std::size_t c) {
        Stream rng(derive_seed(seed, {c}));
        auto& cnt = counts[c];
        cnt.assign(G + 1, 0);
        const std::uint64_t m = std::min<std::uint64_t>(chunk, M - c * chunk);
        double buf[1];
        for (std::uint64_t i = 0; i < m; ++i) {
            double sum;
            if (f.sample_sum) {
                f.sample_sum(rng, n, buf);
                sum = buf[0];
            } else {
                sum = 0.0;
                for (std::int64_t k = 0; k < n; ++k) {
                    f.sample(rng, buf);
                    sum += buf[0];
                }
            }
            ++cnt[binner((sum - nn * mu) * scale)];
        }
    });
    SumCdf out;
    out.t.assign(t_grid.begin(), t_grid.end());
    out.cdf.assign(G, 0.0);
    out.M = M;
    out.half_width = dkw_half_width(M);
    std::vector<std::uint64_t> total(G + 1, 0);
    for (const auto& cnt : counts) {
        for (std::size_t i = 0; i <= G; ++i) total[i] += cnt[i];
    }
    std::uint64_t run = 0;
    for (std::size_t i = 0; i < G; ++i) {
        run += total[i];
        out.cdf[i] = static_cast<double>(run) / static_cast<double>(M);
    }
    return out;
}

std::string theta_label(std::span<const double> theta) {
    std::string out;
    for (std::size_t i = 0; i < theta.size(); ++i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", theta[i]);
        if (i) out += ';';
        out += buf;
    }
    return out;
}

std::uint64_t cell_seed(std::uint64_t master, const std::string& family, std::size_t theta_index, std::int64_t n,
                        int rep) {
    return derive_seed(master, {hash_string(family), theta_index, static_cast<std::uint64_t>(n),
                                static_cast<std::uint64_t>(rep)});
}

SlopeFit fit_slope(std::span<const StudyRecord> records, const std::string& metric, int s) {
    std::vector<double> x, y;
    for (const auto& r : records) {
        if (r.metric != metric || r.s != s || r.flag == "inconclusive" || !(r.value > 0.0)) continue;
        x.push_back(std::log(static_cast<double>(r.n)));
        y.push_back(std::log(r.value));
    }
    SlopeFit fit{metric, s, nan, nan, static_cast<int>(x.size())};
    if (x.size() < 2) return fit;
    const auto k = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= k;
    my /= k;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (!(sxx > 0.0)) return fit;
    fit.slope = sxy / sxx;
    if (x.size() >= 3) {
        double rss = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double r = y[i] - my - fit.slope * (x[i] - mx);
            rss += r * r;
        }
        fit.std_error = std::sqrt(rss / (k - 2.0) / sxx);
    }
    return fit;
}

std::string config_json(const RateStudyConfig& cfg) {
    nlohmann::ordered_json j;
    j["family"] = cfg.family;
    j["theta"] = cfg.theta;
    j["theta_index"] = cfg.theta_index;
    j["s"] = cfg.s;
    j["n_grid"] = cfg.n_grid;
    j["M"] = cfg.M;
    j["B"] = cfg.B;
    j["reps"] = cfg.reps;
    j["mode"] = cfg.mode == StudyMode::Theorem1 ? "theorem1" : "theorem2";
    j["seed"] = cfg.seed;
    j["t_grid"] = cfg.t_grid;
    return j.dump();
}

std::string config_hash(std::string_view canonical) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash_string(canonical)));
    return buf;
}

StudyReport rate_study(const RateStudyConfig& cfg, const FamilyRegistry& registry) {
    check_grid(cfg);
    const Family f = registry.make(cfg.family, cfg.theta);
    if (f.dimension != 1) throw DimensionError("rate studies use one-dimensional families");

    StudyReport report;
    report.version = UEDGE_VERSION;
    report.config_hash = config_hash(config_json(cfg));
    const std::size_t G = cfg.t_grid.size();
    std::vector<double> gauss(G);
    for (std::size_t i = 0; i < G; ++i) gauss[i] = std_normal_cdf(cfg.t_grid[i]);

    std::optional<CumulantSet> population;
    if (cfg.mode == StudyMode::Theorem1) population = standardized_family_cumulants(f, cfg.s);

    for (const std::int64_t n : cfg.n_grid) {
        for (int rep = 0; rep < cfg.reps; ++rep) {
            const std::uint64_t seed = cell_seed(cfg.seed, cfg.family, cfg.theta_index, n, rep);
            std::vector<double> q_hat(G), q_tilde(G);
            double band = 0.0;
            std::optional<EdgeworthExpansion> e;
            if (cfg.mode == StudyMode::Theorem1) {
                const SumCdf sc = exact_sum_cdf_mc(f, n, cfg.M, cfg.t_grid, seed, cfg.workers);
                q_hat = sc.cdf;
                band = sc.half_width;
                e = build_expansion(*population, n, cfg.s);
            } else {
                const Dataset data = f.draw(static_cast<std::size_t>(n), seed);
                const EmpiricalMeasure q(bootstrap_draws(data, cfg.B, derive_seed(seed, {1}), cfg.workers));
                for (std::size_t i = 0; i < G; ++i) q_hat[i] = q.cdf(cfg.t_grid[i]);
                band = dkw_half_width(cfg.B);
                e = empirical_edgeworth(data, cfg.s);
            }
            for (std::size_t i = 0; i < G; ++i) q_tilde[i] = e->cdf_1d(cfg.t_grid[i]);
            report.records.push_back(make_record(cfg, n, rep, cfg.s, sup_abs_diff(q_hat, q_tilde), band, seed));
            if (cfg.s != 2) {
                report.records.push_back(make_record(cfg, n, rep, 2, sup_abs_diff(q_hat, gauss), band, seed));
            }
        }
    }
    report.slopes.push_back(fit_slope(report.records, "sup_dev", cfg.s));
    if (cfg.s != 2) report.slopes.push_back(fit_slope(report.records, "sup_dev", 2));
    return report;
}

StudyReport uniform_sweep(const SweepConfig& cfg, const FamilyRegistry& registry) {
    if (cfg.theta_grid.empty()) throw InvalidArgument("sweep needs a nonempty theta grid");
    check_grid(cfg.base);
    StudyReport out;
    out.version = UEDGE_VERSION;
    std::string canonical = config_json(cfg.base) + "|rho_bar=" + theta_label(std::span(&cfg.rho_bar, 1));
    for (const auto& th : cfg.theta_grid) canonical += "|" + theta_label(th);
    out.config_hash = config_hash(canonical);

    // (s, n, rep) -> record with the largest value so far
    std::map<std::tuple<int, std::int64_t, int>, StudyRecord> maxima;
    for (std::size_t i = 0; i < cfg.theta_grid.size(); ++i) {
        const auto& theta = cfg.theta_grid[i];
        double proxy = std::numeric_limits<double>::infinity();
        try {
            proxy = moment_proxy(registry.make(cfg.base.family, theta), cfg.base.s);
        } catch (const InvalidArgument& e) {
            out.notes.push_back("rejected theta=" + theta_label(theta) + ": " + e.what());
            continue;
        }
        if (!(proxy <= cfg.rho_bar)) {
            out.notes.push_back("rejected theta=" + theta_label(theta) + ": moment proxy " + theta_label(std::span(&proxy, 1)) +
                                " exceeds cap " + theta_label(std::span(&cfg.rho_bar, 1)));
            continue;
        }
        out.notes.push_back("theta=" + theta_label(theta) + ": moment proxy " + theta_label(std::span(&proxy, 1)));
        RateStudyConfig sub = cfg.base;
        sub.theta = theta;
        sub.theta_index = i;
        const StudyReport r = rate_study(sub, registry);
        for (const auto& rec : r.records) {
            out.records.push_back(rec);
            auto [it, inserted] = maxima.try_emplace({rec.s, rec.n, rec.rep}, rec);
            if (!inserted && rec.value > it->second.value) it->second = rec;
        }
        for (auto slope : r.slopes) {
            slope.metric = "sup_dev[theta=" + theta_label(theta) + "]";
            out.slopes.push_back(slope);
        }
    }
    if (maxima.empty()) throw InvalidArgument("every theta was rejected by the moment cap");
    std::vector<StudyRecord> max_records;
    for (auto [key, rec] : maxima) {
        rec.theta = "max";
        rec.metric = "max_sup_dev";
        max_records.push_back(rec);
    }
    // records ordered by n, then rep, then s descending, as in rate_study
    std::sort(max_records.begin(), max_records.end(), [](const StudyRecord& a, const StudyRecord& b) {
        return std::tuple(a.n, a.rep, -a.s) < std::tuple(b.n, b.rep, -b.s);
    });
    out.records.insert(out.records.end(), max_records.begin(), max_records.end());
    out.slopes.push_back(fit_slope(out.records, "max_sup_dev", cfg.base.s));
    if (cfg.base.s != 2) out.slopes.push_back(fit_slope(out.records, "max_sup_dev", 2));
    return out;
}

} // namespace uedge
