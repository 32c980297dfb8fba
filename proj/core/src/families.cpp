#include "uedge/families.hpp"

#include "uedge/error.hpp"
#include "uedge/linalg.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

namespace uedge {

namespace {

using cplx = std::complex<double>;

MomentSet moments_1d(int order, const std::function<double(int)>& m) {
    MomentSet out(1, order);
    for (int k = 1; k <= order; ++k) out.set(MultiIndex{k}, m(k));
    return out;
}

// E[N(mu, sigma^2)^k]
double normal_raw_moment(int k, double mu, double sigma) {
    double s = 0.0;
    double dfact = 1.0; // (j - 1)!! for even j
    for (int j = 0; j <= k; j += 2) {
        if (j > 0) dfact *= j - 1;
        s += binomial(k, j) * std::pow(mu, k - j) * std::pow(sigma, j) * dfact;
    }
    return s;
}

// E[(E - 1)^k] for E ~ Exp(1): the derangement numbers.
double subfactorial(int k) {
    double a = 1.0, b = 0.0; // !0, !1
    if (k == 0) return a;
    for (int i = 2; i <= k; ++i) {
        const double c = (i - 1) * (a + b);
        a = b;
        b = c;
    }
    return b;
}

Family standardized_gamma(const std::string& name, double shape) {
    if (!(shape > 0.0)) throw InvalidArgument("gamma shape must be > 0");
    Family f;
    f.name = name;
    f.theta = {shape};
    const double root = std::sqrt(shape);
    f.sample = [shape, root](Stream& rng, std::span<double> out) {
        std::gamma_distribution<double> g(shape, 1.0);
        out[0] = (g(rng) - shape) / root;
    };
    f.sample_sum = [shape, root](Stream& rng, std::int64_t n, std::span<double> out) {
        const double a = shape * static_cast<double>(n);
        std::gamma_distribution<double> g(a, 1.0);
        out[0] = (g(rng) - a) / root;
    };
    f.moments = [shape, root](int order) {
        CumulantSet c(1, order);
        for (int k = 2; k <= order; ++k) c.set(MultiIndex{k}, shape * factorial(k - 1) / std::pow(root, k));
        return cumulants_to_moments(c);
    };
    f.cf = CharFunctionHandle::analytic(
        1,
        [shape, root](std::span<const double> t) {
            const double u = t[0] / root;
            return std::exp(cplx(0.0, -t[0] * root)) * std::pow(cplx(1.0, -u), -shape);
        },
        name);
    return f;
}

} // namespace

Dataset Family::draw(std::size_t n, std::uint64_t seed) const {
    if (n == 0) throw InvalidArgument("sample size must be >= 1");
    Stream rng(seed);
    std::vector<double> values(n * static_cast<std::size_t>(dimension));
    const auto d = static_cast<std::size_t>(dimension);
    for (std::size_t i = 0; i < n; ++i) sample(rng, {values.data() + i * d, d});
    return Dataset(d, std::move(values), Provenance{name, seed});
}

FamilyMoments family_mean_cov(const Family& f, std::uint64_t pilot, std::uint64_t seed) {
    const auto d = static_cast<Eigen::Index>(f.dimension);
    FamilyMoments fm{Vector::Zero(d), Matrix::Zero(d, d)};
    if (f.has_moments()) {
        const MomentSet m = f.moments(2);
        const auto dd = static_cast<std::size_t>(d);
        for (std::size_t i = 0; i < dd; ++i) fm.mean[static_cast<Eigen::Index>(i)] = m.at(MultiIndex::unit(dd, i));
        for (std::size_t i = 0; i < dd; ++i) {
            for (std::size_t j = 0; j < dd; ++j) {
                const double mij = m.at(MultiIndex::unit(dd, i) + MultiIndex::unit(dd, j));
                fm.cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    mij - fm.mean[static_cast<Eigen::Index>(i)] * fm.mean[static_cast<Eigen::Index>(j)];
            }
        }
        return fm;
    }
    const Dataset data = f.draw(pilot, seed);
    for (std::size_t i = 0; i < data.size(); ++i) fm.mean += Eigen::Map<const Vector>(data.point(i).data(), d);
    fm.mean /= static_cast<double>(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const Vector c = Eigen::Map<const Vector>(data.point(i).data(), d) - fm.mean;
        fm.cov.noalias() += c * c.transpose();
    }
    fm.cov /= static_cast<double>(data.size());
    return fm;
}

CumulantSet standardized_family_cumulants(const Family& f, int s) {
    if (!f.has_moments()) throw InvalidArgument("family " + f.name + " has no closed-form moments");
    CumulantSet c = moments_to_cumulants(f.moments(s));
    const auto d = static_cast<std::size_t>(f.dimension);
    for (std::size_t k = 0; k < d; ++k) c.set(MultiIndex::unit(d, k), 0.0);
    Matrix V(f.dimension, f.dimension);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            V(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                c.at(MultiIndex::unit(d, i) + MultiIndex::unit(d, j));
        }
    }
    const CumulantSet units[1] = {c};
    return averaged_standardized_cumulants(units, s, V);
}

double moment_proxy(const Family& f, int s) {
    if (!f.has_moments() || s < 1) return std::numeric_limits<double>::infinity();
    const int k = (s + 1) / 2;
    const MomentSet m = cumulants_to_moments(standardized_family_cumulants(f, 2 * k));
    double total = 0.0;
    for (const MultiIndex& beta : multi_indices_of_order(f.dimension, k)) {
        total += factorial(k) / beta.factorial() * m.at(beta + beta);
    }
    if (!(total >= 0.0) || !std::isfinite(total)) return std::numeric_limits<double>::infinity();
    return std::pow(total, static_cast<double>(s) / (2.0 * k));
}

void FamilyRegistry::add(std::string name, Entry entry) { entries_[std::move(name)] = std::move(entry); }

std::vector<std::string> FamilyRegistry::names() const {
    std::vector<std::string> out;
    for (const auto& [name, e] : entries_) out.push_back(name);
    return out;
}

const FamilyRegistry::Entry& FamilyRegistry::entry(const std::string& name) const {
    const auto it = entries_.find(name);
    if (it == entries_.end()) throw InvalidArgument("unknown family: " + name);
    return it->second;
}

Family FamilyRegistry::make(const std::string& name, const std::vector<double>& theta) const {
    const Entry& e = entry(name);
    return e.factory(theta.empty() ? e.default_theta : theta);
}

FamilyRegistry register_builtin_families() {
    FamilyRegistry reg;

    reg.add("gaussian", {"standard normal N(0, 1)", {}, [](const std::vector<double>&) {
                Family f;
                f.name = "gaussian";
                f.sample = [](Stream& rng, std::span<double> out) { out[0] = std::normal_distribution<double>()(rng); };
                f.sample_sum = [](Stream& rng, std::int64_t n, std::span<double> out) {
                    out[0] = std::sqrt(static_cast<double>(n)) * std::normal_distribution<double>()(rng);
                };
                f.moments = [](int order) { return moments_1d(order, [](int k) { return normal_raw_moment(k, 0.0, 1.0); }); };
                f.cf = CharFunctionHandle::analytic(
                    1, [](std::span<const double> t) { return cplx(std::exp(-0.5 * t[0] * t[0]), 0.0); }, f.name);
                return f;
            }});

    reg.add("bernoulli(1/2)", {"fair coin on {0, 1}; lattice", {}, [](const std::vector<double>&) {
                Family f;
                f.name = "bernoulli(1/2)";
                f.lattice = true;
                f.sample = [](Stream& rng, std::span<double> out) { out[0] = static_cast<double>(rng() >> 63); };
                f.sample_sum = [](Stream& rng, std::int64_t n, std::span<double> out) {
                    out[0] = static_cast<double>(std::binomial_distribution<std::int64_t>(n, 0.5)(rng));
                };
                f.moments = [](int order) { return moments_1d(order, [](int) { return 0.5; }); };
                f.cf = CharFunctionHandle::analytic(
                    1, [](std::span<const double> t) { return 0.5 * (1.0 + std::exp(cplx(0.0, t[0]))); }, f.name);
                return f;
            }});

    reg.add("three-point-irrational", {"uniform on {0, 1, sqrt 2}", {}, [](const std::vector<double>&) {
                Family f;
                f.name = "three-point-irrational";
                f.sample = [](Stream& rng, std::span<double> out) {
                    static constexpr double atoms[3] = {0.0, 1.0, std::numbers::sqrt2};
                    out[0] = atoms[rng.below(3)];
                };
                f.sample_sum = [](Stream& rng, std::int64_t n, std::span<double> out) {
                    const auto n1 = std::binomial_distribution<std::int64_t>(n, 1.0 / 3.0)(rng);
                    const auto n2 = std::binomial_distribution<std::int64_t>(n - n1, 0.5)(rng);
                    out[0] = static_cast<double>(n1) + std::numbers::sqrt2 * static_cast<double>(n2);
                };
                f.moments = [](int order) {
                    return moments_1d(order, [](int k) { return (1.0 + std::pow(std::numbers::sqrt2, k)) / 3.0; });
                };
                f.cf = CharFunctionHandle::analytic(
                    1,
                    [](std::span<const double> t) {
                        return (1.0 + std::exp(cplx(0.0, t[0])) + std::exp(cplx(0.0, std::numbers::sqrt2 * t[0]))) / 3.0;
                    },
                    f.name);
                return f;
            }});

    reg.add("centered-exponential", {"Exp(1) - 1", {}, [](const std::vector<double>&) {
                return standardized_gamma("centered-exponential", 1.0);
            }});

    reg.add("centered-gamma", {"(Gamma(theta, 1) - theta) / sqrt(theta)", {4.0}, [](const std::vector<double>& th) {
                if (th.size() != 1) throw InvalidArgument("centered-gamma takes one parameter (shape)");
                return standardized_gamma("centered-gamma", th[0]);
            }});

    reg.add("gaussian-mixture", {"theta N(0, 1) + (1 - theta) N(3, 0.25)", {0.5}, [](const std::vector<double>& th) {
                if (th.size() != 1 || !(th[0] > 0.0 && th[0] < 1.0)) {
                    throw InvalidArgument("gaussian-mixture takes one weight in (0, 1)");
                }
                const double p = th[0];
                Family f;
                f.name = "gaussian-mixture";
                f.theta = th;
                f.sample = [p](Stream& rng, std::span<double> out) {
                    const double z = std::normal_distribution<double>()(rng);
                    out[0] = rng.uniform() < p ? z : 3.0 + 0.5 * z;
                };
                f.sample_sum = [p](Stream& rng, std::int64_t n, std::span<double> out) {
                    const auto k = std::binomial_distribution<std::int64_t>(n, p)(rng);
                    const auto rest = static_cast<double>(n - k);
                    const double z = std::normal_distribution<double>()(rng);
                    out[0] = 3.0 * rest + std::sqrt(static_cast<double>(k) + 0.25 * rest) * z;
                };
                f.moments = [p](int order) {
                    return moments_1d(order, [p](int k) {
                        return p * normal_raw_moment(k, 0.0, 1.0) + (1.0 - p) * normal_raw_moment(k, 3.0, 0.5);
                    });
                };
                f.cf = CharFunctionHandle::analytic(
                    1,
                    [p](std::span<const double> t) {
                        const double u = t[0];
                        return p * std::exp(cplx(-0.5 * u * u, 0.0)) + (1.0 - p) * std::exp(cplx(-0.125 * u * u, 3.0 * u));
                    },
                    f.name);
                return f;
            }});

    reg.add("exp-t-pair", {"(W, W^2) with W = Exp(1) - 1", {}, [](const std::vector<double>&) {
                Family f;
                f.name = "exp-t-pair";
                f.dimension = 2;
                f.sample = [](Stream& rng, std::span<double> out) {
                    const double w = std::exponential_distribution<double>()(rng) - 1.0;
                    out[0] = w;
                    out[1] = w * w;
                };
                f.moments = [](int order) {
                    MomentSet m(2, order);
                    for (const MultiIndex& nu : m.indices()) m.set(nu, subfactorial(nu[0] + 2 * nu[1]));
                    return m;
                };
                return f;
            }});

    return reg;
}

std::vector<SelfTestRow> family_self_test(const Family& f, int order, std::uint64_t samples, std::uint64_t seed) {
    if (!f.has_moments()) throw InvalidArgument("family " + f.name + " has no closed-form moments");
    constexpr std::size_t batches = 50;
    if (samples < batches * 2) throw InvalidArgument("self-test needs at least 100 samples");
    const CumulantSet analytic = moments_to_cumulants(f.moments(order));
    const Dataset all = f.draw(samples, seed);
    const CumulantSet full = moments_to_cumulants(raw_moments(all, order));

    const auto d = all.dimension();
    const std::size_t per = all.size() / batches;
    std::vector<CumulantSet> batch;
    for (std::size_t b = 0; b < batches; ++b) {
        const auto v = all.values().subspan(b * per * d, per * d);
        batch.push_back(moments_to_cumulants(raw_moments(Dataset(d, {v.begin(), v.end()}), order)));
    }
    std::vector<SelfTestRow> rows;
    for (const MultiIndex& nu : analytic.indices()) {
        double mean = 0.0;
        for (const auto& c : batch) mean += c.at(nu);
        mean /= batches;
        double var = 0.0;
        for (const auto& c : batch) var += (c.at(nu) - mean) * (c.at(nu) - mean);
        var /= (batches - 1);
        SelfTestRow row{nu, analytic.at(nu), full.at(nu), std::sqrt(var / batches), true};
        row.ok = std::abs(row.estimate - row.analytic) <= 4.0 * row.std_error + 1e-12 * std::max(1.0, std::abs(row.analytic));
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace uedge
