#include "uedge/edgeworth.hpp"

#include "uedge/error.hpp"
#include "uedge/hermite.hpp"
#include "uedge/parallel.hpp"
#include "uedge/rng.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <json.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

namespace uedge {

namespace {

void compositions(int remaining, std::vector<int>& prefix, std::vector<std::vector<int>>& out) {
    if (remaining == 0) {
        out.push_back(prefix);
        return;
    }
    for (int first = 1; first <= remaining; ++first) {
        prefix.push_back(first);
        compositions(remaining - first, prefix, out);
        prefix.pop_back();
    }
}

} // namespace

Polynomial pj_polynomial(int j, const CumulantSet& c) {
    if (j < 1 || j + 2 > c.max_order()) {
        throw UnsupportedOrder("P~_" + std::to_string(j) + " needs cumulants of order " +
                               std::to_string(j + 2) + ", table has " +
                               std::to_string(c.max_order()));
    }
    const auto d = static_cast<std::size_t>(c.dimension());
    // chi_r(z) / r! for r = 3 .. j + 2
    std::vector<Polynomial> scaled(static_cast<std::size_t>(j + 3), Polynomial(d));
    for (int r = 3; r <= j + 2; ++r) {
        scaled[static_cast<std::size_t>(r)] = chi_poly(r, c) * (1.0 / factorial(r));
    }
    std::vector<std::vector<int>> tuples;
    std::vector<int> prefix;
    compositions(j, prefix, tuples);

    Polynomial out(d);
    for (const auto& tuple : tuples) {
        Polynomial prod = scaled[static_cast<std::size_t>(tuple.front() + 2)];
        for (std::size_t k = 1; k < tuple.size() && !prod.is_zero(); ++k) {
            prod = prod * scaled[static_cast<std::size_t>(tuple[k] + 2)];
        }
        out += prod * (1.0 / factorial(static_cast<int>(tuple.size())));
    }
    return out;
}

EdgeworthExpansion::EdgeworthExpansion(CumulantSet c, std::int64_t n, int s,
                                       std::vector<Polynomial> pj)
    : dimension_(c.dimension()), order_(s), n_(n), cumulants_(std::move(c)), hermite_(std::move(pj)) {
    const double root_n = std::sqrt(static_cast<double>(n_));
    for (std::size_t j = 1; j < hermite_.size(); ++j) {
        const double scale = std::pow(root_n, -static_cast<double>(j));
        for (const auto& [nu, a] : hermite_[j].terms()) {
            terms_.push_back({nu, a * scale});
            for (int e : nu.entries()) max_axis_degree_ = std::max(max_axis_degree_, e);
        }
    }
}

const Polynomial& EdgeworthExpansion::hermite(int j) const {
    if (j < 0 || j > order_ - 2) throw UnsupportedOrder("expansion has no term j = " + std::to_string(j));
    return hermite_[static_cast<std::size_t>(j)];
}

double EdgeworthExpansion::weight(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != dimension_) throw InvalidArgument("point dimension mismatch");
    if (terms_.empty()) return 1.0;
    const auto stride = static_cast<std::size_t>(max_axis_degree_ + 1);
    constexpr std::size_t stack_size = 256;
    std::array<double, stack_size> stack_buf;
    std::vector<double> heap_buf;
    double* he = stack_buf.data();
    if (stride * x.size() > stack_size) {
        heap_buf.resize(stride * x.size());
        he = heap_buf.data();
    }
    for (std::size_t k = 0; k < x.size(); ++k) hermite_all(x[k], {he + k * stride, stride});
    double w = 1.0;
    for (const Term& t : terms_) {
        double v = t.coeff;
        for (std::size_t k = 0; k < x.size(); ++k) v *= he[k * stride + static_cast<std::size_t>(t.nu[k])];
        w += v;
    }
    return w;
}

double EdgeworthExpansion::density(std::span<const double> x) const {
    return weight(x) * std_normal_pdf(x);
}

double EdgeworthExpansion::cdf_1d(double t) const {
    if (dimension_ != 1) throw DimensionError("cdf_1d requires a one-dimensional expansion");
    if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
    double corr = 0.0;
    for (const Term& term : terms_) corr += term.coeff * hermite_he(term.nu[0] - 1, t);
    return std_normal_cdf(t) - std_normal_pdf(t) * corr;
}

EdgeworthExpansion build_expansion(const CumulantSet& c, std::int64_t n, int s) {
    if (n < 1) throw InvalidArgument("sample size must be >= 1");
    if (s < 2 || s > c.max_order()) {
        throw UnsupportedOrder("expansion order s = " + std::to_string(s) +
                               " needs cumulants to order s; table has " +
                               std::to_string(c.max_order()));
    }
    if (!c.standardized(1e-8)) {
        throw StandardizationError("expansion requires standardized cumulants (mean 0, identity covariance)");
    }
    const auto d = static_cast<std::size_t>(c.dimension());
    std::vector<Polynomial> pj;
    Polynomial one(d);
    one.add_term(MultiIndex::zero(d), 1.0);
    pj.push_back(std::move(one));
    for (int j = 1; j <= s - 2; ++j) pj.push_back(pj_polynomial(j, c));
    CumulantSet kept(c.dimension(), s);
    for (const MultiIndex& nu : kept.indices()) kept.set(nu, c.at(nu));
    return EdgeworthExpansion(std::move(kept), n, s, std::move(pj));
}

EdgeworthExpansion gaussian_expansion(int d) {
    CumulantSet c(d, 2);
    const auto dd = static_cast<std::size_t>(d);
    for (std::size_t k = 0; k < dd; ++k) c.set(MultiIndex::unit(dd, k) + MultiIndex::unit(dd, k), 1.0);
    return build_expansion(c, 1, 2);
}

// ---------------------------------------------------------------- JSON

std::string to_json(const EdgeworthExpansion& e, int indent) {
    nlohmann::ordered_json doc;
    doc["d"] = e.dimension();
    doc["s"] = e.order();
    doc["n"] = e.sample_size();
    auto cum = nlohmann::ordered_json::array();
    auto idx = e.cumulants().indices();
    auto val = e.cumulants().values();
    for (std::size_t i = 0; i < idx.size(); ++i) cum.push_back({idx[i].entries(), val[i]});
    doc["cumulants"] = std::move(cum);
    auto herm = nlohmann::ordered_json::array();
    for (int j = 0; j <= e.order() - 2; ++j) {
        auto terms = nlohmann::ordered_json::array();
        for (const auto& [nu, a] : e.hermite(j).terms()) terms.push_back({nu.entries(), a});
        herm.push_back({{"j", j}, {"terms", std::move(terms)}});
    }
    doc["hermite"] = std::move(herm);
    return doc.dump(indent);
}

EdgeworthExpansion expansion_from_json(std::string_view text) {
    try {
        const auto doc = nlohmann::json::parse(text);
        const int d = doc.at("d").get<int>();
        const int s = doc.at("s").get<int>();
        const auto n = doc.at("n").get<std::int64_t>();
        if (d < 1 || s < 2 || n < 1) throw InvalidArgument("expansion JSON: bad d/s/n");
        CumulantSet c(d, s);
        for (const auto& entry : doc.at("cumulants")) {
            c.set(MultiIndex(entry.at(0).get<std::vector<int>>()), entry.at(1).get<double>());
        }
        std::vector<Polynomial> pj(static_cast<std::size_t>(s - 1), Polynomial(static_cast<std::size_t>(d)));
        for (const auto& block : doc.at("hermite")) {
            const int j = block.at("j").get<int>();
            if (j < 0 || j > s - 2) throw InvalidArgument("expansion JSON: j out of range");
            for (const auto& term : block.at("terms")) {
                pj[static_cast<std::size_t>(j)].add_term(MultiIndex(term.at(0).get<std::vector<int>>()),
                                                         term.at(1).get<double>());
            }
        }
        return EdgeworthExpansion(std::move(c), n, s, std::move(pj));
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("expansion JSON: ") + e.what());
    }
}

// ---------------------------------------------------------------- set measure

namespace {

constexpr double truncation_radius = 12.0;

struct Rule {
    std::vector<double> nodes;   // on [-1, 1]
    std::vector<double> weights;
};

template <unsigned N>
Rule make_gauss_rule() {
    using G = boost::math::quadrature::gauss<double, N>;
    Rule r;
    const auto& a = G::abscissa();
    const auto& w = G::weights();
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0.0) {
            r.nodes.push_back(0.0);
            r.weights.push_back(w[i]);
            continue;
        }
        r.nodes.push_back(a[i]);
        r.weights.push_back(w[i]);
        r.nodes.push_back(-a[i]);
        r.weights.push_back(w[i]);
    }
    return r;
}

const Rule& gauss_rule(int n) {
    static const Rule r8 = make_gauss_rule<8>();
    static const Rule r16 = make_gauss_rule<16>();
    static const Rule r24 = make_gauss_rule<24>();
    static const Rule r32 = make_gauss_rule<32>();
    if (n <= 8) return r8;
    if (n <= 16) return r16;
    if (n <= 24) return r24;
    return r32;
}

// Composite rule on [a, b] with panels of width <= 1.
void composite(double a, double b, int nodes, std::vector<double>& x, std::vector<double>& w) {
    x.clear();
    w.clear();
    if (!(b > a)) return;
    const Rule& r = gauss_rule(nodes);
    const int panels = std::max(1, static_cast<int>(std::ceil(b - a)));
    const double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        for (std::size_t i = 0; i < r.nodes.size(); ++i) {
            x.push_back(mid + 0.5 * h * r.nodes[i]);
            w.push_back(0.5 * h * r.weights[i]);
        }
    }
}

double box_exact(const EdgeworthExpansion& e, const Box& box) {
    const std::size_t d = box.lower.size();
    double base = 1.0;
    for (std::size_t k = 0; k < d; ++k) base *= hermite_gauss_integral(0, box.lower[k], box.upper[k]);
    double corr = 0.0;
    for (const auto& t : e.correction_terms()) {
        double v = t.coeff;
        for (std::size_t k = 0; k < d && v != 0.0; ++k) {
            v *= hermite_gauss_integral(t.nu[k], box.lower[k], box.upper[k]);
        }
        corr += v;
    }
    return base + corr;
}

double half_space_quad(const EdgeworthExpansion& e, const HalfSpace& h, int nodes) {
    const auto d = static_cast<Eigen::Index>(h.normal.size());
    Vector w = Eigen::Map<const Vector>(h.normal.data(), d);
    const double wn = w.norm();
    const double cut = h.offset / wn;
    if (cut <= -truncation_radius) return 0.0;
    // orthonormal basis whose first column is w / |w|
    Eigen::HouseholderQR<Matrix> qr(w);
    Matrix Q = qr.householderQ();
    if (Q.col(0).dot(w) < 0) Q.col(0) *= -1.0;

    std::vector<double> x1, w1, xo, wo;
    composite(-truncation_radius, std::min(cut, truncation_radius), nodes, x1, w1);
    composite(-truncation_radius, truncation_radius, nodes, xo, wo);
    Vector y(d), x(d);
    double total = 0.0;
    if (d == 2) {
        for (std::size_t i = 0; i < x1.size(); ++i) {
            for (std::size_t j = 0; j < xo.size(); ++j) {
                y << x1[i], xo[j];
                x = Q * y;
                total += w1[i] * wo[j] * e.density({x.data(), 2});
            }
        }
    } else if (d == 3) {
        for (std::size_t i = 0; i < x1.size(); ++i) {
            for (std::size_t j = 0; j < xo.size(); ++j) {
                for (std::size_t k = 0; k < xo.size(); ++k) {
                    y << x1[i], xo[j], xo[k];
                    x = Q * y;
                    total += w1[i] * wo[j] * wo[k] * e.density({x.data(), 3});
                }
            }
        }
    } else {
        throw InvalidArgument("half-space quadrature supports d <= 3; use the MC method");
    }
    return total;
}

double ball_quad(const EdgeworthExpansion& e, const Ball& b, int nodes, int angles) {
    const auto d = b.center.size();
    double cnorm = 0.0;
    for (double c : b.center) cnorm += c * c;
    cnorm = std::sqrt(cnorm);
    const double r_eff = std::min(b.radius, cnorm + truncation_radius);
    if (cnorm - r_eff >= truncation_radius) return 0.0;
    std::vector<double> xr, wr;
    composite(0.0, r_eff, nodes, xr, wr);
    double total = 0.0;
    if (d == 2) {
        const double dtheta = 2.0 * std::numbers::pi / angles;
        std::array<double, 2> x{};
        for (std::size_t i = 0; i < xr.size(); ++i) {
            double ring = 0.0;
            for (int a = 0; a < angles; ++a) {
                const double th = a * dtheta;
                x[0] = b.center[0] + xr[i] * std::cos(th);
                x[1] = b.center[1] + xr[i] * std::sin(th);
                ring += e.density(x);
            }
            total += wr[i] * xr[i] * ring * dtheta;
        }
    } else if (d == 3) {
        std::vector<double> xc, wc;
        // cos(polar angle) on [-1, 1] split into 4 panels
        const Rule& r = gauss_rule(nodes);
        for (int p = 0; p < 4; ++p) {
            const double mid = -1.0 + (p + 0.5) * 0.5;
            for (std::size_t i = 0; i < r.nodes.size(); ++i) {
                xc.push_back(mid + 0.25 * r.nodes[i]);
                wc.push_back(0.25 * r.weights[i]);
            }
        }
        const double dphi = 2.0 * std::numbers::pi / angles;
        std::array<double, 3> x{};
        for (std::size_t i = 0; i < xr.size(); ++i) {
            double shell = 0.0;
            for (std::size_t c = 0; c < xc.size(); ++c) {
                const double ct = xc[c];
                const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
                double ring = 0.0;
                for (int a = 0; a < angles; ++a) {
                    const double ph = a * dphi;
                    x[0] = b.center[0] + xr[i] * st * std::cos(ph);
                    x[1] = b.center[1] + xr[i] * st * std::sin(ph);
                    x[2] = b.center[2] + xr[i] * ct;
                    ring += e.density(x);
                }
                shell += wc[c] * ring * dphi;
            }
            total += wr[i] * xr[i] * xr[i] * shell;
        }
    } else {
        throw InvalidArgument("ball quadrature supports d <= 3; use the MC method");
    }
    return total;
}

MeasureResult quadrature_measure(const EdgeworthExpansion& e, const SetSpec& A, const MeasureBudget& budget) {
    constexpr double exact_error = 1e-14;
    const auto& shape = A.shape();
    if (const auto* h = std::get_if<HalfLine>(&shape)) {
        return {e.cdf_1d(h->upper), exact_error, true};
    }
    if (const auto* bx = std::get_if<Box>(&shape)) {
        return {box_exact(e, *bx), exact_error, true};
    }
    if (const auto* bl = std::get_if<Ball>(&shape)) {
        if (bl->center.size() == 1) {
            Box seg{{bl->center[0] - bl->radius}, {bl->center[0] + bl->radius}};
            return {box_exact(e, seg), exact_error, true};
        }
        const double fine = ball_quad(e, *bl, budget.nodes_per_panel, 128);
        const double coarse = ball_quad(e, *bl, std::max(4, budget.nodes_per_panel / 2), 64);
        const double err = std::abs(fine - coarse);
        return {fine, err, budget.target_error <= 0.0 || err <= budget.target_error};
    }
    const auto& hs = std::get<HalfSpace>(shape);
    if (hs.normal.size() == 1) {
        const double w = hs.normal[0];
        const double cut = hs.offset / w;
        Box seg = w > 0 ? Box{{-std::numeric_limits<double>::infinity()}, {cut}}
                        : Box{{cut}, {std::numeric_limits<double>::infinity()}};
        return {box_exact(e, seg), exact_error, true};
    }
    const double fine = half_space_quad(e, hs, budget.nodes_per_panel);
    const double coarse = half_space_quad(e, hs, std::max(4, budget.nodes_per_panel / 2));
    const double err = std::abs(fine - coarse);
    return {fine, err, budget.target_error <= 0.0 || err <= budget.target_error};
}

MeasureResult mc_measure(const EdgeworthExpansion& e, const SetSpec& A, const MeasureBudget& budget) {
    if (budget.mc_samples == 0) throw InvalidArgument("MC budget must be positive");
    constexpr std::uint64_t chunk = 1u << 16;
    const std::uint64_t chunks = (budget.mc_samples + chunk - 1) / chunk;
    const auto d = static_cast<std::size_t>(e.dimension());
    std::vector<double> sum(chunks, 0.0), sum2(chunks, 0.0);
    parallel_for(chunks, budget.workers, [&](std::size_t c) {
        Stream rng(derive_seed(budget.seed, {0x5e7u, c}));
        std::normal_distribution<double> normal;
        const std::uint64_t begin = c * chunk;
        const std::uint64_t end = std::min(budget.mc_samples, begin + chunk);
        std::vector<double> x(d);
        double s = 0.0, s2 = 0.0;
        for (std::uint64_t i = begin; i < end; ++i) {
            for (auto& v : x) v = normal(rng);
            if (A.contains(x)) {
                const double w = e.weight(x);
                s += w;
                s2 += w * w;
            }
        }
        sum[c] = s;
        sum2[c] = s2;
    });
    double s = 0.0, s2 = 0.0;
    for (std::size_t c = 0; c < chunks; ++c) {
        s += sum[c];
        s2 += sum2[c];
    }
    const auto N = static_cast<double>(budget.mc_samples);
    const double mean = s / N;
    const double var = std::max(0.0, s2 / N - mean * mean);
    const double se = std::sqrt(var / N);
    return {mean, se, budget.target_error <= 0.0 || se <= budget.target_error};
}

} // namespace

MeasureResult set_measure(const EdgeworthExpansion& e, const SetSpec& A, MeasureMethod method,
                          const MeasureBudget& budget) {
    if (static_cast<int>(A.dimension()) != e.dimension()) {
        throw DimensionError("set dimension does not match expansion dimension");
    }
    return method == MeasureMethod::Quadrature ? quadrature_measure(e, A, budget)
                                               : mc_measure(e, A, budget);
}

} // namespace uedge
