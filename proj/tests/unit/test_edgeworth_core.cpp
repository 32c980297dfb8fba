#include <doctest.h>

#include "oracles.hpp"

#include <uedge/edgeworth.hpp>
#include <uedge/error.hpp>
#include <uedge/functionals.hpp>
#include <uedge/hermite.hpp>
#include <uedge/rng.hpp>

#include <cmath>
#include <limits>

using namespace uedge;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

CumulantSet unit_cumulants(int d, int s) {
    CumulantSet c(d, s);
    for (int k = 0; k < d; ++k) {
        MultiIndex two = MultiIndex::unit(static_cast<std::size_t>(d), static_cast<std::size_t>(k));
        c.set(two + two, 1.0);
    }
    return c;
}

CumulantSet skewed_1d(int s, double k3, double k4 = 0.0) {
    CumulantSet c = unit_cumulants(1, s);
    c.set(MultiIndex{3}, k3);
    if (s >= 4) c.set(MultiIndex{4}, k4);
    return c;
}

CumulantSet random_standardized(int d, int s, Stream& rng) {
    CumulantSet c = unit_cumulants(d, s);
    for (const MultiIndex& nu : c.indices()) {
        if (nu.order() >= 3) c.set(nu, 0.6 * (rng.uniform() - 0.5));
    }
    return c;
}

std::map<std::vector<int>, oracle::Rational> as_rational(const CumulantSet& c) {
    std::map<std::vector<int>, oracle::Rational> out;
    for (const MultiIndex& nu : c.indices()) out[nu.entries()] = oracle::Rational(c.at(nu));
    return out;
}

} // namespace

TEST_SUITE("edgeworth_core") {

TEST_CASE("pj examples in one dimension") {
    const double k3 = 0.7, k4 = -0.3;
    const Polynomial p1 = pj_polynomial(1, skewed_1d(3, k3));
    CHECK(p1.terms().size() == 1);
    CHECK(p1.coefficient(MultiIndex{3}) == doctest::Approx(k3 / 6.0).epsilon(1e-15));

    const Polynomial p2 = pj_polynomial(2, skewed_1d(4, k3, k4));
    CHECK(p2.terms().size() == 2);
    CHECK(p2.coefficient(MultiIndex{4}) == doctest::Approx(k4 / 24.0).epsilon(1e-15));
    CHECK(p2.coefficient(MultiIndex{6}) == doctest::Approx(k3 * k3 / 72.0).epsilon(1e-15));

    for (int j = 1; j <= 4; ++j) CHECK(pj_polynomial(j, unit_cumulants(2, 6)).is_zero());
    CHECK_THROWS_AS(pj_polynomial(2, skewed_1d(3, k3)), UnsupportedOrder);
    CHECK_THROWS_AS(pj_polynomial(0, skewed_1d(3, k3)), UnsupportedOrder);
}

TEST_CASE("pj agrees with the exponential-series oracle and its degree window") {
    Stream rng(17);
    for (int d = 1; d <= 3; ++d) {
        for (int s = 3; s <= 6; ++s) {
            const CumulantSet c = random_standardized(d, s, rng);
            const auto chi = as_rational(c);
            for (int j = 1; j <= s - 2; ++j) {
                const Polynomial p = pj_polynomial(j, c);
                const auto want = oracle::pj_by_exponential_series(j, d, chi);
                CHECK(p.terms().size() == want.size());
                for (const auto& [nu, coeff] : p.terms()) {
                    CHECK(nu.order() >= j + 2);
                    CHECK(nu.order() <= 3 * j);
                    const auto it = want.find(nu.entries());
                    REQUIRE(it != want.end());
                    CHECK(coeff == doctest::Approx(static_cast<double>(it->second)).epsilon(1e-13));
                }
            }
        }
    }
}

TEST_CASE("pj uses only cumulants up to order j + 2") {
    Stream rng(23);
    const CumulantSet base = random_standardized(2, 6, rng);
    CumulantSet perturbed = base;
    for (const MultiIndex& nu : perturbed.indices()) {
        if (nu.order() >= 5) perturbed.set(nu, base.at(nu) + 1.0);
    }
    for (int j = 1; j <= 2; ++j) {
        const Polynomial a = pj_polynomial(j, base);
        const Polynomial b = pj_polynomial(j, perturbed);
        CHECK(a.terms() == b.terms());
    }
}

TEST_CASE("hermite tensor") {
    const double pt[2] = {0.3, -1.7};
    CHECK(hermite_tensor(MultiIndex{0, 0}, pt) == 1.0);
    const double one[1] = {1.0};
    const double zero[1] = {0.0};
    CHECK(hermite_tensor(MultiIndex{2}, one) == doctest::Approx(0.0));
    CHECK(hermite_tensor(MultiIndex{3}, zero) == 0.0);
    CHECK(hermite_tensor(MultiIndex{2, 3}, pt) ==
          doctest::Approx((0.09 - 1.0) * (std::pow(-1.7, 3) + 3.0 * 1.7)));

    // (-d/dx)^k phi = He_k phi, checked by finite differences for k <= 4
    for (int k = 0; k <= 4; ++k) {
        for (double x : {-1.3, 0.2, 0.9}) {
            double fd = 0.0;
            const double h = 1e-2;
            for (const auto& [off, w] : oracle::fd_stencil(k)) fd += w * std_normal_pdf(x + off * h);
            fd /= std::pow(h, k);
            const double sign = (k % 2 == 0) ? 1.0 : -1.0;
            CHECK(sign * fd == doctest::Approx(hermite_he(k, x) * std_normal_pdf(x)).epsilon(1e-6).scale(1.0));
        }
    }
}

TEST_CASE("hermite orthogonality") {
    for (int j = 0; j <= 9; ++j) {
        for (int k = 0; k <= 9; ++k) {
            const double v = oracle::integrate(
                [&](double x) { return hermite_he(j, x) * hermite_he(k, x) * std_normal_pdf(x); }, -inf, inf);
            const double want = j == k ? factorial(j) : 0.0;
            CHECK(std::abs(v - want) <= 1e-8);
        }
    }
}

TEST_CASE("build expansion examples") {
    const double x0[1] = {0.0};
    const EdgeworthExpansion g = build_expansion(skewed_1d(4, 0.8, 0.4), 50, 2);
    for (double x : {-2.0, 0.0, 0.7, 3.1}) {
        const double p[1] = {x};
        CHECK(g.density(p) == doctest::Approx(std_normal_pdf(x)).epsilon(1e-15));
    }
    CHECK(g.correction_terms().empty());

    const EdgeworthExpansion gauss = build_expansion(unit_cumulants(1, 6), 10, 6);
    CHECK(gauss.density(x0) == doctest::Approx(inv_sqrt_2pi).epsilon(1e-15));

    const double k3 = 0.9;
    const std::int64_t n = 25;
    const EdgeworthExpansion e = build_expansion(skewed_1d(3, k3), n, 3);
    for (double x : {-2.5, -0.4, 0.0, 1.2, 2.8}) {
        const double p[1] = {x};
        const double want = std_normal_pdf(x) * (1.0 + k3 * hermite_he(3, x) / 6.0 / std::sqrt(25.0));
        CHECK(e.density(p) == doctest::Approx(want).epsilon(1e-14));
    }
    CHECK(e.density(x0) == std_normal_pdf(0.0));
    const double far[1] = {60.0};
    CHECK(e.density(far) == 0.0);

    const Polynomial& h0 = e.hermite(0);
    CHECK(h0.terms().size() == 1);
    CHECK(h0.coefficient(MultiIndex{0}) == 1.0);

    CumulantSet bad = skewed_1d(3, k3);
    bad.set(MultiIndex{2}, 1.5);
    CHECK_THROWS_AS(build_expansion(bad, n, 3), StandardizationError);
    CHECK_THROWS_AS(build_expansion(skewed_1d(3, k3), n, 4), UnsupportedOrder);
    CHECK_THROWS_AS(build_expansion(skewed_1d(3, k3), 0, 3), InvalidArgument);
}

TEST_CASE("symmetry when odd cumulants vanish") {
    CumulantSet c = unit_cumulants(2, 6);
    c.set(MultiIndex{4, 0}, 0.5);
    c.set(MultiIndex{2, 2}, -0.2);
    c.set(MultiIndex{1, 3}, 0.1);
    c.set(MultiIndex{6, 0}, 0.3);
    c.set(MultiIndex{3, 3}, -0.4);
    const EdgeworthExpansion e = build_expansion(c, 30, 6);
    Stream rng(2);
    for (int i = 0; i < 50; ++i) {
        const double x[2] = {4.0 * rng.uniform() - 2.0, 4.0 * rng.uniform() - 2.0};
        const double mx[2] = {-x[0], -x[1]};
        CHECK(e.density(x) == doctest::Approx(e.density(mx)).epsilon(1e-14));
    }
}

TEST_CASE("cdf_1d") {
    const EdgeworthExpansion gauss = gaussian_expansion(1);
    for (double t : {-3.0, -0.5, 0.0, 1.7}) CHECK(gauss.cdf_1d(t) == doctest::Approx(std_normal_cdf(t)));

    const EdgeworthExpansion e = build_expansion(skewed_1d(5, 1.0, 0.6), 10, 5);
    CHECK(e.cdf_1d(inf) == 1.0);
    CHECK(e.cdf_1d(-inf) == 0.0);

    const EdgeworthExpansion skew = build_expansion(skewed_1d(3, 1.0), 10, 3);
    for (double t : {-4.0, -1.5, -0.3, 0.0, 0.8, 2.2, 5.0}) {
        const double q = oracle::integrate(
            [&](double x) {
                const double p[1] = {x};
                return skew.density(p);
            },
            -inf, t);
        CHECK(std::abs(skew.cdf_1d(t) - q) <= 1e-10);
    }

    for (double t : {-2.0, -0.6, 0.1, 1.4}) {
        const double h = 1e-4;
        const double deriv = (e.cdf_1d(t + h) - e.cdf_1d(t - h)) / (2.0 * h);
        const double p[1] = {t};
        CHECK(std::abs(deriv - e.density(p)) <= 1e-6);
    }

    CHECK_THROWS_AS(gaussian_expansion(2).cdf_1d(0.0), DimensionError);
}

TEST_CASE("total mass is one") {
    Stream rng(31);
    for (int trial = 0; trial < 30; ++trial) {
        const int d = 1 + static_cast<int>(rng.below(3));
        const int s = 2 + static_cast<int>(rng.below(4));
        const auto n = static_cast<std::int64_t>(2 + rng.below(200));
        const EdgeworthExpansion e = build_expansion(random_standardized(d, s, rng), n, s);
        const MeasureResult r =
            set_measure(e, SetSpec::whole_space(static_cast<std::size_t>(d)), MeasureMethod::Quadrature);
        CHECK(std::abs(r.value - 1.0) <= 1e-8);
    }
}

TEST_CASE("set measure examples") {
    const EdgeworthExpansion g1 = gaussian_expansion(1);
    for (double r : {0.0, 0.5, 1.0, 2.5}) {
        const MeasureResult m = set_measure(g1, SetSpec::ball({0.0}, r), MeasureMethod::Quadrature);
        CHECK(m.value == doctest::Approx(2.0 * std_normal_cdf(r) - 1.0).epsilon(1e-13));
    }

    const EdgeworthExpansion g2 = gaussian_expansion(2);
    const MeasureResult disc = set_measure(g2, SetSpec::ball({0.0, 0.0}, 1.5), MeasureMethod::Quadrature);
    CHECK(disc.value == doctest::Approx(1.0 - std::exp(-1.125)).epsilon(1e-10));
    const MeasureResult half =
        set_measure(g2, SetSpec::half_space({1.0, 1.0}, 0.5), MeasureMethod::Quadrature);
    CHECK(half.value == doctest::Approx(std_normal_cdf(0.5 / std::sqrt(2.0))).epsilon(1e-10));

    CumulantSet c = unit_cumulants(2, 3);
    c.set(MultiIndex{3, 0}, 0.8);
    c.set(MultiIndex{2, 1}, -0.3);
    c.set(MultiIndex{0, 3}, 0.5);
    const EdgeworthExpansion e = build_expansion(c, 20, 3);
    const SetSpec box = SetSpec::box({0.0, 0.0}, {1.0, 1.0});
    const MeasureResult q = set_measure(e, box, MeasureMethod::Quadrature);
    MeasureBudget budget;
    budget.mc_samples = 2'000'000;
    budget.seed = 9;
    const MeasureResult mc = set_measure(e, box, MeasureMethod::GaussianImportanceMC, budget);
    CHECK(mc.error > 0.0);
    CHECK(std::abs(q.value - mc.value) <= 4.0 * (q.error + mc.error));

    for (const SetSpec& a : {SetSpec::ball({0.2, -0.4}, 1.1), SetSpec::half_space({-0.3, 1.0}, 0.2)}) {
        const MeasureResult qa = set_measure(e, a, MeasureMethod::Quadrature);
        const MeasureResult ma = set_measure(e, a, MeasureMethod::GaussianImportanceMC, budget);
        CHECK(qa.error < 1e-8);
        CHECK(std::abs(qa.value - ma.value) <= 4.0 * (qa.error + ma.error));
    }

    budget.mc_samples = 1000;
    budget.target_error = 1e-9;
    const MeasureResult poor = set_measure(e, box, MeasureMethod::GaussianImportanceMC, budget);
    CHECK_FALSE(poor.converged);

    CHECK_THROWS_AS(set_measure(g1, box, MeasureMethod::Quadrature), DimensionError);
}

TEST_CASE("json round trip") {
    Stream rng(4);
    const EdgeworthExpansion e = build_expansion(random_standardized(2, 5, rng), 40, 5);
    const EdgeworthExpansion back = expansion_from_json(to_json(e));
    CHECK(back.dimension() == 2);
    CHECK(back.order() == 5);
    CHECK(back.sample_size() == 40);
    for (int j = 0; j <= 3; ++j) CHECK(back.hermite(j).terms() == e.hermite(j).terms());
    const double x[2] = {0.4, -0.9};
    CHECK(back.density(x) == e.density(x));
    CHECK_THROWS_AS(expansion_from_json("{\"d\":1}"), InvalidArgument);
}

TEST_CASE("m_s norm") {
    const ProbeGrid grid{6.0, 0.1};
    const SetSpec ball = SetSpec::ball({0.0, 0.0}, 1.0);
    const ScoredFunction indicator = [&](std::span<const double> x) { return ball.contains(x) ? 1.0 : 0.0; };
    const GridSup ind = m_s_norm(indicator, 3, 2, grid);
    CHECK(ind.value <= 1.0);
    CHECK(ind.value == 1.0);

    const ScoredFunction zero = [](std::span<const double>) { return 0.0; };
    CHECK(m_s_norm(zero, 2, 2, grid).value == 0.0);

    const ScoredFunction power = [](std::span<const double> x) { return std::pow(std::abs(x[0]), 3); };
    const double small = m_s_norm(power, 3, 1, ProbeGrid{5.0, 0.05}).value;
    const double large = m_s_norm(power, 3, 1, ProbeGrid{50.0, 0.05}).value;
    CHECK(small < large);
    CHECK(large < 1.0);
    CHECK(large > 0.99999);
}

TEST_CASE("gaussian oscillation") {
    const SetSpec half = SetSpec::half_line(0.0);
    for (double eps : {0.01, 0.05, 0.2}) {
        const McEstimate m = gaussian_oscillation(half, eps, 1'000'000, 5);
        const double want = std_normal_cdf(eps) - std_normal_cdf(-eps);
        CHECK(std::abs(m.value - want) <= 4.0 * m.std_error + 1e-12);
    }
    CHECK(gaussian_oscillation(half, 1e-9, 100'000, 5).value == 0.0);

    // slope c = omega / eps stays stable across [1e-3, 1e-1] for a convex ball
    const SetSpec ball = SetSpec::ball({0.3, 0.0}, 1.0);
    std::vector<double> slopes;
    for (double eps : {1e-3, 1e-2, 1e-1}) {
        const McEstimate m = gaussian_oscillation(ball, eps, 4'000'000, 13);
        slopes.push_back(m.value / eps);
    }
    const auto [lo, hi] = std::minmax_element(slopes.begin(), slopes.end());
    CHECK(*hi / *lo < 1.15);
    CHECK_THROWS_AS(gaussian_oscillation(half, 0.0), InvalidArgument);
}

} // TEST_SUITE
