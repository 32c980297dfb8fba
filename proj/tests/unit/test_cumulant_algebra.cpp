#include <doctest.h>

#include "oracles.hpp"

#include <uedge/cumulants.hpp>
#include <uedge/error.hpp>
#include <uedge/families.hpp>
#include <uedge/rng.hpp>

#include <cmath>
#include <random>

using namespace uedge;

TEST_SUITE("cumulant_algebra") {

TEST_CASE("enumeration order and counts") {
    const auto one = enumerate_multi_indices(1, 2);
    REQUIRE(one.size() == 3);
    CHECK(one[0] == MultiIndex{0});
    CHECK(one[1] == MultiIndex{1});
    CHECK(one[2] == MultiIndex{2});

    const auto two = enumerate_multi_indices(2, 1);
    REQUIRE(two.size() == 3);
    CHECK(two[1] == MultiIndex{1, 0});
    CHECK(two[2] == MultiIndex{0, 1});

    const auto order2 = multi_indices_of_order(2, 2);
    CHECK(order2 == std::vector<MultiIndex>{{2, 0}, {1, 1}, {0, 2}});

    for (int d = 1; d <= 3; ++d) {
        for (int s = 0; s <= 6; ++s) {
            const auto all = enumerate_multi_indices(d, s);
            // brute-force count over the cube [0, s]^d
            std::size_t brute = 0;
            std::vector<int> e(static_cast<std::size_t>(d), 0);
            for (;;) {
                int sum = 0;
                for (int v : e) sum += v;
                if (sum <= s) ++brute;
                std::size_t k = 0;
                while (k < e.size() && ++e[k] > s) e[k++] = 0;
                if (k == e.size()) break;
            }
            CHECK(all.size() == brute);
            CHECK(static_cast<double>(all.size()) == doctest::Approx(binomial(d + s, d)));
            CHECK(std::is_sorted(all.begin(), all.end()));
        }
    }
    CHECK(enumerate_multi_indices(2, 3).size() == 10);
}

TEST_CASE("enumeration errors and invariants") {
    CHECK_THROWS_AS(enumerate_multi_indices(0, 2), InvalidArgument);
    CHECK_THROWS_AS(enumerate_multi_indices(2, -1), InvalidArgument);
    CHECK_THROWS_AS(MultiIndex({1, -1}), InvalidArgument);
    const MultiIndex nu{3, 1, 2};
    CHECK(nu.order() == 6);
    CHECK(nu.factorial() == 12.0);
    CHECK_THROWS_AS(MultiIndex({1, 0}) - MultiIndex({0, 1}), InvalidArgument);
}

TEST_CASE("raw moments") {
    const Dataset two = Dataset::from_values({0.0, 2.0});
    const MomentSet m = raw_moments(two, 2);
    CHECK(m.at(MultiIndex{0}) == 1.0);
    CHECK(m.at(MultiIndex{1}) == 1.0);
    CHECK(m.at(MultiIndex{2}) == 2.0);

    const auto reg = register_builtin_families();
    const MomentSet g = reg.make("gaussian").moments(4);
    CHECK(g.at(MultiIndex{1}) == doctest::Approx(0.0));
    CHECK(g.at(MultiIndex{2}) == doctest::Approx(1.0));
    CHECK(g.at(MultiIndex{3}) == doctest::Approx(0.0));
    CHECK(g.at(MultiIndex{4}) == doctest::Approx(3.0));

    Stream rng(42);
    std::vector<double> u(100);
    for (auto& v : u) v = rng.uniform();
    const double m1 = raw_moments(Dataset::from_values(u), 1).at(MultiIndex{1});
    CHECK(std::abs(m1 - 0.5) <= 3.0 * std::sqrt(1.0 / 12.0 / 100.0));

    CHECK_THROWS_AS(m.at(MultiIndex{3}), UnsupportedOrder);
}

TEST_CASE("moments to cumulants: examples") {
    const auto reg = register_builtin_families();
    const CumulantSet g = moments_to_cumulants(reg.make("gaussian").moments(6));
    CHECK(g.at(MultiIndex{3}) == doctest::Approx(0.0));
    CHECK(g.at(MultiIndex{4}) == doctest::Approx(0.0));

    MomentSet m(1, 3);
    m.set(MultiIndex{1}, 0.0);
    m.set(MultiIndex{2}, 1.0);
    m.set(MultiIndex{3}, 0.5);
    CHECK(moments_to_cumulants(m).at(MultiIndex{3}) == doctest::Approx(0.5).epsilon(1e-15));

    MomentSet m4(1, 4);
    m4.set(MultiIndex{2}, 1.0);
    m4.set(MultiIndex{4}, 3.7);
    CHECK(moments_to_cumulants(m4).at(MultiIndex{4}) == doctest::Approx(0.7).epsilon(1e-14));

    MomentSet bad(1, 2);
    bad.set(MultiIndex{0}, 0.5);
    CHECK_THROWS_AS(moments_to_cumulants(bad), InvalidArgument);
}

TEST_CASE("moments to cumulants matches the rational log-series oracle") {
    Stream rng(7);
    for (int d = 1; d <= 3; ++d) {
        const int s = d == 3 ? 5 : 6;
        // moments of a small dataset with dyadic coordinates are exact rationals
        const std::size_t n = 5;
        std::vector<double> v(n * static_cast<std::size_t>(d));
        for (auto& x : v) x = static_cast<double>(static_cast<int>(rng.below(9)) - 4) / 4.0;
        const Dataset data(static_cast<std::size_t>(d), v);
        const MomentSet m = raw_moments(data, s);
        std::map<std::vector<int>, oracle::Rational> exact;
        for (const MultiIndex& nu : m.indices()) {
            oracle::Rational sum = 0;
            for (std::size_t i = 0; i < n; ++i) {
                oracle::Rational p = 1;
                for (std::size_t k = 0; k < static_cast<std::size_t>(d); ++k) {
                    const oracle::Rational x(static_cast<int>(data(i, k) * 4.0), 4);
                    for (int e = 0; e < nu[k]; ++e) p *= x;
                }
                sum += p;
            }
            exact[nu.entries()] = sum / static_cast<int>(n);
        }
        const auto expected = oracle::cumulants_by_log_series(exact, s);
        const CumulantSet c = moments_to_cumulants(m);
        for (const MultiIndex& nu : c.indices()) {
            const auto it = expected.find(nu.entries());
            const double want = it == expected.end() ? 0.0 : static_cast<double>(it->second);
            CHECK(c.at(nu) == doctest::Approx(want).epsilon(1e-12).scale(1.0));
        }
    }
}

TEST_CASE("round trip on random moment tables") {
    Stream rng(11);
    std::normal_distribution<double> normal;
    for (int trial = 0; trial < 60; ++trial) {
        const int d = 1 + static_cast<int>(rng.below(3));
        const int s = 2 + static_cast<int>(rng.below(5));
        std::vector<double> v(40 * static_cast<std::size_t>(d));
        for (auto& x : v) x = 0.5 + normal(rng);
        const MomentSet m = raw_moments(Dataset(static_cast<std::size_t>(d), v), s);
        const MomentSet back = cumulants_to_moments(moments_to_cumulants(m));
        for (const MultiIndex& nu : m.indices()) {
            CHECK(back.at(nu) == doctest::Approx(m.at(nu)).epsilon(1e-12));
        }
    }
}

TEST_CASE("additivity under independent sums") {
    // X ~ uniform on {0, 1, 3}, Y ~ uniform on {-1, 2}; moments of X + Y by convolution
    const std::vector<double> xs{0.0, 1.0, 3.0}, ys{-1.0, 2.0};
    std::vector<double> sums;
    for (double x : xs) {
        for (double y : ys) sums.push_back(x + y);
    }
    const int s = 6;
    const CumulantSet cx = moments_to_cumulants(raw_moments(Dataset::from_values(xs), s));
    const CumulantSet cy = moments_to_cumulants(raw_moments(Dataset::from_values(ys), s));
    const CumulantSet cs = moments_to_cumulants(raw_moments(Dataset::from_values(sums), s));
    for (const MultiIndex& nu : cs.indices()) {
        CHECK(cs.at(nu) == doctest::Approx(cx.at(nu) + cy.at(nu)).epsilon(1e-11).scale(1.0));
    }
}

TEST_CASE("affine equivariance in one dimension") {
    const Dataset data = Dataset::from_values({0.3, -1.2, 2.5, 0.7, 1.1});
    const CumulantSet c = moments_to_cumulants(raw_moments(data, 6));
    const double shift[1] = {1.75};
    const CumulantSet shifted = moments_to_cumulants(raw_moments(data.shifted(shift), 6));
    CHECK(shifted.at(MultiIndex{1}) == doctest::Approx(c.at(MultiIndex{1}) + 1.75));
    for (int k = 2; k <= 6; ++k) {
        CHECK(shifted.at(MultiIndex{k}) == doctest::Approx(c.at(MultiIndex{k})).epsilon(1e-10).scale(1.0));
    }
    const double lambda = -1.6;
    const CumulantSet scaled = moments_to_cumulants(raw_moments(data.scaled(lambda), 6));
    for (int k = 1; k <= 6; ++k) {
        CHECK(scaled.at(MultiIndex{k}) == doctest::Approx(std::pow(lambda, k) * c.at(MultiIndex{k})).epsilon(1e-11));
    }
}

TEST_CASE("averaged standardized cumulants") {
    Matrix V(1, 1);
    V(0, 0) = 2.0 / 3.0;
    const CumulantSet sym = averaged_standardized_cumulants(Dataset::from_values({-1.0, 0.0, 1.0}), 4, V);
    CHECK(sym.at(MultiIndex{2}) == doctest::Approx(1.0));
    CHECK(sym.at(MultiIndex{3}) == doctest::Approx(0.0));
    CHECK(sym.standardized());

    // Gaussian unit: higher cumulants stay zero after standardization
    CumulantSet gauss(2, 4);
    gauss.set(MultiIndex{2, 0}, 4.0);
    gauss.set(MultiIndex{1, 1}, 1.0);
    gauss.set(MultiIndex{0, 2}, 2.0);
    Matrix G(2, 2);
    G << 4.0, 1.0, 1.0, 2.0;
    const CumulantSet units1[1] = {gauss};
    const CumulantSet gs = averaged_standardized_cumulants(units1, 4, G);
    CHECK(gs.standardized(1e-12));
    for (const MultiIndex& nu : gs.indices()) {
        if (nu.order() >= 3) CHECK(gs.at(nu) == doctest::Approx(0.0));
    }

    CumulantSet a(1, 3), b(1, 3);
    a.set(MultiIndex{2}, 1.0);
    b.set(MultiIndex{2}, 1.0);
    a.set(MultiIndex{3}, 0.8);
    b.set(MultiIndex{3}, -0.2);
    const CumulantSet units[2] = {a, b};
    const CumulantSet avg = averaged_standardized_cumulants(units, 3, Matrix::Identity(1, 1));
    CHECK(avg.at(MultiIndex{3}) == doctest::Approx(0.3));

    Matrix singular(2, 2);
    singular << 1.0, 1.0, 1.0, 1.0;
    CHECK_THROWS_AS(averaged_standardized_cumulants(units1, 3, singular), StandardizationError);
    Matrix asym(2, 2);
    asym << 1.0, 0.5, 0.0, 1.0;
    CHECK_THROWS_AS(averaged_standardized_cumulants(units1, 3, asym), StandardizationError);
}

TEST_CASE("multilinear transformation matches transformed data") {
    Stream rng(3);
    std::normal_distribution<double> normal;
    std::vector<double> v(2 * 30);
    for (auto& x : v) x = normal(rng) + 0.3 * x;
    const Dataset data(2, v);
    Matrix A(2, 2);
    A << 0.7, -1.3, 0.4, 2.1;
    std::vector<double> w(v.size());
    for (std::size_t i = 0; i < 30; ++i) {
        w[2 * i] = A(0, 0) * v[2 * i] + A(0, 1) * v[2 * i + 1];
        w[2 * i + 1] = A(1, 0) * v[2 * i] + A(1, 1) * v[2 * i + 1];
    }
    const CumulantSet direct = moments_to_cumulants(raw_moments(Dataset(2, w), 5));
    const CumulantSet mapped = transform_cumulants(moments_to_cumulants(raw_moments(data, 5)), A);
    for (const MultiIndex& nu : direct.indices()) {
        CHECK(mapped.at(nu) == doctest::Approx(direct.at(nu)).epsilon(1e-9).scale(1.0));
    }
}

TEST_CASE("chi polynomials") {
    CumulantSet c(1, 3);
    c.set(MultiIndex{2}, 1.0);
    c.set(MultiIndex{3}, 0.9);
    const Polynomial p3 = chi_poly(3, c);
    CHECK(p3.terms().size() == 1);
    CHECK(p3.coefficient(MultiIndex{3}) == doctest::Approx(0.9));

    CumulantSet s2(2, 2);
    s2.set(MultiIndex{2, 0}, 1.0);
    s2.set(MultiIndex{0, 2}, 1.0);
    const Polynomial q = chi_poly(2, s2);
    CHECK(q.coefficient(MultiIndex{2, 0}) == doctest::Approx(1.0));
    CHECK(q.coefficient(MultiIndex{1, 1}) == 0.0);
    CHECK(q.coefficient(MultiIndex{0, 2}) == doctest::Approx(1.0));
    CHECK(q.terms().size() == 2);

    CumulantSet zero(2, 4);
    CHECK(chi_poly(4, zero).is_zero());
    CHECK_THROWS_AS(chi_poly(4, c), UnsupportedOrder);
    CHECK_THROWS_AS(chi_poly(0, c), UnsupportedOrder);

    // linearity in the cumulant table
    Stream rng(5);
    CumulantSet c1(2, 4), c2(2, 4);
    for (const MultiIndex& nu : c1.indices()) {
        c1.set(nu, rng.uniform() - 0.5);
        c2.set(nu, rng.uniform() - 0.5);
    }
    const double a = 1.7, b = -0.6;
    for (int j = 1; j <= 4; ++j) {
        const Polynomial lhs = chi_poly(j, a * c1 + b * c2);
        const Polynomial rhs = a * chi_poly(j, c1) + b * chi_poly(j, c2);
        for (const MultiIndex& nu : multi_indices_of_order(2, j)) {
            CHECK(lhs.coefficient(nu) == doctest::Approx(rhs.coefficient(nu)).epsilon(1e-14).scale(1.0));
        }
    }
}

} // TEST_SUITE
