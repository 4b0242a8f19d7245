#include <catch_amalgamated.hpp>

#include <loopreg/feynpar.hpp>
#include <loopreg/quadrature.hpp>

#include <cmath>
#include <random>

using namespace loopreg;
using namespace loopreg::feynpar;
using Catch::Matchers::WithinRel;

TEST_CASE("mass function", "[feynpar]")
{
    const double m_sq = 2.5;
    SECTION("on shell M^2 = m^2 x^2")
    {
        const FeynmanMassFn fn(m_sq, m_sq);
        for (double x : {0.0, 0.25, 0.5, 1.0}) CHECK_THAT(mass_fn_eval(fn, x), WithinRel(m_sq * x * x, 1e-15));
    }
    SECTION("p^2 = 0 gives M^2 = m^2 x")
    {
        const FeynmanMassFn fn(0.0, m_sq);
        for (double x : {0.1, 0.5, 1.0}) CHECK(mass_fn_eval(fn, x) == m_sq * x);
    }
    SECTION("x = 1 gives m^2 for any p^2")
    {
        for (double p_sq : {-3.0, 0.0, 1.0, 2.5, 9.0}) CHECK_THAT(mass_fn_eval(FeynmanMassFn(p_sq, m_sq), 1.0), WithinRel(m_sq, 1e-15));
    }
    SECTION("domain")
    {
        CHECK_THROWS_AS(mass_fn_eval(FeynmanMassFn(1.0, m_sq), 1.5), DomainError);
        CHECK_THROWS_AS(FeynmanMassFn(1.0, 0.0), DomainError);
        CHECK_THROWS_AS(FeynmanMassFn(4.0, 1.0).require_real_log(), DomainError);
    }
}

TEST_CASE("mass function is non-negative for 0 <= p^2 <= m^2", "[feynpar][property]")
{
    for (double m_sq : {0.01, 1.0, 100.0})
        for (int i = 0; i <= 10; ++i) {
            const double p_sq = m_sq * i / 10.0;
            const FeynmanMassFn fn(p_sq, m_sq);
            for (int j = 0; j <= 20; ++j) CHECK(mass_fn_eval(fn, j / 20.0) >= 0.0);
        }
}

TEST_CASE("exact poly-log integrals", "[feynpar]")
{
    CHECK(integrate_poly_log({{Rational{2}, Rational{2}}, 0}) == Rational{3});
    CHECK(integrate_poly_log({{Rational{4}, Rational{4}}, 1}) == Rational{-5});
    CHECK(integrate_poly_log({{Rational{1}}, 1}) == Rational{-1});
    CHECK(integrate_poly_log({{}, 0}) == Rational{0});
    CHECK_THROWS_AS(integrate_poly_log({{Rational{1}}, 2}), DomainError);
}

TEST_CASE("exact integrals agree with quadrature for random polynomials", "[feynpar][property]")
{
    std::mt19937 rng(20241017);
    std::uniform_int_distribution<int> num(-20, 20);
    std::uniform_int_distribution<int> den(1, 9);
    std::uniform_int_distribution<int> degree(0, 6);
    for (int trial = 0; trial < 50; ++trial) {
        PolyLogIntegrand integrand;
        const int d = degree(rng);
        for (int k = 0; k <= d; ++k) integrand.coeffs.emplace_back(num(rng), den(rng));
        integrand.log_weight = trial % 2;

        auto f = [&](double x) {
            double p = 0.0;
            for (std::size_t k = integrand.coeffs.size(); k-- > 0;) p = p * x + to_double(integrand.coeffs[k]);
            return integrand.log_weight ? p * std::log(x) : p;
        };
        const double exact = to_double(integrate_poly_log(integrand));
        const double numeric = quadrature::integrate_toward_singular_start(f, 0.0, 1.0, 1e-13).value;
        INFO("trial " << trial);
        CHECK(std::abs(numeric - exact) <= 1e-10 * std::max(1.0, std::abs(exact)));
    }
}

TEST_CASE("log split of ln M^2(x)", "[feynpar]")
{
    const double m_sq = 3.0;
    const auto on_shell = log_split(FeynmanMassFn(m_sq, m_sq));
    CHECK(on_shell.mass_log == Rational{1});
    CHECK(on_shell.x_log == Rational{2});
    for (double x : {1e-6, 0.3, 0.9}) {
        const double direct = std::log(mass_fn_eval(FeynmanMassFn(m_sq, m_sq), x));
        CHECK_THAT(std::log(m_sq) + 2.0 * std::log(x), WithinRel(direct, 1e-13));
    }
    const auto massless = log_split(FeynmanMassFn(0.0, m_sq));
    CHECK(massless.x_log == Rational{1});
    CHECK_THROWS_AS(log_split(FeynmanMassFn(1.0, m_sq)), DomainError);
}
