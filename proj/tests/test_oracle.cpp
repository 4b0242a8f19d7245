#include <catch_amalgamated.hpp>

#include <loopreg/oracle.hpp>

#include <cmath>
#include <numbers>

using namespace loopreg;
using namespace loopreg::oracle;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("quadrature matches the analytic antiderivative", "[oracle][property]")
{
    for (int n = 1; n <= 6; ++n)
        for (double s : {0.5, 1.0, 2.0, 10.0})
            for (double cutoff : {0.3, 10.0, 1e3, 1e6}) {
                const double numeric = radial_integral(n, s, cutoff);
                const double exact = radial_antiderivative(n, s, cutoff);
                INFO("n=" << n << " s=" << s << " cutoff=" << cutoff);
                CHECK(std::abs(numeric - exact) <= 1e-10 * std::abs(exact));
            }
}

TEST_CASE("wick_rotated_radial examples", "[oracle]")
{
    SECTION("n = 3 converges to -i/(32 pi^2)")
    {
        CHECK_THAT(wick_rotated_radial(3, 1.0, 1e6), WithinRel(-0.5, 1e-10));
    }
    SECTION("n = 2 radial part at Lambda = 10")
    {
        CHECK_THAT(radial_integral(2, 1.0, 10.0), WithinRel(1.81251075347013467, 1e-12));
        CHECK_THAT(wick_rotated_radial(2, 1.0, 10.0), WithinRel(2.0 * 1.81251075347013467, 1e-12));
    }
    SECTION("n = 1 grows quadratically")
    {
        const double lambda = 1e4;
        const double r1 = radial_integral(1, 1.0, lambda);
        const double r2 = radial_integral(1, 1.0, 2.0 * lambda);
        const double r4 = radial_integral(1, 1.0, 4.0 * lambda);
        CHECK_THAT((r4 - r2) / (r2 - r1), WithinRel(4.0, 1e-6));
    }
    SECTION("bad arguments")
    {
        CHECK_THROWS_AS(radial_integral(0, 1.0, 1.0), DomainError);
        CHECK_THROWS_AS(radial_integral(2, 0.0, 1.0), DomainError);
        CHECK_THROWS_AS(radial_integral(2, 1.0, -1.0), DomainError);
    }
}

TEST_CASE("divergence signature", "[oracle]")
{
    CutoffProbe probe{2, 1.0, {1e2, 1e3, 1e4, 1e5}};

    SECTION("n = 2 is logarithmic with unit slope")
    {
        const auto sig = divergence_signature(probe);
        CHECK(sig.kind == Divergence::log);
        CHECK_THAT(sig.coefficient, WithinRel(1.0, 0.01));
    }
    SECTION("n = 3 is convergent with Lambda^-2 tails")
    {
        probe.power = 3;
        const auto sig = divergence_signature(probe);
        CHECK(sig.kind == Divergence::convergent);
        CHECK_THAT(sig.growth_exponent, WithinAbs(-2.0, 0.05));
        const auto inc = shell_increments(probe);
        for (std::size_t i = 0; i + 1 < inc.size(); ++i) CHECK_THAT(inc[i + 1] / inc[i], WithinRel(0.01, 0.01));
    }
    SECTION("n = 1 is quadratic")
    {
        probe.power = 1;
        const auto sig = divergence_signature(probe);
        CHECK(sig.kind == Divergence::quadratic);
        CHECK_THAT(sig.growth_exponent, WithinAbs(2.0, 0.05));
        CHECK_THAT(sig.coefficient, WithinRel(0.5, 1e-6));
    }
    SECTION("grid requirements")
    {
        CHECK_THROWS_AS(divergence_signature(CutoffProbe{2, 1.0, {1e2, 1e3, 1e4}}), DomainError);
        CHECK_THROWS_AS(divergence_signature(CutoffProbe{2, 1.0, {1e2, 2e2, 5e2, 1e3}}), DomainError);
        CHECK_THROWS_AS(divergence_signature(CutoffProbe{2, 1.0, {1e2, 1e4, 1e3, 1e5}}), DomainError);
        CHECK_THROWS_AS(divergence_signature(CutoffProbe{2, 1.0, {1e2, 1e3, 1e4, 1e5}, 1e-3}), DomainError);
    }
}

TEST_CASE("sweep accumulates shells consistently", "[oracle]")
{
    const CutoffProbe probe{2, 2.0, {1.0, 10.0, 100.0, 1000.0}};
    const auto values = sweep(probe);
    for (std::size_t i = 0; i < values.size(); ++i)
        CHECK_THAT(values[i], WithinRel(radial_antiderivative(2, 2.0, probe.cutoffs[i]), 1e-10));
}

TEST_CASE("asymptote constant", "[oracle]")
{
    const std::vector<double> grid{1e1, 1e2, 1e3, 1e4, 1e5};
    SECTION("M^2 = 1 gives -1/2")
    {
        CHECK_THAT(asymptote_constant({2, 1.0, grid}), WithinAbs(-0.5, 1e-9));
    }
    SECTION("M^2 = e^2 gives -3/2")
    {
        CHECK_THAT(asymptote_constant({2, std::exp(2.0), grid}), WithinAbs(-1.5, 1e-9));
    }
    SECTION("differences depend only on ln(M_a^2/M_b^2)")
    {
        for (auto [a, b] : {std::pair{0.5, 2.0}, std::pair{1.0, 7.0}, std::pair{3.0, 0.2}}) {
            const double diff = asymptote_constant({2, a, grid}) - asymptote_constant({2, b, grid});
            CHECK_THAT(diff, WithinAbs(-0.5 * std::log(a / b), 1e-6));
        }
    }
    SECTION("only the log probe has an asymptote")
    {
        CHECK_THROWS_AS(asymptote_constant({3, 1.0, grid}), DomainError);
        CHECK_THROWS_AS(asymptote_constant({2, 1.0, {1e2, 1e3, 1e4}}), DomainError);
    }
}

TEST_CASE("differences at finite cutoff are Lambda-stable", "[oracle][property]")
{
    const double a = 0.5;
    const double b = 2.0;
    const double d4 = radial_integral(2, a, 1e4) - radial_integral(2, b, 1e4);
    const double d5 = radial_integral(2, a, 1e5) - radial_integral(2, b, 1e5);
    const double d6 = radial_integral(2, a, 1e6) - radial_integral(2, b, 1e6);
    CHECK_THAT(d5, WithinAbs(d6, 1e-6));
    CHECK_THAT(d4, WithinAbs(d6, 1e-6));
    CHECK_THAT(d6, WithinAbs(-0.5 * std::log(a / b), 1e-6));
}
