#pragma once

// Adaptive quadrature used by the numeric oracles. The domain is cut at
// caller-supplied break points so each piece sees the integrand on its own
// scale; the piece with the largest error estimate is then bisected until the
// summed estimate meets rel_tol times the L1 norm of the integrand. Measuring
// against L1 keeps cancelling integrands well-posed.
//
// Nodes and weights come from Boost (G15/K31); the driver is local because
// Boost's recursive driver reports leaf errors without the interval scale.

#include "errors.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

namespace loopreg::quadrature {

struct Result {
    double value = 0.0;
    double error = 0.0;
    double l1 = 0.0;
    std::size_t segments = 0;
};

inline constexpr std::size_t max_segments = 20000;

namespace detail_ {

struct Segment {
    double a;
    double b;
    double value;
    double error;
    double l1;

    bool operator<(const Segment& other) const { return error < other.error; }
};

template <class F>
Segment gauss_kronrod_31(const F& f, double a, double b)
{
    using Kronrod = boost::math::quadrature::gauss_kronrod<double, 31>;
    using Gauss = boost::math::quadrature::gauss<double, 15>;
    const auto& x = Kronrod::abscissa();
    const auto& wk = Kronrod::weights();
    const auto& wg = Gauss::weights();

    const double centre = 0.5 * (a + b);
    const double half = 0.5 * (b - a);

    const double f0 = f(centre);
    double kronrod = f0 * wk[0];
    double gauss = f0 * wg[0];
    double l1 = std::abs(f0) * wk[0];
    for (std::size_t i = 1; i < x.size(); ++i) {
        const double fp = f(centre + half * x[i]);
        const double fm = f(centre - half * x[i]);
        kronrod += (fp + fm) * wk[i];
        l1 += (std::abs(fp) + std::abs(fm)) * wk[i];
        if (i % 2 == 0) gauss += (fp + fm) * wg[i / 2];
    }
    const double error = std::abs((kronrod - gauss) * half);
    return {a, b, kronrod * half, error, l1 * half};
}

}  // namespace detail_

template <class F>
Result integrate_pieces(const F& f, const std::vector<double>& breaks, double rel_tol)
{
    detail::require(breaks.size() >= 2, "quadrature needs at least one interval");
    const double target = std::max(rel_tol, 50.0 * std::numeric_limits<double>::epsilon());
    std::priority_queue<detail_::Segment> queue;
    double error = 0.0;
    double l1 = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const auto seg = detail_::gauss_kronrod_31(f, breaks[i], breaks[i + 1]);
        error += seg.error;
        l1 += seg.l1;
        queue.push(seg);
    }

    while (error > target * l1 && queue.size() < max_segments) {
        const auto worst = queue.top();
        const double mid = 0.5 * (worst.a + worst.b);
        if (!(mid > worst.a && mid < worst.b)) break;  // out of resolution
        queue.pop();
        const auto left = detail_::gauss_kronrod_31(f, worst.a, mid);
        const auto right = detail_::gauss_kronrod_31(f, mid, worst.b);
        error += left.error + right.error - worst.error;
        l1 += left.l1 + right.l1 - worst.l1;
        queue.push(left);
        queue.push(right);
    }

    // re-sum from scratch to drop the drift of the running totals
    Result total;
    total.segments = queue.size();
    std::vector<double> values;
    while (!queue.empty()) {
        const auto& seg = queue.top();
        values.push_back(seg.value);
        total.error += seg.error;
        total.l1 += seg.l1;
        queue.pop();
    }
    std::sort(values.begin(), values.end(), [](double p, double q) { return std::abs(p) < std::abs(q); });
    for (double v : values) total.value += v;

    if (!std::isfinite(total.value) || !(total.error <= target * total.l1))
        throw NumericError("quadrature missed tolerance: error estimate " + std::to_string(total.error) +
                           " against L1 norm " + std::to_string(total.l1));
    return total;
}

/// \int_0^cutoff f, with break points at scale * 10^k.
template <class F>
Result integrate_radial(const F& f, double cutoff, double scale, double rel_tol)
{
    detail::require(cutoff > 0.0 && scale > 0.0, "radial quadrature needs positive cutoff and scale");
    std::vector<double> breaks{0.0};
    for (double b = scale; b < cutoff; b *= 10.0) breaks.push_back(b);
    breaks.push_back(cutoff);
    return integrate_pieces(f, breaks, rel_tol);
}

/// \int_a^b f for 0 < a < b, with break points at a * 10^k.
template <class F>
Result integrate_span(const F& f, double a, double b, double rel_tol)
{
    detail::require(a > 0.0 && b > a, "span quadrature needs 0 < a < b");
    std::vector<double> breaks{a};
    for (double x = a * 10.0; x < b; x *= 10.0) breaks.push_back(x);
    breaks.push_back(b);
    return integrate_pieces(f, breaks, rel_tol);
}

/// \int_a^b f for integrands with an integrable singularity at a
/// (ln(x - a) type); break points accumulate toward a.
template <class F>
Result integrate_toward_singular_start(const F& f, double a, double b, double rel_tol)
{
    detail::require(b > a, "quadrature interval must have b > a");
    std::vector<double> breaks;
    const double width = b - a;
    breaks.push_back(a);
    for (int k = 18; k >= 1; --k) breaks.push_back(a + width * std::pow(10.0, -k));
    breaks.push_back(b);
    return integrate_pieces(f, breaks, rel_tol);
}

}  // namespace loopreg::quadrature
