#pragma once

// Cutoff-quadrature oracle for the scalar loop integrals.
//
// After Wick rotation (K^0 = i k^4, d^4K = i d^4k_E, d^4k_E = 2 pi^2 k^3 dk):
//
//     \int_{|k|<Lambda} d^4K/(2pi)^4 (K^2 - M^2)^{-n}
//         = i (-1)^n/(8 pi^2) R_n(Lambda),
//     R_n(Lambda) = \int_0^Lambda k^3 (k^2 + M^2)^{-n} dk.
//
// In units of i/(16 pi^2) that is 2 (-1)^n R_n(Lambda). All of this runs in
// double precision and never touches the exact kernel.

#include "constants.hpp"
#include "errors.hpp"
#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace loopreg::oracle {

struct CutoffProbe {
    int power = 2;
    double mass_sq = 1.0;
    std::vector<double> cutoffs;
    double rel_tol = 1e-10;

    void validate() const
    {
        detail::require(power >= 1, "probe power must be >= 1");
        detail::require(mass_sq > 0.0, "probe M^2 must be positive");
        detail::require(rel_tol > 0.0 && rel_tol <= 1e-6, "probe relTol must lie in (0, 1e-6]");
        detail::require(!cutoffs.empty(), "probe needs at least one cutoff");
        detail::require(cutoffs.front() > 0.0, "cutoffs must be positive");
        detail::require(std::adjacent_find(cutoffs.begin(), cutoffs.end(), std::greater_equal<>()) == cutoffs.end(),
                        "cutoffs must be strictly increasing");
    }

    double decades() const { return std::log10(cutoffs.back() / cutoffs.front()); }
};

inline auto radial_integrand(int n, double mass_sq)
{
    return [=](double k) { return k * k * k * std::pow(k * k + mass_sq, -n); };
}

/// R_n(Lambda) by adaptive quadrature.
inline double radial_integral(int n, double mass_sq, double cutoff, double rel_tol = 1e-10)
{
    detail::require(n >= 1, "power must be >= 1");
    detail::require(mass_sq > 0.0, "M^2 must be positive");
    detail::require(cutoff > 0.0, "cutoff must be positive");
    return quadrature::integrate_radial(radial_integrand(n, mass_sq), cutoff, std::sqrt(mass_sq), rel_tol).value;
}

/// R_n(upper) - R_n(lower), integrated directly over the shell.
inline double radial_shell(int n, double mass_sq, double lower, double upper, double rel_tol = 1e-10)
{
    detail::require(n >= 1 && mass_sq > 0.0, "invalid radial shell arguments");
    return quadrature::integrate_span(radial_integrand(n, mass_sq), lower, upper, rel_tol).value;
}

/// R_n(Lambda) from the antiderivative in u = k^2:
/// (1/2) \int_0^U u (u + a)^{-n} du, U = Lambda^2.
inline double radial_antiderivative(int n, double mass_sq, double cutoff)
{
    detail::require(n >= 1 && mass_sq > 0.0 && cutoff > 0.0, "invalid radial antiderivative arguments");
    const double a = mass_sq;
    const double u = cutoff * cutoff;
    if (n == 1) return 0.5 * (u - a * std::log1p(u / a));
    if (n == 2) return 0.5 * (std::log1p(u / a) + a / (u + a) - 1.0);
    auto primitive = [=](double v) {
        return std::pow(v + a, 2 - n) / (2 - n) - a * std::pow(v + a, 1 - n) / (1 - n);
    };
    return 0.5 * (primitive(u) - primitive(0.0));
}

/// Cutoff integral in units of i/(16 pi^2).
inline double wick_rotated_radial(int n, double mass_sq, double cutoff, double rel_tol = 1e-10)
{
    const double sign = (n % 2 == 0) ? 1.0 : -1.0;
    return 2.0 * sign * radial_integral(n, mass_sq, cutoff, rel_tol);
}

/// Increments R_n(Lambda_{i+1}) - R_n(Lambda_i) along the probe grid.
inline std::vector<double> shell_increments(const CutoffProbe& probe)
{
    probe.validate();
    std::vector<double> out;
    for (std::size_t i = 0; i + 1 < probe.cutoffs.size(); ++i)
        out.push_back(radial_shell(probe.power, probe.mass_sq, probe.cutoffs[i], probe.cutoffs[i + 1], probe.rel_tol));
    return out;
}

/// R_n at every cutoff of the probe, in grid order.
inline std::vector<double> sweep(const CutoffProbe& probe)
{
    probe.validate();
    std::vector<double> out{radial_integral(probe.power, probe.mass_sq, probe.cutoffs.front(), probe.rel_tol)};
    for (double inc : shell_increments(probe)) out.push_back(out.back() + inc);
    return out;
}

enum class Divergence { convergent, log, linear, quadratic };

inline std::string to_string(Divergence d)
{
    switch (d) {
        case Divergence::convergent: return "convergent";
        case Divergence::log: return "log";
        case Divergence::linear: return "linear";
        case Divergence::quadratic: return "quadratic";
    }
    return "unknown";
}

struct Signature {
    Divergence kind = Divergence::convergent;
    double growth_exponent = 0.0;  ///< d ln(dR/d ln Lambda)/d ln Lambda at the top of the grid
    double coefficient = 0.0;      ///< log: dR/d ln Lambda; power law: c in R ~ c Lambda^p; convergent: last increment
};

/// Classifies how R_n(Lambda) grows across the probe grid.
inline Signature divergence_signature(const CutoffProbe& probe)
{
    probe.validate();
    detail::require(probe.cutoffs.size() >= 4, "divergence signature needs at least 4 cutoffs");
    detail::require(probe.decades() >= 3.0 - 1e-12, "divergence signature needs a grid spanning >= 3 decades");

    const auto increments = shell_increments(probe);
    const auto& grid = probe.cutoffs;
    const std::size_t m = grid.size();

    // slopes dR/d ln Lambda on the last two grid intervals
    auto slope = [&](std::size_t i) { return increments[i] / std::log(grid[i + 1] / grid[i]); };
    const double s_prev = slope(m - 3);
    const double s_last = slope(m - 2);
    const double mid_prev = 0.5 * (std::log(grid[m - 3]) + std::log(grid[m - 2]));
    const double mid_last = 0.5 * (std::log(grid[m - 2]) + std::log(grid[m - 1]));

    Signature sig;
    if (s_last <= 0.0 || s_prev <= 0.0) {
        sig.kind = Divergence::convergent;
        sig.growth_exponent = -std::numeric_limits<double>::infinity();
        sig.coefficient = increments.back();
        return sig;
    }
    sig.growth_exponent = std::log(s_last / s_prev) / (mid_last - mid_prev);
    const double p = sig.growth_exponent;
    if (p < -0.5) {
        sig.kind = Divergence::convergent;
        sig.coefficient = increments.back();
    } else if (p <= 0.5) {
        sig.kind = Divergence::log;
        sig.coefficient = s_last;
    } else if (p <= 1.5) {
        sig.kind = Divergence::linear;
        sig.coefficient = increments.back() / (grid[m - 1] - grid[m - 2]);
    } else {
        sig.kind = Divergence::quadratic;
        sig.coefficient = increments.back() / (grid[m - 1] * grid[m - 1] - grid[m - 2] * grid[m - 2]);
    }
    return sig;
}

/// lim_{Lambda->inf} [R_2(Lambda) - ln Lambda], extrapolated from the two
/// largest cutoffs with a fit A + B/Lambda^2.
inline double asymptote_constant(const CutoffProbe& probe)
{
    probe.validate();
    detail::require(probe.power == 2, "asymptote constant is defined for the log-divergent n = 2 probe only");
    detail::require(probe.cutoffs.size() >= 2, "asymptote constant needs at least two cutoffs");
    detail::require(probe.decades() >= 4.0 - 1e-12, "asymptote constant needs a grid spanning >= 4 decades");

    const std::size_t m = probe.cutoffs.size();
    const double l1 = probe.cutoffs[m - 2];
    const double l2 = probe.cutoffs[m - 1];
    const double f1 = radial_integral(2, probe.mass_sq, l1, probe.rel_tol) - std::log(l1);
    const double f2 = radial_integral(2, probe.mass_sq, l2, probe.rel_tol) - std::log(l2);
    return (f2 * l2 * l2 - f1 * l1 * l1) / (l2 * l2 - l1 * l1);
}

}  // namespace loopreg::oracle
