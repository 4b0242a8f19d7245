#pragma once

// One-loop electron self-energy through the regularization kernel.
//
// Sign convention: with e < 0 and hbar = c = 1,
//
//     -i Sigma(p) = -e^2 \int_0^1 dx [a(x) pslash + b] I(M^2(x)),
//     a(x) = -2(1 - x),  b = 4m,
//
// and I = i/(16 pi^2) * c * ln(M^2/mu1^2) from the kernel (c = -1). Hence
//
//     Sigma = alpha/(4 pi) * c * \int_0^1 dx [a(x) pslash + b] ln(M^2(x)/mu1^2),
//
// and the mass shift is Sigma on shell (pslash -> m, p^2 = m^2). No further
// sign is inserted anywhere; the pipeline lands on (5, -3) by itself.

#include "constants.hpp"
#include "errors.hpp"
#include "feynpar.hpp"
#include "kernel.hpp"
#include "quadrature.hpp"

#include <boost/math/tools/roots.hpp>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace loopreg::qed {

struct SelfEnergyKernel {
    std::vector<Rational> slash_coeffs;   ///< a(x) = -2 + 2x, multiplies pslash
    std::vector<Rational> scalar_coeffs;  ///< b(x) / m = 4
    double p_sq;
    double m;
    double alpha;

    SelfEnergyKernel(double p_sq_, double m_, double alpha_)
        : slash_coeffs{Rational{-2}, Rational{2}}, scalar_coeffs{Rational{4}}, p_sq(p_sq_), m(m_), alpha(alpha_)
    {
        detail::require(m > 0.0, "electron mass must be positive");
        detail::require(alpha > 0.0, "alpha must be positive");
        detail::require(std::isfinite(p_sq), "p^2 must be finite");
    }

    static SelfEnergyKernel on_shell(double m, double alpha) { return {m * m, m, alpha}; }

    feynpar::FeynmanMassFn mass_fn() const { return {p_sq, m * m}; }
};

struct MassShift {
    double delta_m;  ///< GeV
};

namespace detail_ {

inline void require_positive(double m, double alpha, double mu1)
{
    detail::require(m > 0.0, "m must be positive");
    detail::require(alpha > 0.0, "alpha must be positive");
    detail::require(mu1 > 0.0, "mu1 must be positive");
}

/// Coefficient c of ln(M^2/mu1^2) in I_2, in units of i/(16 pi^2).
inline Rational log_coefficient_of_i2()
{
    const auto value = kernel::regularize(kernel::ScalarLoopIntegral(2));
    const auto terms = value.expanded_terms();
    const auto constants = value.expanded_constant_terms();
    if (terms.size() != 1 || !terms[0].has_log || terms[0].mass_sq_power != 0 || constants.size() != 1 ||
        constants[0].mass_sq_power != 0 || constants[0].coeff != terms[0].coeff ||
        value.ledger.at(constants[0].index).mass_dimension != 0)
        throw std::logic_error("I_2 is not of the form c (ln M^2 + C1)");
    return terms[0].coeff;
}

}  // namespace detail_

/// alpha m/(4 pi) (5 - 3 ln(m^2/mu1^2)), written out directly.
inline MassShift on_shell_mass_shift(double m, double alpha, double mu1)
{
    detail_::require_positive(m, alpha, mu1);
    return {alpha * m / (4.0 * constants::pi) * (5.0 - 3.0 * std::log(m * m / (mu1 * mu1)))};
}

struct ChannelCoefficients {
    Rational const_term;  ///< coefficient of 1
    Rational log_term;    ///< coefficient of ln(m^2/mu1^2)
};

struct PipelineCoefficients {
    ChannelCoefficients slash;
    ChannelCoefficients scalar;
    Rational const_term;
    Rational log_term;
};

/// On-shell delta m / (alpha m/(4 pi)) = const_term + log_term * ln(m^2/mu1^2),
/// assembled from the kernel and exact x-integration.
inline PipelineCoefficients pipeline_coefficients()
{
    const Rational c = detail_::log_coefficient_of_i2();
    const auto kern = SelfEnergyKernel::on_shell(1.0, constants::fine_structure);
    const auto split = feynpar::log_split(kern.mass_fn());
    // ln M^2 + C1 = mass_log ln m^2 + x_log ln x + C1 regroups into
    // ln(m^2/mu1^2) + x_log ln x only with a unit mass_log.
    if (split.mass_log != Rational{1}) throw std::logic_error("unexpected mass-log weight in on-shell split");

    auto channel = [&](const std::vector<Rational>& poly) {
        const Rational plain = feynpar::integrate_poly_log({poly, 0});
        const Rational with_log = feynpar::integrate_poly_log({poly, 1});
        return ChannelCoefficients{c * split.x_log * with_log, c * plain};
    };

    PipelineCoefficients out;
    out.slash = channel(kern.slash_coeffs);  // pslash -> m on shell
    out.scalar = channel(kern.scalar_coeffs);
    out.const_term = out.slash.const_term + out.scalar.const_term;
    out.log_term = out.slash.log_term + out.scalar.log_term;
    return out;
}

/// Mass shift from the exact pipeline coefficients.
inline MassShift on_shell_mass_shift_pipeline(double m, double alpha, double mu1)
{
    detail_::require_positive(m, alpha, mu1);
    const auto coeffs = pipeline_coefficients();
    const double log_ratio = std::log(m * m / (mu1 * mu1));
    return {alpha * m / (4.0 * constants::pi) * (to_double(coeffs.const_term) + to_double(coeffs.log_term) * log_ratio)};
}

/// d delta m / d ln(mu1^2) = 3 alpha m/(4 pi).
inline double mass_shift_log_scale_slope(double m, double alpha)
{
    detail::require(m > 0.0 && alpha > 0.0, "m and alpha must be positive");
    return 3.0 * alpha * m / (4.0 * constants::pi);
}

struct ChannelIntegrand {
    double slash;   ///< coefficient of pslash, dimensionless
    double scalar;  ///< GeV
};

/// x-integrand of Sigma for p^2 <= m^2, with C1 aliased to -ln(mu1^2).
inline ChannelIntegrand self_energy_integrand(const SelfEnergyKernel& kern, double x, double mu1)
{
    detail::require(mu1 > 0.0, "mu1 must be positive");
    detail::require(x > 0.0 && x <= 1.0, "x must lie in (0, 1] where ln M^2(x) is finite");
    const auto fn = kern.mass_fn();
    fn.require_real_log();
    static const double c = to_double(detail_::log_coefficient_of_i2());
    const double log_term = std::log(feynpar::mass_fn_eval(fn, x) / (mu1 * mu1));
    const double pref = kern.alpha / (4.0 * constants::pi) * c * log_term;
    double a = 0.0;
    for (std::size_t k = kern.slash_coeffs.size(); k-- > 0;) a = a * x + to_double(kern.slash_coeffs[k]);
    double b = 0.0;
    for (std::size_t k = kern.scalar_coeffs.size(); k-- > 0;) b = b * x + to_double(kern.scalar_coeffs[k]);
    return {pref * a, pref * b * kern.m};
}

/// On-shell delta m by adaptive x-quadrature of the Sigma integrand.
inline MassShift on_shell_mass_shift_quadrature(double m, double alpha, double mu1, double rel_tol = 1e-12)
{
    detail_::require_positive(m, alpha, mu1);
    const auto kern = SelfEnergyKernel::on_shell(m, alpha);
    auto f = [&](double x) {
        const auto ch = self_energy_integrand(kern, x, mu1);
        return ch.slash * m + ch.scalar;
    };
    return {quadrature::integrate_toward_singular_start(f, 0.0, 1.0, rel_tol).value};
}

/// mu1 with delta m = 0: ln(m^2/mu1^2) = 5/3.
inline double solve_mu1(double m)
{
    detail::require(m > 0.0, "m must be positive");
    return m * std::exp(-5.0 / 6.0);
}

/// Same root by bracketing delta m(mu1) = 0 in ln mu1.
inline double solve_mu1_numeric(double m, double alpha)
{
    detail::require(m > 0.0 && alpha > 0.0, "m and alpha must be positive");
    auto f = [&](double log_mu) { return on_shell_mass_shift_pipeline(m, alpha, std::exp(log_mu)).delta_m; };
    const double centre = std::log(m);
    std::uintmax_t max_iter = 200;
    const auto [lo, hi] = boost::math::tools::toms748_solve(f, centre - 20.0, centre + 20.0,
                                                            boost::math::tools::eps_tolerance<double>(52), max_iter);
    if (max_iter >= 200) throw NumericError("mu1 root finder did not converge");
    return std::exp(0.5 * (lo + hi));
}

/// Leading-log 2S_{1/2} - 2P_{1/2} splitting (MHz):
///   4 alpha^5 m/(3 pi n^3) [ln(1/alpha^2) - ln k0 + 19/30],  n = 2,
/// with the Bethe logarithm ln k0 supplied by the caller.
inline double lamb_shift_estimate(double alpha, double m, double bethe_log)
{
    detail::require(alpha > 0.0, "alpha must be positive");
    detail::require(m > 0.0, "m must be positive");
    detail::require(bethe_log > 0.0, "Bethe logarithm must be positive");
    constexpr double n = 2.0;
    const double bracket = std::log(1.0 / (alpha * alpha)) - bethe_log + 19.0 / 30.0;
    const double energy_gev = 4.0 * std::pow(alpha, 5) * m / (3.0 * constants::pi * n * n * n) * bracket;
    return energy_gev / constants::planck_gev_s * 1e-6;
}

}  // namespace loopreg::qed
