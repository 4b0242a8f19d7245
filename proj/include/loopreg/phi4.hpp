#pragma once

// lambda Phi^4 with a wrong-sign mass term: broken vacuum, excitation
// mass, one-loop coupling and the resummed (chain) coupling.
//
//     V(Phi) = -sigma Phi^2/2 + lambda Phi^4/24
//     Phi_1 = sqrt(6 sigma/lambda),  m_sigma = sqrt(2 sigma),
//     lambda = 3 (m_sigma/Phi_1)^2.
//
// The resummed coupling is the geometric limit of the chain
//
//     lambda(mu) = lambda0 sum_k r^k = lambda0/(1 - r),  r = b lambda0 ln(mu^2/mu0^2),
//
// which has a pole at mu_c = mu0 exp(1/(2 b lambda0)); every finite
// truncation of the sum is regular. The default b = 9/(32 pi^2) makes the
// first-order truncation reproduce lambda_R = lambda (1 + 9 lambda/(32 pi^2))
// at ln(mu^2/mu0^2) = 1.

#include "constants.hpp"
#include "errors.hpp"

#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>

namespace loopreg::phi4 {

class SSBPotential {
public:
    SSBPotential(double sigma, double lambda) : sigma_(sigma), lambda_(lambda)
    {
        detail::require(sigma > 0.0, "sigma must be positive");
        detail::require(lambda > 0.0, "lambda must be positive");
    }

    double sigma() const { return sigma_; }
    double lambda() const { return lambda_; }

    double value(double phi) const { return -0.5 * sigma_ * phi * phi + lambda_ * phi * phi * phi * phi / 24.0; }
    double slope(double phi) const { return -sigma_ * phi + lambda_ * phi * phi * phi / 6.0; }
    double curvature(double phi) const { return -sigma_ + lambda_ * phi * phi / 2.0; }

private:
    double sigma_;
    double lambda_;
};

/// Symmetric potential m^2 Phi^2/2 + lambda Phi^4/24 (sigma -> -m^2).
inline double symmetric_potential(double m_sq, double lambda, double phi)
{
    return 0.5 * m_sq * phi * phi + lambda * phi * phi * phi * phi / 24.0;
}

struct Vacuum {
    double phi1;     ///< GeV
    double m_sigma;  ///< GeV
};

inline Vacuum ssb_vacuum(const SSBPotential& potential)
{
    return {std::sqrt(6.0 * potential.sigma() / potential.lambda()), std::sqrt(2.0 * potential.sigma())};
}

/// Brent minimization of V on [0, sqrt(12 sigma/lambda)], beyond which V > 0.
inline double minimize_potential(const SSBPotential& potential)
{
    const long double upper = std::sqrt(12.0L * potential.sigma() / potential.lambda());
    auto v = [&](long double phi) {
        return -0.5L * potential.sigma() * phi * phi + potential.lambda() * phi * phi * phi * phi / 24.0L;
    };
    std::uintmax_t max_iter = 500;
    const auto [phi, _] = boost::math::tools::brent_find_minima(v, 0.0L, upper, std::numeric_limits<long double>::digits,
                                                                max_iter);
    return static_cast<double>(phi);
}

/// lambda (1 + 9 lambda/(32 pi^2)).
inline double lambda_renormalized(double lambda)
{
    detail::require(lambda >= 0.0, "lambda must be non-negative");
    return lambda * (1.0 + 9.0 * lambda / (32.0 * constants::pi * constants::pi));
}

/// 3 (m_sigma/Phi_1)^2.
inline double lambda_invariant_ratio(double m_sigma, double phi1)
{
    detail::require(m_sigma > 0.0 && phi1 > 0.0, "mass scales must be positive");
    const double ratio = m_sigma / phi1;
    return 3.0 * ratio * ratio;
}

/// 1 + r + ... + r^n by Horner's rule; n + 1 at r = 1.
inline double geometric_partial_sum(double r, std::int64_t n)
{
    detail::require(n >= 0, "partial-sum order must be non-negative");
    if (r == 1.0) return static_cast<double>(n) + 1.0;
    double sum = 1.0;
    for (std::int64_t k = 0; k < n; ++k) sum = 1.0 + r * sum;
    return sum;
}

inline constexpr double default_beta_coeff = 9.0 / (32.0 * constants::pi * constants::pi);

struct ResummationState {
    double lambda0;
    double mu0;  ///< GeV
    double b = default_beta_coeff;

    void validate() const
    {
        detail::require(lambda0 > 0.0, "lambda0 must be positive");
        detail::require(mu0 > 0.0, "mu0 must be positive");
        detail::require(b > 0.0, "beta coefficient must be positive");
    }

    /// r = b lambda0 ln(mu^2/mu0^2).
    double ratio(double mu) const
    {
        detail::require(mu > 0.0, "mu must be positive");
        return b * lambda0 * 2.0 * std::log(mu / mu0);
    }
};

/// Either a finite coupling or the pole signal (denominator <= 0).
struct ChainResult {
    std::optional<double> coupling;
    double denominator;

    bool pole() const { return !coupling.has_value(); }
};

inline ChainResult resum_chain(const ResummationState& state, double mu)
{
    state.validate();
    const double denominator = 1.0 - state.ratio(mu);
    if (denominator <= 0.0) return {std::nullopt, denominator};
    return {state.lambda0 / denominator, denominator};
}

/// lambda0 (1 + r + ... + r^order): finite for every finite order.
inline double truncated_chain(const ResummationState& state, double mu, std::int64_t order)
{
    state.validate();
    return state.lambda0 * geometric_partial_sum(state.ratio(mu), order);
}

inline double critical_scale(const ResummationState& state)
{
    state.validate();
    return state.mu0 * std::exp(1.0 / (2.0 * state.b * state.lambda0));
}

enum class VacuumStatus { broken, restored };

inline std::string to_string(VacuumStatus s)
{
    return s == VacuumStatus::broken ? "broken" : "symmetry-restored";
}

/// Above mu_c the broken vacuum no longer holds.
inline VacuumStatus vacuum_status(const ResummationState& state, double mu)
{
    detail::require(mu > 0.0, "mu must be positive");
    return mu > critical_scale(state) ? VacuumStatus::restored : VacuumStatus::broken;
}

struct HiggsReference {
    double lower_bound = 76.0;
    double upper_bound = 170.0;
    double predicted = 138.0;

    bool ordered() const { return lower_bound < predicted && predicted < upper_bound; }
};

inline constexpr HiggsReference higgs_reference{};

}  // namespace loopreg::phi4
