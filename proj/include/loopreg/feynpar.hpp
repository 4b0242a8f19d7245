#pragma once

// Feynman-parameter mass function and exact x-integration of
// polynomial * {1, ln x} integrands over [0, 1].

#include "errors.hpp"
#include "kernel.hpp"

#include <cmath>
#include <utility>
#include <vector>

namespace loopreg::feynpar {

/// M^2(x) = p^2 x^2 + (m^2 - p^2) x.
class FeynmanMassFn {
public:
    FeynmanMassFn(double p_sq, double m_sq) : p_sq_(p_sq), m_sq_(m_sq)
    {
        detail::require(m_sq > 0.0, "m^2 must be positive");
        detail::require(std::isfinite(p_sq), "p^2 must be finite");
    }

    double p_sq() const { return p_sq_; }
    double m_sq() const { return m_sq_; }

    bool on_shell() const { return p_sq_ == m_sq_; }

    /// p^2 <= m^2 keeps M^2(x) > 0 on (0, 1], so ln M^2(x) stays real.
    bool real_log_region() const { return p_sq_ <= m_sq_; }

    void require_real_log() const
    {
        detail::require(real_log_region(), "p^2 > m^2 gives complex logarithms; analytic continuation is not supported");
    }

private:
    double p_sq_;
    double m_sq_;
};

inline double mass_fn_eval(const FeynmanMassFn& fn, double x)
{
    detail::require(x >= 0.0 && x <= 1.0, "Feynman parameter must lie in [0, 1]");
    return fn.p_sq() * x * x + (fn.m_sq() - fn.p_sq()) * x;
}

/// sum_k c_k x^k, optionally times ln x.
struct PolyLogIntegrand {
    std::vector<Rational> coeffs;
    int log_weight = 0;
};

/// Exact \int_0^1: x^k -> 1/(k+1), x^k ln x -> -1/(k+1)^2.
inline Rational integrate_poly_log(const PolyLogIntegrand& integrand)
{
    detail::require(integrand.log_weight == 0 || integrand.log_weight == 1, "log weight must be 0 or 1");
    Rational sum{0};
    for (std::size_t k = 0; k < integrand.coeffs.size(); ++k) {
        const Rational kp1{static_cast<std::int64_t>(k) + 1};
        sum += integrand.log_weight == 0 ? integrand.coeffs[k] / kp1 : -integrand.coeffs[k] / (kp1 * kp1);
    }
    return sum;
}

/// ln M^2(x) = mass_log * ln m^2 + x_log * ln x, which holds when M^2(x)
/// factorizes as m^2 x^k.
struct LogSplit {
    Rational mass_log;
    Rational x_log;
};

/// Exact split of ln M^2(x): on shell M^2 = m^2 x^2; at p^2 = 0, M^2 = m^2 x.
inline LogSplit log_split(const FeynmanMassFn& fn)
{
    if (fn.on_shell()) return {Rational{1}, Rational{2}};
    if (fn.p_sq() == 0.0) return {Rational{1}, Rational{1}};
    throw DomainError("ln M^2(x) only factorizes for p^2 = m^2 or p^2 = 0");
}

}  // namespace loopreg::feynpar
