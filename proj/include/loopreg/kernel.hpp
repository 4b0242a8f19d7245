#pragma once

// Scalar one-loop integrals and the differentiate/integrate-back
// reduction that trades a divergence for arbitrary constants.
//
// The family handled here is
//
//     I_n(M^2) = \int d^4K/(2pi)^4 (K^2 - M^2)^{-n},
//
// with K the already-shifted loop momentum. Every closed form is stored as an
// exact rational multiple of the unit i/(16 pi^2):
//
//     value = i/(16 pi^2) * overall * [ sum_k c_k (M^2)^{p_k} (ln M^2)^{l_k}
//                                       + sum_j d_j C_j (M^2)^{q_j} ]
//
// The bracket is homogeneous in M^2 (up to logarithms) with degree `degree`;
// the C_j are the integration constants recorded in a ConstantLedger.
//
// Convergent closed form for n >= 3 (Wick rotation, d^4K_E = 2 pi^2 k^3 dk):
//
//     I_n = i (-1)^n/(8 pi^2) \int_0^inf k^3 (k^2 + M^2)^{-n} dk
//         = i (-1)^n/(16 pi^2) * 1/((n-1)(n-2)) * (M^2)^{2-n}
//
// using \int_0^inf u (u + a)^{-n} du = B(2, n-2) a^{2-n}.

#include "errors.hpp"

#include <boost/rational.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace loopreg {

using Rational = boost::rational<std::int64_t>;

inline std::string to_string(const Rational& r)
{
    std::ostringstream os;
    os << r.numerator();
    if (r.denominator() != 1) os << '/' << r.denominator();
    return os.str();
}

inline double to_double(const Rational& r)
{
    return boost::rational_cast<double>(r);
}

namespace kernel {

/// I_n(M^2); the mass is optional so the reduction can run symbolically.
class ScalarLoopIntegral {
public:
    explicit ScalarLoopIntegral(int power, std::optional<double> mass_sq = std::nullopt)
        : power_(power), mass_sq_(mass_sq)
    {
        detail::require(power >= 1, "loop integral power must be >= 1");
        detail::require(!mass_sq || *mass_sq > 0.0, "numeric M^2 must be positive");
    }

    int power() const { return power_; }
    std::optional<double> mass_sq() const { return mass_sq_; }

private:
    int power_;
    std::optional<double> mass_sq_;
};

/// c * (M^2)^p, times ln M^2 when has_log.
struct Term {
    Rational coeff;
    int mass_sq_power = 0;
    bool has_log = false;

    friend bool operator==(const Term&, const Term&) = default;
};

/// c * C_index * (M^2)^p.
struct ConstantTerm {
    Rational coeff;
    int index = 0;
    int mass_sq_power = 0;

    friend bool operator==(const ConstantTerm&, const ConstantTerm&) = default;
};

struct ConstantEntry {
    int index = 0;
    int mass_dimension = 0;
    std::optional<double> value;        ///< set once fixed
    std::optional<double> scale_alias;  ///< mu with C = -ln(mu^2), dimensionless constants only

    bool fixed() const { return value.has_value(); }
};

class ConstantLedger {
public:
    const std::vector<ConstantEntry>& entries() const { return entries_; }
    std::size_t size() const { return entries_.size(); }

    std::size_t unfixed_count() const
    {
        return static_cast<std::size_t>(
            std::count_if(entries_.begin(), entries_.end(), [](const auto& e) { return !e.fixed(); }));
    }

    /// Appends C_{size+1}; returns its index.
    int append(int mass_dimension)
    {
        detail::require(mass_dimension >= 0 && mass_dimension % 2 == 0,
                        "constant mass dimension must be even and non-negative");
        const int index = static_cast<int>(entries_.size()) + 1;
        entries_.push_back({index, mass_dimension, std::nullopt, std::nullopt});
        return index;
    }

    const ConstantEntry& at(int index) const
    {
        detail::require(index >= 1 && index <= static_cast<int>(entries_.size()),
                        "no constant C" + std::to_string(index));
        return entries_[static_cast<std::size_t>(index - 1)];
    }

    void fix(int index, double value)
    {
        detail::require(std::isfinite(value), "constant value must be finite");
        mutable_at(index).value = value;
        mutable_at(index).scale_alias.reset();
    }

    /// Fixes a dimensionless constant through its scale: C = -ln(mu^2).
    void alias_scale(int index, double mu)
    {
        detail::require(mu > 0.0, "scale alias mu must be positive");
        auto& entry = mutable_at(index);
        detail::require(entry.mass_dimension == 0, "only dimensionless constants carry a scale alias");
        entry.value = -std::log(mu * mu);
        entry.scale_alias = mu;
    }

    /// Drops constants no longer referenced and renumbers from 1.
    /// Returns the old->new index map (0 for dropped).
    std::vector<int> compact(const std::vector<bool>& keep)
    {
        std::vector<int> remap(entries_.size() + 1, 0);
        std::vector<ConstantEntry> kept;
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            if (!keep[i]) continue;
            auto entry = entries_[i];
            entry.index = static_cast<int>(kept.size()) + 1;
            remap[i + 1] = entry.index;
            kept.push_back(entry);
        }
        entries_ = std::move(kept);
        return remap;
    }

private:
    ConstantEntry& mutable_at(int index)
    {
        at(index);
        return entries_[static_cast<std::size_t>(index - 1)];
    }

    std::vector<ConstantEntry> entries_;
};

struct RegularizedValue {
    Rational overall{1};
    std::vector<Term> terms;
    std::vector<ConstantTerm> constant_terms;
    ConstantLedger ledger;
    int degree = 0;  ///< homogeneity of the bracket in M^2

    /// Terms with the overall factor multiplied in, merged and sorted.
    std::vector<Term> expanded_terms() const;
    std::vector<ConstantTerm> expanded_constant_terms() const;

    /// Coefficient (overall included) of c (M^2)^p [ln M^2].
    Rational coefficient(int mass_sq_power, bool has_log) const;
};

namespace detail_ {

inline void normalize(std::vector<Term>& terms)
{
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) {
        return std::tie(b.mass_sq_power, b.has_log) < std::tie(a.mass_sq_power, a.has_log);
    });
    std::vector<Term> merged;
    for (const auto& t : terms) {
        if (!merged.empty() && merged.back().mass_sq_power == t.mass_sq_power && merged.back().has_log == t.has_log)
            merged.back().coeff += t.coeff;
        else
            merged.push_back(t);
    }
    std::erase_if(merged, [](const Term& t) { return t.coeff.numerator() == 0; });
    terms = std::move(merged);
}

inline void normalize(std::vector<ConstantTerm>& terms)
{
    std::sort(terms.begin(), terms.end(), [](const ConstantTerm& a, const ConstantTerm& b) {
        return std::tie(a.index, a.mass_sq_power) < std::tie(b.index, b.mass_sq_power);
    });
    std::vector<ConstantTerm> merged;
    for (const auto& t : terms) {
        if (!merged.empty() && merged.back().index == t.index && merged.back().mass_sq_power == t.mass_sq_power)
            merged.back().coeff += t.coeff;
        else
            merged.push_back(t);
    }
    std::erase_if(merged, [](const ConstantTerm& t) { return t.coeff.numerator() == 0; });
    terms = std::move(merged);
}

}  // namespace detail_

inline std::vector<Term> RegularizedValue::expanded_terms() const
{
    auto out = terms;
    for (auto& t : out) t.coeff *= overall;
    detail_::normalize(out);
    return out;
}

inline std::vector<ConstantTerm> RegularizedValue::expanded_constant_terms() const
{
    auto out = constant_terms;
    for (auto& t : out) t.coeff *= overall;
    detail_::normalize(out);
    return out;
}

inline Rational RegularizedValue::coefficient(int mass_sq_power, bool has_log) const
{
    for (const auto& t : expanded_terms())
        if (t.mass_sq_power == mass_sq_power && t.has_log == has_log) return t.coeff;
    return Rational{0};
}

/// True when both values denote the same expression (ledger status ignored).
inline bool same_expression(const RegularizedValue& a, const RegularizedValue& b)
{
    return a.expanded_terms() == b.expanded_terms() && a.expanded_constant_terms() == b.expanded_constant_terms();
}

/// Power counting in four dimensions: D = 4 - 2n.
inline int superficial_degree(const ScalarLoopIntegral& integral)
{
    return 4 - 2 * integral.power();
}

/// Smallest t with 4 - 2(n + t) < 0.
inline int differentiation_count(const ScalarLoopIntegral& integral)
{
    return std::max(0, 3 - integral.power());
}

struct Differentiated {
    ScalarLoopIntegral integral;
    Rational prefactor;
};

/// d^t/d(M^2)^t I_n = n(n+1)...(n+t-1) I_{n+t}.
inline Differentiated differentiate_in_masssq(const ScalarLoopIntegral& integral, int times)
{
    detail::require(times >= 0, "differentiation count must be non-negative");
    Rational prefactor{1};
    for (int k = 0; k < times; ++k) prefactor *= integral.power() + k;
    return {ScalarLoopIntegral(integral.power() + times, integral.mass_sq()), prefactor};
}

inline RegularizedValue evaluate_convergent(const ScalarLoopIntegral& integral)
{
    const int n = integral.power();
    if (superficial_degree(integral) >= 0)
        throw DomainError("I_" + std::to_string(n) + " is still divergent (needs n >= 3)");
    RegularizedValue value;
    value.overall = (n % 2 == 0) ? Rational{1} : Rational{-1};
    value.degree = 2 - n;
    value.terms.push_back({Rational{1, static_cast<std::int64_t>(n - 1) * (n - 2)}, 2 - n, false});
    return value;
}

inline RegularizedValue scale(RegularizedValue value, const Rational& factor)
{
    for (auto& t : value.terms) t.coeff *= factor;
    for (auto& t : value.constant_terms) t.coeff *= factor;
    detail_::normalize(value.terms);
    detail_::normalize(value.constant_terms);
    return value;
}

/// One antiderivative in M^2 per application, each adding an unfixed constant
/// whose mass dimension keeps the bracket homogeneous.
inline RegularizedValue integrate_back(RegularizedValue value, int times)
{
    detail::require(times >= 0, "integration count must be non-negative");
    for (int step = 0; step < times; ++step) {
        std::vector<Term> next;
        for (const auto& t : value.terms) {
            const int p = t.mass_sq_power;
            if (p == -1) {
                if (t.has_log) throw DomainError("antiderivative of ln(M^2)/M^2 leaves the supported term algebra");
                next.push_back({t.coeff, 0, true});
                continue;
            }
            const Rational q{p + 1};
            next.push_back({t.coeff / q, p + 1, t.has_log});
            // \int s^p ln s = s^{p+1} ln s/(p+1) - s^{p+1}/(p+1)^2
            if (t.has_log) next.push_back({-t.coeff / (q * q), p + 1, false});
        }
        std::vector<ConstantTerm> next_constants;
        for (const auto& c : value.constant_terms) {
            if (c.mass_sq_power == -1)
                throw DomainError("antiderivative of C/M^2 leaves the supported term algebra");
            next_constants.push_back({c.coeff / Rational{c.mass_sq_power + 1}, c.index, c.mass_sq_power + 1});
        }
        value.degree += 1;
        const int index = value.ledger.append(2 * value.degree);
        next_constants.push_back({Rational{1}, index, 0});

        detail_::normalize(next);
        detail_::normalize(next_constants);
        value.terms = std::move(next);
        value.constant_terms = std::move(next_constants);
    }
    return value;
}

/// Symbolic d/dM^2 applied `times` times; constants that stop appearing are
/// removed from the ledger.
inline RegularizedValue differentiate_value(RegularizedValue value, int times)
{
    detail::require(times >= 0, "differentiation count must be non-negative");
    for (int step = 0; step < times; ++step) {
        std::vector<Term> next;
        for (const auto& t : value.terms) {
            const int p = t.mass_sq_power;
            if (p != 0) next.push_back({t.coeff * p, p - 1, t.has_log});
            if (t.has_log) next.push_back({t.coeff, p - 1, false});
        }
        std::vector<ConstantTerm> next_constants;
        for (const auto& c : value.constant_terms)
            if (c.mass_sq_power != 0) next_constants.push_back({c.coeff * c.mass_sq_power, c.index, c.mass_sq_power - 1});
        detail_::normalize(next);
        detail_::normalize(next_constants);
        value.terms = std::move(next);
        value.constant_terms = std::move(next_constants);
        value.degree -= 1;
    }

    std::vector<bool> keep(value.ledger.size(), false);
    for (const auto& c : value.constant_terms) keep[static_cast<std::size_t>(c.index - 1)] = true;
    const auto remap = value.ledger.compact(keep);
    for (auto& c : value.constant_terms) c.index = remap[static_cast<std::size_t>(c.index)];
    return value;
}

/// Differentiate to convergence, evaluate, restore the prefactor, integrate back.
inline RegularizedValue regularize(const ScalarLoopIntegral& integral)
{
    const int t = differentiation_count(integral);
    const auto [reduced, prefactor] = differentiate_in_masssq(integral, t);
    return integrate_back(scale(evaluate_convergent(reduced), prefactor), t);
}

/// Numeric value of the bracket (overall factor excluded). Every constant that
/// appears must be fixed.
inline double bracket_value(const RegularizedValue& value, double mass_sq)
{
    const bool needs_positive = std::any_of(value.terms.begin(), value.terms.end(), [](const Term& t) {
        return t.has_log || t.mass_sq_power < 0;
    }) || std::any_of(value.constant_terms.begin(), value.constant_terms.end(),
                       [](const ConstantTerm& c) { return c.mass_sq_power < 0; });
    if (needs_positive)
        detail::require(mass_sq > 0.0, "M^2 must be positive where ln(M^2) or negative powers appear");
    else
        detail::require(mass_sq >= 0.0, "M^2 must be non-negative");

    const double log_s = needs_positive ? std::log(mass_sq) : 0.0;
    double sum = 0.0;
    for (const auto& t : value.terms) {
        double v = to_double(t.coeff) * std::pow(mass_sq, t.mass_sq_power);
        if (t.has_log) v *= log_s;
        sum += v;
    }
    for (const auto& c : value.constant_terms) {
        const auto& entry = value.ledger.at(c.index);
        if (!entry.fixed()) throw DomainError("constant C" + std::to_string(c.index) + " is not fixed");
        sum += to_double(c.coeff) * *entry.value * std::pow(mass_sq, c.mass_sq_power);
    }
    return sum;
}

/// Numeric value in units of i/(16 pi^2).
inline double evaluate(const RegularizedValue& value, double mass_sq)
{
    return to_double(value.overall) * bracket_value(value, mass_sq);
}

namespace detail_ {

inline std::string mass_power(int p)
{
    if (p == 0) return "";
    if (p == 1) return "M^2";
    return "(M^2)^" + (p < 0 ? "(" + std::to_string(p) + ")" : std::to_string(p));
}

inline std::string monomial(const Rational& c, const std::string& body, bool first)
{
    std::string out;
    const Rational mag = c < Rational{0} ? -c : c;
    if (first)
        out += c < Rational{0} ? "-" : "";
    else
        out += c < Rational{0} ? " - " : " + ";
    if (body.empty()) return out + to_string(mag);
    if (mag != Rational{1}) out += to_string(mag) + "*";
    return out + body;
}

}  // namespace detail_

/// Human-readable closed form, e.g. "-i/(16 pi^2) * (ln(M^2) + C1)".
inline std::string render(const RegularizedValue& value)
{
    std::string bracket;
    bool first = true;
    for (const auto& t : value.terms) {
        std::string body = detail_::mass_power(t.mass_sq_power);
        if (t.has_log) body = body.empty() ? "ln(M^2)" : body + "*ln(M^2)";
        bracket += detail_::monomial(t.coeff, body, first);
        first = false;
    }
    for (const auto& c : value.constant_terms) {
        std::string body = "C" + std::to_string(c.index);
        if (c.mass_sq_power != 0) body += "*" + detail_::mass_power(c.mass_sq_power);
        bracket += detail_::monomial(c.coeff, body, first);
        first = false;
    }
    if (bracket.empty()) bracket = "0";

    std::string prefix;
    const Rational mag = value.overall < Rational{0} ? -value.overall : value.overall;
    if (value.overall < Rational{0}) prefix = "-";
    if (mag != Rational{1}) prefix += to_string(mag) + "*";
    return prefix + "i/(16 pi^2) * (" + bracket + ")";
}

}  // namespace kernel
}  // namespace loopreg
