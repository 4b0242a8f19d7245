#pragma once

// Command-line front end. Every operation is a subcommand that fills a Report
// (inputs echo, outputs, provenance labels, constant ledger); the report is
// then written as JSON, or as CSV / plot data for sweeps.
//
// Inputs are echoed with 17 significant digits so a report can be turned back
// into an argument list (args_from_report) that reproduces it exactly.

#include "constants.hpp"
#include "errors.hpp"
#include "feynpar.hpp"
#include "kernel.hpp"
#include "oracle.hpp"
#include "phi4.hpp"
#include "qed.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace loopreg::cli {

using Json = nlohmann::ordered_json;

enum class Format { json, csv, plot_data };

struct RunConfig {
    std::string units = "GeV";
    int precision = 6;
    Format format = Format::json;

    /// GeV per user mass unit.
    double mass_unit() const { return units == "MeV" ? 1.0 / constants::mev_per_gev : 1.0; }
};

inline std::string exact(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string rounded(double v, int precision)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*g", precision, v == 0.0 ? 0.0 : v);  // no "-0"
    return buf;
}

struct Report {
    std::string subcommand;
    std::vector<std::pair<std::string, std::string>> inputs;
    std::vector<std::pair<std::string, std::string>> outputs;
    std::vector<std::pair<std::string, std::string>> provenance;
    Json ledger = Json::array();
    std::vector<std::string> columns;  ///< non-empty for sweeps
    std::vector<std::vector<std::string>> rows;
    std::size_t plot_x = 0;
    std::size_t plot_y = 1;

    bool sweep() const { return !columns.empty(); }

    void output(const std::string& key, std::string value, std::string label)
    {
        outputs.emplace_back(key, std::move(value));
        provenance.emplace_back(key, std::move(label));
    }

    Json to_json() const
    {
        Json j;
        j["subcommand"] = subcommand;
        auto object = [](const auto& pairs) {
            Json o = Json::object();
            for (const auto& [k, v] : pairs) o[k] = v;
            return o;
        };
        j["inputs"] = object(inputs);
        j["outputs"] = object(outputs);
        j["provenance"] = object(provenance);
        j["ledger"] = ledger;
        if (sweep()) {
            j["columns"] = columns;
            j["rows"] = rows;
        }
        return j;
    }
};

inline void write_report(const Report& report, const RunConfig& config, std::ostream& out)
{
    switch (config.format) {
    case Format::json:
        out << report.to_json().dump(2) << '\n';
        break;
    case Format::csv:
        for (std::size_t i = 0; i < report.columns.size(); ++i) out << (i ? "," : "") << report.columns[i];
        out << '\n';
        for (const auto& row : report.rows) {
            for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
            out << '\n';
        }
        break;
    case Format::plot_data:
        out << "# " << report.columns[report.plot_x] << ' ' << report.columns[report.plot_y] << '\n';
        for (const auto& row : report.rows) {
            const auto& y = row[report.plot_y];
            out << row[report.plot_x] << ' ' << (y == "pole" ? "nan" : y) << '\n';
        }
        break;
    }
}

/// Argument list that re-runs the report.
inline std::vector<std::string> args_from_report(const Json& report)
{
    std::vector<std::string> args{report.at("subcommand").get<std::string>()};
    for (const auto& [key, value] : report.at("inputs").items()) {
        args.push_back("--" + key);
        args.push_back(value.get<std::string>());
    }
    return args;
}

namespace detail_ {

inline std::string unit_multiple(const Rational& c)
{
    if (c == Rational{1}) return "i/(16 pi^2)";
    if (c == Rational{-1}) return "-i/(16 pi^2)";
    return to_string(c) + "*i/(16 pi^2)";
}

inline std::string term_body(int p, bool log)
{
    std::string body = kernel::detail_::mass_power(p);
    if (log) body = body.empty() ? "ln(M^2)" : body + "*ln(M^2)";
    return body.empty() ? "1" : body;
}

inline Json ledger_json(const kernel::ConstantLedger& ledger, int precision)
{
    Json out = Json::array();
    for (const auto& e : ledger.entries()) {
        Json j;
        j["constant"] = "C" + std::to_string(e.index);
        j["mass_dimension"] = e.mass_dimension;
        j["status"] = e.fixed() ? "fixed" : "unfixed";
        if (e.value) j["value"] = rounded(*e.value, precision);
        if (e.scale_alias) j["scale_alias"] = rounded(*e.scale_alias, precision);
        out.push_back(j);
    }
    return out;
}

/// Ledger with one dimensionless constant C1 = -ln(mu1^2).
inline Json scale_ledger(double mu1_gev, int precision)
{
    kernel::ConstantLedger ledger;
    ledger.append(0);
    ledger.alias_scale(1, mu1_gev);
    return ledger_json(ledger, precision);
}

inline std::string joined(const std::vector<double>& xs)
{
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? "," : "") + exact(xs[i]);
    return s;
}

inline std::vector<double> log_grid(double lo, double hi, int points)
{
    detail::require(lo > 0.0 && hi > lo, "sweep needs 0 < min < max");
    detail::require(points >= 2, "sweep needs at least 2 points");
    std::vector<double> xs;
    for (int i = 0; i < points; ++i)
        xs.push_back(i + 1 == points ? hi : lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1)));
    return xs;
}

}  // namespace detail_

// ---------------------------------------------------------------------------
// demo cross-checks

struct Check {
    std::string name;
    std::string detail;
    bool pass;
};

namespace detail_ {

inline bool close_rel(double a, double b, double tol) { return std::abs(a - b) <= tol * std::abs(b); }

inline std::string deviation(double a, double b)
{
    return "max deviation " + rounded(std::abs(a - b), 3);
}

}  // namespace detail_

inline std::vector<Check> demo_checks()
{
    using namespace kernel;
    using detail_::close_rel;
    std::vector<Check> checks;
    auto add = [&](std::string name, bool pass, std::string detail) {
        checks.push_back({std::move(name), std::move(detail), pass});
    };
    auto guarded = [&](const std::string& name, const std::function<void()>& body) {
        try {
            body();
        } catch (const std::exception& e) {
            add(name, false, std::string("threw: ") + e.what());
        }
    };

    guarded("superficial degrees", [&] {
        const bool ok = superficial_degree(ScalarLoopIntegral(1)) == 2 && superficial_degree(ScalarLoopIntegral(2)) == 0 &&
                        superficial_degree(ScalarLoopIntegral(3)) == -2 &&
                        differentiation_count(ScalarLoopIntegral(1)) == 2 &&
                        differentiation_count(ScalarLoopIntegral(2)) == 1 &&
                        differentiation_count(ScalarLoopIntegral(3)) == 0;
        add("superficial degrees", ok, "D = 2, 0, -2 and t = 2, 1, 0 for n = 1, 2, 3");
    });

    guarded("convergent closed form", [&] {
        const auto i3 = evaluate_convergent(ScalarLoopIntegral(3));
        const auto d = differentiate_in_masssq(ScalarLoopIntegral(2), 1);
        bool ok = d.prefactor == Rational{2} && d.integral.power() == 3;
        double worst = 0.0;
        for (double s : {0.5, 1.0, 2.0}) {
            const double closed = to_double(d.prefactor) * evaluate(i3, s);
            worst = std::max(worst, std::abs(closed + 1.0 / s) * s);
            const double cutoff = 1e6 * std::sqrt(s);
            const double numeric = oracle::wick_rotated_radial(3, s, cutoff);
            ok = ok && close_rel(numeric, evaluate(i3, s), 1e-8);
            worst = std::max(worst, std::abs(numeric / evaluate(i3, s) - 1.0));
        }
        add("convergent closed form", ok && worst <= 1e-8,
            "2 I_3 = -i/(16 pi^2 M^2); cutoff quadrature at 1e6 M, worst relative gap " + rounded(worst, 3));
    });

    guarded("log-divergent integral", [&] {
        const auto v = regularize(ScalarLoopIntegral(2));
        const bool form = render(v) == "-i/(16 pi^2) * (ln(M^2) + C1)" && v.ledger.unfixed_count() == 1;
        const bool back = same_expression(differentiate_value(v, 1), scale(evaluate_convergent(ScalarLoopIntegral(3)), 2));
        add("log-divergent integral", form && back, render(v) + "; differentiates back to 2 I_3");
    });

    guarded("quadratically divergent integral", [&] {
        const auto v = regularize(ScalarLoopIntegral(1));
        const auto d = differentiate_in_masssq(ScalarLoopIntegral(1), 2);
        const bool back = same_expression(differentiate_value(v, 2), scale(evaluate_convergent(d.integral), d.prefactor));
        add("quadratically divergent integral", back && v.ledger.unfixed_count() == 2,
            render(v) + "; differentiates back to " + to_string(d.prefactor) + " I_3");
    });

    guarded("scale-independent content", [&] {
        bool ok = true;
        double worst = 0.0;
        for (auto [a, b] : {std::pair{0.5, 2.0}, std::pair{1.0, 4.0}, std::pair{0.3, 7.0}}) {
            auto limit = [](double s) {
                oracle::CutoffProbe probe{2, s, {1.0, 1e1, 1e2, 1e3, 1e4, 1e5, 1e6}};
                return oracle::asymptote_constant(probe);
            };
            const double oracle_diff = limit(a) - limit(b);
            const double expected = -0.5 * std::log(a / b);
            // kernel: difference of the I_2 bracket with any fixed C1, over the Wick factor 2
            auto v = regularize(ScalarLoopIntegral(2));
            v.ledger.alias_scale(1, 1.0);
            const double kernel_diff = 0.5 * (evaluate(v, a) - evaluate(v, b));
            worst = std::max({worst, std::abs(oracle_diff - expected), std::abs(kernel_diff - expected)});
            ok = ok && std::abs(oracle_diff - expected) <= 1e-6 && std::abs(kernel_diff - expected) <= 1e-12;
        }
        add("scale-independent content", ok, "cutoff limits differ by -ln(M_a^2/M_b^2)/2; " + rounded(worst, 3) + " worst gap");
    });

    guarded("self-energy coefficients", [&] {
        const auto c = qed::pipeline_coefficients();
        add("self-energy coefficients", c.const_term == Rational{5} && c.log_term == Rational{-3},
            "delta m / (alpha m/(4 pi)) = " + to_string(c.const_term) + " + (" + to_string(c.log_term) +
                ") ln(m^2/mu1^2)");
    });

    guarded("self-energy quadrature", [&] {
        const double m = constants::electron_mass_gev;
        const double alpha = constants::fine_structure;
        const double pref = alpha * m / (4.0 * constants::pi);
        double worst = 0.0;
        for (double log_ratio : {0.0, 1.0, 5.0 / 3.0}) {
            const double numeric = qed::on_shell_mass_shift_quadrature(m, alpha, m * std::exp(-0.5 * log_ratio)).delta_m / pref;
            worst = std::max(worst, std::abs(numeric - (5.0 - 3.0 * log_ratio)));
        }
        add("self-energy quadrature", worst <= 1e-9, "x-quadrature vs 5 - 3L, " + detail_::deviation(worst, 0.0));
    });

    guarded("zero mass shift scale", [&] {
        bool ok = close_rel(qed::solve_mu1(1.0), std::exp(-5.0 / 6.0), 1e-12);
        for (double m : {constants::electron_mass_gev, 1.0})
            for (double alpha : {constants::fine_structure, 0.1, 0.3})
                ok = ok && close_rel(qed::solve_mu1_numeric(m, alpha), qed::solve_mu1(m), 1e-12);
        add("zero mass shift scale", ok, "mu1/m = " + rounded(qed::solve_mu1(1.0), 15) + ", root finder alpha-independent");
    });

    guarded("Lamb shift band", [&] {
        const double v = qed::lamb_shift_estimate(constants::fine_structure, constants::electron_mass_gev, 2.8118);
        add("Lamb shift band", v >= 900.0 && v <= 1100.0, rounded(v, 7) + " MHz in [900, 1100]");
    });

    guarded("broken vacuum", [&] {
        bool ok = true;
        for (int i = 0; i < 10; ++i)
            for (int j = 0; j < 10; ++j) {
                const double sigma = 0.01 * std::pow(1e6, i / 9.0);
                const double lambda = 0.1 + j * (9.9 / 9.0);
                const phi4::SSBPotential pot(sigma, lambda);
                const auto vac = phi4::ssb_vacuum(pot);
                ok = ok && close_rel(phi4::lambda_invariant_ratio(vac.m_sigma, vac.phi1), lambda, 1e-12);
                ok = ok && close_rel(phi4::minimize_potential(pot), vac.phi1, 1e-8);
            }
        add("broken vacuum", ok, "invariant ratio returns lambda on a 10x10 grid; minimizer confirms Phi1");
    });

    guarded("one-loop coupling", [&] {
        bool ok = close_rel(phi4::lambda_renormalized(1.0), 1.0 + 9.0 / (32.0 * constants::pi * constants::pi), 1e-12);
        for (int i = 1; i <= 100; ++i) {
            const double v = phi4::lambda_renormalized(0.1 * i);
            ok = ok && std::isfinite(v) && v != 0.0;
        }
        add("one-loop coupling", ok, "lambda_R(1) = " + rounded(phi4::lambda_renormalized(1.0), 15));
    });

    guarded("resummation pole", [&] {
        const phi4::ResummationState state{1.0, 1.0};
        const double mu_c = phi4::critical_scale(state);
        double lo = std::log(state.mu0);
        double hi = lo + 200.0;
        while (hi - lo > 1e-13) {
            const double mid = 0.5 * (lo + hi);
            (phi4::resum_chain(state, std::exp(mid)).pole() ? hi : lo) = mid;
        }
        const bool bracket = close_rel(std::exp(lo), mu_c, 1e-9) && close_rel(std::exp(hi), mu_c, 1e-9);
        const bool finite = std::isfinite(phi4::geometric_partial_sum(1.0, 1000)) &&
                            std::isfinite(phi4::truncated_chain(state, mu_c, 1)) &&
                            std::isfinite(phi4::truncated_chain({50.0, 1.0}, 1e3, 40));
        add("resummation pole", bracket && finite, "pole bracketed at mu_c = " + rounded(mu_c, 10) + "; truncations finite");
    });

    guarded("Higgs reference", [&] {
        const auto& h = phi4::higgs_reference;
        add("Higgs reference", h.lower_bound == 76.0 && h.predicted == 138.0 && h.upper_bound == 170.0 && h.ordered(),
            "76 < 138 < 170 GeV, reference data");
    });
    return checks;
}

// ---------------------------------------------------------------------------
// subcommands

namespace detail_ {

struct Params {
    int n = 2;
    std::optional<double> msq;
    std::optional<double> mu1;
    std::optional<double> m;
    double alpha = constants::fine_structure;
    double bethe_log = 2.8118;
    double sigma = 0.0;
    double lambda = 0.0;
    double lambda0 = 0.0;
    double mu0 = 0.0;
    std::optional<double> mu;
    std::optional<double> mu_min;
    std::optional<double> mu_max;
    int points = 11;
    double b = phi4::default_beta_coeff;
    int order = 1;
    std::optional<double> cutoff;
    std::vector<double> grid;
    double rel_tol = 1e-10;
};

inline void require_scalar(const RunConfig& config)
{
    detail::require(config.format == Format::json, "csv and plot-data formats are only available for sweeps");
}

// regularize and oracle are homogeneous in the mass scale, so they run
// directly in the selected units.

inline Report regularize_cmd(const Params& p, const RunConfig& config)
{
    using namespace kernel;
    require_scalar(config);
    const ScalarLoopIntegral integral(p.n, p.msq);
    Report r;
    r.subcommand = "regularize";
    r.inputs.emplace_back("n", std::to_string(p.n));
    if (p.msq) r.inputs.emplace_back("msq", exact(*p.msq));
    if (p.mu1) r.inputs.emplace_back("mu1", exact(*p.mu1));

    auto value = regularize(integral);
    const auto d = differentiate_in_masssq(integral, differentiation_count(integral));
    r.output("superficial_degree", std::to_string(superficial_degree(integral)), "power counting 4 - 2n");
    r.output("differentiations", std::to_string(differentiation_count(integral)), "derivatives in M^2 to reach convergence");
    r.output("prefactor", to_string(d.prefactor), "n(n+1)...(n+t-1) from differentiating under the integral");
    r.output("expression", render(value), "closed form integrated back, constants appended per integration");
    for (const auto& t : value.expanded_terms())
        r.output("coefficient of " + term_body(t.mass_sq_power, t.has_log), unit_multiple(t.coeff),
                 "exact rational coefficient");

    if (p.mu1) {
        const auto& entries = value.ledger.entries();
        const auto it = std::find_if(entries.begin(), entries.end(), [](const auto& e) { return e.mass_dimension == 0; });
        detail::require(it != entries.end(), "mu1 needs a dimensionless constant, none appears for n = " + std::to_string(p.n));
        value.ledger.alias_scale(it->index, *p.mu1);
    }
    if (p.msq) {
        if (value.ledger.unfixed_count() == 0) {
            r.output("value", rounded(evaluate(value, *p.msq), config.precision), "bracket evaluated at M^2, in units of i/(16 pi^2)");
        } else {
            r.output("value", "unfixed", "needs every constant fixed; pass --mu1 for a dimensionless C");
        }
    }
    r.ledger = ledger_json(value.ledger, config.precision);
    return r;
}

inline Report selfenergy_cmd(const Params& p, const RunConfig& config)
{
    require_scalar(config);
    detail::require(p.m.has_value(), "selfenergy needs --m");
    const double unit = config.mass_unit();
    const double m = *p.m * unit;
    const double mu1 = (p.mu1 ? *p.mu1 : *p.m) * unit;
    Report r;
    r.subcommand = "selfenergy";
    r.inputs = {{"m", exact(*p.m)}, {"alpha", exact(p.alpha)}, {"mu1", exact(p.mu1 ? *p.mu1 : *p.m)}};

    const auto coeffs = qed::pipeline_coefficients();
    const auto pipeline = qed::on_shell_mass_shift_pipeline(m, p.alpha, mu1);
    const auto numeric = qed::on_shell_mass_shift_quadrature(m, p.alpha, mu1);
    const double scale = p.alpha * m / (4.0 * constants::pi);
    if (std::abs(pipeline.delta_m - numeric.delta_m) > 1e-9 * scale)
        throw NumericError("x-quadrature disagrees with the exact pipeline");

    r.output("const_coefficient", to_string(coeffs.const_term), "exact Feynman-parameter integration");
    r.output("log_coefficient", to_string(coeffs.log_term), "exact Feynman-parameter integration");
    r.output("log_ratio", rounded(std::log(m * m / (mu1 * mu1)), config.precision), "ln(m^2/mu1^2)");
    r.output("delta_m", rounded(pipeline.delta_m / unit, config.precision), "on-shell mass shift alpha m/(4 pi)(5 - 3 ln(m^2/mu1^2))");
    r.output("delta_m_over_m", rounded(pipeline.delta_m / m, config.precision), "derived");
    r.output("delta_m_quadrature", rounded(numeric.delta_m / unit, config.precision), "adaptive x-quadrature cross-check");
    r.output("slope_ln_mu1_sq", rounded(qed::mass_shift_log_scale_slope(m, p.alpha) / unit, config.precision),
             "d delta_m / d ln(mu1^2) = 3 alpha m/(4 pi)");
    r.ledger = scale_ledger(mu1, config.precision);
    return r;
}

inline Report mu1_cmd(const Params& p, const RunConfig& config)
{
    require_scalar(config);
    detail::require(p.m.has_value(), "mu1 needs --m");
    const double unit = config.mass_unit();
    const double m = *p.m * unit;
    Report r;
    r.subcommand = "mu1";
    r.inputs = {{"m", exact(*p.m)}, {"alpha", exact(p.alpha)}};
    const double closed = qed::solve_mu1(m);
    const double numeric = qed::solve_mu1_numeric(m, p.alpha);
    if (std::abs(numeric - closed) > 1e-12 * closed) throw NumericError("root finder disagrees with m exp(-5/6)");
    r.output("mu1", rounded(closed / unit, config.precision), "renormalization scale with zero mass shift, m exp(-5/6)");
    r.output("mu1_over_m", rounded(closed / m, config.precision), "exp(-5/6)");
    r.output("mu1_root_finder", rounded(numeric / unit, config.precision), "bracketing root finder on delta_m(mu1)");
    r.ledger = scale_ledger(closed, config.precision);
    return r;
}

inline Report lambshift_cmd(const Params& p, const RunConfig& config)
{
    require_scalar(config);
    const double unit = config.mass_unit();
    const double m_user = p.m ? *p.m : constants::electron_mass_gev / unit;
    Report r;
    r.subcommand = "lambshift";
    r.inputs = {{"alpha", exact(p.alpha)}, {"m", exact(m_user)}, {"bethe-log", exact(p.bethe_log)}};
    const double shift = qed::lamb_shift_estimate(p.alpha, m_user * unit, p.bethe_log);
    r.output("shift_MHz", rounded(shift, config.precision),
             "leading-log 2S-2P estimate 4 alpha^5 m/(3 pi n^3)[ln(1/alpha^2) - ln k0 + 19/30], n = 2");
    r.output("in_band", shift >= 900.0 && shift <= 1100.0 ? "true" : "false", "band [900, 1100] MHz");
    r.output("reference_estimate_MHz", "997", "reference data, not computed");
    r.output("measured_MHz", "1057.8", "reference data, not computed");
    return r;
}

inline Report phi4_cmd(const Params& p, const RunConfig& config)
{
    require_scalar(config);
    const double unit = config.mass_unit();
    const phi4::SSBPotential pot(p.sigma * unit * unit, p.lambda);
    Report r;
    r.subcommand = "phi4";
    r.inputs = {{"sigma", exact(p.sigma)}, {"lambda", exact(p.lambda)}};
    const auto vac = phi4::ssb_vacuum(pot);
    const double numeric = phi4::minimize_potential(pot);
    if (std::abs(numeric - vac.phi1) > 1e-8 * vac.phi1) throw NumericError("potential minimizer disagrees with Phi1");
    r.output("phi1", rounded(vac.phi1 / unit, config.precision), "vacuum sqrt(6 sigma/lambda)");
    r.output("m_sigma", rounded(vac.m_sigma / unit, config.precision), "curvature mass sqrt(2 sigma)");
    r.output("lambda_R", rounded(phi4::lambda_renormalized(p.lambda), config.precision), "one-loop lambda(1 + 9 lambda/(32 pi^2))");
    r.output("invariant_ratio", rounded(phi4::lambda_invariant_ratio(vac.m_sigma, vac.phi1), config.precision),
             "3 m_sigma^2/Phi1^2, returns lambda");
    r.output("phi1_minimizer", rounded(numeric / unit, config.precision), "Brent minimization of V");
    const auto& h = phi4::higgs_reference;
    r.output("higgs_lower_bound", rounded(h.lower_bound / unit, config.precision), "reference data, not derived");
    r.output("higgs_predicted", rounded(h.predicted / unit, config.precision), "reference data, not derived");
    r.output("higgs_upper_bound", rounded(h.upper_bound / unit, config.precision), "reference data, not derived");
    return r;
}

inline Report resum_cmd(const Params& p, const RunConfig& config)
{
    const double unit = config.mass_unit();
    const phi4::ResummationState state{p.lambda0, p.mu0 * unit, p.b};
    state.validate();
    detail::require(p.order >= 0, "order must be non-negative");
    const bool sweep = p.mu_min || p.mu_max;
    detail::require(sweep != p.mu.has_value(), "resum needs either --mu or --mu-min/--mu-max");

    Report r;
    r.subcommand = "resum";
    r.inputs = {{"lambda0", exact(p.lambda0)}, {"mu0", exact(p.mu0)}, {"b", exact(p.b)}, {"order", std::to_string(p.order)}};
    const double mu_c = phi4::critical_scale(state);
    r.output("mu_c", rounded(mu_c / unit, config.precision), "pole of the resummed chain, mu0 exp(1/(2 b lambda0))");

    if (!sweep) {
        require_scalar(config);
        r.inputs.emplace_back("mu", exact(*p.mu));
        const double mu = *p.mu * unit;
        const auto chain = phi4::resum_chain(state, mu);
        if (chain.pole())
            throw NumericError("resummed coupling has a pole: mu = " + exact(*p.mu) + " is at or above mu_c = " +
                               exact(mu_c / unit));
        r.output("ratio", rounded(state.ratio(mu), config.precision), "r = b lambda0 ln(mu^2/mu0^2)");
        r.output("coupling", rounded(*chain.coupling, config.precision), "resummed lambda0/(1 - r)");
        r.output("truncated", rounded(phi4::truncated_chain(state, mu, p.order), config.precision),
                 "finite-order chain lambda0 (1 + r + ... + r^order)");
        r.output("vacuum", phi4::to_string(phi4::vacuum_status(state, mu)), "derived");
        return r;
    }

    detail::require(p.mu_min && p.mu_max, "sweep needs both --mu-min and --mu-max");
    r.inputs.emplace_back("mu-min", exact(*p.mu_min));
    r.inputs.emplace_back("mu-max", exact(*p.mu_max));
    r.inputs.emplace_back("points", std::to_string(p.points));
    r.columns = {"mu", "ratio", "coupling", "truncated", "vacuum"};
    r.plot_y = 2;
    for (double mu_user : log_grid(*p.mu_min, *p.mu_max, p.points)) {
        const double mu = mu_user * unit;
        const auto chain = phi4::resum_chain(state, mu);
        r.rows.push_back({rounded(mu_user, config.precision), rounded(state.ratio(mu), config.precision),
                          chain.pole() ? "pole" : rounded(*chain.coupling, config.precision),
                          rounded(phi4::truncated_chain(state, mu, p.order), config.precision),
                          phi4::to_string(phi4::vacuum_status(state, mu))});
    }
    r.provenance.emplace_back("rows", "resummed and truncated chains per scale; pole marks 1 - r <= 0");
    return r;
}

inline Report oracle_cmd(const Params& p, const RunConfig& config)
{
    detail::require(p.msq.has_value(), "oracle needs --msq");
    detail::require(p.cutoff.has_value() != !p.grid.empty(), "oracle needs either --cutoff or --grid");
    Report r;
    r.subcommand = "oracle";
    r.inputs = {{"n", std::to_string(p.n)}, {"msq", exact(*p.msq)}, {"rel-tol", exact(p.rel_tol)}};
    const double s = *p.msq;

    if (p.n >= 3)
        r.output("closed_form", rounded(kernel::evaluate(kernel::evaluate_convergent(kernel::ScalarLoopIntegral(p.n)), s),
                                        config.precision),
                 "convergent closed form, in units of i/(16 pi^2)");

    if (p.cutoff) {
        require_scalar(config);
        r.inputs.emplace_back("cutoff", exact(*p.cutoff));
        oracle::CutoffProbe probe{p.n, s, {*p.cutoff}, p.rel_tol};
        probe.validate();
        r.output("radial_integral", rounded(oracle::radial_integral(p.n, s, *p.cutoff, p.rel_tol), config.precision),
                 "adaptive quadrature of k^3 (k^2 + M^2)^-n on [0, cutoff]");
        r.output("analytic", rounded(oracle::radial_antiderivative(p.n, s, *p.cutoff), config.precision),
                 "antiderivative in u = k^2");
        r.output("wick_rotated", rounded(oracle::wick_rotated_radial(p.n, s, *p.cutoff, p.rel_tol), config.precision),
                 "2 (-1)^n times the radial integral, in units of i/(16 pi^2)");
        return r;
    }

    r.inputs.emplace_back("grid", joined(p.grid));
    oracle::CutoffProbe probe{p.n, s, p.grid, p.rel_tol};
    probe.validate();
    const auto values = oracle::sweep(probe);
    r.columns = {"cutoff", "radial_integral", "analytic", "wick_rotated"};
    r.plot_y = 1;
    const double sign = p.n % 2 == 0 ? 2.0 : -2.0;
    for (std::size_t i = 0; i < values.size(); ++i)
        r.rows.push_back({rounded(p.grid[i], config.precision), rounded(values[i], config.precision),
                          rounded(oracle::radial_antiderivative(p.n, s, p.grid[i]), config.precision),
                          rounded(sign * values[i], config.precision)});
    r.provenance.emplace_back("rows", "cumulative shell quadrature per cutoff");
    if (probe.cutoffs.size() >= 4 && probe.decades() >= 3.0 - 1e-12) {
        const auto sig = oracle::divergence_signature(probe);
        r.output("divergence", oracle::to_string(sig.kind), "growth of dR/d ln(cutoff) across the grid");
        r.output("growth_exponent", rounded(sig.growth_exponent, config.precision), "derived");
        r.output("growth_coefficient", rounded(sig.coefficient, config.precision), "derived");
    }
    if (p.n == 2 && probe.decades() >= 4.0 - 1e-12)
        r.output("asymptote_constant", rounded(oracle::asymptote_constant(probe), config.precision),
                 "limit of R_2 - ln(cutoff), expected -ln(M^2)/2 - 1/2");
    return r;
}

inline Report demo_cmd(const RunConfig& config, bool& all_pass)
{
    require_scalar(config);
    Report r;
    r.subcommand = "demo";
    all_pass = true;
    for (const auto& c : demo_checks()) {
        r.output(c.name, c.pass ? "pass" : "FAIL", c.detail);
        all_pass = all_pass && c.pass;
    }
    return r;
}

inline std::optional<int> precision_from_env()
{
    const char* raw = std::getenv("LOOPREG_PRECISION");
    if (!raw) return std::nullopt;
    try {
        std::size_t used = 0;
        const int p = std::stoi(raw, &used);
        if (used != std::string(raw).size()) throw std::invalid_argument("trailing characters");
        return p;
    } catch (const std::exception&) {
        throw DomainError(std::string("LOOPREG_PRECISION is not an integer: ") + raw);
    }
}

/// key=value lines from a config file as --key value pairs, skipping keys
/// already given on the command line.
inline std::vector<std::string> config_args(const std::string& path, const std::vector<std::string>& given)
{
    std::ifstream in(path);
    detail::require(static_cast<bool>(in), "cannot read config file " + path);
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    auto present = [&](const std::string& key) {
        return std::any_of(given.begin(), given.end(),
                           [&](const std::string& a) { return a == "--" + key || a.rfind("--" + key + "=", 0) == 0; });
    };
    std::vector<std::string> out;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        line = trim(line.substr(0, line.find('#')));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        detail::require(eq != std::string::npos, path + ":" + std::to_string(number) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        detail::require(!key.empty() && key != "config", path + ":" + std::to_string(number) + ": invalid key");
        if (present(key)) continue;
        out.push_back("--" + key);
        out.push_back(value);
    }
    return out;
}

}  // namespace detail_

inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err)
{
    RunConfig config;
    detail_::Params p;
    std::optional<int> precision;
    std::string format = "json";
    std::string config_path;

    CLI::App app{"loopreg: one-loop integrals by differentiation in M^2", "loopreg"};
    app.require_subcommand(1, 1);
    app.add_option("--units", config.units, "mass units at the command line")->check(CLI::IsMember({"GeV", "MeV"}));
    app.add_option("--precision", precision, "significant digits in outputs, 4..17");
    app.add_option("--format", format, "report format")->check(CLI::IsMember({"json", "csv", "plot-data"}));
    app.add_option("--config", config_path, "key=value file overriding defaults");

    auto* reg = app.add_subcommand("regularize", "reduce I_n(M^2) by differentiation and integrate back");
    reg->add_option("--n", p.n, "propagator power")->required();
    reg->add_option("--msq", p.msq, "M^2 for a numeric value");
    reg->add_option("--mu1", p.mu1, "fixes the dimensionless constant as -ln(mu1^2)");

    auto* self = app.add_subcommand("selfenergy", "on-shell electron mass shift");
    self->add_option("--m", p.m, "fermion mass")->required();
    self->add_option("--alpha", p.alpha, "fine-structure constant");
    self->add_option("--mu1", p.mu1, "renormalization scale (default m)");

    auto* mu1 = app.add_subcommand("mu1", "scale at which the mass shift vanishes");
    mu1->add_option("--m", p.m, "fermion mass")->required();
    mu1->add_option("--alpha", p.alpha, "fine-structure constant");

    auto* lamb = app.add_subcommand("lambshift", "leading-log 2S-2P estimate in MHz");
    lamb->add_option("--alpha", p.alpha, "fine-structure constant");
    lamb->add_option("--m", p.m, "electron mass (default 0.511 MeV)");
    lamb->add_option("--bethe-log", p.bethe_log, "Bethe logarithm ln k0");

    auto* phi = app.add_subcommand("phi4", "broken-symmetry vacuum and one-loop coupling");
    phi->add_option("--sigma", p.sigma, "sigma (mass^2)")->required();
    phi->add_option("--lambda", p.lambda, "quartic coupling")->required();

    auto* resum = app.add_subcommand("resum", "resummed coupling and its pole");
    resum->add_option("--lambda0", p.lambda0, "coupling at mu0")->required();
    resum->add_option("--mu0", p.mu0, "reference scale")->required();
    resum->add_option("--mu", p.mu, "single scale");
    resum->add_option("--mu-min", p.mu_min, "sweep start");
    resum->add_option("--mu-max", p.mu_max, "sweep end");
    resum->add_option("--points", p.points, "sweep points, log-spaced");
    resum->add_option("--b", p.b, "beta coefficient");
    resum->add_option("--order", p.order, "order of the truncated chain");

    auto* orc = app.add_subcommand("oracle", "cutoff quadrature of the Euclidean radial integral");
    orc->add_option("--n", p.n, "propagator power")->required();
    orc->add_option("--msq", p.msq, "M^2")->required();
    orc->add_option("--cutoff", p.cutoff, "single cutoff");
    orc->add_option("--grid", p.grid, "comma-separated increasing cutoffs")->delimiter(',');
    orc->add_option("--rel-tol", p.rel_tol, "quadrature tolerance relative to the L1 norm");

    auto* demo = app.add_subcommand("demo", "run every cross-check");
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        for (std::size_t i = 0; i < args.size(); ++i) {
            if (args[i] == "--config" && i + 1 < args.size()) config_path = args[i + 1];
            else if (args[i].rfind("--config=", 0) == 0) config_path = args[i].substr(9);
        }
        if (!config_path.empty()) {
            const auto extra = detail_::config_args(config_path, args);
            args.insert(args.end(), extra.begin(), extra.end());
        }

        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);

        if (!precision) precision = detail_::precision_from_env();
        if (precision) config.precision = *precision;
        detail::require(config.precision >= 4 && config.precision <= 17, "precision must lie in [4, 17]");
        config.format = format == "csv" ? Format::csv : format == "plot-data" ? Format::plot_data : Format::json;

        Report report;
        int code = 0;
        if (*reg) report = detail_::regularize_cmd(p, config);
        else if (*self) report = detail_::selfenergy_cmd(p, config);
        else if (*mu1) report = detail_::mu1_cmd(p, config);
        else if (*lamb) report = detail_::lambshift_cmd(p, config);
        else if (*phi) report = detail_::phi4_cmd(p, config);
        else if (*resum) report = detail_::resum_cmd(p, config);
        else if (*orc) report = detail_::oracle_cmd(p, config);
        else if (*demo) {
            bool all_pass = false;
            report = detail_::demo_cmd(config, all_pass);
            code = all_pass ? 0 : 3;
        }
        if (config.format != Format::json && !report.sweep())
            throw DomainError("csv and plot-data formats are only available for sweeps");

        report.inputs.emplace_back("units", config.units);
        report.inputs.emplace_back("precision", std::to_string(config.precision));
        report.inputs.emplace_back("format", format);
        write_report(report, config, out);
        return code;
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const NumericError& e) {
        err << "numeric failure: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 3;
    }
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    return run(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace loopreg::cli
