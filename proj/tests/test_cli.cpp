#include <catch_amalgamated.hpp>

#include <loopreg/cli.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace loopreg;
using Json = cli::Json;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;

    Json json() const { return Json::parse(out); }
};

Outcome run(std::vector<std::string> args)
{
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::string write_temp(const std::string& name, const std::string& body)
{
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << body;
    return path.string();
}

// unset on scope exit so env tests do not leak
struct EnvPrecision {
    explicit EnvPrecision(const char* value) { ::setenv("LOOPREG_PRECISION", value, 1); }
    ~EnvPrecision() { ::unsetenv("LOOPREG_PRECISION"); }
};

}  // namespace

TEST_CASE("regularize n = 2 leaves one unfixed constant", "[cli]")
{
    const auto r = run({"regularize", "--n", "2", "--msq", "1.0"});
    REQUIRE(r.code == 0);
    const auto j = r.json();
    CHECK(j["outputs"]["coefficient of ln(M^2)"] == "-i/(16 pi^2)");
    CHECK(j["outputs"]["expression"] == "-i/(16 pi^2) * (ln(M^2) + C1)");
    REQUIRE(j["ledger"].size() == 1);
    CHECK(j["ledger"][0]["constant"] == "C1");
    CHECK(j["ledger"][0]["status"] == "unfixed");
    for (const char* key : {"subcommand", "inputs", "outputs", "provenance", "ledger"}) CHECK(j.contains(key));
}

TEST_CASE("regularize with a scale alias evaluates", "[cli]")
{
    const auto r = run({"regularize", "--n", "2", "--msq", "4", "--mu1", "2", "--precision", "10"});
    REQUIRE(r.code == 0);
    const auto j = r.json();
    CHECK(j["ledger"][0]["status"] == "fixed");
    CHECK(j["outputs"]["value"] == "0");

    const auto convergent = run({"regularize", "--n", "3", "--msq", "2"}).json();
    CHECK(convergent["outputs"]["value"] == "-0.25");
    CHECK(convergent["ledger"].empty());

    CHECK(run({"regularize", "--n", "3", "--mu1", "1"}).code == 2);
    CHECK(run({"regularize", "--n", "0"}).code == 2);
}

TEST_CASE("mu1 in MeV", "[cli]")
{
    const auto r = run({"mu1", "--m", "0.511", "--units", "MeV"});
    REQUIRE(r.code == 0);
    const auto j = r.json();
    CHECK(j["outputs"]["mu1"] == "0.22208");
    CHECK(j["outputs"]["mu1_over_m"] == "0.434598");
    CHECK(j["inputs"]["units"] == "MeV");

    // same physics in GeV
    const auto gev = run({"mu1", "--m", "0.000511"}).json();
    CHECK(gev["outputs"]["mu1"] == "0.00022208");
}

TEST_CASE("phi4 example", "[cli]")
{
    const auto r = run({"phi4", "--sigma", "1", "--lambda", "6"});
    REQUIRE(r.code == 0);
    const auto out = r.json()["outputs"];
    CHECK(out["phi1"] == "1");
    CHECK(out["m_sigma"] == "1.41421");
    CHECK(out["lambda_R"] == "7.02588");
    CHECK(out["invariant_ratio"] == "6");
    CHECK(out["higgs_predicted"] == "138");
}

TEST_CASE("selfenergy and lambshift", "[cli]")
{
    auto j = run({"selfenergy", "--m", "0.000511", "--precision", "12"}).json();
    CHECK(j["outputs"]["const_coefficient"] == "5");
    CHECK(j["outputs"]["log_coefficient"] == "-3");
    CHECK(j["outputs"]["delta_m"] == "1.48370092384e-06");
    CHECK(j["outputs"]["delta_m_quadrature"] == j["outputs"]["delta_m"]);
    CHECK(j["ledger"][0]["status"] == "fixed");

    j = run({"lambshift"}).json();
    CHECK(j["outputs"]["shift_MHz"] == "1039.31");
    CHECK(j["outputs"]["in_band"] == "true");
    CHECK(j["inputs"]["bethe-log"] == "2.8117999999999999");
}

TEST_CASE("exit codes", "[cli]")
{
    SECTION("usage errors are 2 with usage text")
    {
        const auto r = run({"phi4", "--sigma", "1", "--lambda", "6", "--bogus", "1"});
        CHECK(r.code == 2);
        CHECK(r.err.find("Usage") != std::string::npos);
        CHECK(run({}).code == 2);
        CHECK(run({"nosuch"}).code == 2);
        CHECK(run({"phi4", "--sigma", "abc", "--lambda", "1"}).code == 2);
        CHECK(run({"phi4", "--sigma", "1", "--lambda", "1", "--units", "keV"}).code == 2);
    }
    SECTION("validation errors are 2")
    {
        CHECK(run({"phi4", "--sigma", "-1", "--lambda", "6"}).code == 2);
        CHECK(run({"mu1", "--m", "0"}).code == 2);
        CHECK(run({"oracle", "--n", "2", "--msq", "1", "--cutoff", "10", "--rel-tol", "1e-3"}).code == 2);
        CHECK(run({"oracle", "--n", "2", "--msq", "1", "--grid", "10,5"}).code == 2);
        CHECK(run({"resum", "--lambda0", "1", "--mu0", "1"}).code == 2);
        CHECK(run({"phi4", "--sigma", "1", "--lambda", "6", "--precision", "3"}).code == 2);
        CHECK(run({"phi4", "--sigma", "1", "--lambda", "6", "--precision", "18"}).code == 2);
    }
    SECTION("csv and plot-data need a sweep")
    {
        CHECK(run({"phi4", "--sigma", "1", "--lambda", "6", "--format", "csv"}).code == 2);
        CHECK(run({"mu1", "--m", "1", "--format", "plot-data"}).code == 2);
        CHECK(run({"resum", "--lambda0", "1", "--mu0", "1", "--mu", "2", "--format", "csv"}).code == 2);
    }
    SECTION("pole on a finite request is 3")
    {
        const auto r = run({"resum", "--lambda0", "1", "--mu0", "1", "--mu", "1e8"});
        CHECK(r.code == 3);
        CHECK(r.err.find("pole") != std::string::npos);
        CHECK(run({"resum", "--lambda0", "1", "--mu0", "1", "--mu", "1e7"}).code == 0);
    }
    SECTION("help is 0")
    {
        CHECK(run({"--help"}).code == 0);
    }
}

TEST_CASE("sweeps", "[cli]")
{
    SECTION("resum csv")
    {
        const auto r = run({"resum", "--lambda0", "1", "--mu0", "1", "--mu-min", "1", "--mu-max", "1e9", "--points", "5",
                            "--format", "csv"});
        REQUIRE(r.code == 0);
        std::istringstream lines(r.out);
        std::string line;
        std::getline(lines, line);
        CHECK(line == "mu,ratio,coupling,truncated,vacuum");
        int rows = 0;
        std::string last;
        while (std::getline(lines, line)) {
            ++rows;
            last = line;
        }
        CHECK(rows == 5);
        CHECK(last == "1e+09,1.18108,pole,2.18108,symmetry-restored");
    }
    SECTION("resum plot-data marks poles as nan")
    {
        const auto r = run({"resum", "--lambda0", "1", "--mu0", "1", "--mu-min", "1", "--mu-max", "1e9", "--points", "3",
                            "--format", "plot-data"});
        REQUIRE(r.code == 0);
        CHECK(r.out == "# mu coupling\n1 1\n31622.8 2.44225\n1e+09 nan\n");
    }
    SECTION("oracle grid")
    {
        const auto r = run({"oracle", "--n", "2", "--msq", "1", "--grid", "1,10,100,1000,1e4,1e5"});
        REQUIRE(r.code == 0);
        const auto j = r.json();
        CHECK(j["rows"].size() == 6);
        CHECK(j["rows"][1][1] == "1.81251");
        CHECK(j["outputs"]["divergence"] == "log");
        CHECK(j["outputs"]["asymptote_constant"] == "-0.5");

        const auto quad = run({"oracle", "--n", "1", "--msq", "1", "--grid", "1e2,1e3,1e4,1e5"}).json();
        CHECK(quad["outputs"]["divergence"] == "quadratic");
        const auto conv = run({"oracle", "--n", "3", "--msq", "1", "--grid", "1e2,1e3,1e4,1e5"}).json();
        CHECK(conv["outputs"]["divergence"] == "convergent");
    }
}

TEST_CASE("config file", "[cli]")
{
    const auto cfg = write_temp("loopreg_cli_test.cfg", "# defaults\nlambda = 6\nunits=MeV\nprecision = 8\n");
    SECTION("fills missing options")
    {
        const auto r = run({"phi4", "--sigma", "1e6", "--config", cfg});
        REQUIRE(r.code == 0);
        const auto j = r.json();
        CHECK(j["inputs"]["lambda"] == "6");
        CHECK(j["inputs"]["units"] == "MeV");
        CHECK(j["outputs"]["phi1"] == "1000");
        CHECK(j["outputs"]["m_sigma"] == "1414.2136");
    }
    SECTION("command line wins")
    {
        const auto j = run({"phi4", "--sigma", "1", "--lambda", "2", "--units", "GeV", "--config", cfg}).json();
        CHECK(j["inputs"]["lambda"] == "2");
        CHECK(j["inputs"]["units"] == "GeV");
        CHECK(j["inputs"]["precision"] == "8");
    }
    SECTION("unknown keys and bad lines are rejected")
    {
        CHECK(run({"phi4", "--sigma", "1", "--lambda", "2", "--config", write_temp("loopreg_bad1.cfg", "sigmaa = 1\n")})
                  .code == 2);
        CHECK(run({"phi4", "--sigma", "1", "--config", write_temp("loopreg_bad2.cfg", "lambda 6\n")}).code == 2);
        // valid for another subcommand only
        CHECK(run({"phi4", "--sigma", "1", "--lambda", "2", "--config", write_temp("loopreg_bad3.cfg", "mu0 = 1\n")})
                  .code == 2);
        CHECK(run({"phi4", "--sigma", "1", "--lambda", "2", "--config", "/nonexistent/loopreg.cfg"}).code == 2);
    }
}

TEST_CASE("precision from the environment", "[cli]")
{
    {
        EnvPrecision env("12");
        CHECK(run({"mu1", "--m", "1"}).json()["outputs"]["mu1"] == "0.434598208507");
        CHECK(run({"mu1", "--m", "1", "--precision", "5"}).json()["outputs"]["mu1"] == "0.4346");
    }
    {
        EnvPrecision env("twelve");
        CHECK(run({"mu1", "--m", "1"}).code == 2);
    }
    {
        EnvPrecision env("30");
        CHECK(run({"mu1", "--m", "1"}).code == 2);
    }
    CHECK(run({"mu1", "--m", "1"}).json()["outputs"]["mu1"] == "0.434598");
}

TEST_CASE("reports round-trip", "[cli][property]")
{
    const std::vector<std::vector<std::string>> commands{
        {"regularize", "--n", "1", "--msq", "0.3", "--mu1", "0.7"},
        {"regularize", "--n", "4", "--msq", "1.7", "--precision", "17"},
        {"selfenergy", "--m", "0.511", "--mu1", "0.3", "--units", "MeV", "--precision", "17"},
        {"mu1", "--m", "91.1876", "--alpha", "0.1"},
        {"lambshift", "--bethe-log", "2.81", "--units", "MeV"},
        {"phi4", "--sigma", "0.1", "--lambda", "0.3", "--precision", "15"},
        {"resum", "--lambda0", "0.7", "--mu0", "3", "--mu", "10", "--order", "4"},
        {"resum", "--lambda0", "2", "--mu0", "1", "--mu-min", "0.5", "--mu-max", "1e5", "--points", "7"},
        {"oracle", "--n", "2", "--msq", "0.1", "--cutoff", "33.3"},
        {"oracle", "--n", "3", "--msq", "2", "--grid", "0.1,1,10,100,1000", "--rel-tol", "1e-9"},
        {"demo"},
    };
    for (const auto& args : commands) {
        INFO(args.front());
        const auto first = run(args);
        REQUIRE(first.code == 0);
        const auto again = run(cli::args_from_report(first.json()));
        REQUIRE(again.code == 0);
        CHECK(again.out == first.out);
    }
}

TEST_CASE("demo passes every cross-check", "[cli]")
{
    const auto r = run({"demo"});
    CHECK(r.code == 0);
    const auto outputs = r.json()["outputs"];
    CHECK(outputs.size() >= 10);
    for (const auto& [name, status] : outputs.items()) {
        INFO(name);
        CHECK(status == "pass");
    }
}
