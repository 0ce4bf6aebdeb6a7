#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "gvi/constants_frozen.hpp"
#include "gvi/experiment.hpp"

#include <json.hpp>

using namespace gvi;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    fs::path d = fs::temp_directory_path() / ("gvi_test_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

const char* kSmall = R"({
  "model": "cauchy-riemann", "delta": 0.3, "sigma": 0.2,
  "eps_sweep": [0.0625, 0.03125],
  "truncations": {"K_x": 4, "N_theta": 3, "grid_steps": 64}
})";


bool config_rejected(const std::string& text) {
    try {
        config_from_json(text);
    } catch (const Error& e) {
        return e.code() == ErrorCode::config;
    }
    return false;
}

}  // namespace

TEST_CASE("config defaults and validation") {
    ScenarioConfig c = config_from_json(kSmall);
    CHECK(c.c == 1.0);
    CHECK(c.alpha == 1.0);
    CHECK(c.K_x == 4);
    CHECK(c.ode_tol == 1e-10);
    CHECK(c.schedule == Schedule::LITERAL);
    CHECK(config_rejected(R"({"model": "cauchy-riemann", "delta": 0.3, "sigma": 0.3, "eps_sweep": [0.1]})"));
    CHECK(config_rejected(R"({"model": "cauchy-riemann", "delta": 0.3, "sigma": 0.2, "eps_sweep": [0.1, 0.2]})"));
    CHECK(config_rejected(R"({"model": "cauchy-riemann", "delta": 0.3, "sigma": 0.2, "eps_sweep": []})"));
    CHECK(config_rejected(R"({"model": "cauchy-riemann", "delta": 0.3, "sigma": 0.2, "eps_sweep": [0.1], "colour": 1})"));
    CHECK(config_rejected(R"({"delta": 0.3, "sigma": 0.2, "eps_sweep": [0.1]})"));
    CHECK(config_rejected("[1, 2]"));
    ScenarioConfig back = config_from_json(config_to_json(c));
    CHECK(config_to_json(back) == config_to_json(c));
    ScenarioConfig f = config_from_json(R"({"model": "file:sym.json", "delta": 0.3, "sigma": 0.2, "eps_sweep": [0.1]})",
                                        "/data/models");
    CHECK(f.model == "file:/data/models/sym.json");
}

TEST_CASE("growth fit recovers the exponent of a synthetic exponential") {
    std::vector<double> g = uniform_grid(3.0, 30);
    TrigSeries f(1, 1, 2, 2, g);
    for (int j = 0; j <= 30; ++j) {
        f.mode(1).at(j, 0, 0) = 0.3 * std::exp(1.25 * g[j]);
        f.mode(-1).at(j, 0, 0) = 0.3 * std::exp(1.25 * g[j]);
    }
    CHECK(growth_exponent(f) == doctest::Approx(1.25).epsilon(1e-10));
}

TEST_CASE("ansatz field reconstruction") {
    std::vector<double> g = uniform_grid(1.0, 8);
    TrigSeries u(1, 1, 2, 1, g);
    for (int j = 0; j <= 8; ++j) {
        u.mode(1).at(j, 1) = g[j] * g[j];  // s^2 x e^{i theta}
    }
    double eps = 0.1;
    AnsatzField field(u, eps, {1.0});
    double t = 0.037, x = 0.2;
    double s = t / eps;
    cplx want = eps * s * s * x * std::polar(1.0, x / eps);
    CHECK(std::abs(field(t, {x})(0) - want) < 1e-12);
}

TEST_CASE("report verdicts") {
    std::string head = csv_header() + "\n";
    auto row = [](double eps, double K, double ratio) {
        std::ostringstream os;
        os << eps << ",0.3,0.2,1,1,SEMISIMPLE,1,0,0.1,0.1,0.1,1,1,1," << K << ",1,1,1," << ratio << ",1,2,";
        return os.str() + "\n";
    };
    SweepReport ok = report_csv(head + row(0.1, 0.5, 1.0) + row(0.05, 0.4, 2.0) + row(0.025, 0.3, 4.0));
    CHECK(ok.all_pass());
    CHECK(ok.ratio_log_slope == doctest::Approx(-1.0));
    SweepReport bad = report_csv(head + row(0.1, 0.5, 1.0) + row(0.05, 0.4, 3.0) + row(0.025, 0.3, 2.0));
    CHECK_FALSE(bad.all_pass());
    REQUIRE(bad.checks.size() == 2);
    CHECK_FALSE(bad.checks[0].pass);
    CHECK(bad.checks[0].detail.find("0.050000000000000003 -> 0.025000000000000001") != std::string::npos);
    CHECK(bad.checks[1].pass);
    CHECK_THROWS_AS(report_csv("eps,ratio\n0.1,1\n"), Error);
}

TEST_CASE("sweep: rows, determinism, resume") {
    fs::path d = scratch("sweep");
    std::ofstream(d / "cfg.json") << kSmall;
    ScenarioConfig cfg = load_config((d / "cfg.json").string());
    SweepSummary a = run_sweep(cfg, canonical_constants(), (d / "a").string(), 1);
    std::string csv_a = slurp(d / "a.csv");
    int lines = 0;
    for (char ch : csv_a) lines += ch == '\n';
    CHECK(lines == 1 + static_cast<int>(cfg.eps_sweep.size()));
    CHECK_FALSE(a.has_error);
    SweepSummary b = run_sweep(cfg, canonical_constants(), (d / "b").string(), 2);
    CHECK(slurp(d / "b.csv") == csv_a);
    // full resume reuses every row
    SweepSummary again = run_sweep(cfg, canonical_constants(), (d / "a").string(), 1);
    CHECK(again.reused_rows == 2);
    CHECK(slurp(d / "a.csv") == csv_a);
    // drop the last row from the manifest: only that row is recomputed
    auto m = nlohmann::json::parse(slurp(d / "a.manifest.json"));
    m["rows"].erase(1);
    std::ofstream(d / "a.manifest.json") << m.dump();
    SweepSummary partial = run_sweep(cfg, canonical_constants(), (d / "a").string(), 1);
    CHECK(partial.reused_rows == 1);
    CHECK(slurp(d / "a.csv") == csv_a);
    // other constants invalidate the manifest
    UniversalConstants other = canonical_constants();
    other.c1 *= 0.5;
    CHECK(run_sweep(cfg, other, (d / "a").string(), 1).reused_rows == 0);
}

TEST_CASE("couplings-off control: ratio equals the free-solution prediction") {
    ScenarioConfig cfg = config_from_json(kSmall);
    cfg.couplings = false;
    cfg.eps_sweep = {0.0625};
    SymbolFamily fam = builtin_model("cauchy-riemann");
    AssumptionReport sym = analyze_symbol(fam);
    RunContext ctx{&cfg, &fam, &sym, canonical_constants()};
    RowResult r = run_scenario(ctx, 0.0625);
    CHECK(r.picard_iters == 1);
    CHECK(r.norm_u_L2 == doctest::Approx(r.norm_f_L2).epsilon(0.1));
    CHECK(r.ratio == doctest::Approx(r.norm_f_L2 / r.norm_h_closed).epsilon(0.1));
    CHECK(r.growth_fit == doctest::Approx(sym.spectrum.gamma0).epsilon(0.05));
}

TEST_CASE("sweep refuses a delta above the case ceiling") {
    ScenarioConfig cfg = config_from_json(
        R"({"model": "jordan-elliptic", "delta": 0.4, "sigma": 0.2, "eps_sweep": [0.0625]})");
    fs::path d = scratch("ceiling");
    try {
        run_sweep(cfg, canonical_constants(), (d / "x").string(), 1);
        FAIL("delta above the ceiling accepted");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::index_out_of_range);
    }
}
