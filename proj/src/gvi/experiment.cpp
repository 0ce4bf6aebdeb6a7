#include "gvi/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <algorithm>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>

#include <json.hpp>

#include "gvi/parallel.hpp"

namespace gvi {

using nlohmann::json;
using ojson = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(ErrorCode::io, "cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::trunc);
    if (!out) fail(ErrorCode::io, "cannot write " + path);
    out << text;
}

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <class T>
T get_or(const json& j, const char* key, T def) {
    if (!j.contains(key)) return def;
    try {
        return j.at(key).get<T>();
    } catch (const std::exception& e) {
        fail(ErrorCode::config, std::string("config field ") + key + " has the wrong type");
    }
}

}  // namespace

ScenarioConfig config_from_json(const std::string& text, const std::string& base_dir) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        fail(ErrorCode::config, std::string("config is not valid JSON: ") + e.what());
    }
    require(j.is_object(), ErrorCode::config, "config must be a JSON object");
    static const char* known[] = {"model",  "delta",     "sigma",     "c",        "alpha",
                                  "eps_sweep", "truncations", "tolerances", "output",  "schedule",
                                  "strict_hypotheses", "couplings", "j_max", "r", "seed"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known) ok = ok || it.key() == k;
        if (!ok) fail(ErrorCode::config, "unknown config field " + it.key());
    }
    ScenarioConfig c;
    for (const char* key : {"model", "delta", "sigma", "eps_sweep"})
        if (!j.contains(key)) fail(ErrorCode::config, std::string("config lacks field ") + key);
    c.model = get_or<std::string>(j, "model", "");
    c.delta = get_or<double>(j, "delta", 0.0);
    c.sigma = get_or<double>(j, "sigma", 0.0);
    c.c = get_or<double>(j, "c", 1.0);
    c.alpha = get_or<double>(j, "alpha", 1.0);
    c.eps_sweep = get_or<std::vector<double>>(j, "eps_sweep", {});
    if (j.contains("truncations")) {
        const json& t = j.at("truncations");
        c.K_x = get_or<int>(t, "K_x", c.K_x);
        c.N_theta = get_or<int>(t, "N_theta", c.N_theta);
        c.grid_steps = get_or<int>(t, "grid_steps", c.grid_steps);
    }
    if (j.contains("tolerances")) {
        const json& t = j.at("tolerances");
        c.ode_tol = get_or<double>(t, "ode_tol", c.ode_tol);
        c.picard_tol = get_or<double>(t, "picard_tol", c.picard_tol);
        c.C_cap = get_or<double>(t, "C_cap", c.C_cap);
    }
    c.output = get_or<std::string>(j, "output", c.output);
    c.schedule = schedule_from_name(get_or<std::string>(j, "schedule", "literal"));
    c.strict_hypotheses = get_or<bool>(j, "strict_hypotheses", false);
    c.couplings = get_or<bool>(j, "couplings", true);
    c.j_max = get_or<int>(j, "j_max", c.j_max);
    c.r = get_or<double>(j, "r", c.r);
    c.seed = get_or<int>(j, "seed", 0);

    if (c.eps_sweep.empty()) fail(ErrorCode::config, "eps_sweep must be non-empty");
    for (size_t i = 0; i < c.eps_sweep.size(); ++i) {
        if (!(c.eps_sweep[i] > 0.0 && c.eps_sweep[i] < 1.0)) fail(ErrorCode::config, "eps values must lie in (0, 1)");
        if (i > 0 && !(c.eps_sweep[i] < c.eps_sweep[i - 1])) fail(ErrorCode::config, "eps_sweep must be decreasing");
    }
    if (!(c.sigma > 0.0 && c.sigma < c.delta)) fail(ErrorCode::config, "need 0 < sigma < delta");
    if (!(c.c > 0.0)) fail(ErrorCode::config, "c must be positive");
    if (!(c.alpha > 0.0 && c.alpha <= 1.0)) fail(ErrorCode::config, "alpha must lie in (0, 1]");
    if (c.K_x < 0 || c.N_theta < 1 || c.grid_steps < 2) fail(ErrorCode::config, "invalid truncations");
    if (!(c.ode_tol > 0.0 && c.picard_tol > 0.0 && c.C_cap > 0.0)) fail(ErrorCode::config, "invalid tolerances");
    if (c.j_max < 1) fail(ErrorCode::config, "j_max must be positive");
    if (c.model.rfind("file:", 0) == 0) {
        fs::path p(c.model.substr(5));
        if (p.is_relative()) p = fs::path(base_dir) / p;
        c.model = "file:" + p.lexically_normal().string();
    }
    return c;
}

ScenarioConfig load_config(const std::string& path) {
    std::string base = fs::path(path).has_parent_path() ? fs::path(path).parent_path().string() : ".";
    return config_from_json(read_file(path), base);
}

std::string config_to_json(const ScenarioConfig& c) {
    ojson j;
    j["model"] = c.model;
    j["delta"] = c.delta;
    j["sigma"] = c.sigma;
    j["c"] = c.c;
    j["alpha"] = c.alpha;
    j["eps_sweep"] = c.eps_sweep;
    j["truncations"] = {{"K_x", c.K_x}, {"N_theta", c.N_theta}, {"grid_steps", c.grid_steps}};
    j["tolerances"] = {{"ode_tol", c.ode_tol}, {"picard_tol", c.picard_tol}, {"C_cap", c.C_cap}};
    j["output"] = c.output;
    j["schedule"] = schedule_name(c.schedule);
    j["strict_hypotheses"] = c.strict_hypotheses;
    j["couplings"] = c.couplings;
    j["j_max"] = c.j_max;
    j["r"] = c.r;
    j["seed"] = c.seed;
    return j.dump(2);
}

SymbolFamily resolve_model(const std::string& model, const std::string& base_dir) {
    if (model.rfind("file:", 0) == 0) {
        fs::path p(model.substr(5));
        if (p.is_relative()) p = fs::path(base_dir) / p;
        return load_symbol(p.string());
    }
    return builtin_model(model);
}

AnsatzField::AnsatzField(const TrigSeries& u, double eps, std::vector<double> xi0)
    : u_(u), eps_(eps), xi0_(std::move(xi0)) {
    require(u.n_times() >= 4, ErrorCode::invalid_argument, "interpolation needs at least four grid times");
}

void AnsatzField::prepare(double s) {
    if (s == cached_s_) return;
    cached_s_ = s;
    const auto& g = u_.time_grid();
    int nt = static_cast<int>(g.size());
    int k = static_cast<int>(std::upper_bound(g.begin(), g.end(), s) - g.begin()) - 2;
    k = std::max(0, std::min(nt - 4, k));
    double w[4];
    for (int a = 0; a < 4; ++a) {
        w[a] = 1.0;
        for (int b = 0; b < 4; ++b)
            if (b != a) w[a] *= (s - g[k + b]) / (g[k + a] - g[k + b]);
    }
    int N = u_.n_theta();
    modes_.assign(2 * N + 1, PowerSeriesX());
    for (int n = -N; n <= N; ++n) {
        const PowerSeriesX& m = u_.mode(n);
        if (m.is_zero()) continue;
        PowerSeriesX snap(m.dim_x(), m.trunc_order(), m.rows(), 1);
        size_t len = static_cast<size_t>(m.n_index()) * m.rows();
        for (int a = 0; a < 4; ++a) {
            const cplx* src = m.block(k + a, 0);
            for (size_t e = 0; e < len; ++e) snap.data()[e] += w[a] * src[e];
        }
        modes_[n + N] = std::move(snap);
    }
}

Eigen::VectorXcd AnsatzField::operator()(double t, const std::vector<double>& x) {
    prepare(t / eps_);
    double phase = 0.0;
    for (size_t a = 0; a < x.size(); ++a) phase += x[a] * xi0_[a];
    double theta = phase / eps_;
    const IndexSet& idx = u_.indices();
    int ni = idx.size();
    int d = idx.dim();
    int K = idx.trunc();
    std::vector<double> pw(static_cast<size_t>(d) * (K + 1), 1.0);
    for (int a = 0; a < d; ++a)
        for (int e = 1; e <= K; ++e) pw[a * (K + 1) + e] = pw[a * (K + 1) + e - 1] * x[a];
    std::vector<double> mono(ni, 1.0);
    for (int i = 0; i < ni; ++i)
        for (int a = 0; a < d; ++a) mono[i] *= pw[a * (K + 1) + idx.index(i)[a]];
    int size = u_.size();
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(size);
    int N = u_.n_theta();
    for (int n = -N; n <= N; ++n) {
        const PowerSeriesX& m = modes_[n + N];
        if (m.n_index() == 0) continue;
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(size);
        for (int i = 0; i < ni; ++i) {
            const cplx* b = m.block(0, i);
            for (int c = 0; c < size; ++c) v(c) += mono[i] * b[c];
        }
        out += std::polar(1.0, n * theta) * v;
    }
    return eps_ * out;
}

double growth_exponent(const TrigSeries& f) {
    const auto& g = f.time_grid();
    std::vector<double> x0(f.dim_x(), 0.0);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (int t = 0; t < static_cast<int>(g.size()); ++t) {
        double mx = 0.0;
        for (int q = 0; q < 16; ++q) mx = std::max(mx, f.evaluate(x0, 2.0 * M_PI * q / 16.0, t).norm());
        if (!(mx > 0.0)) continue;
        double y = std::log(mx);
        sx += g[t];
        sy += y;
        sxx += g[t] * g[t];
        sxy += g[t] * y;
        ++n;
    }
    double den = n * sxx - sx * sx;
    if (n < 2 || den == 0.0) return 0.0;
    return (n * sxy - sx * sy) / den;
}

std::string csv_header() {
    return "eps,delta,sigma,c,alpha,case,m,omega,beta,R_inv,rho_inv,M,M_prime,s_bar,K_eps,norm_h_closed,"
           "norm_h_direct,norm_u_L2,ratio,growth_fit,picard_iters,flags";
}

std::string RowResult::csv_line() const {
    const ScenarioParams& p = params;
    std::string fl;
    for (size_t i = 0; i < flags.size(); ++i) fl += (i ? "|" : "") + flags[i];
    std::ostringstream os;
    os << fmt(p.eps) << ',' << fmt(p.delta) << ',' << fmt(p.sigma) << ',' << fmt(p.c) << ',' << fmt(p.alpha) << ','
       << rate_case_name(p.rate_case) << ',' << p.m << ',' << fmt(p.omega) << ',' << fmt(p.beta) << ','
       << fmt(p.R > 0 ? 1.0 / p.R : std::nan("")) << ',' << fmt(p.rho > 0 ? 1.0 / p.rho : std::nan("")) << ','
       << fmt(p.M) << ',' << fmt(p.M_prime) << ',' << fmt(p.s_bar) << ',' << fmt(K_eps) << ','
       << fmt(norm_h_closed) << ',' << fmt(norm_h_direct) << ',' << fmt(norm_u_L2) << ',' << fmt(ratio) << ','
       << fmt(growth_fit) << ',' << picard_iters << ',' << fl;
    return os.str();
}

namespace {

double l2_of(const TrigSeries& u, const ScenarioParams& p, const SymbolFamily& fam) {
    AnsatzField field(u, p.eps, fam.xi0);
    ConeQuadrature q;
    q.t_max = p.eps * p.s_bar;
    q.t_panel = p.eps;
    q.x_panel = p.eps;
    return l2_norm_on_cone([&](double t, const std::vector<double>& x) { return field(t, x).squaredNorm(); }, fam.d,
                           p.R, p.rho, q);
}

}  // namespace

RowResult run_scenario(const RunContext& ctx, double eps) {
    auto t0 = std::chrono::steady_clock::now();
    const ScenarioConfig& cfg = *ctx.config;
    const SymbolFamily& fam = *ctx.family;
    const SymbolSpectrum& spec = ctx.symbol->spectrum;
    RowResult row;
    int m_eff = spec.rate_case == RateCase::GENERAL ? spec.m : 1;
    ScenarioParams p = select_parameters(eps, cfg.delta, spec.rate_case, m_eff, spec.gamma0, cfg.schedule);
    p.sigma = cfg.sigma;
    p.c = cfg.c;
    p.alpha = cfg.alpha;
    row.params = p;
    if (p.regularity_limited) row.flags.push_back("REGULARITY_LIMITED");
    if (p.s_bar_off_scale) row.flags.push_back("S_BAR_OFF_SCALE");
    double mprime_alt = p.M - (m_eff * p.delta - 1.0) * std::abs(std::log(eps));
    if (std::abs(mprime_alt - p.M_prime) > 1e-12 * std::max(1.0, p.M)) row.flags.push_back("MPRIME_VARIANT");
    if (!cfg.couplings) row.flags.push_back("COUPLINGS_OFF");

    SpaceNormParams sp = p.space(ctx.constants.c0, ctx.constants.c1);
    std::vector<double> grid = uniform_grid(p.s_bar, cfg.grid_steps);
    PropagatorOptions popt;
    popt.ode_tol = cfg.ode_tol;
    PropagatorModes P =
        integrate_modes(abar_from_symbol(fam, eps, cfg.K_x), cfg.N_theta, grid, fam.d, cfg.K_x, fam.N, popt);
    ENorm norm(sp, fam.d, cfg.K_x, cfg.N_theta, grid);
    FreeSolution fsol = build_free_solution(spec, P, p.M);
    row.norm_f_E = norm.norm(fsol.f);
    row.K_eps = contraction_constant(p.omega, m_eff, p.beta, eps, row.norm_f_E, p.R, p.rho);

    SolverContext sc;
    sc.family = &fam;
    sc.propagator = &P;
    sc.norm = &norm;
    sc.eps = eps;
    sc.couplings = cfg.couplings;
    PicardOptions po;
    po.tol = cfg.picard_tol;
    po.j_max = cfg.j_max;
    po.enforce_hypotheses = cfg.strict_hypotheses;
    po.K_eps = row.K_eps;
    PicardState st = picard_solve(sc, fsol.f, po);
    if (st.K_too_large) row.flags.push_back("K_TOO_LARGE");
    if (st.norm_escaped) row.flags.push_back("NORM_ESCAPE");
    if (!st.converged) row.flags.push_back("NO_CONVERGENCE");
    row.picard_iters = st.iterations;
    row.norm_u_minus_f_E = st.norm_u_minus_f;
    row.max_residual_ratio = st.max_residual_ratio;

    double r = cfg.r > 0.0 ? cfg.r : eps;
    r = std::min(r, 1.0 / p.R);
    RateFunction rate = make_rates(spec, 1.0 / p.R, r, p.omega, eps);
    if (spec.rate_case == RateCase::MAXIMAL) rate.attach_branch(fam, spec, p.s_bar);
    LowerBoundReport lb = lower_bound_check(st.u, fsol.f, rate, r, p.omega, m_eff, p.M, spec.e_plus);
    row.C_eps = lb.C_eps;
    row.envelope_pass = lb.envelope_pass;
    if (!lb.envelope_pass) row.flags.push_back("ENVELOPE_FAIL");
    GrowthReport gr = verify_growth_bound(P, rate, p.omega, m_eff, ball_samples(fam.d, 1.0 / p.R, 5), 1.0 / p.R,
                                          cfg.C_cap);
    row.C_star = gr.C_star;
    if (!gr.pass) row.flags.push_back("GROWTH_BOUND_EXCEEDED");

    double amp = 2.0 * spec.e_plus.cwiseAbs().maxCoeff();
    GevreyNorm gn = gevrey_norm_oscillatory(eps, cfg.sigma, cfg.c, amp, p.M);
    row.norm_h_closed = gn.closed_form;
    row.norm_h_direct = gn.direct;
    row.norm_u_L2 = l2_of(st.u, p, fam);
    row.norm_f_L2 = l2_of(fsol.f, p, fam);
    InstabilityRow ir = instability_ratio(row.norm_u_L2, gn.closed_form, p, fam.d);
    row.ratio = ir.ratio;
    row.envelope = ir.envelope;
    row.growth_fit = growth_exponent(fsol.f);
    row.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return row;
}

namespace {

ojson row_json(const RowResult& r) {
    ojson j;
    j["eps"] = r.params.eps;
    j["status"] = r.status;
    j["wall_seconds"] = r.wall_seconds;
    j["csv"] = r.csv_line();
    j["extras"] = {{"norm_f_E", r.norm_f_E},
                   {"norm_u_minus_f_E", r.norm_u_minus_f_E},
                   {"max_residual_ratio", r.max_residual_ratio},
                   {"C_eps", r.C_eps},
                   {"C_star", r.C_star},
                   {"envelope_pass", r.envelope_pass},
                   {"norm_f_L2", r.norm_f_L2},
                   {"predicted_envelope", r.envelope},
                   {"s_bar_1", r.params.s_bar_1}};
    return j;
}

std::string constants_hash(const UniversalConstants& c) { return hex64(fnv1a64(fmt(c.c0) + "," + fmt(c.c1))); }

}  // namespace

std::string SweepSummary::to_json() const {
    ojson j;
    j["csv"] = csv_path;
    j["manifest"] = manifest_path;
    j["rows"] = rows.size();
    j["reused_rows"] = reused_rows;
    json st = json::array();
    for (const auto& r : rows) st.push_back({{"eps", r.params.eps}, {"status", r.status}});
    j["statuses"] = st;
    return j.dump(2);
}

SweepSummary run_sweep(const ScenarioConfig& cfg, const UniversalConstants& constants, const std::string& out_prefix,
                       int threads, const std::string& base_dir) {
    SymbolFamily fam = resolve_model(cfg.model, base_dir);
    AssumptionReport sym = analyze_symbol(fam);
    if (!sym.quadratic_source) fail(ErrorCode::assumption_failed, "source term is not quadratic in u");
    if (!(cfg.delta < sym.gevrey_ceiling)) {
        std::ostringstream os;
        os << "delta = " << cfg.delta << " not below the Gevrey ceiling " << sym.gevrey_ceiling << " of case "
           << rate_case_name(sym.spectrum.rate_case);
        fail(ErrorCode::index_out_of_range, os.str());
    }

    SweepSummary summary;
    std::string prefix = out_prefix.empty() ? cfg.output : out_prefix;
    summary.csv_path = prefix + ".csv";
    summary.manifest_path = prefix + ".manifest.json";
    std::string cfg_json = config_to_json(cfg);
    std::string cfg_hash = hex64(fnv1a64(cfg_json));
    std::string const_hash = constants_hash(constants);

    size_t n = cfg.eps_sweep.size();
    std::vector<RowResult> rows(n);
    std::vector<bool> done(n, false);
    std::vector<std::string> stored_csv(n);
    std::vector<ojson> stored_rows(n);
    if (fs::exists(summary.manifest_path)) {
        try {
            json old = json::parse(read_file(summary.manifest_path));
            if (old.value("config_hash", "") == cfg_hash && old.value("constants_hash", "") == const_hash) {
                for (const auto& r : old.at("rows")) {
                    double e = r.at("eps").get<double>();
                    for (size_t i = 0; i < n; ++i)
                        if (cfg.eps_sweep[i] == e && r.value("status", "") == "ok") {
                            done[i] = true;
                            stored_csv[i] = r.at("csv").get<std::string>();
                            stored_rows[i] = r;
                            rows[i].params.eps = e;
                            rows[i].status = "ok";
                            summary.reused_rows += 1;
                        }
                }
            }
        } catch (const std::exception&) {
            // unreadable manifest: recompute everything
        }
    }

    RunContext ctx;
    ctx.config = &cfg;
    ctx.family = &fam;
    ctx.symbol = &sym;
    ctx.constants = constants;

    std::mutex writer;
    auto write_manifest = [&]() {
        ojson m;
        m["config_hash"] = cfg_hash;
        m["constants_hash"] = const_hash;
        m["constants"] = {{"c0", constants.c0}, {"c1", constants.c1}, {"k_max", constants.k_max},
                          {"n_max", constants.n_max}};
        m["seed"] = cfg.seed;
        m["config"] = ojson::parse(cfg_json);
        m["symbol"] = ojson::parse(assumption_report_json(sym));
        ojson arr = ojson::array();
        for (size_t i = 0; i < n; ++i) {
            if (!done[i]) continue;
            arr.push_back(stored_rows[i].is_null() ? row_json(rows[i]) : stored_rows[i]);
        }
        m["rows"] = arr;
        write_file(summary.manifest_path, m.dump(2) + "\n");
    };

    std::vector<size_t> todo;
    for (size_t i = 0; i < n; ++i)
        if (!done[i]) todo.push_back(i);
    parallel_for(static_cast<int>(todo.size()), threads, [&](int w) {
        size_t i = todo[w];
        RowResult r;
        try {
            r = run_scenario(ctx, cfg.eps_sweep[i]);
        } catch (const Error& e) {
            if (!cfg.strict_hypotheses) throw;
            r.params.eps = cfg.eps_sweep[i];
            r.params.delta = cfg.delta;
            r.params.sigma = cfg.sigma;
            r.params.c = cfg.c;
            r.params.alpha = cfg.alpha;
            r.params.rate_case = sym.spectrum.rate_case;
            r.status = error_code_name(e.code());
            r.K_eps = r.norm_h_closed = r.norm_h_direct = r.norm_u_L2 = r.ratio = r.growth_fit = std::nan("");
            r.flags.push_back(r.status);
        }
        std::lock_guard<std::mutex> lock(writer);
        rows[i] = r;
        done[i] = true;
        stored_csv[i] = r.csv_line();
        write_manifest();
    });
    if (todo.empty()) write_manifest();

    std::string csv = csv_header() + "\n";
    for (size_t i = 0; i < n; ++i) csv += stored_csv[i] + "\n";
    write_file(summary.csv_path, csv);
    summary.rows = rows;
    for (const auto& r : rows) {
        if (r.status != "ok" && !summary.has_error) {
            summary.has_error = true;
            for (int c = 0; c <= static_cast<int>(ErrorCode::io); ++c)
                if (r.status == error_code_name(static_cast<ErrorCode>(c))) summary.first_error = static_cast<ErrorCode>(c);
        }
    }
    return summary;
}

bool SweepReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return !checks.empty();
}

std::string SweepReport::to_json() const {
    ojson j;
    j["rows"] = rows;
    ojson arr = ojson::array();
    for (const auto& c : checks) arr.push_back({{"name", c.name}, {"verdict", c.pass ? "PASS" : "FAIL"}, {"detail", c.detail}});
    j["checks"] = arr;
    j["ratio_log_slope"] = ratio_log_slope;
    j["growth_fit_min"] = growth_fit_min;
    j["growth_fit_max"] = growth_fit_max;
    j["all_pass"] = all_pass();
    return j.dump(2);
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep)) out.push_back(cur);
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

// strictly monotone in the direction of decreasing eps
ReportCheck monotone(const std::string& name, const std::vector<double>& eps, const std::vector<double>& v,
                     bool increasing) {
    ReportCheck c;
    c.name = name;
    c.pass = true;
    for (size_t i = 1; i < v.size(); ++i) {
        bool ok = increasing ? v[i] > v[i - 1] : v[i] < v[i - 1];
        if (!ok) {
            c.pass = false;
            std::ostringstream os;
            os << "eps " << fmt(eps[i - 1]) << " -> " << fmt(eps[i]) << ": " << fmt(v[i - 1]) << " -> " << fmt(v[i]);
            c.detail = os.str();
            return c;
        }
    }
    c.detail = increasing ? "strictly increasing as eps decreases" : "strictly decreasing as eps decreases";
    return c;
}

}  // namespace

SweepReport report_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) fail(ErrorCode::config, "empty CSV");
    std::vector<std::string> head = split(line, ',');
    std::map<std::string, int> col;
    for (size_t i = 0; i < head.size(); ++i) col[head[i]] = static_cast<int>(i);
    for (const char* k : {"eps", "ratio", "K_eps", "growth_fit"})
        if (!col.count(k)) fail(ErrorCode::config, std::string("CSV lacks column ") + k);
    struct Row {
        double eps, ratio, K, growth;
    };
    std::vector<Row> rows;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        auto f = split(line, ',');
        if (f.size() < head.size()) fail(ErrorCode::config, "short CSV row");
        auto num = [&](const char* k) {
            try {
                return std::stod(f[col[k]]);
            } catch (const std::exception&) {
                return std::nan("");
            }
        };
        rows.push_back({num("eps"), num("ratio"), num("K_eps"), num("growth_fit")});
    }
    if (rows.empty()) fail(ErrorCode::config, "CSV has no data rows");
    std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) { return a.eps > b.eps; });
    SweepReport rep;
    rep.rows = static_cast<int>(rows.size());
    std::vector<double> eps, ratio, K;
    for (const auto& r : rows) {
        eps.push_back(r.eps);
        ratio.push_back(r.ratio);
        K.push_back(r.K);
    }
    rep.checks.push_back(monotone("ratio_increasing", eps, ratio, true));
    rep.checks.push_back(monotone("K_eps_decreasing", eps, K, false));
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    rep.growth_fit_min = std::numeric_limits<double>::infinity();
    rep.growth_fit_max = -std::numeric_limits<double>::infinity();
    for (const auto& r : rows) {
        rep.growth_fit_min = std::min(rep.growth_fit_min, r.growth);
        rep.growth_fit_max = std::max(rep.growth_fit_max, r.growth);
        if (!(r.ratio > 0.0)) continue;
        double x = std::log(r.eps), y = std::log(r.ratio);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    double den = n * sxx - sx * sx;
    rep.ratio_log_slope = (n >= 2 && den != 0.0) ? (n * sxy - sx * sy) / den : 0.0;
    return rep;
}

}  // namespace gvi
