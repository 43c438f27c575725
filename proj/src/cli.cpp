#include "dosx/cli.hpp"

#include "dosx/dos.hpp"
#include "dosx/errors.hpp"
#include "dosx/oracle.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace dosx {

namespace {

const std::set<std::string> kRequiredKeys = {
    "box.L",          "box.d",           "box.p_max",     "profile.kind",     "profile.width",
    "distribution.kind", "window.E",     "window.eta",    "window.epsilon",   "window.lambda",
    "window.lambda0", "orders.N",        "sampling.samples", "sampling.seed"};
const std::set<std::string> kOptionalKeys = {"distribution.c", "orders.n_max", "mode", "psi.vectors"};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) out.push_back(trim(cur));
    return out;
}

double as_double(const std::map<std::string, std::string>& kv, const std::string& key) {
    const std::string& v = kv.at(key);
    double x = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(x))
        throw ConfigError("key '" + key + "': expected a real number, got '" + v + "'");
    return x;
}

std::int64_t as_int(const std::map<std::string, std::string>& kv, const std::string& key) {
    const std::string& v = kv.at(key);
    std::int64_t x = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'");
    return x;
}

std::uint64_t as_uint(const std::map<std::string, std::string>& kv, const std::string& key) {
    const std::string& v = kv.at(key);
    std::uint64_t x = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ConfigError("key '" + key + "': expected a non-negative integer, got '" + v + "'");
    return x;
}

// "0; 1; 0+2" in d = 1, "0,0; 1,0" in d = 2: plane-wave index vectors joined by '+',
// normalized to unit length.
void parse_vectors(const std::string& text, ExperimentConfig& cfg) {
    const int d = cfg.box.d();
    for (const auto& item : split(text, ';')) {
        if (item.empty()) continue;
        std::vector<Momentum> parts;
        for (const auto& term : split(item, '+')) {
            const auto coords = split(term, ',');
            if (int(coords.size()) != d)
                throw ConfigError("key 'psi.vectors': component '" + term + "' needs " + std::to_string(d) +
                                  " integer indices");
            Momentum p;
            for (int j = 0; j < d; ++j) {
                int v = 0;
                const auto& c = coords[std::size_t(j)];
                const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
                if (ec != std::errc() || ptr != c.data() + c.size())
                    throw ConfigError("key 'psi.vectors': bad index '" + c + "'");
                p.n[std::size_t(j)] = v;
            }
            if (!cfg.box.contains(p))
                throw ConfigError("key 'psi.vectors': momentum '" + term + "' lies outside the truncated lattice");
            parts.push_back(p);
        }
        std::sort(parts.begin(), parts.end());
        if (std::adjacent_find(parts.begin(), parts.end()) != parts.end())
            throw ConfigError("key 'psi.vectors': repeated component in '" + item + "'");
        WaveVector psi;
        for (const auto& p : parts) psi.add(p, 1.0 / std::sqrt(double(parts.size())));
        cfg.psi.push_back(psi);
        cfg.psi_labels.push_back(item);
    }
    if (cfg.psi.empty()) throw ConfigError("key 'psi.vectors': no vectors given");
}

json complex_json(cplx v) { return json{{"re", v.real()}, {"im", v.imag()}}; }

json estimate_json(const ExpansionEstimate& e) {
    json j{{"method", method_name(e.method)}, {"n", e.order}, {"re", e.value.real()}, {"im", e.value.imag()}};
    if (e.std_error) j["stderr"] = *e.std_error;
    if (e.quadrature_budget) j["quadrature_budget"] = *e.quadrature_budget;
    return j;
}

json check_json(const CheckResult& c) {
    json j{{"name", c.name}, {"module", c.module}, {"passed", c.passed}, {"value", c.value},
           {"threshold", c.threshold}};
    if (!c.detail.empty()) j["detail"] = c.detail;
    return j;
}

std::vector<std::string> estimate_row(const std::string& psi, const std::string& quantity,
                                      const ExpansionEstimate& e) {
    return {psi,
            std::to_string(e.order),
            quantity,
            method_name(e.method),
            format_number(e.value.real()),
            format_number(e.value.imag()),
            e.std_error ? format_number(*e.std_error) : "",
            e.quadrature_budget ? format_number(*e.quadrature_budget) : ""};
}

CsvTable checks_table(const std::vector<CheckResult>& checks) {
    CsvTable t{"checks", {"name", "module", "passed", "value", "threshold", "detail"}, {}};
    for (const auto& c : checks)
        t.rows.push_back({c.name, c.module, c.passed ? "true" : "false", format_number(c.value),
                          format_number(c.threshold), c.detail});
    return t;
}

CheckResult make_check(std::string name, std::string module, double value, double threshold, std::string detail = "") {
    return {std::move(name), std::move(module), value <= threshold, value, threshold, std::move(detail)};
}

// mode coeffs: T_n and S_n by both methods at z = E + i eta
void mode_coeffs(const ExperimentConfig& cfg, RunResult& res, std::vector<CheckResult>& checks) {
    const Model model = cfg.model();
    const cplx z = cfg.window.z();
    SmoothingIntegrator integ(cfg.window, model.box.L());
    CsvTable t{"coeffs", {"psi", "n", "quantity", "method", "re", "im", "stderr", "quadrature_budget"}, {}};
    json rows = json::array();
    const cplx zs[1] = {z};
    for (std::size_t k = 0; k < cfg.psi.size(); ++k) {
        const auto& psi = cfg.psi[k];
        const auto& label = cfg.psi_labels[k];
        const auto mc = t_coeffs_mc(cfg.n_max, model, zs, psi, psi, cfg.samples, cfg.seed);
        for (int n = 0; n <= cfg.n_max; ++n) {
            const auto td = t_coeff_det(n, model, z, psi, psi);
            const auto& tm = mc[std::size_t(n)][0];
            const auto sd = s_coeff(n, model, integ, psi, psi, Method::deterministic);
            const auto sm = s_coeff(n, model, integ, psi, psi, Method::monte_carlo, cfg.samples, cfg.seed);
            for (const auto* e : {&td, &tm}) {
                t.rows.push_back(estimate_row(label, "T", *e));
                json j = estimate_json(*e);
                j["psi"] = label;
                j["quantity"] = "T";
                rows.push_back(j);
            }
            for (const auto* e : {&sd, &sm}) {
                t.rows.push_back(estimate_row(label, "S", *e));
                json j = estimate_json(*e);
                j["psi"] = label;
                j["quantity"] = "S";
                rows.push_back(j);
            }
            const std::string tag = "psi=" + label + " n=" + std::to_string(n);
            checks.push_back(make_check("T_det_vs_mc " + tag, "expansion", std::abs(td.value - tm.value),
                                        4.0 * *tm.std_error + 1e-12));
            checks.push_back(make_check("S_det_vs_mc " + tag, "expansion", std::abs(sd.value - sm.value),
                                        4.0 * *sm.std_error + *sd.quadrature_budget + *sm.quadrature_budget + 1e-12));
        }
    }
    res.summary["results"] = {{"z", complex_json(z)}, {"a", cfg.window.a()}, {"coefficients", rows}};
    res.tables.push_back(t);
}

// mode resolvent: oracle average vs partial sums of the smoothed expansion
void mode_resolvent(const ExperimentConfig& cfg, RunResult& res, std::vector<CheckResult>& checks) {
    const Model model = cfg.model();
    const auto& w = cfg.window;
    std::vector<std::pair<WaveVector, WaveVector>> pairs;
    for (const auto& p : cfg.psi) pairs.emplace_back(p, p);
    const double lam[1] = {w.lambda};
    const auto oracle = expect_resolvents(model, lam, w.z(), pairs, cfg.samples, cfg.seed)[0];
    CsvTable t{"resolvent",
               {"psi", "N", "oracle_re", "oracle_im", "oracle_stderr", "expansion_re", "expansion_im",
                "quadrature_budget", "discrepancy", "allowed", "asserted", "passed"},
               {}};
    json rows = json::array();
    for (std::size_t k = 0; k < cfg.psi.size(); ++k) {
        const double norm2 = cfg.psi[k].norm_squared();
        for (int N = 0; N <= cfg.N; ++N) {
            const auto ps = resolvent_partial_sum(N, model, w, cfg.psi[k], cfg.psi[k], Method::deterministic);
            const double disc = std::abs(oracle[k].value - ps.value);
            const double allowed = w.epsilon * norm2 + 3.0 * oracle[k].std_error + *ps.quadrature_budget;
            const bool asserted = N >= std::max(0, cfg.N - 1);
            const bool passed = disc <= allowed;
            if (asserted)
                checks.push_back(make_check("partial_sum psi=" + cfg.psi_labels[k] + " N=" + std::to_string(N),
                                            "expansion", disc, allowed));
            t.rows.push_back({cfg.psi_labels[k], std::to_string(N), format_number(oracle[k].value.real()),
                              format_number(oracle[k].value.imag()), format_number(oracle[k].std_error),
                              format_number(ps.value.real()), format_number(ps.value.imag()),
                              format_number(*ps.quadrature_budget), format_number(disc), format_number(allowed),
                              asserted ? "true" : "false", passed ? "true" : "false"});
            rows.push_back({{"psi", cfg.psi_labels[k]},
                            {"N", N},
                            {"oracle", {{"method", "monte_carlo"}, {"re", oracle[k].value.real()},
                                        {"im", oracle[k].value.imag()}, {"stderr", oracle[k].std_error}}},
                            {"expansion", estimate_json(ps)},
                            {"discrepancy", disc},
                            {"allowed", allowed},
                            {"asserted", asserted}});
        }
    }
    res.summary["results"] = {{"z", complex_json(w.z())}, {"a", w.a()}, {"rows", rows}};
    res.tables.push_back(t);
}

// mode dos: smoothed density of states, direct vs expansion
void mode_dos(const ExperimentConfig& cfg, RunResult& res, std::vector<CheckResult>& checks) {
    const Model model = cfg.model();
    const auto& w = cfg.window;
    const auto kc = choose_kappa(w, model, 0.5 * w.epsilon);
    DosRequest req{w, kc.kappa, cfg.N, cfg.samples, cfg.seed};
    const auto de = dos_expansion(req, model);
    const auto dd = dos_direct(req, model);
    const double disc = std::abs(dd.value - de.value);
    checks.push_back(make_check("dos_expansion_vs_direct", "dos", disc, w.epsilon + 3.0 * dd.std_error + de.quadrature_budget));
    const double tail = std::abs(dd.value - dd.restricted);
    checks.push_back(make_check("dos_tail_chain", "dos", tail,
                                kc.bound + 3.0 * (dd.std_error + dd.restricted_std_error)));

    // lambda = 0: each side against its own free closed form
    SpectralWindow w0 = w;
    w0.lambda = 0.0;
    DosRequest req0{w0, kc.kappa, cfg.N, 1, cfg.seed};
    const auto dd0 = dos_direct(req0, model);
    const auto de0 = dos_expansion(req0, model);
    double free_direct = 0.0, free_expansion = 0.0;
    const double a = w.a();
    for (const auto& p : dual_lattice_points(model.box)) {
        free_direct += f_lorentz(nu(p, model.box), w.E, w.eta);
        if (cutoff_vector(model.box, kc.kappa).coefficient(p) != 0.0)
            free_expansion += s0_time_domain(nu(p, model.box), w.E, w.eta, a).imag();
    }
    free_direct /= model.box.volume();
    free_expansion /= model.box.volume();
    checks.push_back(make_check("dos_direct_free", "dos", std::abs(dd0.value - free_direct), 1e-3));
    checks.push_back(make_check("dos_expansion_free", "dos", std::abs(de0.value - free_expansion), 1e-3));

    CsvTable t{"dos", {"quantity", "method", "value", "stderr"}, {}};
    t.rows.push_back({"kappa", "deterministic", format_number(kc.kappa), ""});
    t.rows.push_back({"cutoff_bound", "deterministic", format_number(kc.bound), ""});
    t.rows.push_back({"dos_direct", "monte_carlo", format_number(dd.value), format_number(dd.std_error)});
    t.rows.push_back(
        {"dos_direct_restricted", "monte_carlo", format_number(dd.restricted), format_number(dd.restricted_std_error)});
    t.rows.push_back({"dos_expansion", "deterministic", format_number(de.value), ""});
    for (std::size_t n = 0; n < de.per_order.size(); ++n)
        t.rows.push_back({"dos_expansion_order_" + std::to_string(n), "deterministic", format_number(de.per_order[n]), ""});
    t.rows.push_back({"free_direct", "deterministic", format_number(free_direct), ""});
    t.rows.push_back({"free_expansion", "deterministic", format_number(free_expansion), ""});
    res.tables.push_back(t);

    res.summary["results"] = {
        {"kappa", kc.kappa},
        {"cutoff_bound", kc.bound},
        {"lattice_points_inside", de.points},
        {"dos_direct", {{"method", "monte_carlo"}, {"value", dd.value}, {"stderr", dd.std_error}}},
        {"dos_direct_restricted",
         {{"method", "monte_carlo"}, {"value", dd.restricted}, {"stderr", dd.restricted_std_error}}},
        {"dos_expansion",
         {{"method", "deterministic"}, {"value", de.value}, {"per_order", de.per_order},
          {"quadrature_budget", de.quadrature_budget}}},
        {"free_direct", {{"method", "deterministic"}, {"value", free_direct}}},
        {"free_expansion", {{"method", "deterministic"}, {"value", free_expansion}}},
        {"discrepancy", disc}};
}

// mode crosscheck: time-domain vs frequency-domain Duhamel identity on fixed configurations
void mode_crosscheck(const ExperimentConfig& cfg, RunResult& res, std::vector<CheckResult>& checks) {
    const Model model = cfg.model();
    CsvTable t{"crosscheck", {"config", "M", "psi", "n", "time_re", "time_im", "freq_re", "freq_im", "discrepancy"}, {}};
    json rows = json::array();
    std::vector<DisorderConfig> configs;
    DisorderConfig empty;
    empty.d = model.box.d();
    empty.seed = cfg.seed;
    configs.push_back(empty);
    for (std::uint64_t i = 0; i < 3; ++i) configs.push_back(sample_config(model.box, model.dist, cfg.seed, i));
    for (std::size_t c = 0; c < configs.size(); ++c) {
        const std::string cname = c == 0 ? "empty" : "sample" + std::to_string(c - 1);
        for (std::size_t k = 0; k < cfg.psi.size(); ++k)
            for (int n = 0; n <= 1; ++n) {
                const auto rep = duhamel_crosscheck(n, model, configs[c], cfg.window, cfg.psi[k], cfg.psi[k]);
                const double tol = n == 0 ? 1e-6 : 1e-5;
                checks.push_back(make_check("duhamel " + cname + " psi=" + cfg.psi_labels[k] + " n=" +
                                                std::to_string(n),
                                            "expansion", rep.discrepancy, tol));
                t.rows.push_back({cname, std::to_string(configs[c].count()), cfg.psi_labels[k], std::to_string(n),
                                  format_number(rep.time_value.real()), format_number(rep.time_value.imag()),
                                  format_number(rep.freq_value.real()), format_number(rep.freq_value.imag()),
                                  format_number(rep.discrepancy)});
                rows.push_back({{"config", cname},
                                {"M", configs[c].count()},
                                {"psi", cfg.psi_labels[k]},
                                {"n", n},
                                {"time", {{"method", "deterministic"}, {"re", rep.time_value.real()},
                                          {"im", rep.time_value.imag()}}},
                                {"freq", {{"method", "deterministic"}, {"re", rep.freq_value.real()},
                                          {"im", rep.freq_value.imag()}}},
                                {"discrepancy", rep.discrepancy}});
            }
    }
    res.summary["results"] = {{"a", cfg.window.a()}, {"rows", rows}};
    res.tables.push_back(t);
}

std::string utc_now() {
    const std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

} // namespace

ExperimentConfig parse_config(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
        if (!kRequiredKeys.count(key) && !kOptionalKeys.count(key)) throw ConfigError("unknown key '" + key + "'");
        if (kv.count(key)) throw ConfigError("duplicate key '" + key + "'");
        if (value.empty()) throw ConfigError("key '" + key + "' has an empty value");
        kv[key] = value;
    }
    for (const auto& k : kRequiredKeys)
        if (!kv.count(k)) throw ConfigError("missing required key '" + k + "'");

    ExperimentConfig cfg;
    cfg.raw = kv;
    try {
        cfg.box = BoxSpec(as_double(kv, "box.L"), int(as_int(kv, "box.d")), as_double(kv, "box.p_max"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("box: ") + e.what());
    }
    if (kv.at("profile.kind") != "gaussian") throw ConfigError("key 'profile.kind': only 'gaussian' is available");
    const double width = as_double(kv, "profile.width");
    if (!(width > 0.0)) throw ConfigError("key 'profile.width': must be > 0");
    cfg.profile = Profile::gaussian(width);

    const std::string kind = kv.at("distribution.kind");
    if (kind == "constant") {
        if (!kv.count("distribution.c")) throw ConfigError("missing required key 'distribution.c'");
        cfg.dist = WeightDistribution::constant(as_double(kv, "distribution.c"));
    } else if (kind == "uniform01") {
        cfg.dist = WeightDistribution::uniform_zero_one();
    } else if (kind == "rademacher") {
        cfg.dist = WeightDistribution::rademacher();
    } else {
        throw ConfigError("key 'distribution.kind': expected constant, uniform01 or rademacher");
    }
    if (kind != "constant" && kv.count("distribution.c"))
        throw ConfigError("key 'distribution.c' applies only to distribution.kind = constant");

    cfg.window.E = as_double(kv, "window.E");
    cfg.window.eta = as_double(kv, "window.eta");
    cfg.window.epsilon = as_double(kv, "window.epsilon");
    cfg.window.lambda = as_double(kv, "window.lambda");
    cfg.window.lambda0 = as_double(kv, "window.lambda0");
    try {
        cfg.window.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const auto N = as_int(kv, "orders.N");
    if (N < 0 || N > kMaxDeterministicOrder) throw ConfigError("key 'orders.N': must lie in [0, 4]");
    cfg.N = int(N);
    if (kv.count("orders.n_max")) {
        const auto nm = as_int(kv, "orders.n_max");
        if (nm < 0 || nm > kMaxDeterministicOrder) throw ConfigError("key 'orders.n_max': must lie in [0, 4]");
        cfg.n_max = int(nm);
    }
    cfg.samples = as_uint(kv, "sampling.samples");
    if (cfg.samples < 2) throw ConfigError("key 'sampling.samples': must be >= 2");
    cfg.seed = as_uint(kv, "sampling.seed");
    if (kv.count("mode")) cfg.mode = kv.at("mode");
    parse_vectors(kv.count("psi.vectors") ? kv.at("psi.vectors") : (cfg.box.d() == 1   ? "0; 1; 0+2"
                                                                    : cfg.box.d() == 2 ? "0,0; 1,0; 0,0+2,0"
                                                                                       : "0,0,0; 1,0,0"),
                  cfg);
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string csv_render(const CsvTable& t) {
    std::string out;
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            out += csv_field(cells[i]);
        }
        out += "\r\n";
    };
    line(t.header);
    for (const auto& r : t.rows) line(r);
    return out;
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, ptr);
}

RunResult execute(const std::string& mode, const ExperimentConfig& cfg) {
    RunResult res;
    res.summary["schema_version"] = kSchemaVersion;
    res.summary["mode"] = mode;
    json inputs = json::object();
    for (const auto& [k, v] : cfg.raw) inputs[k] = v;
    res.summary["inputs"] = inputs;
    res.summary["effective"] = {{"seed", cfg.seed},
                                {"samples", cfg.samples},
                                {"model", cfg.model().describe()},
                                {"a", cfg.window.a()},
                                {"psi", cfg.psi_labels}};

    std::vector<CheckResult> checks;
    if (mode == "coeffs") {
        mode_coeffs(cfg, res, checks);
    } else if (mode == "resolvent") {
        mode_resolvent(cfg, res, checks);
    } else if (mode == "dos") {
        mode_dos(cfg, res, checks);
    } else if (mode == "crosscheck") {
        mode_crosscheck(cfg, res, checks);
    } else if (mode == "verify") {
        checks = run_verify_suite(cfg);
        res.summary["results"] = {{"check_count", checks.size()}};
    } else {
        throw ConfigError("unknown mode '" + mode + "' (expected coeffs, resolvent, dos, verify or crosscheck)");
    }
    bool all = true;
    json cj = json::array();
    for (const auto& c : checks) {
        all = all && c.passed;
        cj.push_back(check_json(c));
    }
    res.summary["checks"] = cj;
    res.summary["checks_passed"] = std::count_if(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
    res.summary["checks_total"] = checks.size();
    res.summary["all_passed"] = all;
    res.tables.push_back(checks_table(checks));
    res.exit_code = all ? 0 : 1;
    return res;
}

json without_timestamp(const json& summary) {
    json copy = summary;
    copy.erase("timestamp");
    return copy;
}

int run(const RunOptions& opts) {
    const auto start = std::chrono::steady_clock::now();
    ExperimentConfig cfg = load_config(opts.config_path);
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.samples) {
        if (*opts.samples < 2) throw ConfigError("--samples must be >= 2");
        cfg.samples = *opts.samples;
    }
    RunResult res = execute(opts.mode, cfg);
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    res.summary["timestamp"] = {{"utc", utc_now()}, {"wall_seconds", wall}};

    namespace fs = std::filesystem;
    fs::create_directories(opts.out_dir);
    for (const auto& t : res.tables) {
        std::ofstream out(fs::path(opts.out_dir) / (opts.mode + "_" + t.name + ".csv"), std::ios::binary);
        out << csv_render(t);
    }
    std::ofstream js(fs::path(opts.out_dir) / (opts.mode + "_summary.json"), std::ios::binary);
    js << res.summary.dump(2) << "\n";

    const auto passed = res.summary["checks_passed"].get<std::size_t>();
    const auto total = res.summary["checks_total"].get<std::size_t>();
    std::cout << opts.mode << ": " << passed << "/" << total << " checks passed";
    if (passed != total) {
        std::cout << "; failing:";
        for (const auto& c : res.summary["checks"])
            if (!c["passed"].get<bool>()) std::cout << "\n  " << c["name"].get<std::string>();
    }
    std::cout << "\nartifacts in " << opts.out_dir << " (" << wall << " s)\n";
    return res.exit_code;
}

} // namespace dosx
