// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.
#include "dosx/cli.hpp"
#include "dosx/dos.hpp"
#include "dosx/oracle.hpp"
#include "dosx/partitions.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

using namespace dosx;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

const std::vector<WeightDistribution>& distributions() {
    static const std::vector<WeightDistribution> all = {WeightDistribution::constant(1.0),
                                                        WeightDistribution::uniform_zero_one(),
                                                        WeightDistribution::rademacher()};
    return all;
}

WaveVector mixed(int a, int b) {
    WaveVector v;
    v.add(Momentum(a), 1.0 / std::sqrt(2.0));
    v.add(Momentum(b), 1.0 / std::sqrt(2.0));
    return v;
}

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

Outcome partition_formula() {
    const BoxSpec box(2.0, 1, 3.0);
    const Profile B = Profile::gaussian(1.0);
    const int K = box.index_cutoff();
    const std::uint64_t samples = 200000;
    int fails = 0, total = 0;
    double worst = 0.0;
    for (std::size_t di = 0; di < distributions().size(); ++di) {
        const auto& dist = distributions()[di];
        RandomStream rng(0xC0FFEE + di, 0);
        std::vector<std::vector<Momentum>> tuples;
        for (int n = 1; n <= 3; ++n)
            for (int t = 0; t < 20; ++t) {
                std::vector<Momentum> p(static_cast<std::size_t>(n + 1));
                for (auto& m : p) m = Momentum(int(rng.next_u64() % std::uint64_t(2 * K + 1)) - K);
                // closed loops carry the nonzero expectations
                if (t % 4 != 3) p.back() = p.front();
                tuples.push_back(std::move(p));
            }
        const auto mc = sample_mean(samples, tuples.size(), [&](std::uint64_t i, std::span<cplx> out) {
            const auto c = sample_config(box, dist, 0xA11CE + di, i);
            const PotentialTable V(c, B, box);
            for (std::size_t k = 0; k < tuples.size(); ++k) {
                cplx prod = 1.0;
                for (std::size_t j = 0; j + 1 < tuples[k].size(); ++j) prod *= V(tuples[k][j] - tuples[k][j + 1]);
                out[k] = prod;
            }
        });
        for (std::size_t k = 0; k < tuples.size(); ++k) {
            const double exact = expected_moment_product(tuples[k], B, dist, box);
            const double z = std::abs(mc.mean[k] - exact) / std::max(mc.std_error[k], 1e-300);
            if (std::abs(mc.mean[k] - exact) > 4.0 * mc.std_error[k] + 1e-13) ++fails;
            if (mc.std_error[k] > 0) worst = std::max(worst, z);
            ++total;
        }
    }
    return {fails == 0, std::to_string(total - fails) + "/" + std::to_string(total) + " tuples within 4 sigma, worst " +
                            fmt("%.2f", worst) + " sigma"};
}

Outcome coefficient_agreement() {
    const BoxSpec box(4.0, 1, 3.0);
    const std::vector<cplx> zs = {{1.0, 0.3}, {0.2, 0.5}, {1.5, 0.8}, {-0.5, 1.2}, {2.5, 2.0}};
    const std::vector<WaveVector> psis = {WaveVector::plane_wave(Momentum(0)), mixed(0, 2)};
    int fails = 0, total = 0;
    double worst = 0.0;
    for (std::size_t di = 0; di < distributions().size(); ++di) {
        const Model model{box, Profile::gaussian(1.0), distributions()[di]};
        for (std::size_t k = 0; k < psis.size(); ++k) {
            const auto mc = t_coeffs_mc(3, model, zs, psis[k], psis[k], 100000, 0xB0B + 10 * di + k);
            for (int n = 0; n <= 3; ++n) {
                const auto series = build_t_series(n, model, psis[k], psis[k]);
                for (std::size_t iz = 0; iz < zs.size(); ++iz) {
                    const auto& e = mc[std::size_t(n)][iz];
                    const double diff = std::abs(series.evaluate(zs[iz]) - e.value);
                    if (*e.std_error > 0) worst = std::max(worst, diff / *e.std_error);
                    if (diff > 4.0 * *e.std_error + 1e-12) ++fails;
                    ++total;
                }
            }
        }
    }
    return {fails == 0, std::to_string(total - fails) + "/" + std::to_string(total) + " (n, z, psi, law) within 4 sigma, worst " +
                            fmt("%.2f", worst) + " sigma"};
}

Outcome closed_forms() {
    const BoxSpec box(4.0, 1, 3.0);
    const Profile B = Profile::gaussian(1.0);
    const Model uni{box, B, WeightDistribution::uniform_zero_one()};
    const Model rad{box, B, WeightDistribution::rademacher()};
    double t0 = 0.0, t1 = 0.0, t2 = 0.0;
    for (int q : {0, 1, 3, -5})
        for (cplx z : {cplx(1.0, 0.5), cplx(0.0, 0.3), cplx(2.0, 1.7)}) {
            const auto phi = WaveVector::plane_wave(Momentum(q));
            const double nq = nu(Momentum(q), box);
            t0 = std::max(t0, std::abs(t_coeff_det(0, uni, z, phi, phi).value - 1.0 / (nq - z)));
            const cplx e1 = uni.dist.moment(1) * B.hat(Momentum(0), box) / ((nq - z) * (nq - z));
            t1 = std::max(t1, std::abs(t_coeff_det(1, uni, z, phi, phi).value - e1) / std::abs(e1));
            const cplx inner = star_integral(
                [&](const Momentum& p) {
                    const double b = B.hat(Momentum(q) - p, box);
                    return cplx(b * b) / (nu(p, box) - z);
                },
                box);
            const cplx e2 = rad.dist.moment(2) * inner / ((nq - z) * (nq - z));
            t2 = std::max(t2, std::abs(t_coeff_det(2, rad, z, phi, phi).value - e2) / std::abs(e2));
        }
    return {t0 == 0.0 && t1 <= 1e-10 && t2 <= 1e-10,
            "T0 abs err " + fmt("%.1e", t0) + ", T1 rel " + fmt("%.1e", t1) + ", T2 pair rel " + fmt("%.1e", t2)};
}

Outcome duhamel() {
    const BoxSpec box(4.0, 1, 3.0);
    SpectralWindow w;
    w.E = 1.0;
    w.eta = 0.5;
    w.epsilon = 0.25;
    w.lambda = 0.1;
    double worst = 0.0;
    int checks = 0;
    for (const auto& dist : distributions()) {
        const Model model{box, Profile::gaussian(1.0), dist};
        for (std::uint64_t i = 0; i < 3; ++i) {
            const auto config = sample_config(box, dist, 0xD00D, i);
            for (const auto& psi : {WaveVector::plane_wave(Momentum(1)), mixed(0, 2)})
                for (int n = 0; n <= 1; ++n) {
                    worst = std::max(worst, duhamel_crosscheck(n, model, config, w, psi, psi).discrepancy);
                    ++checks;
                }
        }
    }
    return {worst <= 1e-5, std::to_string(checks) + " fixed-config comparisons, max |time - freq| " + fmt("%.2e", worst)};
}

Outcome resolvent_inequality() {
    const BoxSpec box(4.0, 1, 3.0);
    const Model model{box, Profile::gaussian(1.0), WeightDistribution::rademacher()};
    SpectralWindow w;
    w.E = 1.0;
    w.eta = 0.5;
    w.epsilon = 0.25;
    w.lambda = 0.0;
    const std::vector<double> lambdas = {0.02, 0.05, 0.1};
    const std::vector<WaveVector> psis = {WaveVector::plane_wave(Momentum(0)), WaveVector::plane_wave(Momentum(1)),
                                          mixed(0, 2)};
    std::vector<std::pair<WaveVector, WaveVector>> pairs;
    for (const auto& p : psis) pairs.emplace_back(p, p);
    const auto oracle = expect_resolvents(model, lambdas, w.z(), pairs, 100000, 0x5EED);

    SmoothingIntegrator integ(w, box.L());
    std::vector<std::vector<ExpansionEstimate>> S(psis.size());
    for (std::size_t k = 0; k < psis.size(); ++k)
        for (int n = 0; n <= 3; ++n) S[k].push_back(s_coeff(n, model, integ, psis[k], psis[k], Method::deterministic));

    bool ineq = true;
    double margin = 1e300;
    std::vector<double> worst_norm(4, 0.0);
    std::ostringstream per_psi;
    for (std::size_t il = 0; il < lambdas.size(); ++il)
        for (std::size_t k = 0; k < psis.size(); ++k) {
            cplx partial = 0.0;
            double budget = 0.0, lam_n = 1.0;
            if (il == 0) per_psi << " psi" << k << ":";
            for (int N = 0; N <= 3; ++N) {
                partial += lam_n * S[k][std::size_t(N)].value;
                budget += lam_n * *S[k][std::size_t(N)].quadrature_budget;
                lam_n *= lambdas[il];
                const double D = std::abs(oracle[il][k].value - partial);
                const double nsq = psis[k].norm_squared();
                if (N >= 2) {
                    const double allowed = w.epsilon * nsq + 3.0 * oracle[il][k].std_error + budget;
                    ineq = ineq && D <= allowed;
                    margin = std::min(margin, allowed - D);
                }
                if (il == 0) {
                    worst_norm[std::size_t(N)] = std::max(worst_norm[std::size_t(N)], D / nsq);
                    per_psi << " " << fmt("%.5f", D);
                }
            }
        }
    bool mono = true;
    for (int N = 1; N <= 3; ++N) mono = mono && worst_norm[std::size_t(N)] <= worst_norm[std::size_t(N - 1)];
    std::ostringstream d;
    d << "inequality " << (ineq ? "holds" : "violated") << " for N in {2,3} (min margin " << fmt("%.4f", margin)
      << "); max_psi D_N/|psi|^2 at lambda=0.02:";
    for (double x : worst_norm) d << " " << fmt("%.5f", x);
    d << (mono ? " (monotone)" : " (not monotone)") << "; per-psi D_0..D_3:" << per_psi.str();
    return {ineq && mono, d.str()};
}

Outcome dos_agreement() {
    const BoxSpec box(4.0, 1, 3.0);
    const Model model{box, Profile::gaussian(1.0), WeightDistribution::uniform_zero_one()};
    SpectralWindow w;
    w.E = 1.0;
    w.eta = 0.5;
    w.epsilon = 0.25;
    w.lambda = 0.1;
    const auto kc = choose_kappa(w, model, 0.5 * w.epsilon);
    const DosRequest req{w, kc.kappa, 2, 10000, 0xD05};
    const auto direct = dos_direct(req, model);
    const auto expansion = dos_expansion(req, model);
    const double diff = std::abs(direct.value - expansion.value);
    const bool main_ok = diff <= w.epsilon + 3.0 * direct.std_error;

    DosRequest free = req;
    free.window.lambda = 0.0;
    const auto fd = dos_direct(free, model);
    const auto fe = dos_expansion(free, model);
    double closed = 0.0;
    for (const auto& p : dual_lattice_points(box)) closed += f_lorentz(nu(p, box), w.E, w.eta);
    closed /= box.volume();
    const double free_err = std::max(std::abs(fd.value - closed), std::abs(fe.value - closed));
    std::ostringstream d;
    d << "kappa=" << kc.kappa << ", direct " << fmt("%.6f", direct.value) << " +- " << fmt("%.1e", direct.std_error)
      << ", expansion " << fmt("%.6f", expansion.value) << ", |diff| " << fmt("%.2e", diff) << "; lambda=0 vs closed form "
      << fmt("%.2e", free_err);
    return {main_ok && free_err <= 1e-3, d.str()};
}

Outcome error_constants() {
    bool bell_ok = true;
    for (int n = 1; n <= 12; ++n) bell_ok = bell_ok && double(bell(n)) < bell_bound(n);
    const auto cn = constructive_N(2.0, 1.0, 2.0, 2.0, 1.0);
    const bool cn_ok = std::abs(cn.N / 1.5e7 - 1.0) <= 0.05 && cn.astronomical;

    const BoxSpec box(4.0, 1, 3.0);
    const Profile B = Profile::gaussian(1.0);
    bool mc_ok = true;
    double worst = 0.0;
    for (std::size_t di = 0; di < distributions().size(); ++di) {
        const auto& dist = distributions()[di];
        const auto s = sample_mean(100000, 2, [&](std::uint64_t i, std::span<cplx> out) {
            const auto c = sample_config(box, dist, 0xE7 + di, i);
            const double x[1] = {0.0};
            const double v = potential_value(c, B, box, x);
            const double M = double(c.count());
            out[0] = v * v;
            out[1] = M * (M - 1.0);
        });
        const double zv = std::abs(s.mean[0].real() - expected_v_squared(box, B, dist)) / s.std_error[0];
        const double zm = std::abs(s.mean[1].real() - box.volume() * box.volume()) / s.std_error[1];
        worst = std::max({worst, zv, zm});
        mc_ok = mc_ok && zv <= 4.0 && zm <= 4.0;
    }
    std::ostringstream d;
    d << "bell < bound for n<=12: " << (bell_ok ? "yes" : "no") << "; constructive N " << fmt("%.4g", cn.N)
      << "; E V^2 and E M(M-1) worst " << fmt("%.2f", worst) << " sigma";
    return {bell_ok && cn_ok && mc_ok, d.str()};
}

Outcome scaling() {
    const BoxSpec box(4.0, 1, 3.0);
    const std::vector<double> etas = {0.25, 0.5, 1.0, 2.0};
    double worst = -1e300;
    std::ostringstream d;
    d << "slope - (n+1):";
    for (const auto& dist : distributions()) {
        const Model model{box, Profile::gaussian(1.0), dist};
        const auto psi = WaveVector::plane_wave(Momentum(0));
        for (int n = 0; n <= 3; ++n) {
            const auto series = build_t_series(n, model, psi, psi);
            std::vector<double> x, y;
            for (double eta : etas) {
                const double t = std::abs(series.evaluate(cplx(1.0, eta)));
                if (t == 0.0) break;
                x.push_back(std::log(1.0 / eta));
                y.push_back(std::log(t));
            }
            if (x.size() != etas.size()) continue; // identically zero coefficient
            double mx = 0, my = 0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                mx += x[i] / double(x.size());
                my += y[i] / double(y.size());
            }
            double sxy = 0, sxx = 0;
            for (std::size_t i = 0; i < x.size(); ++i) {
                sxy += (x[i] - mx) * (y[i] - my);
                sxx += (x[i] - mx) * (x[i] - mx);
            }
            const double excess = sxy / sxx - (n + 1);
            worst = std::max(worst, excess);
            d << " " << fmt("%.3f", excess);
        }
    }
    return {worst <= 0.1, d.str()};
}

Outcome reproducibility(const std::string& config_path) {
    namespace fs = std::filesystem;
    const fs::path root = fs::temp_directory_path() / ("dosx_acceptance_" + std::to_string(::getpid()));
    std::vector<json> summaries;
    for (int k = 0; k < 2; ++k) {
        const fs::path dir = root / std::to_string(k);
        fs::create_directories(dir);
        RunOptions opts;
        opts.mode = "verify";
        opts.config_path = config_path;
        opts.out_dir = dir.string();
        const int rc = run(opts);
        std::ifstream in(dir / "verify_summary.json");
        summaries.push_back(json::parse(in));
        if (rc != 0) return {false, "verify exited with " + std::to_string(rc)};
    }
    fs::remove_all(root);
    const std::string a = without_timestamp(summaries[0]).dump(2), b = without_timestamp(summaries[1]).dump(2);
    const bool stamped = summaries[0].contains("timestamp") && summaries[1].contains("timestamp");
    return {a == b && stamped, std::string(a == b ? "identical" : "different") + " summaries (" +
                                   std::to_string(a.size()) + " bytes, " +
                                   std::to_string(summaries[0]["checks_total"].get<int>()) + " checks)"};
}

} // namespace

int main(int argc, char** argv) {
    const std::string config = argc > 1 ? argv[1] : "configs/default.cfg";
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"partition formula vs Monte Carlo", partition_formula},
        {"deterministic vs Monte Carlo coefficients", coefficient_agreement},
        {"closed-form coefficient pins", closed_forms},
        {"Duhamel time/frequency identity", duhamel},
        {"resolvent expansion inequality", resolvent_inequality},
        {"density of states expansion", dos_agreement},
        {"error-constant machinery", error_constants},
        {"coefficient scaling in eta", scaling},
        {"verify reproducibility", [&] { return reproducibility(config); }},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (!o.pass) ++failed;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " [" << criteria[i].first << "] "
                  << o.detail << " (" << fmt("%.1f", secs) << " s)" << std::endl;
    }
    return failed == 0 ? 0 : 1;
}
