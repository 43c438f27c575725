#include "dosx/dos.hpp"

#include "dosx/errors.hpp"
#include "dosx/oracle.hpp"
#include "dosx/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace dosx {

double f_lorentz(double x, double E, double eta) {
    if (!(eta > 0.0)) throw std::invalid_argument("f_lorentz: eta must be > 0");
    return eta / ((x - E) * (x - E) + eta * eta);
}

double c_eta_E(double eta, double E) {
    if (!(eta > 0.0)) throw std::invalid_argument("c_eta_E: eta must be > 0");
    return 2.0 * (eta + (1.0 + E) * (1.0 + E) / eta);
}

namespace {

bool inside_cutoff(const Momentum& p, const BoxSpec& box, double kappa) {
    const double r = kappa * box.L();
    return double(p.norm2()) <= r * r * (1.0 + 1e-12);
}

double sphere_area(int d) { return d == 1 ? 2.0 : d == 2 ? 2.0 * kPi : 4.0 * kPi; }

} // namespace

TailReport tail_R(double kappa, const BoxSpec& box) {
    if (!(kappa > 0.0)) throw std::invalid_argument("tail_R: kappa must be > 0");
    TailReport rep;
    for (const auto& p : dual_lattice_points(box)) {
        if (inside_cutoff(p, box, kappa)) continue;
        const double x = nu(p, box) + 1.0;
        rep.lattice += 1.0 / (x * x);
    }
    rep.lattice /= box.volume();
    // r = kappa / s maps [kappa, inf) onto (0, 1]
    const int d = box.d();
    auto f = [&](double s) {
        if (s <= 0.0) return d == 3 ? 4.0 / (kappa * kappa * kappa) : 0.0;
        const double r = kappa / s;
        const double x = 0.5 * r * r + 1.0;
        return std::pow(r, d - 1) / (x * x) * kappa / (s * s);
    };
    rep.continuum = sphere_area(d) * integrate_or_throw(f, 0.0, 1.0, 1e-14);
    return rep;
}

double cutoff_bound(const SpectralWindow& w, const Model& model, double kappa) {
    const double ev2 = expected_v_squared(model.box, model.profile, model.dist);
    const double g = 1.0 + std::sqrt(w.lambda * w.lambda * ev2);
    return c_eta_E(w.eta, w.E) * g * g * tail_R(kappa, model.box).lattice;
}

KappaChoice choose_kappa(const SpectralWindow& w, const Model& model, double budget) {
    if (!(budget > 0.0)) throw std::invalid_argument("choose_kappa: budget must be > 0");
    std::vector<std::int64_t> norms;
    const double limit = model.box.p_max() * model.box.L();
    for (const auto& p : dual_lattice_points(model.box)) {
        const std::int64_t n2 = p.norm2();
        if (n2 > 0 && double(n2) <= limit * limit * (1.0 + 1e-12)) norms.push_back(n2);
    }
    std::sort(norms.begin(), norms.end());
    norms.erase(std::unique(norms.begin(), norms.end()), norms.end());
    double last = 0.0;
    for (std::int64_t n2 : norms) {
        const double kappa = std::sqrt(double(n2)) / model.box.L();
        last = cutoff_bound(w, model, kappa);
        if (last <= budget) return {kappa, last};
    }
    std::ostringstream msg;
    msg << "cutoff insufficient: no kappa <= p_max = " << model.box.p_max() << " meets budget " << budget
        << " (best bound " << last << ")";
    throw CutoffInsufficient(msg.str());
}

WaveVector cutoff_vector(const BoxSpec& box, double kappa) {
    WaveVector psi;
    for (const auto& p : dual_lattice_points(box))
        if (inside_cutoff(p, box, kappa)) psi.add(p, 1.0);
    return psi;
}

namespace {

void check_request(const DosRequest& req, const Model& model) {
    req.window.validate();
    if (!model.dist.positive_support())
        throw std::invalid_argument("dos: weight distribution " + model.dist.name() + " is not supported in (0, inf)");
    if (req.window.lambda < 0.0) throw std::invalid_argument("dos: lambda must be >= 0");
    if (!(req.kappa > 0.0) || req.kappa > model.box.p_max() * (1.0 + 1e-12))
        throw std::invalid_argument("dos: kappa must lie in (0, p_max]");
}

} // namespace

DosExpansion dos_expansion(const DosRequest& req, const Model& model, SmoothingIntegrator& integrator) {
    check_request(req, model);
    const WaveVector psi = cutoff_vector(model.box, req.kappa);
    DosExpansion out;
    out.points = psi.coefficients().size();
    double lam_n = 1.0;
    for (int n = 0; n <= req.N; ++n) {
        double contrib = 0.0;
        if (n == 0 || req.window.lambda != 0.0) {
            const auto s = s_coeff(n, model, integrator, psi, psi, Method::deterministic);
            contrib = lam_n * s.value.imag() / model.box.volume();
            out.quadrature_budget += lam_n * *s.quadrature_budget / model.box.volume();
        }
        out.per_order.push_back(contrib);
        out.value += contrib;
        lam_n *= req.window.lambda;
    }
    return out;
}

DosExpansion dos_expansion(const DosRequest& req, const Model& model) {
    SmoothingIntegrator integ(req.window, model.box.L());
    return dos_expansion(req, model, integ);
}

DosDirect dos_direct(const DosRequest& req, const Model& model, Execution exec) {
    check_request(req, model);
    if (req.samples < 1) throw std::invalid_argument("dos_direct: samples must be >= 1");
    const DualLattice lattice(model.box);
    const auto H0 = TruncatedHamiltonian::free(model.box);
    std::vector<Eigen::Index> inside;
    for (std::size_t i = 0; i < lattice.size(); ++i)
        if (inside_cutoff(lattice[i], model.box, req.kappa)) inside.push_back(Eigen::Index(i));
    const double E = req.window.E, eta = req.window.eta, lambda = req.window.lambda, vol = model.box.volume();

    auto body = [&](std::uint64_t index, std::span<cplx> out) {
        Eigen::MatrixXcd H = H0.matrix;
        if (lambda != 0.0) {
            const auto config = sample_config(model.box, model.dist, req.seed, index);
            H += lambda * potential_matrix(config, model.profile, lattice);
        }
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
        double full = 0.0, restricted = 0.0;
        for (Eigen::Index j = 0; j < H.rows(); ++j) {
            const double f = f_lorentz(es.eigenvalues()(j), E, eta);
            full += f;
            double weight = 0.0;
            for (Eigen::Index q : inside) weight += std::norm(es.eigenvectors()(q, j));
            restricted += f * weight;
        }
        out[0] = full / vol;
        out[1] = restricted / vol;
    };
    const auto stats = sample_mean(req.samples, 2, body, exec);
    return {stats.mean[0].real(), stats.std_error[0], stats.mean[1].real(), stats.std_error[1]};
}

} // namespace dosx
