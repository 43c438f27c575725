#pragma once

#include "dosx/expansion.hpp"
#include "dosx/parallel.hpp"

#include <cstdint>
#include <vector>

namespace dosx {

/// f_{E,eta}(x) = eta / ((x - E)^2 + eta^2).
double f_lorentz(double x, double E, double eta);
/// C_{eta,E} = 2 (eta + (1 + E)^2 / eta), so that f_{E,eta}(x) <= C / (x + 1)^2 for x >= 0.
double c_eta_E(double eta, double E);

struct TailReport {
    double lattice = 0.0;   ///< (1/L^d) sum over truncated momenta with |p| > kappa of (p^2/2 + 1)^{-2}
    double continuum = 0.0; ///< int_{|p| >= kappa} (p^2/2 + 1)^{-2} dp over R^d
};

TailReport tail_R(double kappa, const BoxSpec& box);

/// C_{eta,E} (1 + sqrt(lambda^2 E V^2))^2 tail_R(kappa).lattice.
double cutoff_bound(const SpectralWindow& w, const Model& model, double kappa);

struct KappaChoice {
    double kappa = 0.0;
    double bound = 0.0;
};

/// Smallest lattice norm kappa in (0, p_max] whose cutoff_bound is <= budget.
/// Throws CutoffInsufficient when none qualifies.
KappaChoice choose_kappa(const SpectralWindow& w, const Model& model, double budget);

struct DosRequest {
    SpectralWindow window;
    double kappa = 0.0;
    int N = 0;
    std::uint64_t samples = 1000;
    std::uint64_t seed = 0;
};

struct DosExpansion {
    double value = 0.0;
    std::vector<double> per_order; ///< lambda^n (1/L^d) sum_{|q| <= kappa} Im S_n[phi_q]
    double quadrature_budget = 0.0;
    std::size_t points = 0; ///< lattice points with |q| <= kappa
};

/// sum_{n <= N} lambda^n (1/L^d) sum_{|q| <= kappa} Im S_n[E + i eta; phi_q, phi_q].
/// Rejects weight laws whose support is not inside (0, inf) and negative lambda.
DosExpansion dos_expansion(const DosRequest& req, const Model& model);
DosExpansion dos_expansion(const DosRequest& req, const Model& model, SmoothingIntegrator& integrator);

struct DosDirect {
    double value = 0.0; ///< (1/L^d) E Tr f(H)
    double std_error = 0.0;
    double restricted = 0.0; ///< (1/L^d) E sum_{|q| <= kappa} <phi_q, f(H) phi_q>
    double restricted_std_error = 0.0;
};

DosDirect dos_direct(const DosRequest& req, const Model& model, Execution exec = Execution::parallel);

/// Plane waves with |q| <= kappa, unit amplitude each.
WaveVector cutoff_vector(const BoxSpec& box, double kappa);

} // namespace dosx
