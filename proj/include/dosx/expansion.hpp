#pragma once

#include "dosx/disorder.hpp"
#include "dosx/lattice.hpp"
#include "dosx/parallel.hpp"
#include "dosx/profile.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace dosx {

constexpr int kMaxDeterministicOrder = 4;

/// Box, profile and weight law: everything that fixes the random operator.
struct Model {
    BoxSpec box;
    Profile profile;
    WeightDistribution dist;

    std::string describe() const;
};

struct SpectralWindow {
    double E = 1.0;
    double eta = 0.5;
    double epsilon = 0.25;
    double lambda = 0.0;
    double lambda0 = 1.0;

    /// Throws std::invalid_argument unless eta > 0, epsilon > 0, lambda0 > 0, |lambda| <= lambda0.
    void validate() const;
    double a() const;
    cplx z() const { return {E, eta}; }
};

enum class Method { deterministic, monte_carlo };
const char* method_name(Method m);

struct ExpansionEstimate {
    cplx value;
    std::optional<double> std_error; ///< present iff the estimate is stochastic
    Method method = Method::deterministic;
    int order = 0;
    std::string meta;
    /// Certified bound on quadrature plus tail-truncation error, when an integral was taken.
    std::optional<double> quadrature_budget;
};

/// Sorted integer energies |n_j|^2 of the n+1 resolvent factors, padded with -1.
using NuKey = std::array<std::int64_t, kMaxDeterministicOrder + 1>;

/// Finite sum sum_k c_k prod_j (nu_{k,j} - z)^{-1} with nu = key / (2 L^2).
class ResolventSeries {
public:
    ResolventSeries(int order, double L) : order_(order), L_(L) {}

    int order() const { return order_; }
    double L() const { return L_; }
    const std::map<NuKey, cplx>& terms() const { return terms_; }

    void add(const NuKey& key, cplx coef);
    void add(const ResolventSeries& other, cplx weight = 1.0);
    cplx evaluate(cplx z) const;
    double abs_sum() const;
    /// Largest relative difference of coefficients against another series (0 when identical).
    double max_relative_difference(const ResolventSeries& other) const;

private:
    int order_;
    double L_;
    std::map<NuKey, cplx> terms_;
};

NuKey make_key(std::span<const std::int64_t> norms);

/// Deterministic T_n as a resolvent series, by the partition sum with the deltas
/// resolved through M_A. Partitions are processed concurrently and merged in order.
/// Requires n <= 4.
ResolventSeries build_t_series(int n, const Model& model, const WaveVector& psi1, const WaveVector& psi2,
                               Execution exec = Execution::parallel);
/// Brute-force reference: every intermediate path p_2..p_n over the truncated lattice, weighted
/// by expected_moment_product with its deltas tested explicitly. Serial.
ResolventSeries build_t_series_reference(int n, const Model& model, const WaveVector& psi1,
                                         const WaveVector& psi2);

/// T_n[z; psi1, psi2] exactly on the truncated lattice.
ExpansionEstimate t_coeff_det(int n, const Model& model, cplx z, const WaveVector& psi1, const WaveVector& psi2);

/// Monte Carlo estimates of <psi1, R(VR)^n psi2> for every n <= n_max and every z, from one shared
/// configuration ensemble. Result indexed [n][iz].
std::vector<std::vector<ExpansionEstimate>> t_coeffs_mc(int n_max, const Model& model, std::span<const cplx> zs,
                                                        const WaveVector& psi1, const WaveVector& psi2,
                                                        std::uint64_t samples, std::uint64_t seed,
                                                        Execution exec = Execution::parallel);
ExpansionEstimate t_coeff_mc(int n, const Model& model, cplx z, const WaveVector& psi1, const WaveVector& psi2,
                             std::uint64_t samples, std::uint64_t seed, Execution exec = Execution::parallel);

/// <psi1, R(z) (V R(z))^n psi2> for one fixed configuration (dense products on the lattice).
cplx fixed_config_term(int n, const DualLattice& lattice, const std::vector<std::vector<cplx>>& vmatrix,
                       cplx z, const WaveVector& psi1, const WaveVector& psi2);

/// G(key) = int chi_a^(alpha) prod_j (nu_j - E - i eta - 2 pi alpha)^{-1} d alpha, cached per key.
/// The alpha range is cut at the point where the decay bound of chi^ with m = 8 certifies a tail
/// below kTailTolerance / eta^{n+1}-scaled units; see tail_cut.
class SmoothingIntegrator {
public:
    static constexpr double kQuadTolerance = 1e-10;
    static constexpr double kTailTolerance = 1e-12;

    SmoothingIntegrator(double E, double eta, double a, double L);
    explicit SmoothingIntegrator(const SpectralWindow& w, double L);

    double a() const { return a_; }
    /// Half-width A of the integration range for a product of `factors` resolvents.
    double tail_cut(int factors) const;
    /// Integrals for every key, computing missing ones (concurrently when exec is parallel).
    std::vector<cplx> integrals(const std::vector<NuKey>& keys, Execution exec = Execution::parallel);
    cplx integral(const NuKey& key);
    /// Per-key certified error (quadrature plus truncated tail).
    double per_key_budget() const { return kQuadTolerance + kTailTolerance; }

    /// (-1)^n sum_k c_k G(key_k) with its certified error bound.
    std::pair<cplx, double> smooth(const ResolventSeries& series, Execution exec = Execution::parallel);

private:
    cplx compute(const NuKey& key) const;

    double E_, eta_, a_, L_;
    std::mutex mu_;
    std::map<NuKey, cplx> cache_;
};

/// S_n = (-1)^n int chi_a^(alpha) T_n[E + i eta + 2 pi alpha] d alpha. The Monte Carlo method
/// reuses one configuration ensemble for every alpha (it integrates each configuration exactly
/// in alpha), so its error is the configuration variance only. Requires n <= 4.
ExpansionEstimate s_coeff(int n, const Model& model, const SpectralWindow& w, const WaveVector& psi1,
                          const WaveVector& psi2, Method method, std::uint64_t samples = 0, std::uint64_t seed = 0,
                          Execution exec = Execution::parallel);
ExpansionEstimate s_coeff(int n, const Model& model, SmoothingIntegrator& integrator, const WaveVector& psi1,
                          const WaveVector& psi2, Method method, std::uint64_t samples = 0,
                          std::uint64_t seed = 0, Execution exec = Execution::parallel);

/// sum_{n <= N} lambda^n S_n.
ExpansionEstimate resolvent_partial_sum(int N, const Model& model, const SpectralWindow& w, const WaveVector& psi1,
                                        const WaveVector& psi2, Method method, std::uint64_t samples = 0,
                                        std::uint64_t seed = 0);

/// Time-domain value i int_0^inf chi(a t) exp(-i t (nu - E - i eta)) dt of S_0 on a plane wave.
cplx s0_time_domain(double nu_value, double E, double eta, double a);

struct ConstructiveN {
    double N = 0.0;            ///< smallest admissible order (may exceed any integer type)
    bool astronomical = false; ///< N > kAstronomicalOrder
    double base_ratio = 0.0;   ///< 3.168 e C ||B^||_{*,1,inf} / a
    double bound_at_N = 0.0;   ///< lambda0^N bound_at(N)
};

constexpr double kAstronomicalOrder = 1e6;

/// (2/a) (3.168 e C norm / (a ln(2N+1)))^N / sqrt(2 pi N), per unit ||psi1|| ||psi2||.
double constructive_bound(double N, double a, double C, double norm_1_inf);
/// Smallest N with lambda0^N constructive_bound(N) <= epsilon / 2. Evaluated in log space.
ConstructiveN constructive_N(double eta, double epsilon, double lambda0, double norm_1_inf, double C);

struct DuhamelReport {
    cplx time_value;
    cplx freq_value;
    double discrepancy = 0.0;
};

/// Per-configuration identity
///   int_0^inf chi(a t) <psi1, E_n(t) psi2> e^{iEt - eta t} dt = (-i)^{n+1} int chi_a^ <psi1, R(VR)^n psi2>,
/// with E_0(t) = e^{-itH_0} and E_1(t) = int_0^t e^{-i(t-s)H_0} V e^{-isH_0} ds. n in {0, 1}.
/// The time side is a direct (nested for n = 1) adaptive quadrature.
DuhamelReport duhamel_crosscheck(int n, const Model& model, const DisorderConfig& config, const SpectralWindow& w,
                                 const WaveVector& psi1, const WaveVector& psi2);

/// Dense V_pq = V^(p - q) / L^d on the truncated lattice.
std::vector<std::vector<cplx>> potential_rows(const DisorderConfig& config, const Model& model,
                                              const DualLattice& lattice);

} // namespace dosx
