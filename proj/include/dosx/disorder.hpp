#pragma once

#include "dosx/lattice.hpp"
#include "dosx/profile.hpp"
#include "dosx/random_stream.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace dosx {

/// Law of the i.i.d. point weights v_gamma, with exact moments.
class WeightDistribution {
public:
    enum class Kind { Constant, UniformZeroOne, Rademacher };

    static WeightDistribution constant(double c);
    static WeightDistribution uniform_zero_one();
    static WeightDistribution rademacher();

    Kind kind() const { return kind_; }
    double parameter() const { return c_; }
    std::string name() const;

    /// m_k = E v^k, exact; m_0 = 1.
    double moment(int k) const;
    /// A constant C >= 1 with E|v|^k <= C for every k, or +inf when none exists
    /// (Constant(c) with |c| > 1).
    double uniform_moment_bound() const;
    bool satisfies_moment_hypothesis() const { return std::isfinite(uniform_moment_bound()); }
    /// Support contained in (0, inf).
    bool positive_support() const;

    double sample(RandomStream& rng) const;

private:
    WeightDistribution(Kind k, double c) : kind_(k), c_(c) {}
    Kind kind_;
    double c_;
};

/// One realization of the Poisson point measure on the box [-L/2, L/2)^d.
struct DisorderConfig {
    std::uint64_t seed = 0;
    std::uint64_t index = 0;
    int d = 1;
    std::vector<std::array<double, kMaxDim>> points;
    std::vector<double> weights;

    std::size_t count() const { return weights.size(); }
};

/// Poisson(mean) by sequential inversion of the CDF.
std::uint64_t sample_poisson(double mean, RandomStream& rng);

/// M ~ Poisson(L^d), points i.i.d. uniform on the box, weights i.i.d. from dist.
/// Depends only on (seed, index).
DisorderConfig sample_config(const BoxSpec& box, const WeightDistribution& dist, std::uint64_t seed,
                             std::uint64_t index);

/// V^(u) = sum_gamma v_gamma B^(u) exp(-2 pi i u . y_gamma) for any u in (Z/L)^d.
cplx potential_hat(const DisorderConfig& config, const Profile& profile, const BoxSpec& box,
                   const Momentum& u);

/// V^ on every difference of two truncated momenta: the dense table over index offsets
/// [-2K, 2K]^d, laid out in the same mixed radix as the lattice (side 4K+1).
class PotentialTable {
public:
    PotentialTable(const DisorderConfig& config, const Profile& profile, const BoxSpec& box);

    cplx operator()(const Momentum& u) const;

private:
    int K2_;
    int side_;
    int d_;
    std::vector<cplx> values_;
};

/// Position-space V(x) = sum_gamma v_gamma B_#(x - y_gamma).
double potential_value(const DisorderConfig& config, const Profile& profile, const BoxSpec& box,
                       std::span<const double> x);

/// E_L V(x)^2 = m_1^2 B^(0)^2 + m_2 int_{Lambda_L} |B_#|^2, independent of x.
double expected_v_squared(const BoxSpec& box, const Profile& profile, const WeightDistribution& dist);

} // namespace dosx
