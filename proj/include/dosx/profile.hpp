#pragma once

#include "dosx/lattice.hpp"

#include <span>
#include <string>

namespace dosx {

/// Single-site potential profile. Only the Gaussian ships:
/// B(x) = exp(-pi |x/w|^2) / w^d, so that B^(k) = exp(-pi w^2 |k|^2) and B^(0) = 1.
class Profile {
public:
    enum class Kind { Gaussian };

    static Profile gaussian(double width = 1.0);

    Kind kind() const { return kind_; }
    double width() const { return width_; }
    std::string name() const;

    /// Continuum transform at a lattice momentum; equals the periodized coefficient there.
    double hat(const Momentum& k, const BoxSpec& box) const;
    /// Continuum transform as a function of |k|^2.
    double hat_from_norm2(double k2) const;

    /// B(x) in d dimensions (d = x.size()).
    double value(std::span<const double> x) const;
    /// L-periodic extension B_#(x), summing enough images that the neglected tail is below 1e-16.
    double periodized_value(std::span<const double> x, const BoxSpec& box) const;
    /// Integral of |B_#|^2 over one cell, computed exactly by Parseval as (1/L^d) sum_k B^(k)^2
    /// over the full (untruncated) dual lattice.
    double periodized_l2_squared(const BoxSpec& box) const;

    /// One-dimensional factor g(x) = exp(-pi x^2 / w^2) and its first two derivatives.
    double axis_factor(double x, int derivative) const;

private:
    explicit Profile(Kind kind, double width) : kind_(kind), width_(width) {}

    Kind kind_;
    double width_;
};

struct ProfileNorms {
    double norm_1 = 0.0;   ///< ||B^_#||_{*,1} over the truncated lattice
    double norm_inf = 0.0; ///< sup over the truncated lattice
    double norm_1_inf = 0.0;
};

ProfileNorms profile_norms(const Profile& profile, const BoxSpec& box);

/// Lattice scan of prod_j (1 + k_j^2) |B^_#(k)| against the Schwartz-seminorm bound
/// C_d * sum_{alpha_j <= 2} sup_x |<x>^{2d} d^alpha B(x)|, with C_d = int <x>^{-2d} dx.
struct DecayReport {
    double max_weighted = 0.0;
    Momentum argmax;
    double seminorm_sum = 0.0;
    double constant_cd = 0.0;
    double bound = 0.0;
    bool holds = false;
};

DecayReport verify_decay_bound(const Profile& profile, const BoxSpec& box);

} // namespace dosx
