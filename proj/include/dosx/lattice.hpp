#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace dosx {

using cplx = std::complex<double>;

constexpr int kMaxDim = 3;
constexpr double kPi = 3.14159265358979323846;

/// Dual-lattice momentum stored as integer indices; the physical value is n / L.
/// Unused trailing components (beyond the box dimension) are zero.
struct Momentum {
    std::array<int, kMaxDim> n{};

    Momentum() = default;
    explicit Momentum(int n0, int n1 = 0, int n2 = 0) : n{n0, n1, n2} {}

    /// Squared integer norm, so nu(p) = norm2() / (2 L^2) exactly.
    std::int64_t norm2() const {
        std::int64_t s = 0;
        for (int v : n) s += std::int64_t(v) * v;
        return s;
    }
    bool is_zero() const { return n[0] == 0 && n[1] == 0 && n[2] == 0; }

    Momentum operator-() const { return Momentum(-n[0], -n[1], -n[2]); }
    Momentum& operator+=(const Momentum& o) {
        for (int j = 0; j < kMaxDim; ++j) n[j] += o.n[j];
        return *this;
    }
    Momentum& operator-=(const Momentum& o) {
        for (int j = 0; j < kMaxDim; ++j) n[j] -= o.n[j];
        return *this;
    }
    friend Momentum operator+(Momentum a, const Momentum& b) { return a += b; }
    friend Momentum operator-(Momentum a, const Momentum& b) { return a -= b; }
    friend bool operator==(const Momentum&, const Momentum&) = default;
    friend auto operator<=>(const Momentum&, const Momentum&) = default;
};

/// Finite periodic box of side L in d dimensions with a momentum cutoff p_max.
/// The truncated dual lattice is {p in (Z/L)^d : max_j |p_j| <= p_max}.
class BoxSpec {
public:
    BoxSpec(double L, int d, double p_max);

    double L() const { return L_; }
    int d() const { return d_; }
    double p_max() const { return p_max_; }
    /// Largest admissible integer index per axis, floor(p_max * L).
    int index_cutoff() const { return K_; }
    /// |Lambda_L| = L^d.
    double volume() const { return volume_; }
    /// Number of points in the truncated lattice, (2K+1)^d.
    std::size_t grid_size() const;

    double component(const Momentum& p, int j) const { return p.n[j] / L_; }
    double norm(const Momentum& p) const { return std::sqrt(double(p.norm2())) / L_; }
    bool contains(const Momentum& p) const;
    std::string describe() const;

private:
    double L_;
    int d_;
    double p_max_;
    int K_;
    double volume_;
};

/// Canonically ordered truncated lattice with O(1) index lookup.
class DualLattice {
public:
    explicit DualLattice(const BoxSpec& box);

    const BoxSpec& box() const { return box_; }
    const std::vector<Momentum>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    const Momentum& operator[](std::size_t i) const { return points_[i]; }
    /// Position in the canonical order, or nullopt outside the truncation.
    std::optional<std::size_t> index_of(const Momentum& p) const;

private:
    BoxSpec box_;
    std::vector<Momentum> points_;
};

/// Points of the truncated dual lattice, lexicographic on the integer indices.
std::vector<Momentum> dual_lattice_points(const BoxSpec& box);

/// Free kinetic energy nu(p) = p^2 / 2.
inline double nu(const Momentum& p, const BoxSpec& box) {
    return 0.5 * double(p.norm2()) / (box.L() * box.L());
}
double nu(std::span<const double> p);

/// (nu - z)^{-1}; throws DomainError when z is real and equals nu.
cplx free_resolvent_multiplier(double nu_value, cplx z);
inline cplx free_resolvent_multiplier(const Momentum& p, const BoxSpec& box, cplx z) {
    return free_resolvent_multiplier(nu(p, box), z);
}

/// Normalized lattice sum (1/L^d) sum_p f(p) over the truncated lattice, canonical order.
template <class F>
auto star_integral(F&& f, const BoxSpec& box) {
    using R = decltype(f(std::declval<const Momentum&>()));
    R acc{};
    for (const auto& p : dual_lattice_points(box)) acc += f(p);
    return acc / box.volume();
}

enum class StarNorm { One, Two, Inf };

double star_norm(const std::function<cplx(const Momentum&)>& f, const BoxSpec& box, StarNorm q);

/// Finite combination sum_p c_p phi_p of plane waves.
class WaveVector {
public:
    WaveVector() = default;
    static WaveVector plane_wave(const Momentum& q, cplx amplitude = 1.0);

    WaveVector& add(const Momentum& p, cplx amplitude);
    const std::vector<std::pair<Momentum, cplx>>& coefficients() const { return coeffs_; }
    cplx coefficient(const Momentum& p) const;
    bool empty() const { return coeffs_.empty(); }

    /// Squared L^2 norm sum_p |c_p|^2.
    double norm_squared() const;
    double norm() const { return std::sqrt(norm_squared()); }
    /// Periodized transform value psi_#^(p) = L^{d/2} c_p.
    cplx hat_sharp(const Momentum& p, const BoxSpec& box) const;
    /// Dense coefficient vector in the canonical lattice order; throws if a
    /// component lies outside the truncation.
    std::vector<cplx> dense(const DualLattice& lattice) const;
    std::string describe(const BoxSpec& box) const;

private:
    std::vector<std::pair<Momentum, cplx>> coeffs_; // sorted by momentum, no duplicates
};

} // namespace dosx
