#include "dosx/lattice.hpp"

#include "dosx/errors.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace dosx {

BoxSpec::BoxSpec(double L, int d, double p_max) : L_(L), d_(d), p_max_(p_max) {
    if (!(L >= 1.0) || !std::isfinite(L)) throw std::invalid_argument("box.L must be >= 1");
    if (d < 1 || d > kMaxDim) throw std::invalid_argument("box.d must be 1, 2 or 3");
    if (!(p_max > 0.0) || !std::isfinite(p_max)) throw std::invalid_argument("box.p_max must be > 0");
    // Slack absorbs p_max * L landing a rounding error below an integer.
    K_ = static_cast<int>(std::floor(p_max * L + 1e-9));
    volume_ = std::pow(L, d);
}

std::size_t BoxSpec::grid_size() const {
    std::size_t side = 2 * std::size_t(K_) + 1, n = 1;
    for (int j = 0; j < d_; ++j) n *= side;
    return n;
}

bool BoxSpec::contains(const Momentum& p) const {
    for (int j = 0; j < kMaxDim; ++j) {
        if (j >= d_) {
            if (p.n[j] != 0) return false;
        } else if (std::abs(p.n[j]) > K_) {
            return false;
        }
    }
    return true;
}

std::string BoxSpec::describe() const {
    std::ostringstream os;
    os << "box(L=" << L_ << ",d=" << d_ << ",p_max=" << p_max_ << ")";
    return os.str();
}

std::vector<Momentum> dual_lattice_points(const BoxSpec& box) {
    const int K = box.index_cutoff();
    const int side = 2 * K + 1;
    std::vector<Momentum> pts;
    pts.reserve(box.grid_size());
    std::array<int, kMaxDim> digit{};
    const std::size_t total = box.grid_size();
    for (std::size_t i = 0; i < total; ++i) {
        // Mixed radix with the first axis most significant gives lexicographic order.
        std::size_t r = i;
        for (int j = box.d() - 1; j >= 0; --j) {
            digit[j] = int(r % side) - K;
            r /= side;
        }
        Momentum p;
        for (int j = 0; j < box.d(); ++j) p.n[j] = digit[j];
        pts.push_back(p);
    }
    return pts;
}

DualLattice::DualLattice(const BoxSpec& box) : box_(box), points_(dual_lattice_points(box)) {}

std::optional<std::size_t> DualLattice::index_of(const Momentum& p) const {
    if (!box_.contains(p)) return std::nullopt;
    const int K = box_.index_cutoff();
    const std::size_t side = 2 * std::size_t(K) + 1;
    std::size_t idx = 0;
    for (int j = 0; j < box_.d(); ++j) idx = idx * side + std::size_t(p.n[j] + K);
    return idx;
}

double nu(std::span<const double> p) {
    double s = 0.0;
    for (double v : p) s += v * v;
    return 0.5 * s;
}

cplx free_resolvent_multiplier(double nu_value, cplx z) {
    if (z.imag() == 0.0 && z.real() == nu_value)
        throw DomainError("free resolvent evaluated on its pole");
    return 1.0 / (nu_value - z);
}

double star_norm(const std::function<cplx(const Momentum&)>& f, const BoxSpec& box, StarNorm q) {
    double acc = 0.0;
    for (const auto& p : dual_lattice_points(box)) {
        const double a = std::abs(f(p));
        switch (q) {
        case StarNorm::One: acc += a; break;
        case StarNorm::Two: acc += a * a; break;
        case StarNorm::Inf: acc = std::max(acc, a); break;
        }
    }
    switch (q) {
    case StarNorm::One: return acc / box.volume();
    case StarNorm::Two: return std::sqrt(acc / box.volume());
    case StarNorm::Inf: return acc;
    }
    return acc;
}

WaveVector WaveVector::plane_wave(const Momentum& q, cplx amplitude) {
    WaveVector w;
    w.add(q, amplitude);
    return w;
}

WaveVector& WaveVector::add(const Momentum& p, cplx amplitude) {
    auto it = std::lower_bound(coeffs_.begin(), coeffs_.end(), p,
                               [](const auto& e, const Momentum& m) { return e.first < m; });
    if (it != coeffs_.end() && it->first == p)
        it->second += amplitude;
    else
        coeffs_.insert(it, {p, amplitude});
    return *this;
}

cplx WaveVector::coefficient(const Momentum& p) const {
    auto it = std::lower_bound(coeffs_.begin(), coeffs_.end(), p,
                               [](const auto& e, const Momentum& m) { return e.first < m; });
    return (it != coeffs_.end() && it->first == p) ? it->second : cplx{};
}

double WaveVector::norm_squared() const {
    double s = 0.0;
    for (const auto& [p, c] : coeffs_) s += std::norm(c);
    return s;
}

cplx WaveVector::hat_sharp(const Momentum& p, const BoxSpec& box) const {
    return std::sqrt(box.volume()) * coefficient(p);
}

std::vector<cplx> WaveVector::dense(const DualLattice& lattice) const {
    std::vector<cplx> v(lattice.size());
    for (const auto& [p, c] : coeffs_) {
        auto idx = lattice.index_of(p);
        if (!idx) throw std::invalid_argument("wave vector component outside the truncated lattice");
        v[*idx] = c;
    }
    return v;
}

std::string WaveVector::describe(const BoxSpec& box) const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [p, c] : coeffs_) {
        if (!first) os << " + ";
        first = false;
        os << "(" << c.real();
        if (c.imag() != 0.0) os << (c.imag() < 0 ? "" : "+") << c.imag() << "i";
        os << ")phi[";
        for (int j = 0; j < box.d(); ++j) os << (j ? "," : "") << box.component(p, j);
        os << "]";
    }
    return os.str();
}

} // namespace dosx
