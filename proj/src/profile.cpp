#include "dosx/profile.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace dosx {

Profile Profile::gaussian(double width) {
    if (!(width > 0.0) || !std::isfinite(width)) throw std::invalid_argument("profile.width must be > 0");
    return Profile(Kind::Gaussian, width);
}

std::string Profile::name() const {
    std::ostringstream os;
    os << "gaussian(w=" << width_ << ")";
    return os.str();
}

double Profile::hat_from_norm2(double k2) const { return std::exp(-kPi * width_ * width_ * k2); }

double Profile::hat(const Momentum& k, const BoxSpec& box) const {
    return hat_from_norm2(double(k.norm2()) / (box.L() * box.L()));
}

double Profile::axis_factor(double x, int derivative) const {
    const double w2 = width_ * width_;
    const double g = std::exp(-kPi * x * x / w2);
    switch (derivative) {
    case 0: return g;
    case 1: return -2.0 * kPi * x / w2 * g;
    case 2: return (4.0 * kPi * kPi * x * x / (w2 * w2) - 2.0 * kPi / w2) * g;
    default: throw std::invalid_argument("axis_factor: derivative order > 2");
    }
}

double Profile::value(std::span<const double> x) const {
    double v = 1.0;
    for (double xj : x) v *= axis_factor(xj, 0) / width_;
    return v;
}

double Profile::periodized_value(std::span<const double> x, const BoxSpec& box) const {
    // exp(-pi r^2 / w^2) < 1e-16 once r > 3.5 w; images beyond that radius are dropped.
    const double L = box.L();
    const int reach = int(std::ceil(3.5 * width_ / L)) + 1;
    const int d = int(x.size());
    double total = 1.0;
    // The Gaussian factorizes over axes, so the image sum does too.
    for (int j = 0; j < d; ++j) {
        double s = 0.0;
        for (int m = -reach; m <= reach; ++m) s += axis_factor(x[j] - m * L, 0);
        total *= s / width_;
    }
    return total;
}

double Profile::periodized_l2_squared(const BoxSpec& box) const {
    // (1/L) sum_n exp(-2 pi w^2 n^2 / L^2) per axis.
    const double L = box.L();
    const double c = 2.0 * kPi * width_ * width_ / (L * L);
    double axis = 1.0;
    for (int n = 1;; ++n) {
        const double t = 2.0 * std::exp(-c * double(n) * n);
        axis += t;
        if (t < 1e-18 * axis) break;
    }
    return std::pow(axis / L, box.d());
}

ProfileNorms profile_norms(const Profile& profile, const BoxSpec& box) {
    ProfileNorms out;
    double sum = 0.0;
    for (const auto& p : dual_lattice_points(box)) {
        const double b = std::abs(profile.hat(p, box));
        sum += b;
        out.norm_inf = std::max(out.norm_inf, b);
    }
    out.norm_1 = sum / box.volume();
    out.norm_1_inf = out.norm_1 + out.norm_inf;
    return out;
}

namespace {

// int_{R^d} (1 + |x|^2)^{-d} dx
double weight_integral(int d) {
    switch (d) {
    case 1: return kPi;
    case 2: return kPi;
    default: return kPi * kPi / 4.0;
    }
}

} // namespace

DecayReport verify_decay_bound(const Profile& profile, const BoxSpec& box) {
    DecayReport rep;
    for (const auto& k : dual_lattice_points(box)) {
        double weight = 1.0;
        for (int j = 0; j < box.d(); ++j) {
            const double kj = box.component(k, j);
            weight *= 1.0 + kj * kj;
        }
        const double v = weight * std::abs(profile.hat(k, box));
        if (v > rep.max_weighted) {
            rep.max_weighted = v;
            rep.argmax = k;
        }
    }

    const int d = box.d();
    const double w = profile.width();
    const double R = 4.0 * w + 3.0;
    const int per_axis = d == 1 ? 4001 : (d == 2 ? 601 : 121);
    const double h = 2.0 * R / (per_axis - 1);
    std::vector<double> grid(per_axis);
    for (int i = 0; i < per_axis; ++i) grid[i] = -R + i * h;

    // Axis factor tables g^{(m)}(x_i) / w for m = 0, 1, 2.
    std::vector<double> table[3];
    for (int m = 0; m < 3; ++m) {
        table[m].resize(per_axis);
        for (int i = 0; i < per_axis; ++i) table[m][i] = std::abs(profile.axis_factor(grid[i], m)) / w;
    }

    std::size_t n_alpha = 1;
    for (int j = 0; j < d; ++j) n_alpha *= 3;
    std::size_t n_points = 1;
    for (int j = 0; j < d; ++j) n_points *= std::size_t(per_axis);

    for (std::size_t a = 0; a < n_alpha; ++a) {
        int alpha[kMaxDim] = {0, 0, 0};
        std::size_t r = a;
        for (int j = 0; j < d; ++j) {
            alpha[j] = int(r % 3);
            r /= 3;
        }
        double sup = 0.0;
        for (std::size_t pidx = 0; pidx < n_points; ++pidx) {
            std::size_t q = pidx;
            double x2 = 0.0, deriv = 1.0;
            for (int j = 0; j < d; ++j) {
                const std::size_t i = q % per_axis;
                q /= per_axis;
                x2 += grid[i] * grid[i];
                deriv *= table[alpha[j]][i];
            }
            sup = std::max(sup, std::pow(1.0 + x2, d) * deriv);
        }
        rep.seminorm_sum += sup;
    }
    rep.constant_cd = weight_integral(d);
    rep.bound = rep.constant_cd * rep.seminorm_sum;
    rep.holds = rep.max_weighted <= rep.bound;
    if (!rep.holds) throw std::logic_error("Fourier decay bound violated by the profile transform");
    return rep;
}

} // namespace dosx
