#include "dosx/disorder.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace dosx {

WeightDistribution WeightDistribution::constant(double c) {
    if (!std::isfinite(c)) throw std::invalid_argument("distribution.c must be finite");
    return {Kind::Constant, c};
}
WeightDistribution WeightDistribution::uniform_zero_one() { return {Kind::UniformZeroOne, 0.0}; }
WeightDistribution WeightDistribution::rademacher() { return {Kind::Rademacher, 0.0}; }

std::string WeightDistribution::name() const {
    switch (kind_) {
    case Kind::Constant: {
        std::ostringstream os;
        os << "constant(" << c_ << ")";
        return os.str();
    }
    case Kind::UniformZeroOne: return "uniform01";
    case Kind::Rademacher: return "rademacher";
    }
    return "?";
}

double WeightDistribution::moment(int k) const {
    if (k < 0) throw std::invalid_argument("moment order must be >= 0");
    if (k == 0) return 1.0;
    switch (kind_) {
    case Kind::Constant: return std::pow(c_, k);
    case Kind::UniformZeroOne: return 1.0 / (k + 1);
    case Kind::Rademacher: return (k % 2 == 0) ? 1.0 : 0.0;
    }
    return 0.0;
}

double WeightDistribution::uniform_moment_bound() const {
    if (kind_ == Kind::Constant && std::abs(c_) > 1.0) return std::numeric_limits<double>::infinity();
    return 1.0;
}

bool WeightDistribution::positive_support() const {
    switch (kind_) {
    case Kind::Constant: return c_ > 0.0;
    case Kind::UniformZeroOne: return true; // v = 0 has probability zero
    case Kind::Rademacher: return false;
    }
    return false;
}

double WeightDistribution::sample(RandomStream& rng) const {
    switch (kind_) {
    case Kind::Constant: return c_;
    case Kind::UniformZeroOne: {
        double u = rng.uniform();
        while (u == 0.0) u = rng.uniform();
        return u;
    }
    case Kind::Rademacher: return (rng.next_u64() >> 63) ? 1.0 : -1.0;
    }
    return 0.0;
}

std::uint64_t sample_poisson(double mean, RandomStream& rng) {
    if (!(mean >= 0.0)) throw std::invalid_argument("Poisson mean must be >= 0");
    if (mean > 700.0) throw std::invalid_argument("Poisson inversion limited to mean <= 700");
    const double u = rng.uniform();
    double p = std::exp(-mean);
    double cdf = p;
    std::uint64_t k = 0;
    while (u >= cdf) {
        ++k;
        p *= mean / double(k);
        const double next = cdf + p;
        if (next == cdf) break; // CDF saturated in floating point
        cdf = next;
    }
    return k;
}

DisorderConfig sample_config(const BoxSpec& box, const WeightDistribution& dist, std::uint64_t seed,
                             std::uint64_t index) {
    RandomStream rng(seed, index);
    DisorderConfig cfg;
    cfg.seed = seed;
    cfg.index = index;
    cfg.d = box.d();
    const std::uint64_t M = sample_poisson(box.volume(), rng);
    cfg.points.resize(M);
    cfg.weights.resize(M);
    const double L = box.L();
    for (std::uint64_t g = 0; g < M; ++g) {
        for (int j = 0; j < box.d(); ++j) {
            double y = (rng.uniform() - 0.5) * L;
            if (y >= 0.5 * L) y = -0.5 * L;
            cfg.points[g][j] = y;
        }
    }
    for (std::uint64_t g = 0; g < M; ++g) cfg.weights[g] = dist.sample(rng);
    return cfg;
}

cplx potential_hat(const DisorderConfig& config, const Profile& profile, const BoxSpec& box,
                   const Momentum& u) {
    cplx acc{};
    for (std::size_t g = 0; g < config.count(); ++g) {
        double phase = 0.0;
        for (int j = 0; j < box.d(); ++j) phase += box.component(u, j) * config.points[g][j];
        acc += config.weights[g] * std::polar(1.0, -2.0 * kPi * phase);
    }
    return profile.hat(u, box) * acc;
}

PotentialTable::PotentialTable(const DisorderConfig& config, const Profile& profile, const BoxSpec& box)
    : K2_(2 * box.index_cutoff()), side_(2 * K2_ + 1), d_(box.d()) {
    std::size_t total = 1;
    for (int j = 0; j < d_; ++j) total *= std::size_t(side_);
    values_.assign(total, cplx{});

    // Per point and axis, the phases exp(-2 pi i m y_j / L) for m in [-2K, 2K] by repeated multiplication.
    std::vector<cplx> phase(std::size_t(d_) * side_);
    for (std::size_t g = 0; g < config.count(); ++g) {
        for (int j = 0; j < d_; ++j) {
            const cplx step = std::polar(1.0, -2.0 * kPi * config.points[g][j] / box.L());
            cplx* row = &phase[std::size_t(j) * side_];
            row[K2_] = 1.0;
            for (int m = 1; m <= K2_; ++m) {
                row[K2_ + m] = row[K2_ + m - 1] * step;
                row[K2_ - m] = std::conj(row[K2_ + m]);
            }
        }
        const double v = config.weights[g];
        for (std::size_t idx = 0; idx < total; ++idx) {
            std::size_t r = idx;
            cplx prod = v;
            for (int j = d_ - 1; j >= 0; --j) {
                prod *= phase[std::size_t(j) * side_ + r % side_];
                r /= side_;
            }
            values_[idx] += prod;
        }
    }
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t r = idx;
        Momentum u;
        for (int j = d_ - 1; j >= 0; --j) {
            u.n[j] = int(r % side_) - K2_;
            r /= side_;
        }
        values_[idx] *= profile.hat(u, box);
    }
}

cplx PotentialTable::operator()(const Momentum& u) const {
    std::size_t idx = 0;
    for (int j = 0; j < d_; ++j) {
        if (std::abs(u.n[j]) > K2_) throw std::out_of_range("PotentialTable: momentum outside difference range");
        idx = idx * side_ + std::size_t(u.n[j] + K2_);
    }
    return values_[idx];
}

double potential_value(const DisorderConfig& config, const Profile& profile, const BoxSpec& box,
                       std::span<const double> x) {
    double acc = 0.0;
    std::array<double, kMaxDim> diff{};
    for (std::size_t g = 0; g < config.count(); ++g) {
        for (int j = 0; j < box.d(); ++j) diff[j] = x[j] - config.points[g][j];
        acc += config.weights[g] * profile.periodized_value(std::span<const double>(diff.data(), box.d()), box);
    }
    return acc;
}

double expected_v_squared(const BoxSpec& box, const Profile& profile, const WeightDistribution& dist) {
    const double b0 = profile.hat(Momentum{}, box);
    const double m1 = dist.moment(1);
    return m1 * m1 * b0 * b0 + dist.moment(2) * profile.periodized_l2_squared(box);
}

} // namespace dosx
