#pragma once

#include "dosx/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace dosx {

enum class Execution { serial, parallel };

/// Running mean and second moments of complex samples, one slot per channel.
class ComplexWelford {
public:
    explicit ComplexWelford(std::size_t channels = 0)
        : mean_(channels), m2_re_(channels, 0.0), m2_im_(channels, 0.0) {}

    std::size_t channels() const { return mean_.size(); }
    std::uint64_t count() const { return count_; }

    void push(std::span<const cplx> x) {
        ++count_;
        const double inv = 1.0 / double(count_);
        for (std::size_t k = 0; k < mean_.size(); ++k) {
            const cplx delta = x[k] - mean_[k];
            mean_[k] += delta * inv;
            const cplx delta2 = x[k] - mean_[k];
            m2_re_[k] += delta.real() * delta2.real();
            m2_im_[k] += delta.imag() * delta2.imag();
        }
    }

    /// Chan et al. pairwise combination.
    void merge(const ComplexWelford& o) {
        if (o.count_ == 0) return;
        if (count_ == 0) {
            *this = o;
            return;
        }
        const double na = double(count_), nb = double(o.count_), n = na + nb;
        for (std::size_t k = 0; k < mean_.size(); ++k) {
            const cplx delta = o.mean_[k] - mean_[k];
            mean_[k] += delta * (nb / n);
            m2_re_[k] += o.m2_re_[k] + delta.real() * delta.real() * na * nb / n;
            m2_im_[k] += o.m2_im_[k] + delta.imag() * delta.imag() * na * nb / n;
        }
        count_ += o.count_;
    }

    cplx mean(std::size_t k) const { return mean_[k]; }
    /// Standard error of the mean, real and imaginary parts combined in quadrature.
    double std_error(std::size_t k) const {
        if (count_ < 2) return 0.0;
        const double var = (m2_re_[k] + m2_im_[k]) / double(count_ - 1);
        return std::sqrt(var / double(count_));
    }

private:
    std::uint64_t count_ = 0;
    std::vector<cplx> mean_;
    std::vector<double> m2_re_, m2_im_;
};

struct SampleMean {
    std::vector<cplx> mean;
    std::vector<double> std_error;
    std::uint64_t samples = 0;
};

inline SampleMean finish(const ComplexWelford& acc) {
    SampleMean out;
    out.samples = acc.count();
    for (std::size_t k = 0; k < acc.channels(); ++k) {
        out.mean.push_back(acc.mean(k));
        out.std_error.push_back(acc.std_error(k));
    }
    return out;
}

constexpr std::size_t kReductionChunk = 1024;

/// Mean over sample indices 0..samples-1 of the channel vector written by
/// body(index, out). body must be safe to call concurrently for distinct indices.
///
/// The parallel path accumulates fixed chunks of kReductionChunk indices and merges them in
/// chunk order, so its result does not depend on the thread count. The serial path is a
/// single Welford pass, kept as the reference.
template <class Body>
SampleMean sample_mean(std::uint64_t samples, std::size_t channels, Body&& body,
                       Execution exec = Execution::parallel) {
    if (exec == Execution::serial) {
        ComplexWelford acc(channels);
        std::vector<cplx> buf(channels);
        for (std::uint64_t i = 0; i < samples; ++i) {
            body(i, std::span<cplx>(buf));
            acc.push(buf);
        }
        return finish(acc);
    }

    const std::size_t chunks = std::size_t((samples + kReductionChunk - 1) / kReductionChunk);
    std::vector<ComplexWelford> partial(chunks, ComplexWelford(channels));
#pragma omp parallel
    {
        std::vector<cplx> buf(channels);
#pragma omp for schedule(dynamic, 1)
        for (std::ptrdiff_t c = 0; c < std::ptrdiff_t(chunks); ++c) {
            const std::uint64_t lo = std::uint64_t(c) * kReductionChunk;
            const std::uint64_t hi = std::min<std::uint64_t>(samples, lo + kReductionChunk);
            for (std::uint64_t i = lo; i < hi; ++i) {
                body(i, std::span<cplx>(buf));
                partial[std::size_t(c)].push(buf);
            }
        }
    }
    ComplexWelford acc(channels);
    for (const auto& p : partial) acc.merge(p);
    return finish(acc);
}

} // namespace dosx
