#include "dosx/partitions.hpp"

#include "dosx/errors.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dosx {

std::vector<int> Partition::labels() const {
    std::vector<int> out(std::size_t(n), -1);
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (int e : blocks[b]) out[std::size_t(e)] = int(b);
    return out;
}

std::vector<Partition> enumerate_partitions(int n) {
    if (n < 1) throw std::invalid_argument("enumerate_partitions: n must be >= 1");
    if (n > kMaxEnumeratedSet)
        throw SizeLimitError("enumerate_partitions: n = " + std::to_string(n) + " exceeds the cap of 12");

    std::vector<Partition> out;
    out.reserve(bell(n));
    // Restricted growth string a with a[0] = 0 and a[i] <= 1 + max(a[0..i-1]).
    std::vector<int> a(std::size_t(n), 0), prefix_max(std::size_t(n), 0);
    while (true) {
        Partition P;
        P.n = n;
        P.blocks.resize(std::size_t(prefix_max[std::size_t(n) - 1]) + 1);
        for (int i = 0; i < n; ++i) P.blocks[std::size_t(a[std::size_t(i)])].push_back(i);
        out.push_back(std::move(P));

        int i = n - 1;
        while (i > 0 && a[std::size_t(i)] == prefix_max[std::size_t(i) - 1] + 1) --i;
        if (i == 0) break;
        ++a[std::size_t(i)];
        prefix_max[std::size_t(i)] = std::max(prefix_max[std::size_t(i) - 1], a[std::size_t(i)]);
        for (int j = i + 1; j < n; ++j) {
            a[std::size_t(j)] = 0;
            prefix_max[std::size_t(j)] = prefix_max[std::size_t(i)];
        }
    }
    return out;
}

std::uint64_t bell(int n) {
    if (n < 0) throw std::invalid_argument("bell: n must be >= 0");
    if (n > 24) throw SizeLimitError("bell: n > 24 overflows the 64-bit triangle");
    // Bell triangle: each row starts with the last entry of the previous row.
    std::vector<std::uint64_t> row{1};
    for (int i = 0; i < n; ++i) {
        std::vector<std::uint64_t> next{row.back()};
        for (std::uint64_t v : row) next.push_back(next.back() + v);
        row = std::move(next);
    }
    return row.front();
}

double bell_bound(int n) {
    if (n < 1) throw std::invalid_argument("bell_bound: n must be >= 1");
    return std::pow(0.792 * n / std::log(n + 1.0), n);
}

IndexSplit split_indices(const Partition& A) {
    IndexSplit s;
    std::vector<bool> is_max(std::size_t(A.n), false);
    for (const auto& b : A.blocks) is_max[std::size_t(b.back())] = true;
    for (int j = 0; j < A.n; ++j) (is_max[std::size_t(j)] ? s.maxima : s.rest).push_back(j);
    return s;
}

std::vector<Momentum> apply_ma(const Partition& A, std::span<const Momentum> free) {
    if (free.size() != std::size_t(A.n)) throw std::invalid_argument("apply_ma: expected n momenta");
    std::vector<Momentum> out(std::size_t(A.n));
    for (const auto& b : A.blocks) {
        Momentum sum;
        for (std::size_t k = 0; k + 1 < b.size(); ++k) {
            out[std::size_t(b[k])] = free[std::size_t(b[k])];
            sum += free[std::size_t(b[k])];
        }
        out[std::size_t(b.back())] = -sum;
    }
    return out;
}

double expected_moment_product(std::span<const Momentum> momenta, const Profile& profile,
                               const WeightDistribution& dist, const BoxSpec& box) {
    if (momenta.size() < 2) throw std::invalid_argument("expected_moment_product: need p_1..p_{n+1}");
    const int n = int(momenta.size()) - 1;
    if (n > kMaxMomentProduct)
        throw SizeLimitError("expected_moment_product: n = " + std::to_string(n) + " exceeds the cap of 8");

    std::vector<Momentum> transfer(static_cast<std::size_t>(n));
    std::vector<double> bhat(static_cast<std::size_t>(n));
    for (int l = 0; l < n; ++l) {
        transfer[std::size_t(l)] = momenta[std::size_t(l)] - momenta[std::size_t(l) + 1];
        bhat[std::size_t(l)] = profile.hat(transfer[std::size_t(l)], box);
    }

    double total = 0.0;
    for (const auto& A : enumerate_partitions(n)) {
        double term = 1.0;
        for (const auto& block : A.blocks) {
            Momentum s;
            double bprod = 1.0;
            for (int l : block) {
                s += transfer[std::size_t(l)];
                bprod *= bhat[std::size_t(l)];
            }
            if (!s.is_zero()) { // exact integer test of the discrete delta
                term = 0.0;
                break;
            }
            term *= dist.moment(int(block.size())) * box.volume() * bprod;
        }
        total += term;
    }
    return total;
}

} // namespace dosx
