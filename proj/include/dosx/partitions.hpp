#pragma once

#include "dosx/disorder.hpp"
#include "dosx/lattice.hpp"
#include "dosx/profile.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace dosx {

constexpr int kMaxEnumeratedSet = 12;
constexpr int kMaxMomentProduct = 8;

/// Set partition of {0, ..., n-1}. Elements are zero-based throughout the library.
/// Canonical form: blocks ordered by their minimum, elements ascending within a block.
struct Partition {
    int n = 0;
    std::vector<std::vector<int>> blocks;

    /// Block label of each element (restricted-growth string).
    std::vector<int> labels() const;
    friend bool operator==(const Partition&, const Partition&) = default;
};

/// All partitions of an n-element set in restricted-growth-string order.
/// Throws SizeLimitError for n > 12.
std::vector<Partition> enumerate_partitions(int n);

/// Bell number by the recurrence B_{n+1} = sum_k C(n,k) B_k; exact for n <= 24.
std::uint64_t bell(int n);
/// (0.792 n / ln(n+1))^n, an upper bound on bell(n).
double bell_bound(int n);

struct IndexSplit {
    std::vector<int> maxima; ///< J_A: the largest element of each block, ascending
    std::vector<int> rest;   ///< I_A: everything else, ascending
};

IndexSplit split_indices(const Partition& A);

/// Change of variables onto block-balanced transfers: entries of `free` at indices in I_A are
/// copied, and each block maximum j gets minus the sum of the other members of its block.
/// `free` has n entries; entries at block maxima are ignored.
std::vector<Momentum> apply_ma(const Partition& A, std::span<const Momentum> free);

/// E prod_{j} V^(p_j - p_{j+1}) over the disorder, evaluated exactly by the partition sum with
/// delta_{*,L}(u) = L^d [u = 0]. `momenta` holds p_1..p_{n+1}; requires n <= 8.
double expected_moment_product(std::span<const Momentum> momenta, const Profile& profile,
                               const WeightDistribution& dist, const BoxSpec& box);

} // namespace dosx
