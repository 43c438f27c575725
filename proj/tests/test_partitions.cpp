#include "dosx/partitions.hpp"
#include "dosx/parallel.hpp"

#include <doctest.h>

#include <set>

using namespace dosx;

TEST_SUITE("partitions") {

TEST_CASE("enumeration counts are Bell numbers") {
    const std::uint64_t expect[] = {1, 1, 2, 5, 15, 52, 203, 877, 4140};
    CHECK(bell(0) == 1);
    for (int n = 1; n <= 8; ++n) {
        CHECK(bell(n) == expect[n]);
        CHECK(enumerate_partitions(n).size() == expect[n]);
    }
    CHECK_THROWS(enumerate_partitions(0));
    CHECK(bell(12) == 4213597);
}

TEST_CASE("partitions are distinct and cover every element once") {
    const auto all = enumerate_partitions(5);
    std::set<std::vector<std::vector<int>>> seen;
    for (const auto& A : all) {
        std::vector<int> hit(5, 0);
        for (const auto& b : A.blocks)
            for (int e : b) ++hit[std::size_t(e)];
        for (int h : hit) CHECK(h == 1);
        seen.insert(A.blocks);
    }
    CHECK(seen.size() == all.size());
}

TEST_CASE("bell bound dominates") {
    for (int n = 1; n <= 12; ++n) CHECK(double(bell(n)) < bell_bound(n));
}

TEST_CASE("M_A forces every block to balance") {
    for (const auto& A : enumerate_partitions(4)) {
        const std::vector<Momentum> free = {Momentum(3), Momentum(-1), Momentum(5), Momentum(2)};
        const auto t = apply_ma(A, free);
        const auto split = split_indices(A);
        for (int j : split.rest) CHECK(t[std::size_t(j)] == free[std::size_t(j)]);
        for (const auto& b : A.blocks) {
            Momentum s;
            for (int e : b) s += t[std::size_t(e)];
            CHECK(s.is_zero());
        }
    }
}

TEST_CASE("moment product vanishes for open paths and is shift invariant") {
    const BoxSpec box(2.0, 1, 3.0);
    const Profile B = Profile::gaussian(1.0);
    const auto dist = WeightDistribution::uniform_zero_one();
    const Momentum open[3] = {Momentum(0), Momentum(1), Momentum(2)};
    CHECK(expected_moment_product(open, B, dist, box) == 0.0);
    const Momentum loop[4] = {Momentum(0), Momentum(2), Momentum(-1), Momentum(0)};
    const Momentum moved[4] = {Momentum(3), Momentum(5), Momentum(2), Momentum(3)};
    CHECK(expected_moment_product(loop, B, dist, box) ==
          doctest::Approx(expected_moment_product(moved, B, dist, box)).epsilon(1e-13));
}

TEST_CASE("n = 1 moment is m_1 B(0) L^d") {
    const BoxSpec box(2.0, 1, 3.0);
    const Profile B = Profile::gaussian(1.0);
    const Momentum loop[2] = {Momentum(1), Momentum(1)};
    CHECK(expected_moment_product(loop, B, WeightDistribution::constant(1.5), box) == doctest::Approx(3.0));
}

TEST_CASE("moment product agrees with sampling for a loop of length 3") {
    const BoxSpec box(2.0, 1, 3.0);
    const Profile B = Profile::gaussian(1.0);
    const auto dist = WeightDistribution::rademacher();
    const Momentum p[4] = {Momentum(0), Momentum(2), Momentum(-1), Momentum(0)};
    const double exact = expected_moment_product(p, B, dist, box);
    const auto s = sample_mean(50000, 1, [&](std::uint64_t i, std::span<cplx> out) {
        const PotentialTable V(sample_config(box, dist, 5, i), B, box);
        out[0] = V(p[0] - p[1]) * V(p[1] - p[2]) * V(p[2] - p[3]);
    });
    CHECK(std::abs(s.mean[0] - exact) < 4.0 * s.std_error[0]);
}

}
