#include "dosx/disorder.hpp"
#include "dosx/parallel.hpp"

#include <doctest.h>

#include <cmath>

using namespace dosx;

TEST_SUITE("disorder") {

TEST_CASE("weight moments are exact") {
    const auto u = WeightDistribution::uniform_zero_one();
    CHECK(u.moment(2) == doctest::Approx(1.0 / 3.0));
    CHECK(u.moment(3) == doctest::Approx(0.25));
    const auto r = WeightDistribution::rademacher();
    CHECK(r.moment(1) == 0.0);
    CHECK(r.moment(4) == 1.0);
    CHECK(WeightDistribution::constant(2.0).moment(3) == 8.0);
    CHECK(u.positive_support());
    CHECK_FALSE(r.positive_support());
    CHECK_FALSE(WeightDistribution::constant(0.0).positive_support());
}

TEST_CASE("Poisson sampler mean and variance") {
    RandomStream rng(7, 0);
    for (double mean : {0.5, 4.0, 64.0}) {
        ComplexWelford acc(1);
        for (int i = 0; i < 40000; ++i) {
            const cplx x = double(sample_poisson(mean, rng));
            acc.push(std::span<const cplx>(&x, 1));
        }
        const auto s = finish(acc);
        CHECK(std::abs(s.mean[0].real() - mean) < 4.0 * s.std_error[0]);
    }
}

TEST_CASE("configurations are a pure function of seed and index") {
    const BoxSpec box(4.0, 2, 1.0);
    const auto dist = WeightDistribution::uniform_zero_one();
    const auto a = sample_config(box, dist, 99, 5);
    const auto b = sample_config(box, dist, 99, 5);
    const auto c = sample_config(box, dist, 99, 6);
    CHECK(a.points == b.points);
    CHECK(a.weights == b.weights);
    CHECK((a.points != c.points || a.weights != c.weights));
    for (const auto& y : a.points)
        for (int j = 0; j < box.d(); ++j) CHECK(std::abs(y[std::size_t(j)]) <= 2.0);
}

TEST_CASE("potential transform is Hermitian and matches the position sum") {
    const BoxSpec box(4.0, 1, 3.0);
    const Profile B = Profile::gaussian(1.0);
    const auto c = sample_config(box, WeightDistribution::rademacher(), 3, 0);
    const PotentialTable V(c, B, box);
    for (int u = -24; u <= 24; ++u) {
        CHECK(std::abs(V(Momentum(u)) - std::conj(V(Momentum(-u)))) < 1e-14);
        CHECK(std::abs(V(Momentum(u)) - potential_hat(c, B, box, Momentum(u))) < 1e-14);
    }
    for (double x0 : {-1.7, 0.0, 0.9}) {
        cplx sum = 0.0;
        for (int u = -40; u <= 40; ++u)
            sum += potential_hat(c, B, box, Momentum(u)) * std::polar(1.0, 2.0 * kPi * u * x0 / box.L());
        const double xs[1] = {x0};
        CHECK(std::abs(sum / box.volume() - potential_value(c, B, box, xs)) < 1e-6);
    }
}

TEST_CASE("E V^2 closed form against sampling") {
    const BoxSpec box(4.0, 1, 3.0);
    const Profile B = Profile::gaussian(1.0);
    for (const auto& dist : {WeightDistribution::uniform_zero_one(), WeightDistribution::rademacher()}) {
        const auto s = sample_mean(40000, 1, [&](std::uint64_t i, std::span<cplx> out) {
            const double x[1] = {0.3};
            const double v = potential_value(sample_config(box, dist, 11, i), B, box, x);
            out[0] = v * v;
        });
        CHECK(std::abs(s.mean[0].real() - expected_v_squared(box, B, dist)) < 4.0 * s.std_error[0]);
    }
}

}
