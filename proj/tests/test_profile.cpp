#include "dosx/profile.hpp"
#include "dosx/quadrature.hpp"

#include <doctest.h>

#include <cmath>

using namespace dosx;

TEST_SUITE("profile") {

TEST_CASE("Gaussian transform is exp(-pi w^2 k^2)") {
    const BoxSpec box(4.0, 2, 3.0);
    const Profile B = Profile::gaussian(0.7);
    CHECK(B.hat(Momentum(0, 0), box) == 1.0);
    const double k2 = (9.0 + 16.0) / 16.0;
    CHECK(B.hat(Momentum(3, 4), box) == doctest::Approx(std::exp(-kPi * 0.49 * k2)).epsilon(1e-15));
}

TEST_CASE("periodization has the lattice transform as Fourier coefficients") {
    const BoxSpec box(2.0, 1, 3.0);
    const Profile B = Profile::gaussian(1.0);
    for (int k = 0; k < 5; ++k) {
        auto f = [&](double x) {
            const double xs[1] = {x};
            return B.periodized_value(xs, box) * std::cos(2.0 * kPi * k * x / box.L());
        };
        CHECK(std::abs(integrate_or_throw(f, -1.0, 1.0, 1e-13) - B.hat(Momentum(k), box)) < 1e-8);
    }
}

TEST_CASE("periodized L2 norm matches Parseval sum") {
    const BoxSpec box(3.0, 1, 5.0);
    const Profile B = Profile::gaussian(1.0);
    double sum = 0.0;
    for (int u = -60; u <= 60; ++u) sum += std::pow(B.hat(Momentum(u), box), 2);
    CHECK(B.periodized_l2_squared(box) == doctest::Approx(sum / box.volume()).epsilon(1e-12));
}

TEST_CASE("lattice 1-norm is stable once L >= 2 and bounded at L = 1") {
    const Profile B = Profile::gaussian(1.0);
    const double n2 = profile_norms(B, BoxSpec(2.0, 1, 3.0)).norm_1;
    const double n8 = profile_norms(B, BoxSpec(8.0, 1, 3.0)).norm_1;
    CHECK(std::abs(n2 - n8) / n8 < 1e-2);
    const auto n1 = profile_norms(B, BoxSpec(1.0, 1, 3.0));
    CHECK(n1.norm_1 < 1.1);
    CHECK(n1.norm_inf == 1.0);
    CHECK(n1.norm_1_inf == doctest::Approx(n1.norm_1 + 1.0));
}

TEST_CASE("decay bound holds for the Gaussian profile") {
    for (int d = 1; d <= 3; ++d) {
        const auto rep = verify_decay_bound(Profile::gaussian(1.0), BoxSpec(2.0, d, 2.0));
        CHECK(rep.holds);
        CHECK(rep.max_weighted <= rep.bound);
    }
}

TEST_CASE("non-positive width is rejected") {
    CHECK_THROWS(Profile::gaussian(0.0));
}

}
