#include "dosx/bump.hpp"
#include "dosx/expansion.hpp"
#include "dosx/quadrature.hpp"

#include <doctest.h>

#include <cmath>

using namespace dosx;

namespace {

Model desk(WeightDistribution dist) { return {BoxSpec(4.0, 1, 3.0), Profile::gaussian(1.0), dist}; }

SpectralWindow window(double lambda = 0.1) {
    SpectralWindow w;
    w.E = 1.0;
    w.eta = 0.5;
    w.epsilon = 0.25;
    w.lambda = lambda;
    return w;
}

WaveVector mixed() {
    WaveVector v;
    v.add(Momentum(0), 1.0 / std::sqrt(2.0)).add(Momentum(2), 1.0 / std::sqrt(2.0));
    return v;
}

} // namespace

TEST_SUITE("expansion") {

TEST_CASE("time-cutoff scale a(eta, epsilon)") {
    CHECK(a_scale(2.0, 1.0) == doctest::Approx(2.0));
    CHECK(a_scale(0.5, 0.25) == doctest::Approx(0.5 / (std::log(16.0) + 1.0)));
    CHECK_THROWS(a_scale(0.0, 0.1));
}

TEST_CASE("bump function and its transform") {
    CHECK(chi(0.0) == 1.0);
    CHECK(chi(1.0) == 1.0);
    CHECK(chi(2.0) == 0.0);
    CHECK(chi(1.5) == doctest::Approx(0.5));
    CHECK(chi_hat(0.0) == doctest::Approx(3.0).epsilon(1e-12));
    for (double s : {0.01, 0.37, 2.5, 11.0, 63.9}) CHECK(std::abs(chi_hat(s) - chi_hat_direct(s, 1e-13)) < 1e-11);
    const double total = 2.0 * integrate_or_throw([](double s) { return chi_hat(s); }, 0.0, 64.0, 1e-12, 100000);
    CHECK(total == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("transform decay constants dominate s^m |chi_hat(s)|") {
    for (int m : {6, 8}) {
        const double c = chi_hat_decay_constant(m);
        for (double s = 1.0; s < 60.0; s += 0.05) CHECK(std::pow(s, m) * std::abs(chi_hat(s)) <= c);
    }
}

TEST_CASE("partition series matches the brute-force momentum sum") {
    for (const auto& dist : {WeightDistribution::uniform_zero_one(), WeightDistribution::rademacher()}) {
        const Model m = desk(dist);
        for (int n = 0; n <= 3; ++n) {
            const auto fast = build_t_series(n, m, mixed(), mixed());
            const auto slow = build_t_series_reference(n, m, mixed(), mixed());
            CHECK(fast.max_relative_difference(slow) < 1e-12);
        }
    }
}

TEST_CASE("T_0 and T_1 closed forms") {
    const Model m = desk(WeightDistribution::uniform_zero_one());
    const cplx z(0.8, 0.4);
    const auto phi = WaveVector::plane_wave(Momentum(3));
    const double nq = nu(Momentum(3), m.box);
    CHECK(t_coeff_det(0, m, z, phi, phi).value == 1.0 / (nq - z));
    const cplx t1 = 0.5 / ((nq - z) * (nq - z));
    CHECK(std::abs(t_coeff_det(1, m, z, phi, phi).value - t1) < 1e-12);
}

TEST_CASE("odd coefficients vanish for symmetric weights") {
    const Model m = desk(WeightDistribution::rademacher());
    const auto phi = WaveVector::plane_wave(Momentum(0));
    CHECK(t_coeff_det(1, m, {1.0, 0.5}, phi, phi).value == 0.0);
    CHECK(t_coeff_det(3, m, {1.0, 0.5}, phi, phi).value == 0.0);
}

TEST_CASE("deterministic and sampled T_n agree") {
    const Model m = desk(WeightDistribution::uniform_zero_one());
    const cplx zs[2] = {{1.0, 0.5}, {0.0, 1.5}};
    const auto mc = t_coeffs_mc(2, m, zs, mixed(), mixed(), 20000, 17);
    for (int n = 0; n <= 2; ++n)
        for (int k = 0; k < 2; ++k) {
            const auto det = t_coeff_det(n, m, zs[k], mixed(), mixed()).value;
            CHECK(std::abs(det - mc[std::size_t(n)][std::size_t(k)].value) <=
                  4.0 * *mc[std::size_t(n)][std::size_t(k)].std_error + 1e-12);
        }
}

TEST_CASE("S_0 equals its time-domain integral") {
    const Model m = desk(WeightDistribution::uniform_zero_one());
    const auto w = window();
    for (int q : {0, 1, 5}) {
        const auto phi = WaveVector::plane_wave(Momentum(q));
        const auto s = s_coeff(0, m, w, phi, phi, Method::deterministic);
        CHECK(std::abs(s.value - s0_time_domain(nu(Momentum(q), m.box), w.E, w.eta, w.a())) < 1e-9);
    }
}

TEST_CASE("smoothing error of S_0 stays inside epsilon / 2") {
    const Model m = desk(WeightDistribution::uniform_zero_one());
    const auto w = window();
    for (int q = -12; q <= 12; q += 3) {
        const auto phi = WaveVector::plane_wave(Momentum(q));
        const auto s = s_coeff(0, m, w, phi, phi, Method::deterministic).value;
        CHECK(std::abs(s - 1.0 / (nu(Momentum(q), m.box) - w.z())) <= 0.5 * w.epsilon);
    }
}

TEST_CASE("sampled S_n agree with the deterministic series") {
    const Model m = desk(WeightDistribution::uniform_zero_one());
    const auto w = window();
    for (int n = 1; n <= 2; ++n) {
        const auto det = s_coeff(n, m, w, mixed(), mixed(), Method::deterministic);
        const auto mc = s_coeff(n, m, w, mixed(), mixed(), Method::monte_carlo, 20000, 23);
        CHECK(std::abs(det.value - mc.value) <= 4.0 * *mc.std_error + *det.quadrature_budget);
    }
}

TEST_CASE("Duhamel time and frequency forms coincide on fixed configurations") {
    const Model m = desk(WeightDistribution::uniform_zero_one());
    for (std::uint64_t i = 0; i < 2; ++i) {
        const auto c = sample_config(m.box, m.dist, 41, i);
        for (int n = 0; n <= 1; ++n) CHECK(duhamel_crosscheck(n, m, c, window(), mixed(), mixed()).discrepancy < 1e-5);
    }
}

TEST_CASE("partial sum at lambda = 0 is S_0") {
    const Model m = desk(WeightDistribution::rademacher());
    const auto w = window(0.0);
    const auto ps = resolvent_partial_sum(3, m, w, mixed(), mixed(), Method::deterministic);
    CHECK(ps.value == s_coeff(0, m, w, mixed(), mixed(), Method::deterministic).value);
}

TEST_CASE("constructive order") {
    const auto big = constructive_N(2.0, 1.0, 2.0, 2.0, 1.0);
    CHECK(big.astronomical);
    CHECK(big.N == doctest::Approx(1.5e7).epsilon(0.05));
    CHECK(big.bound_at_N <= 0.5);
    CHECK(constructive_N(1.0, 0.1, 0.0, 2.0, 1.0).N == 0.0);
    const auto small = constructive_N(0.5, 0.25, 0.01, 2.0, 1.0);
    CHECK_FALSE(small.astronomical);
    CHECK(small.bound_at_N <= 0.125);
    CHECK(std::pow(0.01, small.N - 1) * constructive_bound(small.N - 1, a_scale(0.5, 0.25), 1.0, 2.0) > 0.125);
}

TEST_CASE("window validation") {
    auto w = window();
    w.eta = 0.0;
    CHECK_THROWS(w.validate());
    w = window();
    w.epsilon = -1.0;
    CHECK_THROWS(w.validate());
}

TEST_CASE("orders beyond the deterministic limit are refused") {
    const Model m = desk(WeightDistribution::uniform_zero_one());
    CHECK_THROWS(s_coeff(kMaxDeterministicOrder + 1, m, window(), mixed(), mixed(), Method::deterministic));
}

}
