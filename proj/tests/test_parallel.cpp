#include "dosx/expansion.hpp"
#include "dosx/oracle.hpp"
#include "dosx/parallel.hpp"

#include <doctest.h>

#include <cmath>

using namespace dosx;

TEST_SUITE("parallel") {

TEST_CASE("Welford merge equals a single pass") {
    ComplexWelford whole(1), left(1), right(1);
    for (int i = 0; i < 1000; ++i) {
        const cplx x(std::sin(i * 0.1), std::cos(i * 0.37));
        whole.push(std::span<const cplx>(&x, 1));
        (i < 300 ? left : right).push(std::span<const cplx>(&x, 1));
    }
    left.merge(right);
    const auto a = finish(whole), b = finish(left);
    CHECK(std::abs(a.mean[0] - b.mean[0]) < 1e-15);
    CHECK(a.std_error[0] == doctest::Approx(b.std_error[0]).epsilon(1e-12));
}

TEST_CASE("chunked parallel reduction matches the serial reference") {
    auto body = [](std::uint64_t i, std::span<cplx> out) {
        out[0] = cplx(std::sqrt(double(i)), 1.0 / (1.0 + double(i)));
    };
    const auto par = sample_mean(10000, 1, body, Execution::parallel);
    const auto ser = sample_mean(10000, 1, body, Execution::serial);
    CHECK(std::abs(par.mean[0] - ser.mean[0]) / std::abs(ser.mean[0]) < 1e-12);
    CHECK(par.std_error[0] == doctest::Approx(ser.std_error[0]).epsilon(1e-12));
}

TEST_CASE("oracle and series kernels give the same answer in both execution modes") {
    const Model m{BoxSpec(4.0, 1, 3.0), Profile::gaussian(1.0), WeightDistribution::uniform_zero_one()};
    const auto psi = WaveVector::plane_wave(Momentum(1));
    const auto a = expect_resolvent(m, 0.2, {1.0, 0.5}, psi, psi, 3000, 2, Execution::parallel);
    const auto b = expect_resolvent(m, 0.2, {1.0, 0.5}, psi, psi, 3000, 2, Execution::serial);
    CHECK(std::abs(a.value - b.value) < 1e-12);
    const auto s1 = build_t_series(3, m, psi, psi, Execution::parallel);
    const auto s2 = build_t_series(3, m, psi, psi, Execution::serial);
    CHECK(s1.max_relative_difference(s2) == 0.0);
}

}
