#include "dosx/expansion.hpp"
#include "dosx/oracle.hpp"

#include <doctest.h>

#include <cmath>

using namespace dosx;

TEST_SUITE("oracle") {

TEST_CASE("assembled Hamiltonian is Hermitian with the free diagonal") {
    const BoxSpec box(4.0, 1, 3.0);
    const auto c = sample_config(box, WeightDistribution::rademacher(), 2, 0);
    const auto H = TruncatedHamiltonian::assemble(c, box, Profile::gaussian(1.0), 0.3);
    CHECK(H.hermiticity_residual() < 1e-14);
    const auto H0 = TruncatedHamiltonian::free(box);
    for (std::size_t i = 0; i < H0.dimension(); ++i)
        CHECK(H0.matrix(Eigen::Index(i), Eigen::Index(i)).real() == nu(H0.lattice[i], box));
}

TEST_CASE("LU and spectral resolvents agree") {
    const BoxSpec box(4.0, 1, 3.0);
    const auto c = sample_config(box, WeightDistribution::uniform_zero_one(), 4, 1);
    const auto H = TruncatedHamiltonian::assemble(c, box, Profile::gaussian(1.0), 0.5);
    WaveVector a, b;
    a.add(Momentum(0), 1.0).add(Momentum(1), {0.0, 1.0});
    b.add(Momentum(-2), 1.0);
    for (cplx z : {cplx(1.0, 0.5), cplx(0.0, 1e-3), cplx(3.0, -0.2)})
        CHECK(std::abs(resolvent_element(H, z, a, b) - resolvent_element_spectral(H, z, a, b)) < 1e-8);
}

TEST_CASE("non-negative weights give a non-negative spectrum") {
    const BoxSpec box(4.0, 1, 3.0);
    const auto c = sample_config(box, WeightDistribution::uniform_zero_one(), 8, 0);
    const auto e = eigenvalues(TruncatedHamiltonian::assemble(c, box, Profile::gaussian(1.0), 1.0));
    CHECK(e.front() > -1e-12);
}

TEST_CASE("small coupling matches the Neumann series") {
    const Model m{BoxSpec(4.0, 1, 3.0), Profile::gaussian(1.0), WeightDistribution::uniform_zero_one()};
    const auto c = sample_config(m.box, m.dist, 12, 0);
    const DualLattice lat(m.box);
    const auto rows = potential_rows(c, m, lat);
    const auto psi = WaveVector::plane_wave(Momentum(1));
    const cplx z(1.0, 0.5);
    const double lam = 1e-3;
    cplx series = 0.0;
    for (int n = 0; n <= 3; ++n) series += std::pow(-lam, n) * fixed_config_term(n, lat, rows, z, psi, psi);
    const auto H = TruncatedHamiltonian::assemble(c, m.box, m.profile, lam);
    CHECK(std::abs(resolvent_element(H, z, psi, psi) - series) < 1e-9);
}

TEST_CASE("free ensemble is exact and batched averages match single ones") {
    const Model m{BoxSpec(4.0, 1, 3.0), Profile::gaussian(1.0), WeightDistribution::rademacher()};
    const auto psi = WaveVector::plane_wave(Momentum(0));
    const cplx z(1.0, 0.5);
    const auto free = expect_resolvent(m, 0.0, z, psi, psi, 8, 1);
    CHECK(std::abs(free.value - 1.0 / (0.0 - z)) < 1e-15);
    CHECK(free.std_error == 0.0);
    const double lambdas[2] = {0.05, 0.1};
    const auto batch = expect_resolvents(m, lambdas, z, {{psi, psi}}, 500, 3);
    const auto single = expect_resolvent(m, 0.1, z, psi, psi, 500, 3);
    CHECK(std::abs(batch[1][0].value - single.value) < 1e-14);
}

TEST_CASE("mean standard error shrinks like the inverse square root of the sample count") {
    const Model m{BoxSpec(4.0, 1, 3.0), Profile::gaussian(1.0), WeightDistribution::uniform_zero_one()};
    const auto psi = WaveVector::plane_wave(Momentum(0));
    const auto a = expect_resolvent(m, 0.3, {1.0, 0.5}, psi, psi, 500, 5);
    const auto b = expect_resolvent(m, 0.3, {1.0, 0.5}, psi, psi, 8000, 6);
    CHECK(a.std_error / b.std_error == doctest::Approx(4.0).epsilon(0.3));
}

}
