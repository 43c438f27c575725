#pragma once

#include "dosx/disorder.hpp"
#include "dosx/expansion.hpp"
#include "dosx/lattice.hpp"
#include "dosx/parallel.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace dosx {

/// Dense V_pq = V^(p - q) / L^d in the canonical lattice order.
Eigen::MatrixXcd potential_matrix(const DisorderConfig& config, const Profile& profile, const DualLattice& lattice);

/// H = diag(nu) + lambda V on the truncated plane-wave basis.
struct TruncatedHamiltonian {
    DualLattice lattice;
    Eigen::MatrixXcd matrix;

    static TruncatedHamiltonian assemble(const DisorderConfig& config, const BoxSpec& box, const Profile& profile,
                                         double lambda);
    static TruncatedHamiltonian free(const BoxSpec& box);
    std::size_t dimension() const { return std::size_t(matrix.rows()); }
    /// max |H - H^dagger|.
    double hermiticity_residual() const;
};

/// <psi1, (H - z)^{-1} psi2> by LU; throws SolverError when the residual exceeds 1e-10 ||psi2||.
cplx resolvent_element(const TruncatedHamiltonian& H, cplx z, const WaveVector& psi1, const WaveVector& psi2);
/// Same quantity from the eigendecomposition.
cplx resolvent_element_spectral(const TruncatedHamiltonian& H, cplx z, const WaveVector& psi1,
                                const WaveVector& psi2);

/// Ascending eigenvalues; throws SolverError when the eigensolver fails.
std::vector<double> eigenvalues(const TruncatedHamiltonian& H);

struct MeanWithError {
    cplx value;
    double std_error = 0.0;
};

/// Monte Carlo E <psi1, (H_lambda - z)^{-1} psi2> over sampled configurations.
MeanWithError expect_resolvent(const Model& model, double lambda, cplx z, const WaveVector& psi1,
                               const WaveVector& psi2, std::uint64_t samples, std::uint64_t seed,
                               Execution exec = Execution::parallel);

/// Batched form sharing one ensemble: result indexed [lambda][pair], pairs given as (psi1, psi2).
std::vector<std::vector<MeanWithError>> expect_resolvents(const Model& model, std::span<const double> lambdas, cplx z,
                                                          const std::vector<std::pair<WaveVector, WaveVector>>& pairs,
                                                          std::uint64_t samples, std::uint64_t seed,
                                                          Execution exec = Execution::parallel);

} // namespace dosx
