#include "dosx/oracle.hpp"

#include "dosx/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <atomic>
#include <sstream>

namespace dosx {

namespace {

Eigen::VectorXcd dense_vector(const WaveVector& psi, const DualLattice& lattice) {
    const auto d = psi.dense(lattice);
    return Eigen::Map<const Eigen::VectorXcd>(d.data(), Eigen::Index(d.size()));
}

void require_offaxis(cplx z) {
    if (z.imag() == 0.0) throw DomainError("spectral parameter must have nonzero imaginary part");
}

} // namespace

Eigen::MatrixXcd potential_matrix(const DisorderConfig& config, const Profile& profile, const DualLattice& lattice) {
    const BoxSpec& box = lattice.box();
    const PotentialTable table(config, profile, box);
    const Eigen::Index m = Eigen::Index(lattice.size());
    Eigen::MatrixXcd v(m, m);
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = 0; j < m; ++j)
            v(i, j) = table(lattice[std::size_t(i)] - lattice[std::size_t(j)]) / box.volume();
    return v;
}

TruncatedHamiltonian TruncatedHamiltonian::assemble(const DisorderConfig& config, const BoxSpec& box,
                                                    const Profile& profile, double lambda) {
    TruncatedHamiltonian H = free(box);
    if (lambda != 0.0 && config.count() > 0) H.matrix += lambda * potential_matrix(config, profile, H.lattice);
    return H;
}

TruncatedHamiltonian TruncatedHamiltonian::free(const BoxSpec& box) {
    TruncatedHamiltonian H{DualLattice(box), {}};
    const Eigen::Index m = Eigen::Index(H.lattice.size());
    H.matrix = Eigen::MatrixXcd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) H.matrix(i, i) = nu(H.lattice[std::size_t(i)], box);
    return H;
}

double TruncatedHamiltonian::hermiticity_residual() const {
    return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

cplx resolvent_element(const TruncatedHamiltonian& H, cplx z, const WaveVector& psi1, const WaveVector& psi2) {
    require_offaxis(z);
    const Eigen::VectorXcd b = dense_vector(psi2, H.lattice);
    Eigen::MatrixXcd shifted = H.matrix;
    shifted.diagonal().array() -= z;
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(shifted);
    const Eigen::VectorXcd x = lu.solve(b);
    const double residual = (shifted * x - b).norm();
    if (!(residual <= 1e-10 * std::max(b.norm(), 1e-300))) {
        std::ostringstream msg;
        msg << "resolvent solve residual " << residual << " exceeds 1e-10 ||psi2||";
        throw SolverError(msg.str(), residual);
    }
    return dense_vector(psi1, H.lattice).dot(x); // dot conjugates the first argument
}

cplx resolvent_element_spectral(const TruncatedHamiltonian& H, cplx z, const WaveVector& psi1,
                                const WaveVector& psi2) {
    require_offaxis(z);
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H.matrix);
    if (es.info() != Eigen::Success) throw SolverError("eigensolver failed", 0.0);
    const Eigen::VectorXcd a = es.eigenvectors().adjoint() * dense_vector(psi1, H.lattice);
    const Eigen::VectorXcd b = es.eigenvectors().adjoint() * dense_vector(psi2, H.lattice);
    cplx s = 0.0;
    for (Eigen::Index j = 0; j < a.size(); ++j) s += std::conj(a(j)) * b(j) / (es.eigenvalues()(j) - z);
    return s;
}

std::vector<double> eigenvalues(const TruncatedHamiltonian& H) {
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H.matrix, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw SolverError("eigensolver failed", 0.0);
    std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::vector<MeanWithError>> expect_resolvents(const Model& model, std::span<const double> lambdas, cplx z,
                                                          const std::vector<std::pair<WaveVector, WaveVector>>& pairs,
                                                          std::uint64_t samples, std::uint64_t seed, Execution exec) {
    require_offaxis(z);
    if (samples < 1) throw std::invalid_argument("expect_resolvent: samples must be >= 1");
    const DualLattice lattice(model.box);
    const auto H0 = TruncatedHamiltonian::free(model.box);
    std::vector<Eigen::VectorXcd> lhs, rhs;
    for (const auto& [a, b] : pairs) {
        lhs.push_back(dense_vector(a, lattice));
        rhs.push_back(dense_vector(b, lattice));
    }
    Eigen::MatrixXcd B(Eigen::Index(lattice.size()), Eigen::Index(pairs.size()));
    for (std::size_t k = 0; k < pairs.size(); ++k) B.col(Eigen::Index(k)) = rhs[k];
    const std::size_t np = pairs.size();
    std::atomic<bool> failed{false};
    double worst_residual = 0.0;

    auto body = [&](std::uint64_t index, std::span<cplx> out) {
        const auto config = sample_config(model.box, model.dist, seed, index);
        const Eigen::MatrixXcd v = potential_matrix(config, model.profile, lattice);
        for (std::size_t il = 0; il < lambdas.size(); ++il) {
            Eigen::MatrixXcd shifted = H0.matrix + lambdas[il] * v;
            shifted.diagonal().array() -= z;
            const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(shifted);
            const Eigen::MatrixXcd X = lu.solve(B);
            const double residual = (shifted * X - B).norm();
            if (!(residual <= 1e-10 * std::max(B.norm(), 1e-300))) {
                // no throwing across the parallel region; reported after the reduction
#pragma omp critical(dosx_resolvent_failure)
                worst_residual = std::max(worst_residual, residual);
                failed = true;
            }
            for (std::size_t k = 0; k < np; ++k) out[il * np + k] = lhs[k].dot(X.col(Eigen::Index(k)));
        }
    };
    const auto stats = sample_mean(samples, lambdas.size() * np, body, exec);
    if (failed) throw SolverError("resolvent solve residual exceeds 1e-10 ||psi2||", worst_residual);
    std::vector<std::vector<MeanWithError>> out(lambdas.size(), std::vector<MeanWithError>(np));
    for (std::size_t il = 0; il < lambdas.size(); ++il)
        for (std::size_t k = 0; k < np; ++k)
            out[il][k] = {stats.mean[il * np + k], stats.std_error[il * np + k]};
    return out;
}

MeanWithError expect_resolvent(const Model& model, double lambda, cplx z, const WaveVector& psi1,
                               const WaveVector& psi2, std::uint64_t samples, std::uint64_t seed, Execution exec) {
    const double lam[1] = {lambda};
    return expect_resolvents(model, lam, z, {{psi1, psi2}}, samples, seed, exec)[0][0];
}

} // namespace dosx
