#include "dosx/expansion.hpp"

#include "dosx/bump.hpp"
#include "dosx/errors.hpp"
#include "dosx/partitions.hpp"
#include "dosx/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>

namespace dosx {

std::string Model::describe() const { return box.describe() + " " + profile.name() + " " + dist.name(); }

void SpectralWindow::validate() const {
    if (!(eta > 0.0)) throw std::invalid_argument("window: eta must be > 0");
    if (!(epsilon > 0.0)) throw std::invalid_argument("window: epsilon must be > 0");
    if (!(lambda0 > 0.0)) throw std::invalid_argument("window: lambda0 must be > 0");
    if (std::abs(lambda) > lambda0) throw std::invalid_argument("window: |lambda| exceeds lambda0");
}

double SpectralWindow::a() const { return a_scale(eta, epsilon); }

const char* method_name(Method m) { return m == Method::deterministic ? "deterministic" : "monte_carlo"; }

NuKey make_key(std::span<const std::int64_t> norms) {
    if (norms.size() > std::size_t(kMaxDeterministicOrder + 1))
        throw SizeLimitError("make_key: more than 5 resolvent factors");
    NuKey k;
    k.fill(-1);
    std::copy(norms.begin(), norms.end(), k.begin());
    std::sort(k.begin(), k.begin() + std::ptrdiff_t(norms.size()));
    return k;
}

namespace {

int key_length(const NuKey& k) {
    int m = 0;
    while (m < int(k.size()) && k[std::size_t(m)] >= 0) ++m;
    return m;
}

void require_offaxis(cplx z) {
    if (z.imag() == 0.0) throw DomainError("spectral parameter must have nonzero imaginary part");
}

void require_order(int n) {
    if (n < 0) throw std::invalid_argument("expansion order must be >= 0");
    if (n > kMaxDeterministicOrder)
        throw SizeLimitError("expansion order " + std::to_string(n) + " exceeds the cap of 4");
}

// Momenta carried by both vectors with the weight conj(c1) c2.
std::vector<std::pair<Momentum, cplx>> diagonal_weights(const WaveVector& psi1, const WaveVector& psi2,
                                                        const BoxSpec& box) {
    std::vector<std::pair<Momentum, cplx>> out;
    for (const auto& [p, c2] : psi2.coefficients()) {
        if (!box.contains(p)) throw std::invalid_argument("wave vector component outside the truncated lattice");
        const cplx c1 = psi1.coefficient(p);
        if (c1 != 0.0) out.emplace_back(p, std::conj(c1) * c2);
    }
    for (const auto& [p, c1] : psi1.coefficients())
        if (!box.contains(p)) throw std::invalid_argument("wave vector component outside the truncated lattice");
    return out;
}

// Depth-first walk over p_1..p_n for one partition; transfers at block maxima are forced.
struct PartitionWalk {
    const BoxSpec& box;
    const Profile& profile;
    const std::vector<Momentum>& lattice;
    int n;
    std::vector<int> block_of;            // block label per transfer
    std::vector<bool> is_max;             // transfer is its block's maximum
    std::vector<std::vector<int>> blocks; // members per block
    std::vector<Momentum> p, t;
    std::vector<double> bhat;
    cplx weight;
    ResolventSeries* out;

    void run(int l) {
        if (l == n) {
            std::int64_t norms[kMaxDeterministicOrder + 1];
            double b = 1.0;
            for (int j = 0; j <= n; ++j) norms[j] = p[std::size_t(j)].norm2();
            for (int j = 0; j < n; ++j) b *= bhat[std::size_t(j)];
            out->add(make_key(std::span<const std::int64_t>(norms, std::size_t(n) + 1)), weight * b);
            return;
        }
        if (is_max[std::size_t(l)]) {
            Momentum s;
            for (int m : blocks[std::size_t(block_of[std::size_t(l)])])
                if (m != l) s += t[std::size_t(m)];
            t[std::size_t(l)] = -s;
            p[std::size_t(l) + 1] = p[std::size_t(l)] - t[std::size_t(l)];
            if (!box.contains(p[std::size_t(l) + 1])) return;
            bhat[std::size_t(l)] = profile.hat(t[std::size_t(l)], box);
            run(l + 1);
            return;
        }
        for (const auto& next : lattice) {
            p[std::size_t(l) + 1] = next;
            t[std::size_t(l)] = p[std::size_t(l)] - next;
            bhat[std::size_t(l)] = profile.hat(t[std::size_t(l)], box);
            run(l + 1);
        }
    }
};

} // namespace

void ResolventSeries::add(const NuKey& key, cplx coef) {
    if (key_length(key) != order_ + 1) throw std::invalid_argument("ResolventSeries: key length mismatch");
    terms_[key] += coef;
}

void ResolventSeries::add(const ResolventSeries& other, cplx weight) {
    if (other.order_ != order_) throw std::invalid_argument("ResolventSeries: order mismatch");
    for (const auto& [k, c] : other.terms_) terms_[k] += weight * c;
}

cplx ResolventSeries::evaluate(cplx z) const {
    const double scale = 0.5 / (L_ * L_);
    cplx total = 0.0;
    for (const auto& [k, c] : terms_) {
        cplx prod = c;
        for (int j = 0; j <= order_; ++j) prod *= free_resolvent_multiplier(double(k[std::size_t(j)]) * scale, z);
        total += prod;
    }
    return total;
}

double ResolventSeries::abs_sum() const {
    double s = 0.0;
    for (const auto& [k, c] : terms_) s += std::abs(c);
    return s;
}

double ResolventSeries::max_relative_difference(const ResolventSeries& other) const {
    const double floor = 1e-14 * std::max(abs_sum(), other.abs_sum());
    double worst = 0.0;
    auto visit = [&](const NuKey& k) {
        auto a = terms_.find(k);
        auto b = other.terms_.find(k);
        const cplx ca = a == terms_.end() ? cplx{} : a->second;
        const cplx cb = b == other.terms_.end() ? cplx{} : b->second;
        const double scale = std::max(std::abs(ca), std::abs(cb));
        if (scale <= floor) return;
        worst = std::max(worst, std::abs(ca - cb) / scale);
    };
    for (const auto& [k, c] : terms_) visit(k);
    for (const auto& [k, c] : other.terms_) visit(k);
    return worst;
}

ResolventSeries build_t_series(int n, const Model& model, const WaveVector& psi1, const WaveVector& psi2,
                               Execution exec) {
    require_order(n);
    const BoxSpec& box = model.box;
    ResolventSeries series(n, box.L());
    const auto ext = diagonal_weights(psi1, psi2, box);
    if (n == 0) {
        for (const auto& [q, w] : ext) {
            const std::int64_t k = q.norm2();
            series.add(make_key(std::span<const std::int64_t>(&k, 1)), w);
        }
        return series;
    }

    const auto lattice = dual_lattice_points(box);
    const auto partitions = enumerate_partitions(n);
    std::vector<ResolventSeries> partial(partitions.size(), ResolventSeries(n, box.L()));

    auto one = [&](std::size_t ia) {
        const Partition& A = partitions[ia];
        double prefactor = std::pow(box.volume(), double(int(A.blocks.size()) - n));
        for (const auto& b : A.blocks) prefactor *= model.dist.moment(int(b.size()));
        if (prefactor == 0.0) return;
        PartitionWalk walk{box, model.profile, lattice, n, A.labels(), std::vector<bool>(std::size_t(n), false),
                           A.blocks, std::vector<Momentum>(std::size_t(n) + 1), std::vector<Momentum>(std::size_t(n)),
                           std::vector<double>(std::size_t(n)), 0.0, &partial[ia]};
        for (int j : split_indices(A).maxima) walk.is_max[std::size_t(j)] = true;
        for (const auto& [q, w] : ext) {
            walk.p[0] = q;
            walk.weight = prefactor * w;
            walk.run(0);
        }
    };

    if (exec == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (std::ptrdiff_t ia = 0; ia < std::ptrdiff_t(partitions.size()); ++ia) one(std::size_t(ia));
    } else {
        for (std::size_t ia = 0; ia < partitions.size(); ++ia) one(ia);
    }
    for (const auto& s : partial) series.add(s);
    return series;
}

ResolventSeries build_t_series_reference(int n, const Model& model, const WaveVector& psi1,
                                         const WaveVector& psi2) {
    require_order(n);
    const BoxSpec& box = model.box;
    ResolventSeries series(n, box.L());
    const auto ext = diagonal_weights(psi1, psi2, box);
    const auto lattice = dual_lattice_points(box);
    const double norm = std::pow(box.volume(), -double(n));

    std::vector<Momentum> path(std::size_t(n) + 1);
    std::vector<std::size_t> idx(std::size_t(std::max(n - 1, 0)), 0);
    for (const auto& [q, w] : ext) {
        path.front() = q;
        path.back() = q;
        std::fill(idx.begin(), idx.end(), 0);
        while (true) {
            for (int j = 1; j < n; ++j) path[std::size_t(j)] = lattice[idx[std::size_t(j) - 1]];
            std::vector<std::int64_t> norms;
            for (const auto& m : path) norms.push_back(m.norm2());
            if (n == 0) {
                series.add(make_key(norms), w);
                break;
            }
            const double e = expected_moment_product(path, model.profile, model.dist, box);
            if (e != 0.0) series.add(make_key(norms), w * norm * e);
            // odometer over the n-1 intermediate momenta
            int j = 0;
            while (j < n - 1 && ++idx[std::size_t(j)] == lattice.size()) idx[std::size_t(j++)] = 0;
            if (j == n - 1) break;
        }
    }
    return series;
}

ExpansionEstimate t_coeff_det(int n, const Model& model, cplx z, const WaveVector& psi1, const WaveVector& psi2) {
    require_offaxis(z);
    ExpansionEstimate est;
    est.value = build_t_series(n, model, psi1, psi2).evaluate(z);
    est.method = Method::deterministic;
    est.order = n;
    est.meta = model.describe();
    return est;
}

std::vector<std::vector<cplx>> potential_rows(const DisorderConfig& config, const Model& model,
                                              const DualLattice& lattice) {
    const PotentialTable table(config, model.profile, model.box);
    const double inv_vol = 1.0 / model.box.volume();
    const std::size_t m = lattice.size();
    std::vector<std::vector<cplx>> v(m, std::vector<cplx>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) v[i][j] = table(lattice[i] - lattice[j]) * inv_vol;
    return v;
}

namespace {

// x <- R(z) x, then successive R V applications; calls sink(n, <psi1, x>) for n = 0..n_max.
template <class Sink>
void resolvent_chain(int n_max, const DualLattice& lattice, const std::vector<std::vector<cplx>>& v, cplx z,
                     const std::vector<cplx>& psi1_dense, const std::vector<cplx>& psi2_dense, Sink&& sink) {
    const std::size_t m = lattice.size();
    std::vector<cplx> r(m), x(m), y(m);
    for (std::size_t i = 0; i < m; ++i) r[i] = free_resolvent_multiplier(lattice[i], lattice.box(), z);
    for (std::size_t i = 0; i < m; ++i) x[i] = r[i] * psi2_dense[i];
    auto inner = [&] {
        cplx s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += std::conj(psi1_dense[i]) * x[i];
        return s;
    };
    sink(0, inner());
    for (int n = 1; n <= n_max; ++n) {
        for (std::size_t i = 0; i < m; ++i) {
            cplx s = 0.0;
            for (std::size_t j = 0; j < m; ++j) s += v[i][j] * x[j];
            y[i] = r[i] * s;
        }
        std::swap(x, y);
        sink(n, inner());
    }
}

} // namespace

cplx fixed_config_term(int n, const DualLattice& lattice, const std::vector<std::vector<cplx>>& vmatrix, cplx z,
                       const WaveVector& psi1, const WaveVector& psi2) {
    require_offaxis(z);
    cplx out = 0.0;
    resolvent_chain(n, lattice, vmatrix, z, psi1.dense(lattice), psi2.dense(lattice), [&](int k, cplx val) {
        if (k == n) out = val;
    });
    return out;
}

std::vector<std::vector<ExpansionEstimate>> t_coeffs_mc(int n_max, const Model& model, std::span<const cplx> zs,
                                                        const WaveVector& psi1, const WaveVector& psi2,
                                                        std::uint64_t samples, std::uint64_t seed, Execution exec) {
    if (n_max < 0) throw std::invalid_argument("t_coeffs_mc: n_max must be >= 0");
    if (samples < 1) throw std::invalid_argument("t_coeffs_mc: samples must be >= 1");
    for (cplx z : zs) require_offaxis(z);
    const DualLattice lattice(model.box);
    const auto d1 = psi1.dense(lattice), d2 = psi2.dense(lattice);
    const std::size_t nz = zs.size(), orders = std::size_t(n_max) + 1;

    auto body = [&](std::uint64_t index, std::span<cplx> out) {
        const auto config = sample_config(model.box, model.dist, seed, index);
        const auto v = potential_rows(config, model, lattice);
        for (std::size_t iz = 0; iz < nz; ++iz)
            resolvent_chain(n_max, lattice, v, zs[iz], d1, d2,
                            [&](int n, cplx val) { out[std::size_t(n) * nz + iz] = val; });
    };
    const auto stats = sample_mean(samples, orders * nz, body, exec);

    std::vector<std::vector<ExpansionEstimate>> out(orders, std::vector<ExpansionEstimate>(nz));
    for (std::size_t n = 0; n < orders; ++n)
        for (std::size_t iz = 0; iz < nz; ++iz) {
            auto& e = out[n][iz];
            e.value = stats.mean[n * nz + iz];
            e.std_error = stats.std_error[n * nz + iz];
            e.method = Method::monte_carlo;
            e.order = int(n);
            e.meta = model.describe();
        }
    return out;
}

ExpansionEstimate t_coeff_mc(int n, const Model& model, cplx z, const WaveVector& psi1, const WaveVector& psi2,
                             std::uint64_t samples, std::uint64_t seed, Execution exec) {
    const cplx zs[1] = {z};
    return t_coeffs_mc(n, model, zs, psi1, psi2, samples, seed, exec)[std::size_t(n)][0];
}

SmoothingIntegrator::SmoothingIntegrator(double E, double eta, double a, double L) : E_(E), eta_(eta), a_(a), L_(L) {
    if (!(eta > 0.0) || !(a > 0.0)) throw std::invalid_argument("SmoothingIntegrator: eta and a must be > 0");
}

SmoothingIntegrator::SmoothingIntegrator(const SpectralWindow& w, double L)
    : SmoothingIntegrator(w.E, w.eta, (w.validate(), w.a()), L) {}

double SmoothingIntegrator::tail_cut(int factors) const {
    // |chi_a^(alpha)| <= c_8 a^7 / |alpha|^8 and each resolvent factor is at most 1/eta.
    const double c8 = chi_hat_decay_constant(8);
    const double ratio = 2.0 * c8 / (7.0 * kTailTolerance * std::pow(eta_, factors));
    return std::max(4.0 * a_, a_ * std::pow(ratio, 1.0 / 7.0));
}

cplx SmoothingIntegrator::compute(const NuKey& key) const {
    const int f = key_length(key);
    const double scale = 0.5 / (L_ * L_);
    std::vector<double> nus;
    for (int j = 0; j < f; ++j) nus.push_back(double(key[std::size_t(j)]) * scale);
    const double A = tail_cut(f);
    auto integrand = [&](double alpha) {
        cplx v = chi_a_hat(alpha, a_);
        const cplx w(E_ + 2.0 * kPi * alpha, eta_);
        for (double x : nus) v /= (x - w);
        return v;
    };
    // Break the range at the resonances so each piece is smooth on the scale of its length.
    std::vector<double> cuts{-A, 0.0, A};
    for (double x : nus) {
        const double r = (x - E_) / (2.0 * kPi);
        if (std::abs(r) < A) cuts.push_back(r);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    const double tol = kQuadTolerance / double(cuts.size() - 1);
    cplx total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        total += integrate_or_throw<cplx>(integrand, cuts[i], cuts[i + 1], tol, 200000);
    return total;
}

std::vector<cplx> SmoothingIntegrator::integrals(const std::vector<NuKey>& keys, Execution exec) {
    std::vector<NuKey> missing;
    {
        std::lock_guard<std::mutex> lock(mu_);
        for (const auto& k : keys)
            if (!cache_.count(k)) missing.push_back(k);
    }
    std::sort(missing.begin(), missing.end());
    missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
    std::vector<cplx> fresh(missing.size());
    if (exec == Execution::parallel) {
        std::vector<std::exception_ptr> errors(missing.size());
#pragma omp parallel for schedule(dynamic, 1)
        for (std::ptrdiff_t i = 0; i < std::ptrdiff_t(missing.size()); ++i) {
            try {
                fresh[std::size_t(i)] = compute(missing[std::size_t(i)]);
            } catch (...) {
                errors[std::size_t(i)] = std::current_exception();
            }
        }
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);
    } else {
        for (std::size_t i = 0; i < missing.size(); ++i) fresh[i] = compute(missing[i]);
    }
    std::lock_guard<std::mutex> lock(mu_);
    for (std::size_t i = 0; i < missing.size(); ++i) cache_[missing[i]] = fresh[i];
    std::vector<cplx> out;
    out.reserve(keys.size());
    for (const auto& k : keys) out.push_back(cache_.at(k));
    return out;
}

cplx SmoothingIntegrator::integral(const NuKey& key) { return integrals({key}, Execution::serial).front(); }

std::pair<cplx, double> SmoothingIntegrator::smooth(const ResolventSeries& series, Execution exec) {
    std::vector<NuKey> keys;
    for (const auto& [k, c] : series.terms()) keys.push_back(k);
    const auto g = integrals(keys, exec);
    cplx total = 0.0;
    std::size_t i = 0;
    for (const auto& [k, c] : series.terms()) total += c * g[i++];
    if (series.order() % 2 == 1) total = -total;
    return {total, series.abs_sum() * per_key_budget()};
}

namespace {

// Paths p_0 in supp psi1, p_n in supp psi2, intermediates anywhere; each tagged with its key.
struct PathSet {
    int n = 0;
    std::vector<std::size_t> nodes; // (n + 1) lattice indices per path
    std::vector<cplx> ext;          // conj(c1_{p0}) c2_{pn}
    std::vector<std::size_t> key_id;
    std::vector<NuKey> keys;
};

PathSet enumerate_paths(int n, const DualLattice& lattice, const WaveVector& psi1, const WaveVector& psi2) {
    PathSet ps;
    ps.n = n;
    std::map<NuKey, std::size_t> ids;
    const std::size_t m = lattice.size();
    std::vector<std::size_t> node(std::size_t(n) + 1);
    std::vector<std::int64_t> norms(std::size_t(n) + 1);
    for (const auto& [p0, c1] : psi1.coefficients()) {
        const auto i0 = lattice.index_of(p0);
        if (!i0) throw std::invalid_argument("wave vector component outside the truncated lattice");
        for (const auto& [pn, c2] : psi2.coefficients()) {
            const auto in = lattice.index_of(pn);
            if (!in) throw std::invalid_argument("wave vector component outside the truncated lattice");
            if (n == 0 && *i0 != *in) continue;
            std::vector<std::size_t> mid(std::size_t(std::max(n - 1, 0)), 0);
            while (true) {
                node.front() = *i0;
                node.back() = *in;
                for (int j = 1; j < n; ++j) node[std::size_t(j)] = mid[std::size_t(j) - 1];
                for (int j = 0; j <= n; ++j) norms[std::size_t(j)] = lattice[node[std::size_t(j)]].norm2();
                const NuKey key = make_key(norms);
                auto [it, inserted] = ids.try_emplace(key, ps.keys.size());
                if (inserted) ps.keys.push_back(key);
                ps.key_id.push_back(it->second);
                ps.nodes.insert(ps.nodes.end(), node.begin(), node.end());
                ps.ext.push_back(std::conj(c1) * c2);
                int j = 0;
                while (j < n - 1 && ++mid[std::size_t(j)] == m) mid[std::size_t(j++)] = 0;
                if (j >= n - 1) break;
            }
        }
    }
    return ps;
}

// Per-configuration S_0..S_nmax by common random numbers, plus the lambda-weighted partial sum.
std::vector<ExpansionEstimate> s_coeffs_mc(int n_min, int n_max, const Model& model, SmoothingIntegrator& integ,
                                           const WaveVector& psi1, const WaveVector& psi2, double lambda,
                                           std::uint64_t samples, std::uint64_t seed, Execution exec) {
    require_order(n_max);
    if (samples < 1) throw std::invalid_argument("s_coeff: samples must be >= 1");
    const DualLattice lattice(model.box);
    std::vector<PathSet> paths;
    std::vector<std::vector<cplx>> g;
    for (int n = 0; n <= n_max; ++n) {
        paths.push_back(enumerate_paths(n, lattice, psi1, psi2));
        g.push_back(integ.integrals(paths.back().keys, exec));
    }
    const std::size_t orders = std::size_t(n_max) + 1;
    // channels: S_n for each order, the partial sum, and sum |path weight| for the budget
    auto body = [&](std::uint64_t index, std::span<cplx> out) {
        const auto config = sample_config(model.box, model.dist, seed, index);
        const auto v = potential_rows(config, model, lattice);
        cplx partial = 0.0;
        double weight_abs = 0.0;
        double lam_n = 1.0;
        for (int n = 0; n <= n_max; ++n) {
            const PathSet& ps = paths[std::size_t(n)];
            cplx s = 0.0;
            for (std::size_t k = 0; k < ps.ext.size(); ++k) {
                const std::size_t* nd = &ps.nodes[k * (std::size_t(n) + 1)];
                cplx w = ps.ext[k];
                for (int j = 0; j < n; ++j) w *= v[nd[j]][nd[j + 1]];
                s += w * g[std::size_t(n)][ps.key_id[k]];
                weight_abs += std::abs(w) * std::abs(lam_n);
            }
            if (n % 2 == 1) s = -s;
            out[std::size_t(n)] = s;
            if (n >= n_min) partial += lam_n * s;
            lam_n *= lambda;
        }
        out[orders] = partial;
        out[orders + 1] = weight_abs;
    };
    const auto stats = sample_mean(samples, orders + 2, body, exec);
    const double budget = stats.mean[orders + 1].real() * integ.per_key_budget();
    std::vector<ExpansionEstimate> out;
    for (std::size_t n = 0; n <= orders; ++n) {
        ExpansionEstimate e;
        e.value = stats.mean[n];
        e.std_error = stats.std_error[n];
        e.method = Method::monte_carlo;
        e.order = n < orders ? int(n) : n_max;
        e.meta = model.describe();
        e.quadrature_budget = budget;
        out.push_back(e);
    }
    return out;
}

} // namespace

ExpansionEstimate s_coeff(int n, const Model& model, SmoothingIntegrator& integrator, const WaveVector& psi1,
                          const WaveVector& psi2, Method method, std::uint64_t samples, std::uint64_t seed,
                          Execution exec) {
    require_order(n);
    if (method == Method::monte_carlo)
        return s_coeffs_mc(n, n, model, integrator, psi1, psi2, 1.0, samples, seed, exec)[std::size_t(n)];
    const auto series = build_t_series(n, model, psi1, psi2, exec);
    const auto [value, budget] = integrator.smooth(series, exec);
    ExpansionEstimate e;
    e.value = value;
    e.method = Method::deterministic;
    e.order = n;
    e.meta = model.describe();
    e.quadrature_budget = budget;
    return e;
}

ExpansionEstimate s_coeff(int n, const Model& model, const SpectralWindow& w, const WaveVector& psi1,
                          const WaveVector& psi2, Method method, std::uint64_t samples, std::uint64_t seed,
                          Execution exec) {
    SmoothingIntegrator integ(w, model.box.L());
    return s_coeff(n, model, integ, psi1, psi2, method, samples, seed, exec);
}

ExpansionEstimate resolvent_partial_sum(int N, const Model& model, const SpectralWindow& w, const WaveVector& psi1,
                                        const WaveVector& psi2, Method method, std::uint64_t samples,
                                        std::uint64_t seed) {
    require_order(N);
    SmoothingIntegrator integ(w, model.box.L());
    if (method == Method::monte_carlo) {
        auto all = s_coeffs_mc(0, N, model, integ, psi1, psi2, w.lambda, samples, seed, Execution::parallel);
        return all[std::size_t(N) + 1];
    }
    ExpansionEstimate total;
    total.method = Method::deterministic;
    total.order = N;
    total.meta = model.describe();
    total.quadrature_budget = 0.0;
    double lam_n = 1.0;
    for (int n = 0; n <= N; ++n) {
        if (n > 0 && w.lambda == 0.0) break;
        const auto s = s_coeff(n, model, integ, psi1, psi2, Method::deterministic);
        total.value += lam_n * s.value;
        *total.quadrature_budget += std::abs(lam_n) * *s.quadrature_budget;
        lam_n *= w.lambda;
    }
    return total;
}

cplx s0_time_domain(double nu_value, double E, double eta, double a) {
    auto f = [&](double t) { return chi(a * t) * std::exp(cplx(-eta * t, -(nu_value - E) * t)); };
    const cplx plateau = integrate_or_throw<cplx>(f, 0.0, 1.0 / a, 1e-12);
    const cplx ramp = integrate_or_throw<cplx>(f, 1.0 / a, 2.0 / a, 1e-12);
    return cplx(0.0, 1.0) * (plateau + ramp);
}

double constructive_bound(double N, double a, double C, double norm_1_inf) {
    if (!(N > 0.0)) return std::numeric_limits<double>::infinity();
    const double ratio = 3.168 * std::exp(1.0) * C * norm_1_inf / a;
    const double lg = std::log(2.0 / a) + N * std::log(ratio / std::log(2.0 * N + 1.0)) -
                      0.5 * std::log(2.0 * kPi * N);
    return std::exp(lg);
}

ConstructiveN constructive_N(double eta, double epsilon, double lambda0, double norm_1_inf, double C) {
    if (!(eta > 0.0) || !(epsilon > 0.0)) throw std::invalid_argument("constructive_N: eta, epsilon must be > 0");
    if (lambda0 < 0.0) throw std::invalid_argument("constructive_N: lambda0 must be >= 0");
    const double a = a_scale(eta, epsilon);
    ConstructiveN out;
    out.base_ratio = 3.168 * std::exp(1.0) * C * norm_1_inf / a;
    if (lambda0 == 0.0) return out; // lambda0^0 = 1 and every higher term vanishes

    // log of lambda0^N bound(N) / (epsilon / 2)
    auto g = [&](double N) {
        return N * std::log(lambda0) + std::log(2.0 / a) + N * std::log(out.base_ratio / std::log(2.0 * N + 1.0)) -
               0.5 * std::log(2.0 * kPi * N) - std::log(0.5 * epsilon);
    };
    auto finish = [&](double N) {
        out.N = N;
        out.astronomical = N > kAstronomicalOrder;
        out.bound_at_N = std::exp(g(N)) * 0.5 * epsilon;
        return out;
    };

    // Past N_cross the bracket lambda0 ratio / ln(2N+1) is <= 1 and g decreases.
    const double lr = lambda0 * out.base_ratio;
    const double n_cross = lr > 700.0 ? std::numeric_limits<double>::infinity() : std::ceil(0.5 * (std::exp(lr) - 1.0));
    const double scan_end = std::min(n_cross, 1e7);
    for (double N = 1.0; N <= scan_end; N += 1.0)
        if (g(N) <= 0.0) return finish(N);
    if (!std::isfinite(n_cross)) {
        out.N = std::numeric_limits<double>::infinity();
        out.astronomical = true;
        out.bound_at_N = 0.0;
        return out;
    }
    // g(scan_end) > 0 here; g is unimodal, so the first root is the only sign change after scan_end
    double lo = scan_end, hi = std::max(n_cross, scan_end + 1.0);
    while (g(hi) > 0.0) {
        lo = hi;
        hi *= 2.0;
        if (!std::isfinite(hi)) {
            out.N = hi;
            out.astronomical = true;
            return out;
        }
    }
    while (hi - lo > 1.0) {
        const double mid = std::floor(0.5 * (lo + hi));
        (g(mid) <= 0.0 ? hi : lo) = mid;
    }
    return finish(hi);
}

DuhamelReport duhamel_crosscheck(int n, const Model& model, const DisorderConfig& config, const SpectralWindow& w,
                                 const WaveVector& psi1, const WaveVector& psi2) {
    if (n != 0 && n != 1) throw std::invalid_argument("duhamel_crosscheck: n must be 0 or 1");
    w.validate();
    const BoxSpec& box = model.box;
    const double a = w.a();
    const DualLattice lattice(box);
    const auto v = potential_rows(config, model, lattice);
    SmoothingIntegrator integ(w, box.L());

    // (weight, nu_p, nu_q) per contributing pair; for n = 0 only p = q contributes.
    struct Pair {
        cplx weight;
        double nu_p, nu_q;
        NuKey key;
    };
    std::vector<Pair> pairs;
    for (const auto& [p, c1] : psi1.coefficients()) {
        const auto ip = lattice.index_of(p);
        if (!ip) throw std::invalid_argument("wave vector component outside the truncated lattice");
        for (const auto& [q, c2] : psi2.coefficients()) {
            const auto iq = lattice.index_of(q);
            if (!iq) throw std::invalid_argument("wave vector component outside the truncated lattice");
            if (n == 0 && p != q) continue;
            const cplx wgt = std::conj(c1) * c2 * (n == 1 ? v[*ip][*iq] : cplx(1.0));
            std::vector<std::int64_t> norms{p.norm2()};
            if (n == 1) norms.push_back(q.norm2());
            pairs.push_back({wgt, nu(p, box), nu(q, box), make_key(norms)});
        }
    }

    const double t_end = 2.0 / a;
    auto envelope = [&](double t) { return chi(a * t) * std::exp(cplx(-w.eta * t, w.E * t)); };
    auto outer = [&](double t) {
        cplx s = 0.0;
        for (const auto& pr : pairs) {
            if (n == 0) {
                s += pr.weight * std::exp(cplx(0.0, -t * pr.nu_p));
            } else {
                auto inner = [&](double u) { return std::exp(cplx(0.0, -(t - u) * pr.nu_p - u * pr.nu_q)); };
                s += pr.weight * integrate_or_throw<cplx>(inner, 0.0, t, 1e-13 * std::max(1.0, t));
            }
        }
        return envelope(t) * s;
    };
    DuhamelReport rep;
    rep.time_value = integrate_or_throw<cplx>(outer, 0.0, 1.0 / a, 1e-10) +
                     integrate_or_throw<cplx>(outer, 1.0 / a, t_end, 1e-10);

    std::vector<NuKey> keys;
    for (const auto& pr : pairs) keys.push_back(pr.key);
    const auto g = integ.integrals(keys, Execution::serial);
    cplx freq = 0.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) freq += pairs[i].weight * g[i];
    rep.freq_value = (n == 0 ? cplx(0.0, -1.0) : cplx(-1.0, 0.0)) * freq;
    rep.discrepancy = std::abs(rep.time_value - rep.freq_value);
    return rep;
}

} // namespace dosx
