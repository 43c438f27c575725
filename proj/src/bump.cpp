#include "dosx/bump.hpp"

#include "dosx/lattice.hpp"
#include "dosx/quadrature.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <vector>

namespace dosx {

double a_scale(double eta, double epsilon) {
    if (!(eta > 0.0) || !(epsilon > 0.0)) throw std::invalid_argument("a_scale: eta and epsilon must be > 0");
    return eta / (std::abs(std::log(0.5 * eta * epsilon)) + 1.0);
}

namespace {

constexpr int kJetOrder = 10;

// Truncated Taylor series c_0 + c_1 h + ... + c_N h^N.
struct Jet {
    std::array<double, kJetOrder + 1> c{};

    static Jet variable(double x0) {
        Jet j;
        j.c[0] = x0;
        j.c[1] = 1.0;
        return j;
    }
    static Jet constant(double v) {
        Jet j;
        j.c[0] = v;
        return j;
    }
    friend Jet operator+(const Jet& a, const Jet& b) {
        Jet r;
        for (int k = 0; k <= kJetOrder; ++k) r.c[k] = a.c[k] + b.c[k];
        return r;
    }
    friend Jet operator-(const Jet& a, const Jet& b) {
        Jet r;
        for (int k = 0; k <= kJetOrder; ++k) r.c[k] = a.c[k] - b.c[k];
        return r;
    }
    friend Jet operator/(const Jet& a, const Jet& b) {
        Jet r;
        for (int k = 0; k <= kJetOrder; ++k) {
            double s = a.c[k];
            for (int j = 1; j <= k; ++j) s -= b.c[j] * r.c[k - j];
            r.c[k] = s / b.c[0];
        }
        return r;
    }
};

Jet jet_exp(const Jet& f) {
    Jet e;
    e.c[0] = std::exp(f.c[0]);
    for (int k = 1; k <= kJetOrder; ++k) {
        double s = 0.0;
        for (int j = 1; j <= k; ++j) s += j * f.c[j] * e.c[k - j];
        e.c[k] = s / k;
    }
    return e;
}

// g(s) = exp(-1/s) for s > 0, else 0 (all derivatives vanish there too).
Jet jet_g(const Jet& s) {
    if (s.c[0] <= 0.0) return Jet{};
    return jet_exp(Jet::constant(0.0) - Jet::constant(1.0) / s);
}

double g(double s) { return s > 0.0 ? std::exp(-1.0 / s) : 0.0; }

double transition(double u) { // u = |t| in [1, 2]
    const double left = g(2.0 - u);
    return left / (left + g(u - 1.0));
}

// Composite Gauss-Legendre nodes on [1, 2] used for the tabulated transform.
struct Composite {
    std::vector<double> t, w;
};

const Composite& composite_rule() {
    static const Composite rule = [] {
        // 10-point Gauss-Legendre on [-1, 1].
        const double x[5] = {0.1488743389816312, 0.4333953941292472, 0.6794095682990244, 0.8650633666889845,
                             0.9739065285171717};
        const double wt[5] = {0.2955242247147529, 0.2692667193099963, 0.2190863625159820, 0.1494513491505806,
                              0.0666713443086881};
        const int panels = 256;
        Composite c;
        const double h = 1.0 / panels;
        for (int p = 0; p < panels; ++p) {
            const double mid = 1.0 + (p + 0.5) * h;
            for (int i = 0; i < 5; ++i) {
                for (int sgn : {-1, 1}) {
                    const double t = mid + sgn * 0.5 * h * x[i];
                    c.t.push_back(t);
                    c.w.push_back(0.5 * h * wt[i] * transition(t));
                }
            }
        }
        return c;
    }();
    return rule;
}

// sin(2 pi s) / (2 pi s) and its s-derivative.
double sinc2pi(double s) {
    const double x = 2.0 * kPi * s;
    if (std::abs(x) < 1e-4) return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}
double sinc2pi_prime(double s) {
    const double x = 2.0 * kPi * s;
    if (std::abs(x) < 1e-4) return -2.0 * kPi * x / 3.0;
    return 2.0 * kPi * (x * std::cos(x) - std::sin(x)) / (x * x);
}
double sinc2pi_second(double s) {
    const double x = 2.0 * kPi * s;
    const double k2 = 4.0 * kPi * kPi;
    if (std::abs(x) < 1e-3) return k2 * (-1.0 / 3.0 + x * x / 10.0);
    return k2 * (-std::sin(x) / x - 2.0 * std::cos(x) / (x * x) + 2.0 * std::sin(x) / (x * x * x));
}

// chi_hat(s) and chi_hat'(s) from the composite rule.
std::pair<double, double> chi_hat_composite(double s) {
    const auto& rule = composite_rule();
    double J = 0.0, Jp = 0.0;
    for (std::size_t k = 0; k < rule.t.size(); ++k) {
        const double arg = 2.0 * kPi * s * rule.t[k];
        J += rule.w[k] * std::cos(arg);
        Jp -= rule.w[k] * 2.0 * kPi * rule.t[k] * std::sin(arg);
    }
    return {2.0 * (sinc2pi(s) + J), 2.0 * (sinc2pi_prime(s) + Jp)};
}

constexpr double kTableLimit = 64.0;
constexpr int kTableStepsPerUnit = 512;

// Values with first and second derivatives for quintic Hermite interpolation.
struct ChiHatTable {
    double h = 1.0 / kTableStepsPerUnit;
    std::vector<double> f, fp, fpp;
};

const ChiHatTable& chi_hat_table() {
    static const ChiHatTable table = [] {
        ChiHatTable tab;
        const int n = int(kTableLimit * kTableStepsPerUnit) + 1;
        tab.f.resize(std::size_t(n));
        tab.fp.resize(std::size_t(n));
        tab.fpp.resize(std::size_t(n));
        const auto& rule = composite_rule();
        const std::size_t m = rule.t.size();
        // Phasors exp(2 pi i s t_k) advanced by rotation, re-anchored every 256 steps.
        std::vector<std::complex<double>> phase(m), step(m);
        for (std::size_t k = 0; k < m; ++k) step[k] = std::polar(1.0, 2.0 * kPi * tab.h * rule.t[k]);
        for (int i = 0; i < n; ++i) {
            const double s = i * tab.h;
            if (i % 256 == 0)
                for (std::size_t k = 0; k < m; ++k) phase[k] = std::polar(1.0, 2.0 * kPi * s * rule.t[k]);
            double J = 0.0, Jp = 0.0, Jpp = 0.0;
            for (std::size_t k = 0; k < m; ++k) {
                const double omega = 2.0 * kPi * rule.t[k];
                J += rule.w[k] * phase[k].real();
                Jp -= rule.w[k] * omega * phase[k].imag();
                Jpp -= rule.w[k] * omega * omega * phase[k].real();
                phase[k] *= step[k];
            }
            tab.f[std::size_t(i)] = 2.0 * (sinc2pi(s) + J);
            tab.fp[std::size_t(i)] = 2.0 * (sinc2pi_prime(s) + Jp);
            tab.fpp[std::size_t(i)] = 2.0 * (sinc2pi_second(s) + Jpp);
        }
        return tab;
    }();
    return table;
}

} // namespace

double chi(double t) {
    const double u = std::abs(t);
    if (u <= 1.0) return 1.0;
    if (u >= 2.0) return 0.0;
    return transition(u);
}

double chi_derivative(double t, int k) {
    if (k < 0 || k > kJetOrder) throw std::invalid_argument("chi_derivative: order out of range");
    const double u = std::abs(t);
    if (u <= 1.0 || u >= 2.0) return k == 0 ? chi(t) : 0.0;
    const Jet x = Jet::variable(u);
    const Jet left = jet_g(Jet::constant(2.0) - x);
    const Jet right = jet_g(x - Jet::constant(1.0));
    const Jet h = left / (left + right);
    double fact = 1.0;
    for (int j = 2; j <= k; ++j) fact *= j;
    const double val = h.c[std::size_t(k)] * fact;
    // chi is even: d^k/dt^k chi(-u) = (-1)^k chi^{(k)}(u).
    return (t < 0 && k % 2 == 1) ? -val : val;
}

double chi_hat_table_limit() { return kTableLimit; }

double chi_hat(double alpha) {
    const double s = std::abs(alpha);
    if (s >= kTableLimit) return chi_hat_composite(s).first;
    const auto& tab = chi_hat_table();
    const double x = s / tab.h;
    const std::size_t i = std::min(std::size_t(x), tab.f.size() - 2);
    const double u = x - double(i);
    const double u2 = u * u, u3 = u2 * u, u4 = u3 * u, u5 = u4 * u;
    const double h0 = 1 - 10 * u3 + 15 * u4 - 6 * u5, h5 = 10 * u3 - 15 * u4 + 6 * u5;
    const double h1 = u - 6 * u3 + 8 * u4 - 3 * u5, h4 = -4 * u3 + 7 * u4 - 3 * u5;
    const double h2 = 0.5 * (u2 - 3 * u3 + 3 * u4 - u5), h3 = 0.5 * (u3 - 2 * u4 + u5);
    const double hh = tab.h * tab.h;
    return h0 * tab.f[i] + h1 * tab.h * tab.fp[i] + h2 * hh * tab.fpp[i] + h3 * hh * tab.fpp[i + 1] +
           h4 * tab.h * tab.fp[i + 1] + h5 * tab.f[i + 1];
}

double chi_hat_direct(double alpha, double abs_tol) {
    const double s = std::abs(alpha);
    auto f = [s](double t) { return transition(t) * std::cos(2.0 * kPi * s * t); };
    const double J = integrate_or_throw(f, 1.0, 2.0, 0.5 * abs_tol);
    return 2.0 * (sinc2pi(s) + J);
}

double chi_hat_decay_constant(int m) {
    if (m < 1 || m > kJetOrder) throw std::invalid_argument("chi_hat_decay_constant: m out of range");
    static std::mutex mu;
    static std::array<double, kJetOrder + 1> cache{};
    std::lock_guard<std::mutex> lock(mu);
    if (cache[std::size_t(m)] > 0.0) return cache[std::size_t(m)];
    auto f = [m](double t) { return std::abs(chi_derivative(t, m)); };
    const auto rough = integrate_adaptive(f, 1.0, 2.0, 1e-3, 200);
    const double l1 = integrate_or_throw(f, 1.0, 2.0, 1e-9 * std::max(1.0, rough.value), 100000);
    cache[std::size_t(m)] = 2.0 * l1 / std::pow(2.0 * kPi, m);
    return cache[std::size_t(m)];
}

} // namespace dosx
