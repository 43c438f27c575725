#pragma once

#include "dosx/errors.hpp"

#include <array>
#include <cmath>
#include <complex>
#include <queue>
#include <string>
#include <utility>
#include <vector>

namespace dosx {

template <class T>
struct QuadratureResult {
    T value{};
    double error = 0.0;
    int evaluations = 0;
    bool converged = false;
};

namespace detail {

// Kronrod 15-point nodes (non-negative half) with the embedded 7-point Gauss rule.
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
struct Segment {
    double a, b;
    T value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

template <class T, class F>
Segment<T> gk15(F& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const T fc = f(c);
    T kronrod = kKronrodWeights[7] * fc;
    T gauss = kGaussWeights[3] * fc;
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kKronrodNodes[std::size_t(i)];
        const T sum = f(c - dx) + f(c + dx);
        kronrod += kKronrodWeights[std::size_t(i)] * sum;
        if (i % 2 == 1) gauss += kGaussWeights[std::size_t(i / 2)] * sum;
    }
    return {a, b, h * kronrod, std::abs(h * (kronrod - gauss))};
}

} // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) on [a, b] with an absolute tolerance: the
/// interval with the largest error estimate is bisected until the summed estimate drops
/// below abs_tol or max_segments is reached. T is double or std::complex<double>.
template <class T = double, class F>
QuadratureResult<T> integrate_adaptive(F&& f, double a, double b, double abs_tol, int max_segments = 20000) {
    QuadratureResult<T> res;
    if (a == b) {
        res.converged = true;
        return res;
    }
    std::priority_queue<detail::Segment<T>> heap;
    auto first = detail::gk15<T>(f, a, b);
    res.evaluations = 15;
    T total = first.value;
    double err = first.error;
    heap.push(first);
    int segments = 1;
    while (err > abs_tol && segments < max_segments) {
        auto worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            heap.push(worst);
            break;
        }
        auto left = detail::gk15<T>(f, worst.a, mid);
        auto right = detail::gk15<T>(f, mid, worst.b);
        res.evaluations += 30;
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++segments;
    }
    // Re-sum from the leaves to shed the drift of the running updates.
    T sum{};
    double esum = 0.0;
    while (!heap.empty()) {
        sum += heap.top().value;
        esum += heap.top().error;
        heap.pop();
    }
    res.value = sum;
    res.error = esum;
    res.converged = esum <= abs_tol;
    return res;
}

/// Same as integrate_adaptive but throws QuadratureError when the tolerance is not met.
template <class T = double, class F>
T integrate_or_throw(F&& f, double a, double b, double abs_tol, int max_segments = 20000) {
    auto r = integrate_adaptive<T>(std::forward<F>(f), a, b, abs_tol, max_segments);
    if (!r.converged)
        throw QuadratureError("adaptive quadrature did not reach tolerance " + std::to_string(abs_tol) +
                              " (estimate " + std::to_string(r.error) + ")");
    return r.value;
}

} // namespace dosx
