#pragma once

namespace dosx {

/// Time-cutoff rate a = eta / (|ln(eta * epsilon / 2)| + 1).
double a_scale(double eta, double epsilon);

/// Smooth even bump: 1 on [-1, 1], 0 outside (-2, 2), and on 1 <= |t| <= 2 equal to
/// g(2-|t|) / (g(2-|t|) + g(|t|-1)) with g(s) = exp(-1/s) for s > 0.
double chi(double t);
/// k-th derivative of chi (0 <= k <= 10), by Taylor-mode differentiation.
double chi_derivative(double t, int k);

/// Fourier transform int chi(t) exp(-2 pi i alpha t) dt (real and even). Served from a
/// quintic-Hermite table on |alpha| <= chi_hat_table_limit() and by direct composite
/// quadrature beyond it.
double chi_hat(double alpha);
/// Same transform by adaptive Gauss-Kronrod with the given absolute tolerance.
double chi_hat_direct(double alpha, double abs_tol = 1e-10);
double chi_hat_table_limit();

/// Rescaled transform of chi_a(t) = chi(a t): (1/a) chi_hat(alpha / a).
inline double chi_a_hat(double alpha, double a) { return chi_hat(alpha / a) / a; }

/// c_m with |chi_hat(s)| <= c_m / |s|^m for all s != 0, namely
/// c_m = 2 int_1^2 |chi^{(m)}(t)| dt / (2 pi)^m. Cached per m; 1 <= m <= 10.
double chi_hat_decay_constant(int m);

} // namespace dosx
