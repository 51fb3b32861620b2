#pragma once
// Independent reference computations used only by the tests. Nothing here
// shares code with the library kernels it is used to check.

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

/// ∫_0^∞ f(t) dt by the exp-sinh (double-exponential) substitution
/// t = exp((π/2) sinh τ), trapezoid in τ with step halving.
inline double exp_sinh(const std::function<double(double)>& f, double tol = 1e-15) {
    const double hp = std::numbers::pi / 2;
    auto trap = [&](double h) {
        long double acc = 0;
        for (int k = -400; k <= 400; ++k) {
            const double tau = k * h;
            const double t = std::exp(hp * std::sinh(tau));
            if (!(t > 0) || !std::isfinite(t)) continue;
            const double w = t * hp * std::cosh(tau);
            const double v = f(t) * w;
            if (std::isfinite(v)) acc += v;
        }
        return static_cast<double>(acc * h);
    };
    double h = 0.25, prev = trap(h);
    for (int i = 0; i < 6; ++i) {
        h /= 2;
        const double cur = trap(h);
        if (std::abs(cur - prev) <= tol * std::abs(cur)) return cur;
        prev = cur;
    }
    return prev;
}

/// Generalized Gauss–Laguerre nodes/weights for weight t^α e^{−t}
/// (Newton iteration on L_n^{(α)}, initial guesses after Stroud–Secrest).
inline void gauss_laguerre(int n, double alf, std::vector<double>& x, std::vector<double>& w) {
    x.assign(static_cast<std::size_t>(n), 0.0);
    w.assign(static_cast<std::size_t>(n), 0.0);
    double z = 0;
    for (int i = 0; i < n; ++i) {
        if (i == 0) z = (1.0 + alf) * (3.0 + 0.92 * alf) / (1.0 + 2.4 * n + 1.8 * alf);
        else if (i == 1) z += (15.0 + 6.25 * alf) / (1.0 + 0.9 * alf + 2.5 * n);
        else {
            const double ai = i - 1;
            z += ((1.0 + 2.55 * ai) / (1.9 * ai) + 1.26 * ai * alf / (1.0 + 3.5 * ai)) * (z - x[static_cast<std::size_t>(i - 2)]) /
                 (1.0 + 0.3 * alf);
        }
        long double p1 = 0, p2 = 0, pp = 0;
        for (int its = 0; its < 200; ++its) {
            p1 = 1.0L;
            p2 = 0.0L;
            for (int j = 0; j < n; ++j) {
                const long double p3 = p2;
                p2 = p1;
                p1 = ((2 * j + 1 + alf - z) * p2 - (j + alf) * p3) / (j + 1);
            }
            pp = (n * p1 - (n + alf) * p2) / z;
            const double z1 = z;
            z = static_cast<double>(z1 - p1 / pp);
            if (std::abs(z - z1) <= 1e-15 * std::abs(z)) break;
        }
        x[static_cast<std::size_t>(i)] = z;
        w[static_cast<std::size_t>(i)] = static_cast<double>(
            -std::exp(std::lgamma(alf + n) - std::lgamma(static_cast<double>(n))) / (pp * n * p2));
    }
}

/// K_ν(x) via t = arccosh(1 + u/x): K = e^{−x} ∫ u^{−1/2}e^{−u} h(u) du,
/// h(u) = √u cosh(νt)/(x sinh t), integrated by Gauss–Laguerre with α = −1/2.
inline double bessel_k_laguerre(double nu, double x, int n) {
    std::vector<double> xs, ws;
    gauss_laguerre(n, -0.5, xs, ws);
    long double acc = 0;
    for (int i = 0; i < n; ++i) {
        const double u = xs[static_cast<std::size_t>(i)];
        const double t = std::acosh(1.0 + u / x);
        const double sh = std::sqrt((u / x) * (2.0 + u / x));
        const double h = std::sqrt(u) * std::cosh(nu * t) / (x * sh);
        acc += ws[static_cast<std::size_t>(i)] * h;
    }
    return std::exp(-x) * static_cast<double>(acc);
}

/// ζ(s), s > 1, by direct summation up to M with an Euler–Maclaurin tail.
inline double zeta_direct(double s, int M = 2000) {
    long double acc = 0;
    for (int n = M; n >= 1; --n) acc += std::pow(static_cast<long double>(n), -s);
    const long double Ml = M;
    // tail Σ_{n>M} n^{-s} ≈ M^{1−s}/(s−1) − M^{−s}/2 + s M^{−s−1}/12 − s(s+1)(s+2)M^{−s−3}/720
    acc += std::pow(Ml, 1 - s) / (s - 1) - std::pow(Ml, -s) / 2 + s * std::pow(Ml, -s - 1) / 12 -
           s * (s + 1) * (s + 2) * std::pow(Ml, -s - 3) / 720;
    return static_cast<double>(acc);
}

/// Central finite difference with one Richardson step: D(h) for h and h/10.
inline double richardson_derivative(const std::function<double(double)>& f, double x, double h1 = 1e-2,
                                    double h2 = 1e-3) {
    auto D = [&](double h) { return (f(x + h) - f(x - h)) / (2 * h); };
    const double d1 = D(h1), d2 = D(h2);
    const double r = (h1 / h2) * (h1 / h2);
    return (r * d2 - d1) / (r - 1);
}

/// ζ'(−1) = 1/12 − log A with the Glaisher–Kinkelin constant A.
inline double zeta_prime_minus_one_glaisher() { return 1.0 / 12.0 - std::log(1.2824271291006226369); }

/// η(z) by the plain q-product with a fixed large number of factors.
inline std::complex<double> eta_product(std::complex<double> z, int T = 200) {
    const std::complex<double> I(0, 1);
    const std::complex<double> q = std::exp(2.0 * std::numbers::pi * I * z);
    std::complex<double> prod = 1.0, qn = 1.0;
    for (int n = 1; n <= T; ++n) {
        qn *= q;
        prod *= (1.0 - qn);
    }
    return std::exp(2.0 * std::numbers::pi * I * z / 24.0) * prod;
}

/// Σ over all integer matrices of determinant 1 with entries bounded by
/// `bound`, one per ± pair, of sinh(d(γz, w))^{−s}, divided by `order`.
/// No ball, no cosets: every matrix is tried.
inline double brute_elliptic_psl2z(double zx, double zy, double wx, double wy, double s, int bound, int order) {
    double sum = 0.0, comp = 0.0;
    for (long a = -bound; a <= bound; ++a)
        for (long b = -bound; b <= bound; ++b)
            for (long c = -bound; c <= bound; ++c)
                for (long d = -bound; d <= bound; ++d) {
                    if (a * d - b * c != 1) continue;
                    // keep one of ±γ: first nonzero of (c, d) positive
                    if (c < 0 || (c == 0 && d < 0)) continue;
                    const std::complex<double> z(zx, zy);
                    const std::complex<double> gz = (double(a) * z + double(b)) / (double(c) * z + double(d));
                    const double ch = 1.0 + std::norm(gz - std::complex<double>(wx, wy)) / (2.0 * gz.imag() * wy);
                    const double term = std::pow(ch * ch - 1.0, -s / 2.0);
                    const double t = sum + term;
                    comp += (sum - t) + term;
                    sum = t;
                }
    return (sum + comp) / order;
}

}  // namespace oracle
