#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "kronecker/errors.hpp"
#include "kronecker/rational.hpp"

namespace kronecker {

inline constexpr double kPi = std::numbers::pi;

/// Working precision knobs shared by every evaluator.
///
/// Arithmetic is always binary64; `working_digits` above 16 is accepted but
/// cannot buy accuracy, so truncation targets are clamped at roughly 4 ulp.
struct Precision {
    int working_digits = 16;
    double tail_tolerance = 1e-14;

    void validate() const {
        if (working_digits < 15) throw DomainError("Precision: working_digits must be >= 15");
        if (!(tail_tolerance > 0.0)) throw DomainError("Precision: tail_tolerance must be > 0");
        if (tail_tolerance < std::pow(10.0, 1 - working_digits))
            throw DomainError("Precision: tail_tolerance below 10^(1-working_digits)");
    }
    /// Truncation target actually achievable in double arithmetic.
    double effective_tol() const {
        return std::max(tail_tolerance, 4.0 * std::numeric_limits<double>::epsilon());
    }
};

/// Neumaier's variant of Kahan summation. Order of `add` calls is the only
/// thing that determines the result, so fixed orderings give bitwise
/// reproducible sums.
template <class T = double>
class KahanSum {
public:
    void add(T v) {
        T t = sum_ + v;
        if constexpr (std::is_floating_point_v<T>) {
            if (std::abs(sum_) >= std::abs(v)) comp_ += (sum_ - t) + v;
            else comp_ += (v - t) + sum_;
        } else {
            // complex: compensate component-wise
            comp_ += fix(sum_.real(), v.real(), t.real()) + T(0, 1) * fix(sum_.imag(), v.imag(), t.imag());
        }
        sum_ = t;
    }
    KahanSum& operator+=(T v) { add(v); return *this; }
    T value() const { return sum_ + comp_; }

private:
    static double fix(double s, double v, double t) {
        return std::abs(s) >= std::abs(v) ? (s - t) + v : (v - t) + s;
    }
    T sum_{};
    T comp_{};
};

// ---------------------------------------------------------------- Gamma

/// Γ(x) for x > 0. Thin wrapper around the C library's tgamma.
inline double gamma_fn(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("gamma_fn: argument must be a positive real");
    return std::tgamma(x);
}

/// log Γ(x) for x > 0.
inline double log_gamma_fn(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("log_gamma_fn: argument must be a positive real");
    return std::lgamma(x);
}

// ----------------------------------------------------------------- zeta

namespace detail {

inline constexpr int kZetaN = 30;       // terms summed explicitly
inline constexpr int kZetaBern = 10;    // Bernoulli correction terms (B_2..B_20)

/// B_{2k}/(2k)! for k = 1..kZetaBern, from exact Bernoulli numbers.
inline const std::array<double, kZetaBern + 1>& bernoulli_over_factorial() {
    static const std::array<double, kZetaBern + 1> table = [] {
        std::array<double, kZetaBern + 1> t{};
        const auto b = bernoulli_numbers(2 * kZetaBern);
        double fact = 1.0;
        for (int m = 1; m <= 2 * kZetaBern; ++m) {
            fact *= m;
            if (m % 2 == 0) t[static_cast<std::size_t>(m / 2)] = b[static_cast<std::size_t>(m)].to_double() / fact;
        }
        return t;
    }();
    return table;
}

/// Euler–Maclaurin pieces of ζ(s) with cut N:
///   ζ(s) = Σ_{n<N} n^{-s} + N^{1-s}/(s-1) + N^{-s}/2 + Σ_k B_{2k}/(2k)! (s)_{2k-1} N^{-s-2k+1}
/// `regular` collects everything except N^{1-s}/(s-1). Derivatives in s are
/// returned alongside (analytic, term by term).
struct ZetaParts {
    double regular;
    double d_regular;
};

inline ZetaParts zeta_regular_parts(double s) {
    const int N = kZetaN;
    KahanSum<> v, dv;
    for (int n = 1; n < N; ++n) {
        const double t = std::pow(static_cast<double>(n), -s);
        v.add(t);
        dv.add(-std::log(static_cast<double>(n)) * t);
    }
    const double logN = std::log(static_cast<double>(N));
    const double Ns = std::pow(static_cast<double>(N), -s);
    v.add(0.5 * Ns);
    dv.add(-0.5 * logN * Ns);

    const auto& bf = bernoulli_over_factorial();
    // rising factorial (s)_{2k-1} = s(s+1)...(s+2k-2) and its s-derivative
    double poch = s, dpoch = 1.0;
    double Npow = Ns / N;  // N^{-s-1}
    for (int k = 1; k <= kZetaBern; ++k) {
        const double term = bf[static_cast<std::size_t>(k)] * poch * Npow;
        v.add(term);
        dv.add(bf[static_cast<std::size_t>(k)] * (dpoch * Npow - logN * poch * Npow));
        // advance: multiply by (s+2k-1)(s+2k)
        const double a = s + 2 * k - 1, b = s + 2 * k;
        dpoch = dpoch * a * b + poch * (a + b);
        poch *= a * b;
        Npow /= static_cast<double>(N) * N;
    }
    return {v.value(), dv.value()};
}

}  // namespace detail

/// (s−1)·ζ(s), entire; valid for s ≥ −1 via Euler–Maclaurin.
inline double zeta_times_s_minus_one(double s) {
    if (s < -1.0) throw DomainError("zeta_times_s_minus_one: only s >= -1 supported");
    const auto parts = detail::zeta_regular_parts(s);
    return (s - 1.0) * parts.regular + std::pow(static_cast<double>(detail::kZetaN), 1.0 - s);
}

/// Riemann ζ(s) for real s ≠ 1. Euler–Maclaurin for s ≥ −1/2, functional
/// equation ζ(s) = 2^s π^{s−1} sin(πs/2) Γ(1−s) ζ(1−s) below (the
/// Euler–Maclaurin sum loses a couple of digits to cancellation for negative s).
inline double zeta_fn(double s) {
    if (!std::isfinite(s)) throw DomainError("zeta_fn: non-finite argument");
    if (std::abs(s - 1.0) <= 1e-6) throw PoleError("zeta_fn: pole at s = 1");
    if (s >= -0.5) {
        const auto parts = detail::zeta_regular_parts(s);
        return parts.regular + std::pow(static_cast<double>(detail::kZetaN), 1.0 - s) / (s - 1.0);
    }
    // trivial zeros at negative even integers come out of the sine exactly
    const double half = s / 2.0;
    if (half == std::floor(half)) return 0.0;
    return std::pow(2.0, s) * std::pow(kPi, s - 1.0) * std::sin(kPi * s / 2.0) * gamma_fn(1.0 - s) *
           zeta_fn(1.0 - s);
}

/// ζ'(s) for −1 ≤ s, s ≠ 1, from the analytic derivative of the Euler–Maclaurin formula.
inline double zeta_derivative(double s) {
    if (s < -1.0) throw DomainError("zeta_derivative: only s >= -1 supported");
    if (std::abs(s - 1.0) <= 1e-6) throw PoleError("zeta_derivative: pole at s = 1");
    const auto parts = detail::zeta_regular_parts(s);
    const double N = detail::kZetaN;
    const double Np = std::pow(N, 1.0 - s);
    const double d_pole = -std::log(N) * Np / (s - 1.0) - Np / ((s - 1.0) * (s - 1.0));
    return parts.d_regular + d_pole;
}

/// ζ'(−1).
inline double zeta_prime_minus_one() {
    static const double v = zeta_derivative(-1.0);
    return v;
}

/// Entire completed zeta ξ̂(u) = u(u−1)π^{−u/2}Γ(u/2)ζ(u), with ξ̂(u) = ξ̂(1−u)
/// and ξ̂(0) = ξ̂(1) = 1. Used so that Eisenstein coefficients stay finite
/// through s = 0, 1/2, 1.
inline double xi_entire(double u) {
    if (!std::isfinite(u)) throw DomainError("xi_entire: non-finite argument");
    if (u < 0.5) u = 1.0 - u;
    return u * std::pow(kPi, -u / 2.0) * gamma_fn(u / 2.0) * zeta_times_s_minus_one(u);
}

/// Standard completed zeta ξ(u) = π^{−u/2}Γ(u/2)ζ(u), u ∉ {0, 1}.
inline double xi_fn(double u) {
    if (std::abs(u) <= 1e-6 || std::abs(u - 1.0) <= 1e-6) throw PoleError("xi_fn: pole at u = 0 or 1");
    return xi_entire(u) / (u * (u - 1.0));
}

// ---------------------------------------------------------------- Bessel

/// e^x K_ν(x), trapezoidal rule on ∫₀^∞ e^{−x(cosh t − 1)} cosh(νt) dt.
/// The integrand decays doubly exponentially, so the plain trapezoid with
/// step halving converges geometrically in the number of nodes.
inline double bessel_k_scaled(double nu, double x, const Precision& prec = Precision{}) {
    if (!(std::abs(nu) <= 5.0)) throw DomainError("bessel_k: |nu| must be <= 5");
    if (!(x >= 1e-6 && x <= 1e4)) throw DomainError("bessel_k: x must lie in [1e-6, 1e4]");
    const double anu = std::abs(nu);
    const double tol = prec.effective_tol();

    auto f = [&](double t) {
        const double sh = std::sinh(0.5 * t);
        return std::exp(-2.0 * x * sh * sh + anu * t) * 0.5 * (1.0 + std::exp(-2.0 * anu * t));
    };
    // cut where the exponent is below log(eps) relative to the peak (peak value >= f(0)=1)
    double tmax = 1.0;
    while (-2.0 * x * std::sinh(0.5 * tmax) * std::sinh(0.5 * tmax) + anu * tmax > -40.0) tmax *= 1.5;

    double h = 0.5;
    auto trap = [&](double step) {
        KahanSum<> acc;
        acc.add(0.5 * f(0.0));
        const int n = static_cast<int>(std::ceil(tmax / step));
        for (int k = 1; k <= n; ++k) acc.add(f(k * step));
        return step * acc.value();
    };
    double prev = trap(h);
    for (int it = 0; it < 20; ++it) {
        h *= 0.5;
        const double cur = trap(h);
        if (std::abs(cur - prev) <= tol * std::abs(cur)) return cur;
        prev = cur;
    }
    throw ConvergenceError("bessel_k: trapezoid did not converge");
}

/// K_ν(x). Returns exactly 0 when e^{−x} underflows.
inline double bessel_k(double nu, double x, const Precision& prec = Precision{}) {
    const double scaled = bessel_k_scaled(nu, x, prec);
    const double e = std::exp(-x);
    if (e == 0.0) return 0.0;
    return scaled * e;
}

// ---------------------------------------------------------- Laurent jets

/// Leading Laurent coefficients of a real function around `center`:
/// coefficients[k] multiplies (s − center)^(k − pole_order).
struct LaurentJet {
    double center = 0.0;
    int pole_order = 0;
    std::vector<double> coefficients;
    std::vector<double> errors;  // estimated absolute error per coefficient

    /// Coefficient of (s − center)^power.
    double coeff(int power) const {
        const int k = power + pole_order;
        if (k < 0 || k >= static_cast<int>(coefficients.size())) return 0.0;
        return coefficients[static_cast<std::size_t>(k)];
    }
};

namespace detail {

/// Solve the Vandermonde system Σ_j c_j u_i^j = v_i (Björck–Pereyra).
inline std::vector<double> vandermonde_solve(const std::vector<double>& u, std::vector<double> v) {
    const std::size_t n = u.size();
    for (std::size_t k = 0; k + 1 < n; ++k)
        for (std::size_t i = n - 1; i > k; --i) v[i] = (v[i] - v[i - 1]) / (u[i] - u[i - 1 - k]);
    for (std::size_t k = n - 1; k-- > 0;)
        for (std::size_t i = k; i + 1 < n; ++i) v[i] -= u[k] * v[i + 1];
    return v;
}

/// Taylor coefficients g_0..g_{n-1} of g at c from a symmetric stencil at step h.
inline std::vector<double> taylor_from_stencil(const std::function<double(double)>& g, double c, int n,
                                               double h, double* scale) {
    const int M = (n + 1) / 2 + 3;
    std::vector<double> u(static_cast<std::size_t>(M)), ev(u.size()), od(u.size());
    double sc = 0.0;
    for (int k = 1; k <= M; ++k) {
        const double t = k * h;
        const double gp = g(c + t), gm = g(c - t);
        if (!std::isfinite(gp) || !std::isfinite(gm)) throw ConvergenceError("laurent_jet: non-finite sample");
        sc = std::max({sc, std::abs(gp), std::abs(gm)});
        u[static_cast<std::size_t>(k - 1)] = t * t;
        ev[static_cast<std::size_t>(k - 1)] = 0.5 * (gp + gm);
        od[static_cast<std::size_t>(k - 1)] = (gp - gm) / (2.0 * t);
    }
    *scale = sc;
    const auto ce = vandermonde_solve(u, ev);
    const auto co = vandermonde_solve(u, od);
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int m = 0; m < n; ++m) {
        const auto j = static_cast<std::size_t>(m / 2);
        out[static_cast<std::size_t>(m)] = (m % 2 == 0) ? ce[j] : co[j];
    }
    return out;
}

}  // namespace detail

/// Laurent jet of f at `center` with the given pole order, by evaluating
/// g(s) = f(s)(s − center)^p on symmetric stencils at step, step/2, step/4.
/// The coefficients reported are those at `step`; the error estimate is the
/// change against step/2 plus a rounding-noise floor.
inline LaurentJet laurent_jet(const std::function<double(double)>& f, double center, int pole_order,
                              int num_coeffs, double step = 1e-2) {
    if (pole_order < 0 || pole_order > 1) throw DomainError("laurent_jet: pole_order must be 0 or 1");
    if (num_coeffs < 1 || num_coeffs > 8) throw DomainError("laurent_jet: num_coeffs must be in [1, 8]");
    if (!(step >= 1e-5 && step <= 1e-2)) throw DomainError("laurent_jet: step must be in [1e-5, 1e-2]");

    auto g = [&](double s) {
        const double v = f(s);
        return pole_order == 1 ? v * (s - center) : v;
    };
    double sc1 = 0, sc2 = 0, sc3 = 0;
    const auto a1 = detail::taylor_from_stencil(g, center, num_coeffs, step, &sc1);
    const auto a2 = detail::taylor_from_stencil(g, center, num_coeffs, step / 2, &sc2);
    const auto a3 = detail::taylor_from_stencil(g, center, num_coeffs, step / 4, &sc3);
    const double scale = std::max({sc1, sc2, sc3, 1e-300});
    const double eps = std::numeric_limits<double>::epsilon();

    LaurentJet jet;
    jet.center = center;
    jet.pole_order = pole_order;
    jet.coefficients = a1;
    jet.errors.resize(a1.size());
    for (std::size_t m = 0; m < a1.size(); ++m) {
        const double d1 = std::abs(a1[m] - a2[m]);
        const double d2 = std::abs(a2[m] - a3[m]);
        const double noise = 1e3 * eps * scale * std::pow(4.0 / step, static_cast<double>(m));
        if (d1 > noise && d2 > 0.9 * d1) throw ConvergenceError("laurent_jet: Richardson sequence does not contract");
        jet.errors[m] = d1 + 1e3 * eps * scale * std::pow(1.0 / step, static_cast<double>(m));
    }
    if (pole_order > 0 && jet.coefficients[0] == 0.0) throw DomainError("laurent_jet: vanishing leading coefficient");
    return jet;
}

}  // namespace kronecker
