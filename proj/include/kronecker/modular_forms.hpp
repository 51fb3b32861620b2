#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <regex>
#include <string>
#include <vector>

#include "kronecker/catalog.hpp"
#include "kronecker/errors.hpp"
#include "kronecker/hyperbolic.hpp"
#include "kronecker/numerics.hpp"
#include "kronecker/rational.hpp"

namespace kronecker {

inline constexpr cplx kI{0.0, 1.0};
inline constexpr int kDefaultTruncation = 64;
inline constexpr int kMaxTruncation = 1 << 16;
inline constexpr double kMinFormY = 0.05;

namespace detail {

inline void require_form_y(const cplx& z, const char* who) {
    if (!(z.imag() >= kMinFormY))
        throw ConvergenceError(std::string(who) + ": Im z must be >= 0.05 for q-series evaluation");
}

/// Runs a series term(n), n = 1, 2, ... and stops at the first T = 64·2^j
/// where the partial sums at T/2 and T agree to tol relative to the larger of
/// the sum and its largest term.
template <class Term>
cplx adaptive_series(Term&& term, double tol, const char* who) {
    KahanSum<cplx> acc;
    double big = 0.0;
    cplx at_prev{};
    int T = kDefaultTruncation;
    int n = 1;
    for (; n <= T; ++n) {
        const cplx t = term(n);
        big = std::max(big, std::abs(t));
        acc.add(t);
    }
    at_prev = acc.value();
    while (T < kMaxTruncation) {
        T *= 2;
        for (; n <= T; ++n) {
            const cplx t = term(n);
            big = std::max(big, std::abs(t));
            acc.add(t);
        }
        const cplx cur = acc.value();
        if (std::abs(cur - at_prev) <= tol * std::max(std::abs(cur), big)) return cur;
        at_prev = cur;
    }
    throw ConvergenceError(std::string(who) + ": truncation did not stabilize");
}

}  // namespace detail

// ---------------------------------------------------------------- eta

/// log η(z) along the q-product: 2πiz/24 + Σ Log(1 − qⁿ).
inline cplx log_eta(cplx z, const Precision& prec = Precision{}) {
    detail::require_form_y(z, "eta");
    const cplx q = std::exp(2.0 * kPi * kI * z);
    cplx qn = 1.0;
    const cplx L = detail::adaptive_series(
        [&](int) {
            qn *= q;
            return std::log(1.0 - qn);
        },
        prec.effective_tol(), "eta");
    return 2.0 * kPi * kI * z / 24.0 + L;
}

/// Dedekind η(z) = q^{1/24}∏(1 − qⁿ) with q^{1/24} = e^{2πiz/24}.
inline cplx eta(cplx z, const Precision& prec = Precision{}) { return std::exp(log_eta(z, prec)); }

inline cplx delta(cplx z, const Precision& prec = Precision{}) { return std::exp(24.0 * log_eta(z, prec)); }

/// log|Δ(z)|, free of over/underflow.
inline double log_abs_delta(cplx z, const Precision& prec = Precision{}) { return 24.0 * log_eta(z, prec).real(); }

// --------------------------------------------------------- Eisenstein

/// E_{2k}(z) = 1 − (4k/B_{2k}) Σ σ_{2k−1}(n)qⁿ, evaluated as the Lambert
/// series Σ m^{2k−1} q^m/(1 − q^m).
inline cplx eisenstein_E2k(int k, cplx z, const Precision& prec = Precision{}) {
    if (k < 2 || k > 10) throw DomainError("eisenstein_E2k: k must lie in [2, 10]");
    detail::require_form_y(z, "eisenstein_E2k");
    static const auto bern = bernoulli_numbers(20);
    const double factor = -(Rational(4 * k) / bern[static_cast<std::size_t>(2 * k)]).to_double();
    const cplx q = std::exp(2.0 * kPi * kI * z);
    cplx qm = 1.0;
    const cplx S = detail::adaptive_series(
        [&](int m) {
            qm *= q;
            return std::pow(static_cast<double>(m), 2 * k - 1) * qm / (1.0 - qm);
        },
        prec.effective_tol() * 1e-2, "eisenstein_E2k");
    return 1.0 + factor * S;
}

/// Quasi-modular E₂ = 1 − 24 Σ σ(n)qⁿ.
inline cplx e2(cplx z, const Precision& prec = Precision{}) {
    detail::require_form_y(z, "e2");
    const cplx q = std::exp(2.0 * kPi * kI * z);
    cplx qm = 1.0;
    const cplx S = detail::adaptive_series(
        [&](int m) {
            qm *= q;
            return static_cast<double>(m) * qm / (1.0 - qm);
        },
        prec.effective_tol() * 1e-2, "e2");
    return 1.0 - 24.0 * S;
}

/// E_{2,p}(z) = E₂(z) − pE₂(pz), weight 2 on Γ₀(p).
inline cplx e2p(int p, cplx z, const Precision& prec = Precision{}) {
    if (!is_prime(p)) throw DomainError("e2p: p must be prime");
    return e2(z, prec) - static_cast<double>(p) * e2(static_cast<double>(p) * z, prec);
}

/// E_{2k}^{(N)}(z) = σ_k(N)^{−1} Σ_{v|N} v^k E_{2k}(vz).
inline cplx moonshine_E2k(int k, int N, cplx z, const Precision& prec = Precision{}) {
    if (!is_squarefree(N)) throw DomainError("moonshine_E2k: N must be square-free");
    KahanSum<cplx> acc;
    for (int v : divisors(N)) acc.add(std::pow(static_cast<double>(v), k) * eisenstein_E2k(k, static_cast<double>(v) * z, prec));
    return acc.value() / static_cast<double>(sigma_int(k, N));
}

// -------------------------------------------------- generalized etas

/// η_∞ for Γ₀(N)⁺: principal 2^r-th root of ∏_{v|N} η(vz).
inline cplx eta_infinity_moonshine(int N, cplx z, const Precision& prec = Precision{}) {
    if (!is_squarefree(N)) throw DomainError("eta_infinity_moonshine: N must be square-free");
    const auto r = prime_factors(N).size();
    cplx L = 0.0;
    for (int v : divisors(N)) L += log_eta(static_cast<double>(v) * z, prec);
    const cplx prod = std::exp(L);
    return std::pow(prod, 1.0 / static_cast<double>(std::size_t{1} << r));
}

/// log|η_∞(z)| for Γ₀(N)⁺ (branch free).
inline double log_abs_eta_infinity_moonshine(int N, cplx z, const Precision& prec = Precision{}) {
    const auto r = prime_factors(N).size();
    double L = 0.0;
    for (int v : divisors(N)) L += log_eta(static_cast<double>(v) * z, prec).real();
    return L / static_cast<double>(std::size_t{1} << r);
}

/// η_∞ for Γ₀(N): principal φ(N)-th root of ∏_{v|N} η(vz)^{vμ(N/v)}.
inline cplx eta_infinity_gamma0(int N, cplx z, const Precision& prec = Precision{}) {
    if (N < 2) throw DomainError("eta_infinity_gamma0: N must be >= 2");
    cplx L = 0.0;
    for (int v : divisors(N)) {
        const int ex = v * moebius_mu(N / v);
        if (ex != 0) L += static_cast<double>(ex) * log_eta(static_cast<double>(v) * z, prec);
    }
    const cplx prod = std::exp(L);
    return std::pow(prod, 1.0 / euler_phi(N));
}

inline double log_abs_eta_infinity_gamma0(int N, cplx z, const Precision& prec = Precision{}) {
    double L = 0.0;
    for (int v : divisors(N)) {
        const int ex = v * moebius_mu(N / v);
        if (ex != 0) L += ex * log_eta(static_cast<double>(v) * z, prec).real();
    }
    return L / euler_phi(N);
}

/// log|η_∞(z)| for the cusp ∞ of any catalogued one- or two-cusp group.
inline double log_abs_eta_infinity(const GroupTag& tag, cplx z, const Precision& prec = Precision{}) {
    switch (tag.kind) {
        case GroupKind::PSL2Z: return log_eta(z, prec).real();
        case GroupKind::Gamma0Plus: return log_abs_eta_infinity_moonshine(tag.N, z, prec);
        case GroupKind::Gamma0: return log_abs_eta_infinity_gamma0(tag.N, z, prec);
    }
    return 0.0;
}

/// Klein's j = E₄³/Δ.
inline cplx j_invariant(cplx z, const Precision& prec = Precision{}) {
    const cplx e4 = eisenstein_E2k(2, z, prec);
    return e4 * e4 * e4 / delta(z, prec);
}

// ------------------------------------------------------ q-expansions

/// Truncated q-series q^α Σ_{n≤T} aₙ qⁿ.
struct QExpansion {
    double weight = 0;
    Rational prefactor{0};
    std::vector<double> coefficients;  // a_0..a_T
    GroupTag level;
};

namespace detail {

inline std::vector<double> sigma_table(int k, int T) {
    std::vector<double> s(static_cast<std::size_t>(T) + 1, 0.0);
    for (int d = 1; d <= T; ++d) {
        const double dk = std::pow(static_cast<double>(d), k);
        for (int m = d; m <= T; m += d) s[static_cast<std::size_t>(m)] += dk;
    }
    return s;
}

inline std::vector<double> eisenstein_coeffs(int k, int T) {
    const auto bern = bernoulli_numbers(2 * k);
    const double factor = -(Rational(4 * k) / bern[static_cast<std::size_t>(2 * k)]).to_double();
    auto s = sigma_table(2 * k - 1, T);
    s[0] = 1.0;
    for (int n = 1; n <= T; ++n) s[static_cast<std::size_t>(n)] *= factor;
    return s;
}

/// Coefficients of ∏_{n≥1}(1 − qⁿ)^e up to q^T.
inline std::vector<double> euler_product_power(int e, int T) {
    std::vector<double> c(static_cast<std::size_t>(T) + 1, 0.0);
    c[0] = 1.0;
    for (int n = 1; n <= T; ++n)
        for (int rep = 0; rep < e; ++rep)
            for (int m = T; m >= n; --m) c[static_cast<std::size_t>(m)] -= c[static_cast<std::size_t>(m - n)];
    return c;
}

}  // namespace detail

// ------------------------------------------------------------ handles

/// A named holomorphic (or quasi-) modular form with its evaluator.
struct FormHandle {
    std::string name;
    double weight = 0;
    GroupTag level;
    double constant_term = 1.0;  // b_f
    std::function<cplx(cplx)> evaluate;
    std::function<QExpansion(int)> q_expansion;

    cplx operator()(cplx z) const { return evaluate(z); }
};

/// Catalogued forms: "E4".."E20", "E2", "Delta", "eta", "j",
/// "E2p_<p>" (E_{2,p}), "E<2k>_<N>plus" (E_{2k}^{(N)}).
inline FormHandle form_handle(const std::string& name, const Precision& prec = Precision{}) {
    FormHandle f;
    f.name = name;
    std::smatch m;
    static const std::regex eis(R"(E(\d+))"), e2p_re(R"(E2p_(\d+))"), plus(R"(E(\d+)_(\d+)plus)");
    if (std::regex_match(name, m, eis)) {
        const int w = std::stoi(m[1]);
        if (w == 2) {
            f.weight = 2;
            f.level = GroupTag::psl2z();
            f.evaluate = [prec](cplx z) { return e2(z, prec); };
            f.q_expansion = [](int T) {
                auto s = detail::sigma_table(1, T);
                s[0] = 1.0;
                for (int n = 1; n <= T; ++n) s[static_cast<std::size_t>(n)] *= -24.0;
                return QExpansion{2, Rational(0), s, GroupTag::psl2z()};
            };
            return f;
        }
        if (w % 2 != 0 || w < 4 || w > 20) throw DomainError("unknown form: " + name);
        const int k = w / 2;
        f.weight = w;
        f.level = GroupTag::psl2z();
        f.evaluate = [k, prec](cplx z) { return eisenstein_E2k(k, z, prec); };
        f.q_expansion = [k, w](int T) {
            return QExpansion{static_cast<double>(w), Rational(0), detail::eisenstein_coeffs(k, T), GroupTag::psl2z()};
        };
        return f;
    }
    if (std::regex_match(name, m, e2p_re)) {
        const int p = std::stoi(m[1]);
        if (!is_prime(p)) throw DomainError("unknown form: " + name);
        f.weight = 2;
        f.level = GroupTag::gamma0(p);
        f.constant_term = 1.0 - p;
        f.evaluate = [p, prec](cplx z) { return e2p(p, z, prec); };
        f.q_expansion = [p](int T) {
            const auto s = detail::sigma_table(1, T);
            std::vector<double> c(static_cast<std::size_t>(T) + 1, 0.0);
            c[0] = 1.0 - p;
            for (int n = 1; n <= T; ++n) {
                c[static_cast<std::size_t>(n)] -= 24.0 * s[static_cast<std::size_t>(n)];
                if (n % p == 0) c[static_cast<std::size_t>(n)] += 24.0 * p * s[static_cast<std::size_t>(n / p)];
            }
            return QExpansion{2, Rational(0), c, GroupTag::gamma0(p)};
        };
        return f;
    }
    if (std::regex_match(name, m, plus)) {
        const int w = std::stoi(m[1]), N = std::stoi(m[2]);
        if (w % 2 != 0 || w < 4 || w > 20 || !is_squarefree(N)) throw DomainError("unknown form: " + name);
        const int k = w / 2;
        f.weight = w;
        f.level = N == 1 ? GroupTag::psl2z() : GroupTag::gamma0_plus(N);
        f.evaluate = [k, N, prec](cplx z) { return moonshine_E2k(k, N, z, prec); };
        f.q_expansion = [k, N, w, lvl = f.level](int T) {
            const auto base = detail::eisenstein_coeffs(k, T);
            std::vector<double> c(static_cast<std::size_t>(T) + 1, 0.0);
            const double norm = static_cast<double>(sigma_int(k, N));
            for (int v : divisors(N)) {
                const double vk = std::pow(static_cast<double>(v), k);
                for (int n = 0; n * v <= T; ++n)
                    c[static_cast<std::size_t>(n * v)] += vk * base[static_cast<std::size_t>(n)] / norm;
            }
            return QExpansion{static_cast<double>(w), Rational(0), c, lvl};
        };
        return f;
    }
    if (name == "Delta") {
        f.weight = 12;
        f.level = GroupTag::psl2z();
        f.constant_term = 0.0;
        f.evaluate = [prec](cplx z) { return delta(z, prec); };
        f.q_expansion = [](int T) {
            const auto p = detail::euler_product_power(24, T);
            std::vector<double> c(static_cast<std::size_t>(T) + 1, 0.0);
            for (int n = 1; n <= T; ++n) c[static_cast<std::size_t>(n)] = p[static_cast<std::size_t>(n - 1)];
            return QExpansion{12, Rational(0), c, GroupTag::psl2z()};
        };
        return f;
    }
    if (name == "eta") {
        f.weight = 0.5;
        f.level = GroupTag::psl2z();
        f.constant_term = 0.0;
        f.evaluate = [prec](cplx z) { return eta(z, prec); };
        f.q_expansion = [](int T) {
            return QExpansion{0.5, Rational(1, 24), detail::euler_product_power(1, T), GroupTag::psl2z()};
        };
        return f;
    }
    if (name == "j") {
        f.weight = 0;
        f.level = GroupTag::psl2z();
        f.constant_term = 744.0;
        f.evaluate = [prec](cplx z) { return j_invariant(z, prec); };
        f.q_expansion = [](int T) {
            // j = E4³/Δ = q^{-1}(E4³ / ∏(1−qⁿ)^{24})
            const auto e4 = detail::eisenstein_coeffs(2, T + 1);
            std::vector<double> cube(static_cast<std::size_t>(T) + 2, 0.0), sq(cube.size(), 0.0);
            for (int a = 0; a <= T + 1; ++a)
                for (int b = 0; a + b <= T + 1; ++b)
                    sq[static_cast<std::size_t>(a + b)] += e4[static_cast<std::size_t>(a)] * e4[static_cast<std::size_t>(b)];
            for (int a = 0; a <= T + 1; ++a)
                for (int b = 0; a + b <= T + 1; ++b)
                    cube[static_cast<std::size_t>(a + b)] += sq[static_cast<std::size_t>(a)] * e4[static_cast<std::size_t>(b)];
            const auto p = detail::euler_product_power(24, T + 1);
            // divide cube by p
            std::vector<double> quo(cube.size(), 0.0);
            for (std::size_t n = 0; n < cube.size(); ++n) {
                double v = cube[n];
                for (std::size_t k = 1; k <= n; ++k) v -= p[k] * quo[n - k];
                quo[n] = v;
            }
            return QExpansion{0, Rational(-1), quo, GroupTag::psl2z()};
        };
        return f;
    }
    throw DomainError("unknown form: " + name);
}

/// Evaluates a truncated q-expansion at z (for cross-checking evaluators).
inline cplx evaluate_q_expansion(const QExpansion& e, cplx z) {
    const cplx q = std::exp(2.0 * kPi * kI * z);
    cplx acc = 0.0;
    for (std::size_t n = e.coefficients.size(); n-- > 0;) acc = acc * q + e.coefficients[n];
    return std::exp(2.0 * kPi * kI * z * e.prefactor.to_double()) * acc;
}

// ---------------------------------------------------------- probes

struct ModularityResult {
    double max_deviation = 0.0;
    int samples_used = 0;
    int samples_rejected = 0;
};

/// Maximum of | |f(γz)| / (|cz+d|^w |f(z)|) − 1 | over generators × samples.
/// Samples with |f(z)| < 10^{-4} are rejected (too close to a zero).
inline ModularityResult check_modularity(const FormHandle& f, const std::vector<GroupElement>& generators,
                                         const std::vector<UpperHalfPoint>& samples) {
    ModularityResult r;
    for (const auto& z : samples) {
        const cplx fz = f(z.z());
        if (std::abs(fz) < 1e-4) {
            ++r.samples_rejected;
            continue;
        }
        ++r.samples_used;
        for (const auto& g : generators) {
            const auto gz = moebius_apply(g, z);
            const double ratio = std::abs(f(gz.z())) / (std::pow(std::abs(g.j(z.z())), f.weight) * std::abs(fz));
            r.max_deviation = std::max(r.max_deviation, std::abs(ratio - 1.0));
        }
    }
    if (r.samples_used == 0) throw DomainError("check_modularity: every sample was rejected");
    return r;
}

/// Taylor coefficients a_0..a_M of f at w from a Cauchy circle of radius h
/// with K nodes (a complex central-difference stencil).
inline std::vector<cplx> taylor_coefficients(const std::function<cplx(cplx)>& f, cplx w, int M, double h = 1e-3,
                                             int K = 16) {
    std::vector<cplx> vals(static_cast<std::size_t>(K));
    for (int k = 0; k < K; ++k) vals[static_cast<std::size_t>(k)] = f(w + h * std::exp(2.0 * kPi * kI * (double(k) / K)));
    std::vector<cplx> a(static_cast<std::size_t>(M) + 1);
    for (int m = 0; m <= M; ++m) {
        cplx acc = 0.0;
        for (int k = 0; k < K; ++k)
            acc += vals[static_cast<std::size_t>(k)] * std::exp(-2.0 * kPi * kI * (double(m) * k / K));
        a[static_cast<std::size_t>(m)] = acc / (double(K) * std::pow(h, m));
    }
    return a;
}

/// Order of vanishing of f at w: smallest m ≤ 4 with |f^{(m)}(w)| above
/// 10^{-4}·|f(w + 0.1i)|.
inline int local_order(const FormHandle& f, const UpperHalfPoint& w) {
    if (w.y < kMinFormY) throw DomainError("local_order: Im w must be >= 0.05");
    const double scale = std::abs(f(w.z() + cplx(0, 0.1)));
    const auto a = taylor_coefficients(f.evaluate, w.z(), 4);
    double fact = 1.0;
    for (int m = 0; m <= 4; ++m) {
        if (m > 0) fact *= m;
        if (std::abs(a[static_cast<std::size_t>(m)]) * fact > 1e-4 * scale) return m;
    }
    throw ConvergenceError("local_order: indeterminate (all probed derivatives below threshold)");
}

}  // namespace kronecker
