#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "kronecker/catalog.hpp"
#include "kronecker/errors.hpp"
#include "kronecker/hyperbolic.hpp"
#include "kronecker/numerics.hpp"
#include "kronecker/report.hpp"

namespace kronecker {

/// Cusp label for the two-cusp groups Γ₀(p).
enum class Cusp { Infinity, Zero };

inline const char* to_string(Cusp c) { return c == Cusp::Infinity ? "inf" : "0"; }

using RealMatrix = std::vector<std::vector<double>>;
using JetMatrix = std::vector<std::vector<LaurentJet>>;

namespace detail {

inline void require_continuation_regime(double s, const char* who) {
    if (!std::isfinite(s) || s < -0.5 || s > 3.0)
        throw DomainError(std::string(who) + ": s must lie in [-0.5, 3] on the continuation path");
    if (std::abs(s - 1.0) <= 1e-6) throw PoleError(std::string(who) + ": pole at s = 1 (use a Laurent jet)");
}

inline void require_direct_regime(cplx s, const char* who) {
    if (!(s.real() >= 1.1)) throw DomainError(std::string(who) + ": direct sums need Re s >= 1.1");
}

inline double sigma_real(double a, int n) {
    KahanSum<> acc;
    for (int d = 1; d * d <= n; ++d) {
        if (n % d) continue;
        acc.add(std::pow(static_cast<double>(d), a));
        if (d * d != n) acc.add(std::pow(static_cast<double>(n / d), a));
    }
    return acc.value();
}

/// s / (p^{2s} − 1), regular through s = 0.
inline double s_over_p2s_minus_one(int p, double s) {
    const double L = 2.0 * std::log(static_cast<double>(p));
    if (s == 0.0) return 1.0 / L;
    return s / std::expm1(s * L);
}

}  // namespace detail

// ------------------------------------------------------------ scattering

/// φ(s) = ξ(2s−1)/ξ(2s) for PSL₂(ℤ), written through the entire ξ̂ so
/// that s = 0 and s = 1/2 need no special cases.
inline double scattering_phi(double s) {
    if (!std::isfinite(s)) throw DomainError("scattering_phi: non-finite s");
    if (std::abs(s - 1.0) <= 1e-6) throw PoleError("scattering_phi: pole at s = 1");
    return s * xi_entire(2.0 * s - 1.0) / ((s - 1.0) * xi_entire(2.0 * s));
}

/// φ(s)/s, regular at s = 0.
inline double scattering_phi_over_s(double s) {
    if (std::abs(s - 1.0) <= 1e-6) throw PoleError("scattering_phi: pole at s = 1");
    return xi_entire(2.0 * s - 1.0) / ((s - 1.0) * xi_entire(2.0 * s));
}

/// D_N(s) = ∏_{p|N} (p^{1−s}+1)/(p^s+1).
inline double moonshine_factor(int N, double s) {
    double D = 1.0;
    for (int p : prime_factors(N)) {
        const double pd = p;
        D *= (std::pow(pd, 1.0 - s) + 1.0) / (std::pow(pd, s) + 1.0);
    }
    return D;
}

inline void require_supported_group(const GroupTag& tag) {
    switch (tag.kind) {
        case GroupKind::PSL2Z: return;
        case GroupKind::Gamma0Plus:
            if (tag.N < 1 || !is_squarefree(tag.N)) throw DomainError("Gamma0(N)+ needs square-free N");
            return;
        case GroupKind::Gamma0:
            if (!is_prime(tag.N)) throw DomainError("Gamma0(N) is supported for prime N only");
            return;
    }
}

/// Closed-form scattering matrix. Rows/columns for Γ₀(p) are ordered (∞, 0).
inline RealMatrix scattering(const GroupTag& tag, double s) {
    require_supported_group(tag);
    switch (tag.kind) {
        case GroupKind::PSL2Z: return {{scattering_phi(s)}};
        case GroupKind::Gamma0Plus: return {{scattering_phi(s) * moonshine_factor(tag.N, s)}};
        case GroupKind::Gamma0: {
            const int p = tag.N;
            const double pd = p;
            // φ(s)/(p^{2s}−1) = (φ(s)/s)·(s/(p^{2s}−1)) keeps s = 0 finite
            const double pref = scattering_phi_over_s(s) * detail::s_over_p2s_minus_one(p, s);
            const double diag = pref * (pd - 1.0);
            const double off = pref * (std::pow(pd, s) - std::pow(pd, 1.0 - s));
            return {{diag, off}, {off, diag}};
        }
    }
    throw DomainError("scattering: unsupported group");
}

inline int cusp_count(const GroupTag& tag) { return tag.kind == GroupKind::Gamma0 ? 2 : 1; }

/// Laurent data of every scattering entry. center = 1: pole order 1 with
/// coefficients (residue, β, γ). center = 0: Taylor coefficients (a, b, c).
inline JetMatrix scattering_jets(const GroupTag& tag, int center, double step = 1e-2) {
    if (center != 0 && center != 1) throw DomainError("scattering_jets: center must be 0 or 1");
    require_supported_group(tag);
    const int n = cusp_count(tag);
    JetMatrix out(static_cast<std::size_t>(n), std::vector<LaurentJet>(static_cast<std::size_t>(n)));
    for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
            auto f = [&, j, k](double s) {
                return scattering(tag, s)[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)];
            };
            out[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)] =
                laurent_jet(f, static_cast<double>(center), center == 1 ? 1 : 0, 3, step);
        }
    return out;
}

/// β₁₁ for Γ₀(N)⁺ in closed form. `as_printed` selects the sign on log N
/// exactly as displayed in the source formula; the other branch uses +log N,
/// which is what the scattering function itself produces.
inline double beta11_moonshine_closed_form(int N, bool as_printed) {
    if (!is_squarefree(N)) throw DomainError("beta11_moonshine_closed_form: N must be square-free");
    const auto g = group_descriptor(GroupTag::gamma0_plus(N));
    KahanSum<> acc;
    for (int p : prime_factors(N)) {
        const double pd = p;
        acc.add((pd - 1.0) * std::log(pd) / (2.0 * (pd + 1.0)));
    }
    const double logN = std::log(static_cast<double>(N));
    acc.add(as_printed ? -logN : logN);
    acc.add(2.0 * std::log(4.0 * kPi));
    acc.add(24.0 * zeta_prime_minus_one());
    acc.add(-2.0);
    return -acc.value() / g.volume();
}

/// β₁₁ for Γ₀(p) at the cusp ∞ in closed form.
inline double beta11_gamma0p_closed_form(int p) {
    if (!is_prime(p)) throw DomainError("beta11_gamma0p_closed_form: p must be prime");
    const double pd = p;
    const double vol = kPi * (pd + 1.0) / 3.0;
    return -(2.0 / vol) *
           (std::log(4.0 * kPi * pd) + 12.0 * zeta_prime_minus_one() - 1.0 + std::log(pd) / (pd * pd - 1.0));
}

// ------------------------------------------------- cusp coefficient relations

/// Residuals of the three coefficient identities linking the s = 0 Taylor
/// data (a, b, c) and the s = 1 Laurent data (β, γ); entry [k][l].
struct Lemma31Residuals {
    RealMatrix r1;  // Σ_j a_jk                              (vs 0)
    RealMatrix r2;  // Σ_j (−b_jk/vol + a_jk β_jl) − δ_kl     (vs 0)
    RealMatrix r3;  // Σ_j (−c_jk/vol + b_jk β_jl − a_jk γ_jl) (vs 0)
    double max_abs() const {
        double m = 0;
        for (const auto* R : {&r1, &r2, &r3})
            for (const auto& row : *R)
                for (double v : row) m = std::max(m, std::abs(v));
        return m;
    }
};

inline Lemma31Residuals lemma31_residuals(const JetMatrix& at0, const JetMatrix& at1, double vol) {
    const std::size_t n = at0.size();
    Lemma31Residuals r;
    r.r1.assign(n, std::vector<double>(n, 0.0));
    r.r2 = r.r1;
    r.r3 = r.r1;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t l = 0; l < n; ++l) {
            KahanSum<> s1, s2, s3;
            for (std::size_t j = 0; j < n; ++j) {
                const double a = at0[j][k].coeff(0), b = at0[j][k].coeff(1), c = at0[j][k].coeff(2);
                const double beta = at1[j][l].coeff(0), gamma = at1[j][l].coeff(1);
                s1.add(a);
                s2.add(-b / vol);
                s2.add(a * beta);
                s3.add(-c / vol);
                s3.add(b * beta);
                s3.add(-a * gamma);
            }
            r.r1[k][l] = s1.value();
            r.r2[k][l] = s2.value() - (k == l ? 1.0 : 0.0);
            r.r3[k][l] = s3.value();
        }
    return r;
}

/// All three relations for Γ₀(p), every (k, l), tolerance 1e-7.
inline VerificationReport lemma31_check(int p, double tol = 1e-7) {
    const auto tag = GroupTag::gamma0(p);
    const auto g = group_descriptor(tag);
    const auto r = lemma31_residuals(scattering_jets(tag, 0), scattering_jets(tag, 1), g.volume());
    VerificationReport rep;
    rep.suite = "lemma31";
    const char* lbl[2] = {"inf", "0"};
    const std::string G = tag.name();
    for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) {
            const std::string kl = std::string(lbl[k]) + "," + lbl[l];
            rep.add(make_check(G + " sum_j a_jk [" + kl + "]", r.r1[k][l], 0.0, tol, TolMode::Abs,
                               "sum_j a_jk = 0"));
            rep.add(make_check(G + " sum_j(-b_jk/vol + a_jk beta_jl) [" + kl + "]", r.r2[k][l] + (k == l ? 1.0 : 0.0),
                               k == l ? 1.0 : 0.0, tol, TolMode::Abs, "sum_j(-b_jk/vol + a_jk beta_jl) = delta_kl"));
            rep.add(make_check(G + " sum_j(-c_jk/vol + b_jk beta_jl - a_jk gamma_jl) [" + kl + "]", r.r3[k][l], 0.0,
                               tol, TolMode::Abs, "sum_j(-c_jk/vol + b_jk beta_jl) = sum_j a_jk gamma_jl"));
        }
    rep.observe(G + " max residual", r.max_abs());
    return rep;
}

// --------------------------------------- continued series for PSL₂(ℤ)

/// E(z, s) for PSL₂(ℤ) on s ∈ [−0.5, 3] from the Fourier–Bessel expansion
///   y^s + φ(s)y^{1−s} + (4/ξ(2s))√y Σ n^{s−1/2}σ_{1−2s}(n)K_{s−1/2}(2πny)cos(2πnx).
/// z is first moved into the fundamental domain, which keeps 2πy ≥ 5.4.
inline double parabolic_continued_psl2z(const UpperHalfPoint& z0, double s, const Precision& prec = Precision{}) {
    detail::require_continuation_regime(s, "parabolic_continued_psl2z");
    const auto red = reduce_psl2z(z0);
    const double x = red.point.x, y = red.point.y;
    const double phi = scattering_phi(s);
    // 4/ξ(2s) = 4·2s(2s−1)/ξ̂(2s)
    const double coef = 8.0 * s * (2.0 * s - 1.0) / xi_entire(2.0 * s);
    const double ys = std::pow(y, s), y1s = std::pow(y, 1.0 - s);
    const double base = ys + std::abs(phi) * y1s;
    if (coef == 0.0) return ys + phi * y1s;

    const double nu = s - 0.5;
    const double tol = prec.effective_tol();
    const double sqy = std::sqrt(y);
    KahanSum<> acc;
    int small = 0;
    for (int n = 1; n <= 400; ++n) {
        const double arg = 2.0 * kPi * n * y;
        if (arg > 700.0) return ys + phi * y1s + acc.value();  // K underflows from here on
        const double amp = coef * std::pow(static_cast<double>(n), nu) * detail::sigma_real(1.0 - 2.0 * s, n) * sqy *
                           bessel_k(nu, arg, prec);
        acc.add(amp * std::cos(2.0 * kPi * n * x));
        if (std::abs(amp) <= tol * (base + std::abs(acc.value()))) {
            if (++small >= 2) return ys + phi * y1s + acc.value();
        } else {
            small = 0;
        }
    }
    throw ConvergenceError("parabolic_continued_psl2z: Fourier series did not reach the tail tolerance");
}

// ------------------------------------------------------------ the lifts

/// Coefficients (α, β) of a candidate α·E(z) + β·E(pz).
struct LiftCoefficients {
    double alpha = 0;
    double beta = 0;
};

namespace detail {

/// Solves α + β p^s = c_s, α + β p^{1−s} = c_{1−s}/φ(s) (constant-term matching).
inline LiftCoefficients solve_constant_term(int p, double s, double target_ys, double target_y1s_over_phi) {
    const double pd = p;
    const double ps = std::pow(pd, s), p1s = std::pow(pd, 1.0 - s);
    const double det = p1s - ps;
    if (std::abs(det) < 1e-6) throw DomainError("constant-term system is singular at s = 1/2");
    LiftCoefficients c;
    c.beta = (target_y1s_over_phi - target_ys) / det;
    c.alpha = target_ys - c.beta * ps;
    return c;
}

}  // namespace detail

/// Per-prime coefficients for Γ₀(N)⁺ derived by matching the constant term
/// against y^s + φ(s)·(p^{1−s}+1)/(p^s+1)·y^{1−s}.
inline LiftCoefficients derive_moonshine_coefficients(int p, double s) {
    const double pd = p;
    return detail::solve_constant_term(p, s, 1.0, (std::pow(pd, 1.0 - s) + 1.0) / (std::pow(pd, s) + 1.0));
}

/// Coefficients for E_∞ or E_0 of Γ₀(p) derived by matching the constant
/// term at ∞ against the corresponding row of the scattering matrix.
inline LiftCoefficients derive_gamma0p_coefficients(int p, Cusp cusp, double s) {
    const double pd = p;
    const double den = std::pow(pd, 2.0 * s) - 1.0;
    if (cusp == Cusp::Infinity) return detail::solve_constant_term(p, s, 1.0, (pd - 1.0) / den);
    return detail::solve_constant_term(p, s, 0.0, (std::pow(pd, s) - std::pow(pd, 1.0 - s)) / den);
}

/// The closed forms the derivation is expected to reproduce.
inline LiftCoefficients moonshine_coefficients_closed(int p, double s) {
    const double v = 1.0 / (std::pow(static_cast<double>(p), s) + 1.0);
    return {v, v};
}

inline LiftCoefficients gamma0p_coefficients_closed(int p, Cusp cusp, double s) {
    const double pd = p;
    const double den = std::pow(pd, 2.0 * s) - 1.0;
    const double ps = std::pow(pd, s);
    if (cusp == Cusp::Infinity) return {-1.0 / den, ps / den};
    return {ps / den, -1.0 / den};
}

/// Coefficients (c_s, c_{1−s}) of y^s and y^{1−s} in the constant term at ∞
/// of α·E(z) + β·E(pz).
inline std::pair<double, double> lift_constant_term(int p, const LiftCoefficients& c, double s) {
    const double pd = p;
    return {c.alpha + c.beta * std::pow(pd, s), scattering_phi(s) * (c.alpha + c.beta * std::pow(pd, 1.0 - s))};
}

namespace detail {

/// Γ₀(N)⁺ lift without validation: ∏_{p|N}(p^s+1)^{−1}·Σ_{v|N} E(vz, s).
inline double moonshine_raw(int N, const UpperHalfPoint& z, double s, const Precision& prec) {
    KahanSum<> acc;
    for (int v : divisors(N)) acc.add(parabolic_continued_psl2z(UpperHalfPoint(v * z.x, v * z.y), s, prec));
    double f = 1.0;
    for (int p : prime_factors(N)) f /= std::pow(static_cast<double>(p), s) + 1.0;
    return f * acc.value();
}

inline double gamma0p_closed(int p, Cusp cusp, const UpperHalfPoint& z, double s, const Precision& prec) {
    const double Ez = parabolic_continued_psl2z(z, s, prec);
    const double Epz = parabolic_continued_psl2z(UpperHalfPoint(p * z.x, p * z.y), s, prec);
    const double ps = std::pow(static_cast<double>(p), s);
    const double q = 1.0 / std::expm1(2.0 * s * std::log(static_cast<double>(p)));
    return cusp == Cusp::Infinity ? (ps * Epz - Ez) * q : (ps * Ez - Epz) * q;
}

/// Γ₀(p) lift without validation. The coefficients have a removable
/// singularity at s = 0; within 1e-5 of it the value is the midpoint of the
/// two neighbours at ±1e-5 (error O(1e-10)).
inline double gamma0p_raw(int p, Cusp cusp, const UpperHalfPoint& z, double s, const Precision& prec) {
    constexpr double d = 1e-5;
    if (std::abs(s) < d) {
        const double lo = gamma0p_closed(p, cusp, z, -d, prec), hi = gamma0p_closed(p, cusp, z, d, prec);
        return lo + (hi - lo) * (s + d) / (2 * d);
    }
    return gamma0p_closed(p, cusp, z, s, prec);
}

}  // namespace detail

/// Outcome of the cheap lift validation run before first use.
struct LiftValidation {
    double coefficient_deviation = 0;  // derived vs closed-form coefficients
    double invariance_deviation = 0;   // relative, over generators at s = 1.5
    bool ok = false;
};

/// Derives the lift coefficients at several s, compares them with the closed
/// forms, then checks invariance of the closed-form lift at s = 1.5.
inline LiftValidation validate_lift(const GroupTag& tag, const Precision& prec = Precision{}) {
    require_supported_group(tag);
    LiftValidation v;
    if (tag.kind == GroupKind::PSL2Z) {
        v.ok = true;
        return v;
    }
    const double grid[] = {-0.3, 0.3, 0.8, 1.4, 2.2};
    for (double s : grid) {
        if (tag.kind == GroupKind::Gamma0Plus) {
            for (int p : prime_factors(tag.N)) {
                const auto d = derive_moonshine_coefficients(p, s), c = moonshine_coefficients_closed(p, s);
                v.coefficient_deviation = std::max({v.coefficient_deviation, std::abs(d.alpha - c.alpha),
                                                    std::abs(d.beta - c.beta)});
            }
        } else {
            for (Cusp cu : {Cusp::Infinity, Cusp::Zero}) {
                const auto d = derive_gamma0p_coefficients(tag.N, cu, s), c = gamma0p_coefficients_closed(tag.N, cu, s);
                const double sc = std::max({1.0, std::abs(c.alpha), std::abs(c.beta)});
                v.coefficient_deviation = std::max(
                    {v.coefficient_deviation, std::abs(d.alpha - c.alpha) / sc, std::abs(d.beta - c.beta) / sc});
            }
        }
    }
    const auto g = group_descriptor(tag);
    const UpperHalfPoint z(0.1234, 0.8765);
    const double s = 1.5;
    auto eval = [&](const UpperHalfPoint& w, Cusp cu) {
        return tag.kind == GroupKind::Gamma0Plus ? detail::moonshine_raw(tag.N, w, s, prec)
                                                 : detail::gamma0p_raw(tag.N, cu, w, s, prec);
    };
    const std::vector<Cusp> cusps = tag.kind == GroupKind::Gamma0 ? std::vector<Cusp>{Cusp::Infinity, Cusp::Zero}
                                                                  : std::vector<Cusp>{Cusp::Infinity};
    for (Cusp cu : cusps) {
        const double base = eval(z, cu);
        for (const auto& gen : g.generators) {
            const double img = eval(moebius_apply(gen, z), cu);
            v.invariance_deviation = std::max(v.invariance_deviation, std::abs(img - base) / std::abs(base));
        }
    }
    if (tag.kind == GroupKind::Gamma0) {
        // E_0(z) = E_∞(−1/(pz))
        const cplx wz = -1.0 / (static_cast<double>(tag.N) * z.z());
        const double a = eval(z, Cusp::Zero), b = eval(UpperHalfPoint(wz.real(), wz.imag()), Cusp::Infinity);
        v.invariance_deviation = std::max(v.invariance_deviation, std::abs(a - b) / std::abs(a));
    }
    v.ok = v.coefficient_deviation <= 1e-12 && v.invariance_deviation <= 1e-9;
    return v;
}

namespace detail {

/// Runs validate_lift once per group, throwing ValidationError on failure.
inline void ensure_lift_validated(const GroupTag& tag, const Precision& prec) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, bool> done;
    const auto key = std::make_pair(static_cast<int>(tag.kind), tag.N);
    {
        std::lock_guard<std::mutex> lock(mu);
        if (done.count(key)) return;
    }
    const auto v = validate_lift(tag, prec);
    if (!v.ok)
        throw ValidationError("lift for " + tag.name() + " failed validation (coefficients " +
                              std::to_string(v.coefficient_deviation) + ", invariance " +
                              std::to_string(v.invariance_deviation) + ")");
    std::lock_guard<std::mutex> lock(mu);
    done[key] = true;
}

}  // namespace detail

/// E(z, s) for Γ₀(N)⁺ from level-one series.
inline double parabolic_moonshine(int N, const UpperHalfPoint& z, double s, const Precision& prec = Precision{}) {
    detail::require_continuation_regime(s, "parabolic_moonshine");
    const auto tag = GroupTag::gamma0_plus(N);
    require_supported_group(tag);
    if (N == 1) return parabolic_continued_psl2z(z, s, prec);
    detail::ensure_lift_validated(tag, prec);
    return detail::moonshine_raw(N, z, s, prec);
}

/// E_∞(z, s) or E_0(z, s) for Γ₀(p).
inline double parabolic_gamma0p(int p, Cusp cusp, const UpperHalfPoint& z, double s,
                                const Precision& prec = Precision{}) {
    detail::require_continuation_regime(s, "parabolic_gamma0p");
    const auto tag = GroupTag::gamma0(p);
    require_supported_group(tag);
    detail::ensure_lift_validated(tag, prec);
    return detail::gamma0p_raw(p, cusp, z, s, prec);
}

/// Dispatch over group tags; `cusp` matters only for Γ₀(p).
inline double parabolic_continued(const GroupTag& tag, const UpperHalfPoint& z, double s,
                                  Cusp cusp = Cusp::Infinity, const Precision& prec = Precision{}) {
    switch (tag.kind) {
        case GroupKind::PSL2Z: return parabolic_continued_psl2z(z, s, prec);
        case GroupKind::Gamma0Plus: return parabolic_moonshine(tag.N, z, s, prec);
        case GroupKind::Gamma0: return parabolic_gamma0p(tag.N, cusp, z, s, prec);
    }
    throw DomainError("parabolic_continued: unsupported group");
}

/// Constant term coefficients (of y^s, y^{1−s}) at height y read off
/// numerically: the x-average is taken at two heights and the 2×2 system
/// solved. Independent of the lift coefficients.
inline std::pair<double, double> constant_term_numeric(const std::function<double(const UpperHalfPoint&)>& f,
                                                       double s, double y1 = 1.1, double y2 = 1.7, int M = 64) {
    auto avg = [&](double y) {
        KahanSum<> acc;
        for (int k = 0; k < M; ++k) acc.add(f(UpperHalfPoint((k + 0.5) / M, y)));
        return acc.value() / M;
    };
    const double a1 = avg(y1), a2 = avg(y2);
    const double m11 = std::pow(y1, s), m12 = std::pow(y1, 1 - s), m21 = std::pow(y2, s), m22 = std::pow(y2, 1 - s);
    const double det = m11 * m22 - m12 * m21;
    if (std::abs(det) < 1e-12) throw DomainError("constant_term_numeric: singular heights");
    return {(a1 * m22 - a2 * m12) / det, (m11 * a2 - m21 * a1) / det};
}

// ---------------------------------------------------------- direct sums

struct DirectSumResult {
    cplx value{};
    double tail = 0;  // estimated size of the omitted part (terms are positive at real s)
    std::size_t terms = 0;
};

namespace detail {
inline cplx pow_real_base(double base_log, cplx s) {
    if (s.imag() == 0.0) return std::exp(s.real() * base_log);
    return std::exp(s * base_log);
}
}  // namespace detail

/// PSL₂(ℤ) series as a box sum over coprime (c, d), c ≤ Cmax, |d| ≤ Cmax.
/// Tail: the box contains the disc |cz+d| ≤ R, R = Cmax·min(y, y/(y+|x|));
/// coprime lattice points outside it contribute ≈ (3/π)y^{s−1}R^{2−2s}/(s−1).
inline DirectSumResult parabolic_direct_psl2z(const UpperHalfPoint& z, cplx s, int Cmax) {
    detail::require_direct_regime(s, "parabolic_direct_psl2z");
    if (Cmax < 1) throw DomainError("parabolic_direct_psl2z: Cmax must be >= 1");
    const double x = z.x, y = z.y;
    const double ly = std::log(y);
    KahanSum<cplx> acc;
    DirectSumResult r;
    acc.add(detail::pow_real_base(ly, s));
    r.terms = 1;
    std::vector<char> mark;
    for (std::int64_t c = 1; c <= Cmax; ++c) {
        detail::coprime_range(-Cmax, Cmax, detail::primes_of(c), mark);
        KahanSum<cplx> row;
        const double cx = static_cast<double>(c) * x, cy2 = static_cast<double>(c) * static_cast<double>(c) * y * y;
        for (std::int64_t d = -Cmax; d <= Cmax; ++d) {
            if (!mark[static_cast<std::size_t>(d + Cmax)]) continue;
            const double u = cx + static_cast<double>(d);
            row.add(detail::pow_real_base(ly - std::log(u * u + cy2), s));
            ++r.terms;
        }
        acc.add(row.value());
    }
    r.value = acc.value();
    const double R = Cmax * std::min(y, y / (y + std::abs(x)));
    const double sr = s.real();
    r.tail = 3.0 / kPi * std::pow(y, sr - 1.0) * std::pow(R, 2.0 - 2.0 * sr) / (sr - 1.0);
    return r;
}

/// Direct coset sum Σ Im(γz)^s over Γ_∞\G with Im(γz) ≥ ymin, for
/// G = PSL₂(ℤ), Γ₀(N)⁺ (blockwise in the divisors e of N) or Γ₀(p) at the
/// cusp ∞. For Γ₀(p) at 0 the sum is taken at −1/(pz). Tail by
/// equidistribution of the orbit: ymin^{s−1}/(vol·(s−1)).
inline DirectSumResult parabolic_direct_group(const GroupTag& tag, Cusp cusp, const UpperHalfPoint& z, cplx s,
                                              double ymin = 1e-7) {
    detail::require_direct_regime(s, "parabolic_direct_group");
    require_supported_group(tag);
    if (!(ymin > 0 && ymin < 1)) throw DomainError("parabolic_direct_group: ymin must lie in (0, 1)");
    const auto g = group_descriptor(tag);
    UpperHalfPoint w = z;
    if (tag.kind == GroupKind::Gamma0 && cusp == Cusp::Zero) {
        const cplx wz = -1.0 / (static_cast<double>(tag.N) * z.z());
        w = UpperHalfPoint(wz.real(), z.y / (tag.N * std::norm(z.z())));
    }
    const int N = tag.kind == GroupKind::PSL2Z ? 1 : tag.N;
    const bool plus = tag.kind == GroupKind::Gamma0Plus;
    KahanSum<cplx> acc;
    DirectSumResult r;
    for_each_cusp_coset(w, ymin, N, plus, [&](std::int64_t, std::int64_t, std::int64_t, double im) {
        acc.add(detail::pow_real_base(std::log(im), s));
        ++r.terms;
    });
    r.value = acc.value();
    const double sr = s.real();
    r.tail = std::pow(ymin, sr - 1.0) / (g.volume() * (sr - 1.0));
    return r;
}

/// Expensive cross-check of a lift against its direct coset sum at real s > 1.
struct LiftCrossCheck {
    double continued = 0;
    double direct = 0;
    double tail = 0;
};

inline LiftCrossCheck lift_direct_crosscheck(const GroupTag& tag, Cusp cusp, const UpperHalfPoint& z, double s = 1.5,
                                             double ymin = 1e-7, const Precision& prec = Precision{}) {
    LiftCrossCheck c;
    c.continued = parabolic_continued(tag, z, s, cusp, prec);
    const auto d = parabolic_direct_group(tag, cusp, z, s, ymin);
    c.direct = d.value.real();
    c.tail = d.tail;
    return c;
}

// ------------------------------------------------------------- elliptic

struct EllipticResult {
    cplx value{};
    double tail = 0;
    std::size_t terms = 0;
    double min_distance = 0;  // smallest d(γz, w) met in the ball
};

/// Elliptic Eisenstein series (1/ord w)·Σ_{γ ∈ G} sinh(d(γz, w))^{−s} over the
/// ball cosh d ≤ coshR, for Re s ≥ 1.1. The orbit count inside the ball is
/// ≈ 2π(X−1)/vol, so the omitted part is ≈ 2π X^{1−Re s}/(vol·ord·(Re s−1)).
inline EllipticResult elliptic_direct(const EllipticPoint& w, const UpperHalfPoint& z, cplx s, double coshR) {
    detail::require_direct_regime(s, "elliptic_direct");
    if (!(coshR > 1.0)) throw DomainError("elliptic_direct: coshR must exceed 1");
    require_supported_group(w.tag);
    const auto g = group_descriptor(w.tag);
    const int N = w.tag.kind == GroupKind::PSL2Z ? 1 : w.tag.N;
    const bool plus = w.tag.kind == GroupKind::Gamma0Plus;
    const auto ball = enumerate_ball_group(z, w.point, coshR, N, plus);
    KahanSum<cplx> acc;
    EllipticResult r;
    r.min_distance = std::numeric_limits<double>::infinity();
    for (const auto& b : ball) {
        const auto gz = moebius_apply(GroupElement::from_integer(b.m, w.tag), z);
        const double dx = gz.x - w.point.x, dy = gz.y - w.point.y;
        const double u = (dx * dx + dy * dy) / (2.0 * gz.y * w.point.y);  // cosh d − 1
        r.min_distance = std::min(r.min_distance, 2.0 * std::asinh(std::sqrt(u / 2.0)));
        if (u <= 0) continue;
        const double lsinh2 = std::log(u) + std::log(u + 2.0);  // log sinh²
        acc.add(detail::pow_real_base(-0.5 * lsinh2, s));
        ++r.terms;
    }
    if (r.min_distance < 1e-3) throw DomainError("elliptic_direct: z lies within 1e-3 of the orbit of w");
    r.value = acc.value() / static_cast<double>(w.order);
    const double sr = s.real();
    r.tail = 2.0 * kPi * std::pow(coshR, 1.0 - sr) / (g.volume() * w.order * (sr - 1.0));
    return r;
}

}  // namespace kronecker
