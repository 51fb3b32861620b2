#pragma once

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "kronecker/catalog.hpp"
#include "kronecker/eisenstein.hpp"
#include "kronecker/kronecker_limits.hpp"
#include "kronecker/modular_forms.hpp"
#include "kronecker/numerics.hpp"
#include "kronecker/report.hpp"
#include "kronecker/weil.hpp"

namespace kronecker {

/// Recomputes pass flags with every tolerance multiplied by `scale`.
inline void apply_tol_scale(VerificationReport& rep, double scale) {
    if (scale == 1.0) return;
    for (auto& c : rep.checks) {
        // exact checks (tol 0) stay exact
        c.tol *= scale;
        const bool finite = std::isfinite(c.abs_err) && std::isfinite(c.rel_err);
        switch (c.mode) {
            case TolMode::Abs: c.pass = finite && c.abs_err <= c.tol; break;
            case TolMode::Rel: c.pass = finite && c.rel_err <= c.tol; break;
            case TolMode::Either: c.pass = finite && (c.abs_err <= c.tol || c.rel_err <= c.tol); break;
        }
    }
}

// ----------------------------------------------------------- s = 1

/// Laurent jet of the PSL₂(ℤ) series at s = 1 against the classical limit formula.
inline VerificationReport suite_kronecker_s1(const RunConfig& cfg) {
    VerificationReport rep;
    rep.suite = "kronecker-s1";
    const double C = 6.0 * (1.0 - 12.0 * zeta_prime_minus_one() - std::log(4.0 * kPi)) / kPi;
    struct P {
        UpperHalfPoint z;
        const char* label;
    };
    for (const auto& p : {P{UpperHalfPoint(0, 1), "i"}, P{UpperHalfPoint(0.5, 1.3), "1/2+1.3i"}, P{UpperHalfPoint(0, 2), "2i"}}) {
        const auto jet = laurent_jet(
            [&](double s) { return parabolic_continued_psl2z(p.z, s, cfg.precision); }, 1.0, 1, 3);
        rep.add(make_check(std::string("residue at z=") + p.label, jet.coeff(-1), 3.0 / kPi, 1e-9, TolMode::Abs,
                           "E(z,s) = (3/pi)/(s-1) + ..."));
        const double rhs = -std::log(std::exp(log_abs_delta(p.z.z(), cfg.precision)) * std::pow(p.z.y, 6)) / (2 * kPi) + C;
        rep.add(make_check(std::string("constant term at z=") + p.label, jet.coeff(0), rhs, 1e-6, TolMode::Abs,
                           "-(1/2pi)log(|Delta(z)|y^6) + 6(1-12zeta'(-1)-log 4pi)/pi"));
    }
    return rep;
}

// ----------------------------------------------------------- s = 0

/// E(z, ±h) − 1 ∓ h·log(|η_∞⁴(z)| y) against 5h² on one-cusp groups. The
/// s² coefficient grows with Im z (about 12.6 at 2i on Γ₀(6)⁺), so the sample
/// points stay at Im z ≤ 1 where it is below 5 for all three groups.
inline VerificationReport suite_kronecker_s0(const RunConfig& cfg) {
    VerificationReport rep;
    rep.suite = "kronecker-s0";
    const double h = 1e-3;
    for (const auto& tag : {GroupTag::psl2z(), GroupTag::gamma0_plus(2), GroupTag::gamma0_plus(6)}) {
        for (const auto& z : {UpperHalfPoint(0, 1), UpperHalfPoint(-0.3, 0.9), UpperHalfPoint(0.25, 0.6)}) {
            const double slope = 4.0 * log_abs_eta_infinity(tag, z.z(), cfg.precision) + std::log(z.y);
            char at[64];
            std::snprintf(at, sizeof at, "%s z=%.2f%+.2fi", tag.name().c_str(), z.x, z.y);
            for (double sg : {1.0, -1.0}) {
                const double E = parabolic_continued(tag, z, sg * h, Cusp::Infinity, cfg.precision);
                rep.add(make_bound_check(std::string(at) + (sg > 0 ? " s=+h" : " s=-h"),
                                         std::abs(E - 1.0 - sg * h * slope), 5.0 * h * h,
                                         "E(z,s) = 1 + s log(|eta_inf^4(z)| Im z) + O(s^2)"));
            }
            const auto jet = laurent_jet([&](double s) { return parabolic_continued(tag, z, s, Cusp::Infinity, cfg.precision); },
                                         0.0, 0, 4);
            rep.observe(std::string(at) + " s^2 coefficient", jet.coeff(2));
            rep.add(make_check(std::string(at) + " jet slope", jet.coeff(1), slope, 1e-7, TolMode::Abs,
                               "d/ds E(z,s)|_{s=0} = log(|eta_inf^4(z)| Im z)"));
        }
    }
    return rep;
}

// ------------------------------------------------------- scattering

inline VerificationReport suite_scattering(const RunConfig&) {
    VerificationReport rep;
    rep.suite = "scattering";
    for (int N : {2, 3, 5, 6}) {
        const auto tag = GroupTag::gamma0_plus(N);
        const auto jet = scattering_jets(tag, 1)[0][0];
        const double vol = group_descriptor(tag).volume();
        const std::string G = tag.name();
        rep.add(make_check(G + " beta_11 vs closed form", jet.coeff(0), beta11_moonshine_closed_form(N, true), 1e-8,
                           TolMode::Abs,
                           "b_N=-(1/vol)(sum (p-1)logp/(2(p+1)) - logN + 2log(4pi) + 24zeta'(-1) - 2)"));
        rep.add(make_check(G + " beta_11 vs closed form with +log N", jet.coeff(0), beta11_moonshine_closed_form(N, false),
                           1e-8, TolMode::Abs, "b_N with +log N", "sign of log N as produced by phi_N"));
        rep.add(make_check(G + " residue", jet.coeff(-1), 1.0 / vol, 1e-9, TolMode::Abs, "res_{s=1} phi = 1/vol"));
    }
    for (int p : {2, 3, 5}) {
        const auto tag = GroupTag::gamma0(p);
        const auto J = scattering_jets(tag, 1);
        const double vol = group_descriptor(tag).volume();
        const std::string G = tag.name();
        rep.add(make_check(G + " beta_11 vs closed form", J[0][0].coeff(0), beta11_gamma0p_closed_form(p), 1e-8,
                           TolMode::Abs, "beta_11=-(2/vol)(log(4pi p)+12zeta'(-1)-1+logp/(p^2-1))"));
        const char* lbl[2] = {"inf", "0"};
        for (std::size_t j = 0; j < 2; ++j)
            for (std::size_t k = 0; k < 2; ++k)
                rep.add(make_check(G + " residue [" + lbl[j] + "," + lbl[k] + "]", J[j][k].coeff(-1), 1.0 / vol, 1e-9,
                                   TolMode::Abs, "res_{s=1} phi_jk = 1/vol"));
    }
    {
        const auto jet = scattering_jets(GroupTag::psl2z(), 1)[0][0];
        rep.add(make_check("PSL2Z residue", jet.coeff(-1), 3.0 / kPi, 1e-9, TolMode::Abs, "res_{s=1} phi = 3/pi"));
    }
    return rep;
}

inline VerificationReport suite_lemma31(const RunConfig&) {
    VerificationReport rep;
    rep.suite = "lemma31";
    for (int p : {2, 3, 5}) rep.merge(lemma31_check(p));
    return rep;
}

// ----------------------------------------------------- limit constants

inline VerificationReport suite_constants(const RunConfig& cfg) {
    auto rep = constants_report(1e-8, cfg.precision);
    rep.suite = "constants";
    return rep;
}

inline VerificationReport suite_zeros(const RunConfig& cfg) { return zero_catalog_report(cfg.precision); }

inline VerificationReport suite_factorization(const RunConfig& cfg) { return factorization_report(cfg.precision); }

inline VerificationReport suite_invariance(const RunConfig& cfg) {
    VerificationReport rep;
    rep.suite = "invariance";
    const auto G1 = group_descriptor(GroupTag::psl2z());
    const auto G2 = group_descriptor(GroupTag::gamma0_plus(2));
    struct D {
        const char* name;
        const GroupDescriptor* g;
        double tol;
        const char* anchor;
    };
    for (const auto& d : {D{"E6_Delta", &G1, 1e-8, "|E6(z)||Delta(z)|^(-1/2)"},
                          D{"E4_2plus_Delta", &G2, 1e-8, "|E4^(2)(z)|^(1/2)|Delta(z)Delta(2z)|^(-1/12)"},
                          D{"E6_2plus_E4_2plus_Delta", &G2, 1e-7,
                            "|E6^(2)(z)||E4^(2)(z)|^(-1/2)|Delta(z)Delta(2z)|^(-1/6)"}}) {
        const auto pts = invariance_samples(*d.g, 8, cfg.seed);
        rep.add(make_bound_check(std::string(d.name) + " invariance on " + d.g->tag.name(),
                                 max_invariance_deviation(display_invariant(d.name, cfg.precision), pts), d.tol,
                                 d.anchor));
    }
    for (const auto& e : zero_catalog()) {
        const auto g = group_descriptor(e.tag);
        if (!g.one_cusp()) continue;
        rep.merge(invariance_suite(e.form, g, 8, cfg.seed, 1e-8, cfg.precision));
    }
    rep.merge(candidates_report(8, cfg.seed, 1e-8, cfg.precision));
    rep.suite = "invariance";
    return rep;
}

inline VerificationReport suite_examples6(const RunConfig& cfg) { return example65_66_check(1e-7, cfg.precision); }

// ------------------------------------------------ cross-representation

inline VerificationReport suite_cross_representation(const RunConfig& cfg) {
    VerificationReport rep;
    rep.suite = "cross-representation";
    struct P {
        UpperHalfPoint z;
        const char* label;
    };
    for (const auto& p : {P{UpperHalfPoint(0, 2), "2i"}, P{UpperHalfPoint(1.0 / 3, 1.2), "1/3+1.2i"}}) {
        const auto d = parabolic_direct_psl2z(p.z, 1.5, cfg.direct_cmax);
        const double c = parabolic_continued_psl2z(p.z, 1.5, cfg.precision);
        rep.add(make_check(std::string("PSL2Z direct vs continued at z=") + p.label, d.value.real(), c, 1e-3,
                           TolMode::Abs, "sum over Gamma_inf\\Gamma of Im(gz)^s = Fourier-Bessel expansion",
                           "Cmax=" + std::to_string(cfg.direct_cmax)));
        rep.observe(std::string("PSL2Z direct tail at z=") + p.label, d.tail);
    }
    const double s = 1.4;
    for (const auto& tag : {GroupTag::gamma0_plus(2), GroupTag::gamma0_plus(3), GroupTag::gamma0_plus(5),
                            GroupTag::gamma0_plus(6), GroupTag::gamma0(2), GroupTag::gamma0(3), GroupTag::gamma0(5)}) {
        const std::string G = tag.name();
        const auto v = validate_lift(tag, cfg.precision);
        rep.add(make_bound_check(G + " lift coefficients vs closed form", v.coefficient_deviation, 1e-7,
                                 "constant term y^s + phi y^(1-s) fixes the lift"));
        rep.add(make_bound_check(G + " lift invariance", v.invariance_deviation, 1e-7, "E(gz,s) = E(z,s)"));
        const auto M = scattering(tag, s);
        const std::vector<Cusp> cusps = tag.kind == GroupKind::Gamma0 ? std::vector<Cusp>{Cusp::Infinity, Cusp::Zero}
                                                                      : std::vector<Cusp>{Cusp::Infinity};
        for (std::size_t j = 0; j < cusps.size(); ++j) {
            const Cusp cu = cusps[j];
            const auto [cs, c1s] = constant_term_numeric(
                [&](const UpperHalfPoint& w) { return parabolic_continued(tag, w, s, cu, cfg.precision); }, s);
            const std::string tagc = G + " E_" + to_string(cu);
            rep.add(make_check(tagc + " constant term y^s", cs, j == 0 ? 1.0 : 0.0, 1e-7, TolMode::Abs,
                               "a_0(y) = delta y^s + phi y^(1-s)"));
            rep.add(make_check(tagc + " constant term y^(1-s)", c1s, M[j][0], 1e-7, TolMode::Abs,
                               "a_0(y) = delta y^s + phi y^(1-s)"));
        }
    }
    for (const auto& tag : {GroupTag::gamma0_plus(2), GroupTag::gamma0(3)}) {
        const auto x = lift_direct_crosscheck(tag, Cusp::Infinity, UpperHalfPoint(0.1, 0.9), 1.5, cfg.coset_ymin,
                                              cfg.precision);
        rep.add(make_check(tag.name() + " coset sum plus tail vs lift", x.direct + x.tail, x.continued, 1e-3,
                           TolMode::Abs, "sum over cosets of Im(gz)^s = lifted series"));
        rep.observe(tag.name() + " coset tail", x.tail);
    }
    return rep;
}

// ------------------------------------------------------------ elliptic

/// Σ over all det-1 integer matrices with entries bounded by `bound` (one per
/// ±) of sinh(d(γz, w))^{−s}/ord: no cosets, no ball.
inline double elliptic_entry_bound_sum(const EllipticPoint& w, const UpperHalfPoint& z, double s, int bound) {
    KahanSum<> acc;
    for (int a = -bound; a <= bound; ++a)
        for (int c = -bound; c <= bound; ++c) {
            if (c < 0 || (c == 0 && a <= 0)) continue;  // one of ±
            for (int b = -bound; b <= bound; ++b)
                for (int d = -bound; d <= bound; ++d) {
                    if (static_cast<long>(a) * d - static_cast<long>(b) * c != 1) continue;
                    const auto img = moebius_apply(IntMatrix{a, b, c, d}, z);
                    const double ch = cosh_distance(img, w.point);
                    acc.add(std::pow(ch * ch - 1.0, -s / 2.0));
                }
        }
    return acc.value() / w.order;
}

inline VerificationReport suite_elliptic(const RunConfig& cfg) {
    VerificationReport rep;
    rep.suite = "elliptic";
    const auto g = group_descriptor(GroupTag::psl2z());
    const auto& w = g.elliptic("i");
    const UpperHalfPoint z(0, 2);
    const auto r = elliptic_direct(w, z, 2.0, cfg.ball_coshR);
    const double brute = elliptic_entry_bound_sum(w, z, 2.0, 30);
    rep.add(make_check("ball sum vs entry-bound sum (w=i, z=2i, s=2)", r.value.real(), brute, r.tail, TolMode::Abs,
                       "E^ell_w(z,s) = sum sinh(d(gz,w))^(-s) / ord(w)", "tolerance = reported tail"));
    const auto T = elliptic_direct(w, moebius_apply(IntMatrix{1, 1, 0, 1}, z), 2.0, cfg.ball_coshR);
    const auto S = elliptic_direct(w, moebius_apply(IntMatrix{0, -1, 1, 0}, UpperHalfPoint(0.2, 1.7)), 2.0, cfg.ball_coshR);
    const auto S0 = elliptic_direct(w, UpperHalfPoint(0.2, 1.7), 2.0, cfg.ball_coshR);
    rep.add(make_check("invariance under z+1", T.value.real(), r.value.real(), 2 * r.tail, TolMode::Abs,
                       "E^ell_w(gz,s) = E^ell_w(z,s)", "tolerance = twice the tail"));
    rep.add(make_check("invariance under -1/z", S.value.real(), S0.value.real(), 2 * S0.tail, TolMode::Abs,
                       "E^ell_w(gz,s) = E^ell_w(z,s)", "tolerance = twice the tail"));
    const auto r2 = elliptic_direct(w, z, 2.0, 2 * cfg.ball_coshR);
    rep.add(make_check("truncation doubling", r2.value.real(), r.value.real(), r.tail, TolMode::Abs,
                       "E^ell_w(z,s) converges for Re s > 1", "tolerance = tail at the smaller radius"));
    rep.observe("ball terms", static_cast<double>(r.terms));
    rep.observe("ball tail", r.tail);
    for (const auto& [tag, pt] : {std::pair{GroupTag::gamma0_plus(2), "e2"}, std::pair{GroupTag::gamma0(2), "e"}}) {
        const auto G = group_descriptor(tag);
        const auto& we = G.elliptic(pt);
        const UpperHalfPoint u(0.13, 1.1);
        const auto a = elliptic_direct(we, u, 2.0, cfg.ball_coshR);
        for (std::size_t k = 0; k < G.generators.size(); ++k) {
            const auto b = elliptic_direct(we, moebius_apply(G.generators[k], u), 2.0, cfg.ball_coshR);
            rep.add(make_check(tag.name() + " " + pt + " invariance, generator " + std::to_string(k), b.value.real(),
                               a.value.real(), 2 * a.tail, TolMode::Abs, "E^ell_w(gz,s) = E^ell_w(z,s)",
                               "tolerance = twice the tail"));
        }
    }
    return rep;
}

inline VerificationReport suite_weil(const RunConfig& cfg, const WeilInstances& inst = default_weil_instances()) {
    return weil_suite(inst, cfg.weil_instances, cfg.seed, 1.0, cfg.precision);
}

// -------------------------------------------------------------- registry

struct SuiteEntry {
    std::string name;
    std::function<VerificationReport(const RunConfig&)> run;
};

inline const std::vector<SuiteEntry>& suite_registry() {
    static const std::vector<SuiteEntry> reg = {
        {"kronecker-s1", suite_kronecker_s1},
        {"kronecker-s0", suite_kronecker_s0},
        {"scattering", suite_scattering},
        {"lemma31", suite_lemma31},
        {"constants", suite_constants},
        {"zeros", suite_zeros},
        {"factorization", suite_factorization},
        {"invariance", suite_invariance},
        {"examples-6", suite_examples6},
        {"cross-representation", suite_cross_representation},
        {"elliptic", suite_elliptic},
        {"weil", [](const RunConfig& c) { return suite_weil(c); }},
    };
    return reg;
}

inline std::vector<std::string> suite_names() {
    std::vector<std::string> out;
    for (const auto& e : suite_registry()) out.push_back(e.name);
    out.emplace_back("all");
    return out;
}

/// Runs one suite (or "all", with check names prefixed by "suite/"), applying
/// the tolerance scale and stamping the configuration.
inline VerificationReport run_suite(const std::string& name, const RunConfig& cfg) {
    cfg.validate();
    VerificationReport rep;
    if (name == "all") {
        rep.suite = "all";
        for (const auto& e : suite_registry()) rep.merge(e.run(cfg), e.name + "/");
    } else {
        bool found = false;
        for (const auto& e : suite_registry())
            if (e.name == name) {
                rep = e.run(cfg);
                found = true;
            }
        if (!found) throw DomainError("unknown suite: " + name);
        rep.suite = name;
    }
    apply_tol_scale(rep, cfg.tol_scale);
    rep.config = cfg;
    rep.timestamp = utc_timestamp();
    return rep;
}

}  // namespace kronecker
