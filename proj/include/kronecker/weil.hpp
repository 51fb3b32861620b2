#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "kronecker/errors.hpp"
#include "kronecker/hyperbolic.hpp"
#include "kronecker/modular_forms.hpp"
#include "kronecker/numerics.hpp"
#include "kronecker/report.hpp"

namespace kronecker {

/// Minimum distance between a divisor point and the other function's support.
inline constexpr double kSupportSeparation = 1e-6;

/// Finite-point divisor Σ mᵢ(pᵢ) on the projective line.
struct Divisor {
    std::vector<std::pair<cplx, int>> support;

    int degree() const {
        int d = 0;
        for (const auto& [p, m] : support) d += m;
        return d;
    }

    /// Distinct points, nonzero multiplicities, degree zero.
    void validate() const {
        for (std::size_t a = 0; a < support.size(); ++a) {
            if (support[a].second == 0) throw DomainError("divisor: zero multiplicity");
            if (!std::isfinite(support[a].first.real()) || !std::isfinite(support[a].first.imag()))
                throw DomainError("divisor: non-finite point");
            for (std::size_t b = a + 1; b < support.size(); ++b)
                if (std::abs(support[a].first - support[b].first) < kSupportSeparation)
                    throw DomainError("divisor: repeated point");
        }
        if (degree() != 0) throw DomainError("divisor: degree must be zero");
    }

    Divisor operator+(const Divisor& o) const {
        Divisor r = *this;
        for (const auto& [p, m] : o.support) {
            bool merged = false;
            for (auto& [q, n] : r.support)
                if (std::abs(p - q) < kSupportSeparation) {
                    n += m;
                    merged = true;
                    break;
                }
            if (!merged) r.support.emplace_back(p, m);
        }
        std::erase_if(r.support, [](const auto& e) { return e.second == 0; });
        return r;
    }
};

/// scale·∏(x − pᵢ)^{mᵢ}, the function with divisor `divisor` (the point at
/// infinity carries −deg, which is zero here).
struct RationalFunction {
    Divisor divisor;
    cplx scale{1.0, 0.0};

    /// log f(x) on a branch; only exp of integer multiples is ever used.
    cplx log_eval(cplx x) const {
        KahanSum<cplx> acc;
        acc.add(std::log(scale));
        for (const auto& [p, m] : divisor.support) {
            const cplx d = x - p;
            if (std::abs(d) < kSupportSeparation) throw SupportCollision("rational function evaluated on its support");
            acc.add(static_cast<double>(m) * std::log(d));
        }
        return acc.value();
    }
    cplx operator()(cplx x) const { return std::exp(log_eval(x)); }
};

inline double min_support_distance(const Divisor& a, const Divisor& b) {
    double d = INFINITY;
    for (const auto& [p, m] : a.support)
        for (const auto& [q, n] : b.support) d = std::min(d, std::abs(p - q));
    return d;
}

/// ∏_{w ∈ D} f(w)^{m(w)}. D must be degree zero, so the scale of f drops out.
inline cplx pairing(const RationalFunction& f, const Divisor& D) {
    D.validate();
    if (min_support_distance(f.divisor, D) < kSupportSeparation) throw SupportCollision("pairing: supports intersect");
    RationalFunction unit = f;
    unit.scale = 1.0;
    KahanSum<cplx> acc;
    for (const auto& [w, m] : D.support) acc.add(static_cast<double>(m) * unit.log_eval(w));
    return std::exp(acc.value());
}

inline double complex_rel_diff(cplx a, cplx b) {
    const double den = std::max(std::abs(a), std::abs(b));
    return den > 0 ? std::abs(a - b) / den : 0.0;
}

/// Both pairings f(D_g) and g(D_f) and their agreement.
inline VerificationReport reciprocity_check(const RationalFunction& f, const RationalFunction& g, double tol = 1e-9,
                                            const std::string& label = "P1") {
    f.divisor.validate();
    g.divisor.validate();
    const cplx lhs = pairing(f, g.divisor);
    const cplx rhs = pairing(g, f.divisor);
    VerificationReport rep;
    rep.suite = "weil";
    Check c = make_check(label + " reciprocity", std::abs(lhs), std::abs(rhs), tol, TolMode::Rel,
                         "prod f(w_j)^(m_g(w_j)) = prod g(z_i)^(m_f(z_i))");
    c.abs_err = std::abs(lhs - rhs);
    c.rel_err = complex_rel_diff(lhs, rhs);
    c.pass = std::isfinite(c.rel_err) && c.rel_err <= tol;
    c.note = "complex difference; lhs/rhs shown as moduli";
    rep.add(c);
    rep.observe(label + " f(D_g) re", lhs.real());
    rep.observe(label + " f(D_g) im", lhs.imag());
    rep.observe(label + " g(D_f) re", rhs.real());
    rep.observe(label + " g(D_f) im", rhs.imag());
    return rep;
}

/// Seeded instance: two disjoint degree-zero divisors of `points` points each,
/// multiplicities in [−3, 3] \ {0}, points in the square [−2, 2]².
inline std::pair<RationalFunction, RationalFunction> random_weil_instance(std::mt19937_64& rng, int points = 6) {
    if (points < 2) throw DomainError("random_weil_instance: need at least two points");
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    std::uniform_int_distribution<int> mult(-3, 3);
    std::uniform_real_distribution<double> sc(0.5, 3.0);
    std::vector<cplx> used;
    auto fresh = [&] {
        for (;;) {
            const cplx p(u(rng), u(rng));
            bool ok = true;
            for (auto q : used) ok = ok && std::abs(p - q) > 0.05;
            if (ok) {
                used.push_back(p);
                return p;
            }
        }
    };
    auto make = [&] {
        Divisor D;
        int total = 0;
        for (int k = 0; k + 1 < points; ++k) {
            int m = 0;
            while (m == 0) m = mult(rng);
            D.support.emplace_back(fresh(), m);
            total += m;
        }
        // last multiplicity closes the degree; redraw the others if it would be 0 or too large
        if (total == 0 || std::abs(total) > 3) {
            used.resize(used.size() - D.support.size());
            return Divisor{};
        }
        D.support.emplace_back(fresh(), -total);
        return D;
    };
    Divisor Df, Dg;
    while (Df.support.empty()) Df = make();
    while (Dg.support.empty()) Dg = make();
    return {RationalFunction{Df, cplx(sc(rng), sc(rng))}, RationalFunction{Dg, cplx(sc(rng), -sc(rng))}};
}

/// `count` seeded random instances; one check per instance.
inline VerificationReport random_reciprocity_suite(int count, std::uint64_t seed, double tol = 1e-9) {
    if (count < 1) throw DomainError("random_reciprocity_suite: count must be positive");
    std::mt19937_64 rng(seed);
    VerificationReport rep;
    rep.suite = "weil";
    for (int k = 0; k < count; ++k) {
        const auto [f, g] = random_weil_instance(rng);
        char label[32];
        std::snprintf(label, sizeof label, "random %02d", k);
        rep.merge(reciprocity_check(f, g, tol, label));
    }
    return rep;
}

// ------------------------------------------------------ modular curve

/// Divisor on the modular curve X(1), points given in the upper half-plane.
struct ModularDivisor {
    std::vector<std::pair<UpperHalfPoint, int>> support;
};

/// The P¹ divisor Σ m(j(z)) of a modular divisor, after reduction of each
/// point. Distinct points must have distinct j (relative separation 1e-6).
inline Divisor j_image(const ModularDivisor& D, const Precision& prec = Precision{}) {
    Divisor out;
    for (const auto& [z, m] : D.support) {
        const auto r = reduce_psl2z(z).point;
        const cplx jz = j_invariant(r.z(), prec);
        for (const auto& [q, n] : out.support)
            if (std::abs(jz - q) < kSupportSeparation * std::max(1.0, std::abs(q)))
                throw SupportCollision("modular divisor: two points have the same j-value");
        out.support.emplace_back(jz, m);
    }
    out.validate();
    return out;
}

/// Relative form of the support test for j-values, which can be large.
inline void require_j_separation(const Divisor& a, const Divisor& b) {
    for (const auto& [p, m] : a.support)
        for (const auto& [q, n] : b.support)
            if (std::abs(p - q) < kSupportSeparation * std::max({1.0, std::abs(p), std::abs(q)}))
                throw SupportCollision("modular reciprocity: supports share a j-value");
}

/// Reciprocity for f = ∏(j − j(zᵢ))^{mᵢ} and g likewise, as functions on X(1).
inline VerificationReport modular_reciprocity_check(const ModularDivisor& f_spec, const ModularDivisor& g_spec,
                                                    double tol = 1e-8, const std::string& label = "X(1)",
                                                    const Precision& prec = Precision{}) {
    const Divisor Df = j_image(f_spec, prec), Dg = j_image(g_spec, prec);
    require_j_separation(Df, Dg);
    return reciprocity_check(RationalFunction{Df, 1.0}, RationalFunction{Dg, 1.0}, tol, label + " via j");
}

// --------------------------------------------------------- instances

struct ModularInstance {
    std::string name;
    ModularDivisor f, g;
};

/// The three modular-curve instances of the weil suite.
inline std::vector<ModularInstance> default_modular_instances() {
    const double r3 = std::sqrt(3.0) / 2;
    return {
        {"axis vs off-axis", {{{UpperHalfPoint(0, 2), 1}, {UpperHalfPoint(0, 3), -1}}},
         {{{UpperHalfPoint(0.5, 1.5), 1}, {UpperHalfPoint(0.25, 2), -1}}}},
        {"elliptic points", {{{UpperHalfPoint(0, 1), 2}, {UpperHalfPoint(0.3, 1.1), -1}, {UpperHalfPoint(-0.2, 1.7), -1}}},
         {{{UpperHalfPoint(0.5, r3), 1}, {UpperHalfPoint(0.1, 1.25), -1}}}},
        {"mixed multiplicities",
         {{{UpperHalfPoint(0.4, 1.05), 3}, {UpperHalfPoint(-0.45, 1.3), -1}, {UpperHalfPoint(0.05, 1.6), -2}}},
         {{{UpperHalfPoint(-0.1, 1.15), -2}, {UpperHalfPoint(0.35, 1.45), 1}, {UpperHalfPoint(0.2, 0.99), 1}}}},
    };
}

inline nlohmann::json to_json(const Divisor& D) {
    auto a = nlohmann::json::array();
    for (const auto& [p, m] : D.support) a.push_back({{"re", p.real()}, {"im", p.imag()}, {"mult", m}});
    return a;
}

inline Divisor divisor_from_json(const nlohmann::json& j) {
    Divisor D;
    for (const auto& e : j) D.support.emplace_back(cplx(e.at("re").get<double>(), e.at("im").get<double>()), e.at("mult").get<int>());
    return D;
}

inline ModularDivisor modular_divisor_from_json(const nlohmann::json& j) {
    ModularDivisor D;
    for (const auto& e : j)
        D.support.emplace_back(UpperHalfPoint(e.at("x").get<double>(), e.at("y").get<double>()), e.at("mult").get<int>());
    return D;
}

inline nlohmann::json to_json(const ModularDivisor& D) {
    auto a = nlohmann::json::array();
    for (const auto& [z, m] : D.support) a.push_back({{"x", z.x}, {"y", z.y}, {"mult", m}});
    return a;
}

/// Instance file: {"p1": [{"name", "f": {"divisor", "scale"}, "g": ...}], "modular": [{"name", "f", "g"}]}.
struct WeilInstances {
    std::vector<std::pair<std::string, std::pair<RationalFunction, RationalFunction>>> p1;
    std::vector<ModularInstance> modular;
};

inline RationalFunction rational_function_from_json(const nlohmann::json& j) {
    RationalFunction f{divisor_from_json(j.at("divisor")), 1.0};
    if (j.contains("scale")) f.scale = cplx(j["scale"].at(0).get<double>(), j["scale"].at(1).get<double>());
    return f;
}

inline WeilInstances weil_instances_from_json(const nlohmann::json& j) {
    WeilInstances w;
    for (const auto& e : j.value("p1", nlohmann::json::array()))
        w.p1.push_back({e.at("name").get<std::string>(),
                        {rational_function_from_json(e.at("f")), rational_function_from_json(e.at("g"))}});
    for (const auto& e : j.value("modular", nlohmann::json::array()))
        w.modular.push_back({e.at("name").get<std::string>(), modular_divisor_from_json(e.at("f")),
                             modular_divisor_from_json(e.at("g"))});
    return w;
}

/// The 4/3 instance: f = x/(x − 1), g = (x − 2)/(x − 3).
inline std::pair<RationalFunction, RationalFunction> four_thirds_instance() {
    return {RationalFunction{Divisor{{{0.0, 1}, {1.0, -1}}}, 1.0}, RationalFunction{Divisor{{{2.0, 1}, {3.0, -1}}}, 1.0}};
}

inline WeilInstances default_weil_instances() {
    WeilInstances w;
    w.p1.push_back({"four thirds", four_thirds_instance()});
    auto scaled = four_thirds_instance();
    scaled.first.scale = 7.3;
    w.p1.push_back({"four thirds, scale 7.3", scaled});
    w.modular = default_modular_instances();
    return w;
}

inline nlohmann::json to_json(const WeilInstances& w) {
    nlohmann::json j;
    auto fn = [](const RationalFunction& f) {
        return nlohmann::json{{"divisor", to_json(f.divisor)}, {"scale", {f.scale.real(), f.scale.imag()}}};
    };
    j["p1"] = nlohmann::json::array();
    for (const auto& [n, fg] : w.p1) j["p1"].push_back({{"name", n}, {"f", fn(fg.first)}, {"g", fn(fg.second)}});
    j["modular"] = nlohmann::json::array();
    for (const auto& m : w.modular) j["modular"].push_back({{"name", m.name}, {"f", to_json(m.f)}, {"g", to_json(m.g)}});
    return j;
}

/// Fixed instances, the exact 4/3 value, and `random_count` seeded random ones.
inline VerificationReport weil_suite(const WeilInstances& inst, int random_count, std::uint64_t seed,
                                     double tol_scale = 1.0, const Precision& prec = Precision{}) {
    VerificationReport rep;
    rep.suite = "weil";
    const auto [f, g] = four_thirds_instance();
    rep.add(make_check("four thirds exact value", pairing(f, g.divisor).real(), 4.0 / 3.0, 1e-15 * tol_scale,
                       TolMode::Abs, "f(2)/f(3) = 4/3 for f = x/(x-1)"));
    for (const auto& [n, fg] : inst.p1) rep.merge(reciprocity_check(fg.first, fg.second, 1e-12 * tol_scale, n));
    rep.merge(random_reciprocity_suite(random_count, seed, 1e-9 * tol_scale));
    for (const auto& m : inst.modular) rep.merge(modular_reciprocity_check(m.f, m.g, 1e-8 * tol_scale, m.name, prec));
    return rep;
}

}  // namespace kronecker
