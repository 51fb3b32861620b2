#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "kronecker/hyperbolic.hpp"
#include "kronecker/rational.hpp"

namespace kronecker {

/// Elliptic fixed point together with a generator of its stabilizer.
struct EllipticPoint {
    std::string name;  // "i", "rho", "e1", ...
    UpperHalfPoint point;
    int order = 2;
    GroupTag tag;
    GroupElement stabilizer;
};

struct GroupDescriptor {
    GroupTag tag;
    int N = 1;
    Rational volume_over_pi;  // vol_hyp / π, exact
    int cusp_count = 1;
    std::vector<EllipticPoint> elliptic_points;
    std::vector<GroupElement> generators;

    double volume() const { return kPi * volume_over_pi.to_double(); }
    bool one_cusp() const { return cusp_count == 1; }

    const EllipticPoint& elliptic(const std::string& name) const {
        for (const auto& e : elliptic_points)
            if (e.name == name) return e;
        throw DomainError("no elliptic point '" + name + "' catalogued for " + tag.name());
    }
};

/// Atkin–Lehner matrix (e a', b; N, e) of determinant e, for e ‖ N.
inline IntMatrix atkin_lehner(int e, int N) {
    if (N % e != 0 || std::gcd(e, N / e) != 1) throw DomainError("atkin_lehner: e must be an exact divisor of N");
    if (e == N) return {0, -1, N, 0};
    // e a' − (N/e) b = 1
    auto [g, x, y] = detail::ext_gcd(e, N / e);
    (void)g;
    return {static_cast<std::int64_t>(e) * x, -y, N, e};
}

/// C_w = 2π/(ord(w)·vol), exact.
inline Rational c_w_exact(int order, const Rational& vol_over_pi) { return Rational(2) / (Rational(order) * vol_over_pi); }

inline GroupDescriptor group_descriptor(const GroupTag& tag) {
    GroupDescriptor g;
    g.tag = tag;
    g.N = tag.N;
    auto elem = [&](IntMatrix m) { return GroupElement::from_integer(m, tag); };
    auto ell = [&](std::string name, double x, double y, int ord, IntMatrix stab) {
        g.elliptic_points.push_back({std::move(name), UpperHalfPoint(x, y), ord, tag, elem(stab)});
    };

    switch (tag.kind) {
        case GroupKind::PSL2Z: {
            g.N = 1;
            g.volume_over_pi = Rational(1, 3);
            g.cusp_count = 1;
            ell("i", 0.0, 1.0, 2, {0, -1, 1, 0});
            ell("rho", 0.5, std::sqrt(3.0) / 2, 3, {1, -1, 1, 0});
            g.generators = {elem({1, 1, 0, 1}), elem({0, -1, 1, 0})};
            break;
        }
        case GroupKind::Gamma0Plus: {
            const int N = tag.N;
            if (!is_squarefree(N)) throw DomainError("Gamma0(N)+ needs square-free N");
            const auto ps = prime_factors(N);
            g.volume_over_pi = Rational(sigma_int(1, N), 3 * (std::int64_t{1} << ps.size()));
            g.cusp_count = 1;
            g.generators = {elem({1, 1, 0, 1}), elem({1, 0, N, 1})};
            for (int e : divisors(N))
                if (e > 1) g.generators.push_back(elem(atkin_lehner(e, N)));
            if (N == 2) {
                ell("e1", 0.0, 1.0 / std::sqrt(2.0), 2, {0, -1, 2, 0});
                ell("e2", 0.5, 0.5, 4, {2, -1, 2, 0});
            } else if (N == 5) {
                ell("e1", 0.0, 1.0 / std::sqrt(5.0), 2, {0, -1, 5, 0});
                ell("e2", 0.4, 0.2, 2, {2, -1, 5, -2});
                ell("e3", 0.5, 1.0 / (2.0 * std::sqrt(5.0)), 2, {5, -3, 10, -5});
            }
            for (const auto& e : g.elliptic_points) g.generators.push_back(e.stabilizer);
            break;
        }
        case GroupKind::Gamma0: {
            const int p = tag.N;
            if (!is_prime(p)) throw DomainError("Gamma0(p) is supported for prime p only");
            g.volume_over_pi = Rational(p + 1, 3);
            g.cusp_count = 2;
            g.generators = {elem({1, 1, 0, 1}), elem({1, 0, p, 1})};
            if (p == 2) ell("e", 0.5, 0.5, 2, {1, -1, 2, -1});
            if (p == 3) ell("e", 0.5, std::sqrt(3.0) / 6, 3, {1, -1, 3, -2});
            for (const auto& e : g.elliptic_points) g.generators.push_back(e.stabilizer);
            break;
        }
    }
    return g;
}

inline GroupDescriptor group_descriptor(const std::string& tag) { return group_descriptor(parse_group_tag(tag)); }

}  // namespace kronecker
