#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numeric>
#include <string>
#include <tuple>
#include <vector>

#include "kronecker/errors.hpp"
#include "kronecker/numerics.hpp"

namespace kronecker {

using cplx = std::complex<double>;

/// Point z = x + iy of the upper half-plane.
struct UpperHalfPoint {
    double x = 0.0;
    double y = 1.0;

    UpperHalfPoint() = default;
    UpperHalfPoint(double x_, double y_) : x(x_), y(y_) {
        if (!(y > 0.0) || !std::isfinite(x) || !std::isfinite(y))
            throw DomainError("UpperHalfPoint: need finite x and y > 0");
    }
    explicit UpperHalfPoint(cplx z) : UpperHalfPoint(z.real(), z.imag()) {}

    cplx z() const { return {x, y}; }
};

// ------------------------------------------------------------ group tags

enum class GroupKind { PSL2Z, Gamma0, Gamma0Plus };

/// Which group a matrix or descriptor belongs to. For PSL2Z, N = 1.
struct GroupTag {
    GroupKind kind = GroupKind::PSL2Z;
    int N = 1;

    static GroupTag psl2z() { return {GroupKind::PSL2Z, 1}; }
    static GroupTag gamma0(int N) { return {GroupKind::Gamma0, N}; }
    static GroupTag gamma0_plus(int N) { return {GroupKind::Gamma0Plus, N}; }

    std::string name() const {
        switch (kind) {
            case GroupKind::PSL2Z: return "PSL2Z";
            case GroupKind::Gamma0: return "Gamma0(" + std::to_string(N) + ")";
            case GroupKind::Gamma0Plus: return "Gamma0(" + std::to_string(N) + ")+";
        }
        return "?";
    }
    friend bool operator==(const GroupTag& a, const GroupTag& b) {
        return a.kind == b.kind && (a.kind == GroupKind::PSL2Z || a.N == b.N);
    }
};

/// Parses "PSL2Z", "Gamma0(p)", "Gamma0(N)+" (whitespace not allowed).
inline GroupTag parse_group_tag(const std::string& s) {
    if (s == "PSL2Z" || s == "Gamma0(1)+" || s == "Gamma0(1)") return GroupTag::psl2z();
    const std::string pre = "Gamma0(";
    if (s.rfind(pre, 0) != 0) throw DomainError("unsupported group tag: " + s);
    const auto close = s.find(')');
    if (close == std::string::npos) throw DomainError("unsupported group tag: " + s);
    int N = 0;
    try {
        N = std::stoi(s.substr(pre.size(), close - pre.size()));
    } catch (const std::exception&) {
        throw DomainError("unsupported group tag: " + s);
    }
    if (N < 1) throw DomainError("unsupported group tag: " + s);
    const std::string rest = s.substr(close + 1);
    if (rest == "+") return N == 1 ? GroupTag::psl2z() : GroupTag::gamma0_plus(N);
    if (rest.empty()) return N == 1 ? GroupTag::psl2z() : GroupTag::gamma0(N);
    throw DomainError("unsupported group tag: " + s);
}

// ------------------------------------------------------- small arithmetic

inline std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

inline std::vector<int> prime_factors(int n) {
    std::vector<int> ps;
    for (int p = 2; static_cast<long long>(p) * p <= n; ++p) {
        if (n % p == 0) {
            ps.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) ps.push_back(n);
    return ps;
}

inline bool is_squarefree(int n) {
    if (n < 1) return false;
    for (int p = 2; static_cast<long long>(p) * p <= n; ++p)
        if (n % (p * p) == 0) return false;
    return true;
}

inline bool is_prime(int n) {
    if (n < 2) return false;
    for (int p = 2; static_cast<long long>(p) * p <= n; ++p)
        if (n % p == 0) return false;
    return true;
}

inline std::vector<int> divisors(int n) {
    std::vector<int> ds;
    for (int d = 1; d <= n; ++d)
        if (n % d == 0) ds.push_back(d);
    return ds;
}

/// σ_k(n) = Σ_{d|n} d^k, exact for small arguments.
inline std::int64_t sigma_int(int k, int n) {
    std::int64_t acc = 0;
    for (int d : divisors(n)) {
        std::int64_t p = 1;
        for (int i = 0; i < k; ++i) p *= d;
        acc += p;
    }
    return acc;
}

inline int moebius_mu(int n) {
    if (!is_squarefree(n)) return 0;
    return (prime_factors(n).size() % 2 == 0) ? 1 : -1;
}

inline int euler_phi(int n) {
    int r = n;
    for (int p : prime_factors(n)) r = r / p * (p - 1);
    return r;
}

// -------------------------------------------------------------- matrices

/// Integer 2×2 matrix (a b; c d).
struct IntMatrix {
    std::int64_t a = 1, b = 0, c = 0, d = 1;

    std::int64_t det() const { return a * d - b * c; }
    friend IntMatrix operator*(const IntMatrix& m, const IntMatrix& n) {
        return {m.a * n.a + m.b * n.c, m.a * n.b + m.b * n.d, m.c * n.a + m.d * n.c, m.c * n.b + m.d * n.d};
    }
    friend bool operator==(const IntMatrix& m, const IntMatrix& n) {
        return m.a == n.a && m.b == n.b && m.c == n.c && m.d == n.d;
    }
    /// Sign representative: c > 0, or c = 0 and d > 0.
    IntMatrix normalized() const {
        if (c < 0 || (c == 0 && d < 0)) return {-a, -b, -c, -d};
        return *this;
    }
    auto key() const { return std::tuple(a, b, c, d); }
};

/// Real matrix of determinant one acting on H, tagged with its group.
/// Atkin–Lehner type elements are stored as e^{-1/2}·(integer matrix).
struct GroupElement {
    double a = 1, b = 0, c = 0, d = 1;
    GroupTag tag = GroupTag::psl2z();
    IntMatrix integer{};  // unscaled integer matrix
    std::int64_t e = 1;   // its determinant

    static GroupElement from_integer(const IntMatrix& m, GroupTag tag = GroupTag::psl2z()) {
        const std::int64_t det = m.det();
        if (det <= 0) throw DomainError("GroupElement: determinant must be positive");
        const IntMatrix n = m.normalized();
        const double s = 1.0 / std::sqrt(static_cast<double>(det));
        GroupElement g;
        g.a = n.a * s;
        g.b = n.b * s;
        g.c = n.c * s;
        g.d = n.d * s;
        g.tag = tag;
        g.integer = n;
        g.e = det;
        return g;
    }
    static GroupElement identity(GroupTag tag = GroupTag::psl2z()) { return from_integer({1, 0, 0, 1}, tag); }

    double det() const { return a * d - b * c; }
    /// cz + d automorphy factor.
    cplx j(cplx z) const { return c * z + d; }
};

inline UpperHalfPoint moebius_apply(const GroupElement& g, const UpperHalfPoint& z) {
    const cplx w = (g.a * z.z() + g.b) / (g.c * z.z() + g.d);
    // imaginary part from y/|cz+d|² keeps full relative accuracy
    return {w.real(), z.y / std::norm(g.c * z.z() + g.d)};
}

inline UpperHalfPoint moebius_apply(const IntMatrix& m, const UpperHalfPoint& z) {
    return moebius_apply(GroupElement::from_integer(m), z);
}

/// cosh of the hyperbolic distance: 1 + |z−w|²/(2 Im z Im w).
inline double cosh_distance(const UpperHalfPoint& z, const UpperHalfPoint& w) {
    const double dx = z.x - w.x, dy = z.y - w.y;
    return 1.0 + (dx * dx + dy * dy) / (2.0 * z.y * w.y);
}

inline double hyp_distance(const UpperHalfPoint& z, const UpperHalfPoint& w) {
    // 2 asinh(|z−w| / (2√(y y'))) is the cancellation-free form of arccosh(...)
    const double dx = z.x - w.x, dy = z.y - w.y;
    return 2.0 * std::asinh(std::sqrt(dx * dx + dy * dy) / (2.0 * std::sqrt(z.y * w.y)));
}

// -------------------------------------------------------- reduction

struct Reduction {
    UpperHalfPoint point;
    GroupElement element;  // element·z = point
};

/// Moves z into the standard fundamental domain |Re z| ≤ 1/2, |z| ≥ 1.
inline Reduction reduce_psl2z(const UpperHalfPoint& z) {
    IntMatrix g{1, 0, 0, 1};
    double x = z.x, y = z.y;
    for (int it = 0; it < 10000; ++it) {
        const double n = std::round(x);
        if (n != 0.0) {
            const auto k = static_cast<std::int64_t>(n);
            x -= n;
            g = IntMatrix{1, -k, 0, 1} * g;
        }
        const double r2 = x * x + y * y;
        if (r2 < 1.0 - 1e-15) {
            x = -x / r2;
            y = y / r2;
            g = IntMatrix{0, -1, 1, 0} * g;
            continue;
        }
        // recompute from the exact matrix to avoid drift
        const auto ge = GroupElement::from_integer(g);
        const auto p = moebius_apply(ge, z);
        return {UpperHalfPoint(p.x, p.y), ge};
    }
    throw ConvergenceError("reduce_psl2z: iteration cap exceeded");
}

// -------------------------------------------------------- membership

/// Membership of an integer matrix with determinant e in Γ₀(N)⁺ per the
/// Atkin–Lehner description: ad − bc = e, e | N, e | a, e | d, N | c.
inline bool is_member_gamma0N_plus(const IntMatrix& m, std::int64_t e, std::int64_t N) {
    if (e <= 0 || N <= 0) return false;
    if (!is_squarefree(static_cast<int>(N))) return false;
    if (N % e != 0) return false;
    if (m.det() != e) return false;
    return m.a % e == 0 && m.d % e == 0 && m.c % N == 0;
}

/// Membership in Γ₀(N) (determinant one, N | c).
inline bool is_member_gamma0N(const IntMatrix& m, std::int64_t N) { return m.det() == 1 && m.c % N == 0; }

// ---------------------------------------------------- ball enumeration

/// Matrix of one of the integer blocks of Γ₀(N)⁺ with determinant e.
struct BlockElement {
    IntMatrix m;
    std::int64_t e = 1;
};

namespace detail {

/// Integers t in [lo, hi] coprime to every prime in `ps`, via a local sieve.
inline void coprime_range(std::int64_t lo, std::int64_t hi, const std::vector<std::int64_t>& ps,
                          std::vector<char>& mark) {
    mark.assign(static_cast<std::size_t>(std::max<std::int64_t>(0, hi - lo + 1)), 1);
    for (auto p : ps) {
        std::int64_t start = lo % p == 0 ? lo : lo + (p - ((lo % p) + p) % p);
        for (std::int64_t t = start; t <= hi; t += p) mark[static_cast<std::size_t>(t - lo)] = 0;
    }
}

inline std::vector<std::int64_t> primes_of(std::int64_t n) {
    std::vector<std::int64_t> ps;
    if (n < 0) n = -n;
    for (std::int64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            ps.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) ps.push_back(n);
    return ps;
}

/// Extended Euclid: returns (g, x, y) with ax + by = g.
inline std::tuple<std::int64_t, std::int64_t, std::int64_t> ext_gcd(std::int64_t a, std::int64_t b) {
    std::int64_t x0 = 1, y0 = 0, x1 = 0, y1 = 1;
    while (b != 0) {
        const std::int64_t q = a / b;
        std::tie(a, b) = std::make_tuple(b, a - q * b);
        std::tie(x0, x1) = std::make_tuple(x1, x0 - q * x1);
        std::tie(y0, y1) = std::make_tuple(y1, y0 - q * y1);
    }
    return {a, x0, y0};
}

}  // namespace detail

/// Visits every bottom row of Γ_∞\G for G = Γ₀(N)⁺ (or Γ₀(N) when
/// `plus` is false, or PSL₂(ℤ) when N = 1) whose coset has Im(γz) ≥ ymin.
/// Rows are (N c', e d') with gcd(e d', (N/e) c') = 1 and Im(γz) = e·y/|N c' z + e d'|².
/// The callback receives (e, C = N c', D = e d', Im γz) in canonical order
/// (e ascending, then c', then d').
template <class F>
void for_each_cusp_coset(const UpperHalfPoint& z, double ymin, int N, bool plus, F&& visit) {
    const std::vector<int> es = plus ? divisors(N) : std::vector<int>{1};
    for (int e : es) {
        const std::int64_t Ne = N / e;
        // identity-type row (c' = 0) exists only for e = 1: (0, 1)
        if (e == 1 && z.y >= ymin) visit(std::int64_t{1}, std::int64_t{0}, std::int64_t{1}, z.y);
        // |N c' z + e d'|² ≤ e y / ymin
        const double R2 = e * z.y / ymin;
        const auto cmax = static_cast<std::int64_t>(std::floor(std::sqrt(R2) / (N * z.y)));
        std::vector<char> mark;
        for (std::int64_t cp = 1; cp <= cmax; ++cp) {
            if (std::gcd(static_cast<std::int64_t>(e), cp) != 1) continue;
            const double C = static_cast<double>(N * cp);
            const double rem = R2 - C * C * z.y * z.y;
            if (rem < 0) continue;
            const double half = std::sqrt(rem);
            // e d' ∈ [−C x − half, −C x + half]
            const auto dlo = static_cast<std::int64_t>(std::ceil((-C * z.x - half) / e));
            const auto dhi = static_cast<std::int64_t>(std::floor((-C * z.x + half) / e));
            if (dhi < dlo) continue;
            detail::coprime_range(dlo, dhi, detail::primes_of(Ne * cp), mark);
            for (std::int64_t dp = dlo; dp <= dhi; ++dp) {
                if (!mark[static_cast<std::size_t>(dp - dlo)]) continue;
                const double D = static_cast<double>(e * dp);
                const double den = (C * z.x + D) * (C * z.x + D) + C * C * z.y * z.y;
                const double im = e * z.y / den;
                if (im >= ymin) visit(static_cast<std::int64_t>(e), N * cp, e * dp, im);
            }
        }
    }
}

/// Elements γ of Γ₀(N)⁺ (blocks per e | N), Γ₀(N) (`plus` false) or PSL₂(ℤ)
/// (N = 1) with cosh d(γz, w) ≤ coshR.
///
/// Bound: cosh d(γz, w) ≥ (Im γz / Im w + Im w / Im γz)/2, so every γ in the
/// ball has Im γz ≥ Im w / (X + √(X² − 1)), X = coshR. That limits the bottom
/// row to finitely many cosets of Γ_∞; inside a coset γz moves by integer
/// translations and the admissible translations form an explicit interval.
/// Output is sorted lexicographically on (e, a, b, c, d).
inline std::vector<BlockElement> enumerate_ball_group(const UpperHalfPoint& z, const UpperHalfPoint& w,
                                                      double coshR, int N, bool plus,
                                                      std::size_t guard = 10'000'000) {
    if (!(coshR >= 1.0)) throw DomainError("enumerate_ball: coshR must be >= 1");
    const double X = coshR;
    const double ymin = w.y / (X + std::sqrt(X * X - 1.0));
    std::vector<BlockElement> out;
    for_each_cusp_coset(z, ymin * (1 - 1e-12), N, plus,
                        [&](std::int64_t e, std::int64_t C, std::int64_t D, double im) {
        // top row (A, B) with A D − B C = e, e | A; A = e a'
        std::int64_t A0, B0;
        if (C == 0) {
            A0 = 1;
            B0 = 0;  // D = 1, e = 1
        } else {
            // e a' D' ... solve a'·D − (B)(C/e)... use: (e a') D − B C = e  ⇔  a' D − B (C/e) = 1
            // with C = N c', D = e d': a' e d' − B (N/e) c' = 1
            const std::int64_t u = D, v = C / e;  // a'·u − B·v = 1
            auto [g, xg, yg] = detail::ext_gcd(u, v);
            if (g != 1 && g != -1) return;  // cannot happen for admissible rows
            A0 = e * (xg * g);
            B0 = -(yg * g);
        }
        // base point γ0 z, then γ = T^k γ0 gives γz = γ0 z + k
        const cplx zz = z.z();
        const cplx g0z = (static_cast<double>(A0) * zz + static_cast<double>(B0)) /
                         (static_cast<double>(C) * zz + static_cast<double>(D));
        // (x0 + k − xw)² ≤ 2 y0 yw (X − 1) − (y0 − yw)²
        const double rhs = 2.0 * im * w.y * (X - 1.0) - (im - w.y) * (im - w.y);
        if (rhs < -1e-12 * (1 + std::abs(2.0 * im * w.y * X))) return;
        const double half = std::sqrt(std::max(rhs, 0.0));
        const auto klo = static_cast<std::int64_t>(std::ceil(w.x - g0z.real() - half - 1e-9));
        const auto khi = static_cast<std::int64_t>(std::floor(w.x - g0z.real() + half + 1e-9));
        for (std::int64_t k = klo; k <= khi; ++k) {
            const IntMatrix m = IntMatrix{A0 + k * C, B0 + k * D, C, D}.normalized();
            const UpperHalfPoint p(g0z.real() + static_cast<double>(k), im);
            if (cosh_distance(p, w) <= X * (1 + 1e-12)) {
                out.push_back({m, e});
                if (out.size() > guard) throw ResourceError("enumerate_ball: memory guard exceeded");
            }
        }
    });
    std::sort(out.begin(), out.end(), [](const BlockElement& p, const BlockElement& q) {
        return std::tuple(p.e, p.m.a, p.m.b, p.m.c, p.m.d) < std::tuple(q.e, q.m.a, q.m.b, q.m.c, q.m.d);
    });
    return out;
}

/// PSL₂(ℤ) ball: every γ (one per ± pair) with cosh d(γz, w) ≤ coshR.
inline std::vector<GroupElement> enumerate_ball(const UpperHalfPoint& z, const UpperHalfPoint& w, double coshR) {
    const auto blocks = enumerate_ball_group(z, w, coshR, 1, false);
    std::vector<GroupElement> out;
    out.reserve(blocks.size());
    for (const auto& b : blocks) out.push_back(GroupElement::from_integer(b.m));
    return out;
}

}  // namespace kronecker
