#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

#include "kronecker/catalog.hpp"
#include "kronecker/hyperbolic.hpp"

using namespace kronecker;

namespace {

const IntMatrix kS{0, -1, 1, 0};
const IntMatrix kT{1, 1, 0, 1};

std::set<std::tuple<std::int64_t, std::int64_t, std::int64_t, std::int64_t>> brute_ball(
    const UpperHalfPoint& z, const UpperHalfPoint& w, double X, int bound) {
    std::set<std::tuple<std::int64_t, std::int64_t, std::int64_t, std::int64_t>> out;
    for (int a = -bound; a <= bound; ++a)
        for (int b = -bound; b <= bound; ++b)
            for (int c = -bound; c <= bound; ++c)
                for (int d = -bound; d <= bound; ++d) {
                    if (a * d - b * c != 1) continue;
                    const IntMatrix m = IntMatrix{a, b, c, d}.normalized();
                    const cplx zz = z.z();
                    const cplx den = static_cast<double>(m.c) * zz + static_cast<double>(m.d);
                    const cplx gz = (static_cast<double>(m.a) * zz + static_cast<double>(m.b)) / den;
                    const double x2 = 1.0 + std::norm(gz - w.z()) / (2.0 * w.y * gz.imag());
                    if (x2 <= X) out.insert(m.key());
                }
    return out;
}

}  // namespace

TEST(UpperHalfPoint, RejectsLowerHalf) {
    EXPECT_THROW(UpperHalfPoint(0.0, 0.0), DomainError);
    EXPECT_THROW(UpperHalfPoint(0.0, -1.0), DomainError);
    EXPECT_NO_THROW(UpperHalfPoint(3.0, 1e-9));
}

TEST(Moebius, Examples) {
    const auto id = GroupElement::identity();
    const UpperHalfPoint z(0.3, 0.7);
    const auto p = moebius_apply(id, z);
    EXPECT_DOUBLE_EQ(p.x, z.x);
    EXPECT_DOUBLE_EQ(p.y, z.y);
    const auto q = moebius_apply(kT, UpperHalfPoint(0, 1));
    EXPECT_NEAR(q.x, 1.0, 1e-15);
    EXPECT_NEAR(q.y, 1.0, 1e-15);
    const auto r = moebius_apply(kS, UpperHalfPoint(0, 2));
    EXPECT_NEAR(r.x, 0.0, 1e-15);
    EXPECT_NEAR(r.y, 0.5, 1e-15);
}

TEST(GroupElementTest, NormalizesSignAndScalesDeterminant) {
    const auto g = GroupElement::from_integer({0, 1, -1, 0});
    EXPECT_EQ(g.integer.c, 1);
    EXPECT_NEAR(g.det(), 1.0, 1e-12);
    const auto w = GroupElement::from_integer({0, -1, 2, 0}, GroupTag::gamma0_plus(2));
    EXPECT_NEAR(w.det(), 1.0, 1e-12);
    EXPECT_NEAR(w.c, std::sqrt(2.0), 1e-15);
    EXPECT_THROW(GroupElement::from_integer({1, 0, 0, 0}), DomainError);
}

TEST(Distance, Examples) {
    const UpperHalfPoint i(0, 1);
    EXPECT_EQ(hyp_distance(i, i), 0.0);
    EXPECT_NEAR(hyp_distance(i, UpperHalfPoint(0, 4)), std::log(4.0), 1e-14);
    // direct cosh formula: |z−w|² = 1, 2·1·1 = 2
    EXPECT_NEAR(hyp_distance(i, UpperHalfPoint(1, 1)), std::acosh(1.0 + 1.0 / 2.0), 1e-14);
    EXPECT_NEAR(hyp_distance(UpperHalfPoint(0.2, 0.3), UpperHalfPoint(-1, 2)),
                hyp_distance(UpperHalfPoint(-1, 2), UpperHalfPoint(0.2, 0.3)), 1e-15);
}

TEST(Distance, Invariance) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> ux(-2, 2), uy(0.2, 3);
    std::uniform_int_distribution<int> word(0, 2);
    for (int trial = 0; trial < 50; ++trial) {
        IntMatrix g{1, 0, 0, 1};
        for (int k = 0; k < 8; ++k) {
            const int w = word(rng);
            g = g * (w == 0 ? kS : (w == 1 ? kT : IntMatrix{1, -1, 0, 1}));
        }
        const UpperHalfPoint z(ux(rng), uy(rng)), w(ux(rng), uy(rng));
        const double d0 = hyp_distance(z, w);
        const double d1 = hyp_distance(moebius_apply(g, z), moebius_apply(g, w));
        EXPECT_NEAR(d0, d1, 1e-12 * std::max(1.0, d0));
    }
}

TEST(Reduction, Examples) {
    const auto r = reduce_psl2z(UpperHalfPoint(0, 1));
    EXPECT_EQ(r.element.integer, (IntMatrix{1, 0, 0, 1}));
    EXPECT_NEAR(r.point.y, 1.0, 1e-15);

    const auto r2 = reduce_psl2z(UpperHalfPoint(5.3, 0.9));
    EXPECT_LE(std::abs(r2.point.x), 0.5 + 1e-12);
    EXPECT_GE(std::norm(r2.point.z()), 1.0 - 1e-12);
}

TEST(Reduction, BruteForceWords) {
    // search all words of length <= 12 in S, T, T^{-1} for the largest Im
    const UpperHalfPoint z(0.1, 0.05);
    const IntMatrix gens[3] = {kS, kT, IntMatrix{1, -1, 0, 1}};
    double best = z.y;
    std::vector<IntMatrix> layer{IntMatrix{1, 0, 0, 1}};
    for (int len = 1; len <= 12; ++len) {
        std::vector<IntMatrix> next;
        next.reserve(layer.size() * 3);
        for (const auto& m : layer)
            for (const auto& g : gens) {
                const IntMatrix n = g * m;
                next.push_back(n);
                best = std::max(best, moebius_apply(n, z).y);
            }
        layer.swap(next);
    }
    const auto r = reduce_psl2z(z);
    EXPECT_NEAR(r.point.y, best, 1e-12);
    const auto chk = moebius_apply(r.element, z);
    EXPECT_NEAR(chk.x, r.point.x, 1e-12);
    EXPECT_LE(std::abs(r.point.x), 0.5 + 1e-12);
    EXPECT_GE(std::norm(r.point.z()), 1.0 - 1e-12);
}

TEST(Reduction, Idempotent) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ux(-3, 3), uy(0.01, 2);
    for (int t = 0; t < 40; ++t) {
        const auto r = reduce_psl2z(UpperHalfPoint(ux(rng), uy(rng)));
        const auto again = reduce_psl2z(r.point);
        EXPECT_EQ(again.element.integer, (IntMatrix{1, 0, 0, 1}));
        EXPECT_DOUBLE_EQ(again.point.x, r.point.x);
        EXPECT_DOUBLE_EQ(again.point.y, r.point.y);
    }
}

TEST(Ball, TrivialExamples) {
    const auto b1 = enumerate_ball(UpperHalfPoint(0, 2), UpperHalfPoint(0, 2), 1.0);
    ASSERT_EQ(b1.size(), 1u);
    EXPECT_EQ(b1[0].integer, (IntMatrix{1, 0, 0, 1}));
    const auto b2 = enumerate_ball(UpperHalfPoint(0, 1), UpperHalfPoint(0, 1), 1.0);
    ASSERT_EQ(b2.size(), 2u);
    std::set<std::tuple<std::int64_t, std::int64_t, std::int64_t, std::int64_t>> got;
    for (const auto& g : b2) got.insert(g.integer.key());
    EXPECT_TRUE(got.count(IntMatrix{1, 0, 0, 1}.key()));
    EXPECT_TRUE(got.count(kS.normalized().key()));
}

TEST(Ball, BruteForceOracle) {
    const UpperHalfPoint z(0, 2), w(0, 1);
    for (double X : {3.0, 20.0, 90.0}) {
        const auto ball = enumerate_ball(z, w, X);
        std::set<std::tuple<std::int64_t, std::int64_t, std::int64_t, std::int64_t>> got;
        for (const auto& g : ball) got.insert(g.integer.key());
        EXPECT_EQ(got.size(), ball.size());
        EXPECT_EQ(got, brute_ball(z, w, X, 20)) << X;
        for (const auto& g : ball) EXPECT_LE(cosh_distance(moebius_apply(g, z), w), X * (1 + 1e-12));
    }
}

TEST(Ball, OffAxisBruteForce) {
    const UpperHalfPoint z(0.31, 0.77), w(-0.2, 1.4);
    const auto ball = enumerate_ball(z, w, 15.0);
    std::set<std::tuple<std::int64_t, std::int64_t, std::int64_t, std::int64_t>> got;
    for (const auto& g : ball) got.insert(g.integer.key());
    EXPECT_EQ(got, brute_ball(z, w, 15.0, 20));
}

TEST(Ball, Monotone) {
    const UpperHalfPoint z(0.1, 1.3), w(0, 1);
    const auto small = enumerate_ball(z, w, 10.0);
    const auto big = enumerate_ball(z, w, 40.0);
    std::set<std::tuple<std::int64_t, std::int64_t, std::int64_t, std::int64_t>> sb;
    for (const auto& g : big) sb.insert(g.integer.key());
    for (const auto& g : small) EXPECT_TRUE(sb.count(g.integer.key()));
    EXPECT_GT(big.size(), small.size());
}

TEST(Ball, CanonicalOrderAndGuard) {
    const auto ball = enumerate_ball(UpperHalfPoint(0, 2), UpperHalfPoint(0, 1), 50.0);
    for (std::size_t k = 1; k < ball.size(); ++k) EXPECT_LT(ball[k - 1].integer.key(), ball[k].integer.key());
    EXPECT_THROW(enumerate_ball_group(UpperHalfPoint(0, 2), UpperHalfPoint(0, 1), 1e4, 1, false, 100),
                 ResourceError);
}

TEST(Ball, MoonshineBlocksAreMembers) {
    const UpperHalfPoint z(0.1, 0.9), w(0, 1 / std::sqrt(2.0));
    const auto ball = enumerate_ball_group(z, w, 30.0, 2, true);
    int with_e2 = 0;
    for (const auto& b : ball) {
        EXPECT_TRUE(is_member_gamma0N_plus(b.m, b.e, 2));
        with_e2 += (b.e == 2);
        const auto g = GroupElement::from_integer(b.m, GroupTag::gamma0_plus(2));
        EXPECT_LE(cosh_distance(moebius_apply(g, z), w), 30.0 * (1 + 1e-12));
    }
    EXPECT_GT(with_e2, 0);
    // brute force over both blocks with entries <= 20
    std::size_t brute = 0;
    for (int e : {1, 2})
        for (int a = -20; a <= 20; ++a)
            for (int b = -20; b <= 20; ++b)
                for (int c = 0; c <= 20; ++c)
                    for (int d = -20; d <= 20; ++d) {
                        const IntMatrix m{a, b, c, d};
                        if (c == 0 && d <= 0) continue;
                        if (!is_member_gamma0N_plus(m, e, 2)) continue;
                        const auto g = GroupElement::from_integer(m);
                        if (cosh_distance(moebius_apply(g, z), w) <= 30.0) ++brute;
                    }
    EXPECT_EQ(brute, ball.size());
}

TEST(Membership, Examples) {
    EXPECT_TRUE(is_member_gamma0N_plus({1, 0, 0, 1}, 1, 2));
    EXPECT_TRUE(is_member_gamma0N_plus({0, -1, 2, 0}, 2, 2));
    EXPECT_FALSE(is_member_gamma0N_plus({1, 0, 1, 1}, 1, 2));
    EXPECT_FALSE(is_member_gamma0N_plus({0, -1, 4, 0}, 4, 4));  // N not square-free
    EXPECT_FALSE(is_member_gamma0N_plus({1, 0, 2, 1}, 3, 6));   // wrong determinant
}

TEST(Catalog, Descriptors) {
    const auto g1 = group_descriptor("PSL2Z");
    EXPECT_NEAR(g1.volume(), kPi / 3, 1e-15);
    EXPECT_EQ(g1.cusp_count, 1);
    ASSERT_EQ(g1.elliptic_points.size(), 2u);
    EXPECT_EQ(g1.elliptic("i").order, 2);
    EXPECT_EQ(g1.elliptic("rho").order, 3);

    const auto g2 = group_descriptor("Gamma0(2)+");
    EXPECT_NEAR(g2.volume(), kPi / 2, 1e-15);
    EXPECT_EQ(g2.elliptic("e1").order, 2);
    EXPECT_EQ(g2.elliptic("e2").order, 4);
    EXPECT_NEAR(g2.elliptic("e1").point.y, 1 / std::sqrt(2.0), 1e-15);

    const auto g3 = group_descriptor("Gamma0(2)");
    EXPECT_NEAR(g3.volume(), kPi, 1e-15);
    EXPECT_EQ(g3.cusp_count, 2);
    EXPECT_EQ(g3.elliptic("e").order, 2);

    EXPECT_NEAR(group_descriptor("Gamma0(5)+").volume(), kPi, 1e-15);
    EXPECT_NEAR(group_descriptor("Gamma0(3)").volume(), 4 * kPi / 3, 1e-15);
    // beyond the catalog: formula volume, no elliptic points
    const auto g6 = group_descriptor("Gamma0(6)+");
    EXPECT_NEAR(g6.volume(), kPi * 12 / 12, 1e-15);
    EXPECT_TRUE(g6.elliptic_points.empty());
    EXPECT_NEAR(group_descriptor("Gamma0(30)+").volume(), kPi * 72 / 24, 1e-14);

    EXPECT_THROW(group_descriptor("Gamma0(4)+"), DomainError);
    EXPECT_THROW(group_descriptor("Gamma0(6)"), DomainError);
    EXPECT_THROW(group_descriptor("SL3Z"), DomainError);
}

TEST(Catalog, StabilizersFixTheirPoints) {
    for (const char* tag : {"PSL2Z", "Gamma0(2)+", "Gamma0(5)+", "Gamma0(2)", "Gamma0(3)"}) {
        const auto g = group_descriptor(tag);
        for (const auto& e : g.elliptic_points) {
            const auto p = moebius_apply(e.stabilizer, e.point);
            EXPECT_NEAR(p.x, e.point.x, 1e-12) << tag << " " << e.name;
            EXPECT_NEAR(p.y, e.point.y, 1e-12) << tag << " " << e.name;
            // order from the trace: |tr| = 2 cos(π/ord)
            EXPECT_NEAR(std::abs(e.stabilizer.a + e.stabilizer.d), 2 * std::cos(kPi / e.order), 1e-12);
            // the stabilizer belongs to the group
            const auto& m = e.stabilizer.integer;
            if (g.tag.kind == GroupKind::Gamma0) EXPECT_TRUE(is_member_gamma0N(m, g.N));
            else if (g.tag.kind == GroupKind::Gamma0Plus) EXPECT_TRUE(is_member_gamma0N_plus(m, m.det(), g.N));
            else EXPECT_EQ(m.det(), 1);
        }
    }
}

TEST(Catalog, AtkinLehnerMatrices) {
    for (int N : {2, 3, 5, 6, 10, 30}) {
        for (int e : divisors(N)) {
            if (std::gcd(e, N / e) != 1) continue;
            const auto W = atkin_lehner(e, N);
            EXPECT_TRUE(is_member_gamma0N_plus(W, e, N)) << N << " " << e;
        }
    }
}

TEST(Catalog, CwExact) {
    EXPECT_EQ(c_w_exact(2, Rational(1, 3)), Rational(3));
    EXPECT_EQ(c_w_exact(3, Rational(1, 3)), Rational(2));
    EXPECT_EQ(c_w_exact(4, Rational(1, 2)), Rational(1));
    EXPECT_EQ(c_w_exact(3, Rational(4, 3)), Rational(1, 2));
}

TEST(Catalog, TagParsing) {
    EXPECT_EQ(parse_group_tag("Gamma0(6)+").N, 6);
    EXPECT_EQ(parse_group_tag("Gamma0(6)+").kind, GroupKind::Gamma0Plus);
    EXPECT_EQ(parse_group_tag("Gamma0(3)").kind, GroupKind::Gamma0);
    EXPECT_EQ(parse_group_tag("Gamma0(1)+").kind, GroupKind::PSL2Z);
    EXPECT_THROW(parse_group_tag("Gamma0(x)"), DomainError);
    EXPECT_EQ(GroupTag::gamma0_plus(5).name(), "Gamma0(5)+");
}
