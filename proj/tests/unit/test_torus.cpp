#include "nilseq/torus.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace nilseq;

namespace {

TorusPoint pt(std::vector<PhaseScalar> c) { return TorusPoint(std::move(c)); }
PhaseScalar q(long long a, long long b) { return PhaseScalar(Rational(a, b)); }
PhasePolynomial mono(std::vector<PhaseScalar> c) { return PhasePolynomial(Basis::monomial, std::move(c)); }

} // namespace

TEST(Orbit, Examples)
{
    IntMatrix shear{{1, 1}, {0, 1}};
    TorusPoint x = pt({q(1, 3), q(1, 2)});
    EXPECT_EQ(orbit_point(shear, x, 0), x);
    EXPECT_EQ(orbit_point(shear, x, 2), pt({q(1, 3), q(1, 2)}));
    EXPECT_EQ(orbit_point(shear, x, 1), pt({q(5, 6), q(1, 2)}));
    IntMatrix rot{{0, -1}, {1, 0}};
    GeneratorTable g;
    auto a = PhaseScalar::generator(g.declare("a", "sqrt2"));
    TorusPoint y = pt({a, q(1, 7)});
    EXPECT_EQ(orbit_point(rot, y, 4), y);
    EXPECT_EQ(orbit_point(rot, y, -4), y);
}

TEST(Orbit, CompositionProperty)
{
    GeneratorTable g;
    auto a = PhaseScalar::generator(g.declare("a", "sqrt2"));
    auto b = PhaseScalar::generator(g.declare("b", "sqrt3"));
    std::vector<IntMatrix> mats = {IntMatrix{{2, 1}, {1, 1}}, IntMatrix{{1, 1}, {0, 1}}, IntMatrix{{0, -1}, {1, -1}}};
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> nd(-15, 15);
    for (const auto& m : mats)
        for (int trial = 0; trial < 20; ++trial) {
            TorusPoint x = pt({a * Rational(nd(rng), 3) + q(nd(rng), 5), b + q(nd(rng), 7)});
            int n = nd(rng), k = nd(rng);
            EXPECT_EQ(orbit_point(m, orbit_point(m, x, n), k), orbit_point(m, x, n + k));
        }
}

TEST(CharacterSeq, Examples)
{
    GeneratorTable g;
    auto g1 = PhaseScalar::generator(g.declare("g1", "sqrt2"));
    IntMatrix shear{{1, 1}, {0, 1}};
    auto zero = character_seq(shear, pt({g1, q(1, 3)}), {0, 0});
    for (std::int64_t n = -5; n <= 5; ++n)
        EXPECT_LT(std::abs(zero.stream(n) - 1.0), 1e-15);
    auto fixed = character_seq(shear, pt({g1, PhaseScalar()}), {1, 0});
    for (std::int64_t n = -5; n <= 5; ++n)
        EXPECT_LT(std::abs(fixed.stream(n) - e(g1)), 1e-15);
    auto lin = character_seq(shear, pt({PhaseScalar(), g1}), {1, 0});
    ASSERT_EQ(lin.residue_polys.size(), 1u);
    EXPECT_TRUE(lin.residue_polys[0].equal_mod_1(mono({PhaseScalar(), g1})));
    auto ref = poly_exp(mono({PhaseScalar(), g1}));
    for (std::int64_t n = -50; n <= 50; ++n)
        EXPECT_EQ(lin.stream(n), ref(n));
    EXPECT_EQ(lin.stream.tag().cls, SeqClass::nil);
}

TEST(CharacterSeq, MatchesDirectOrbitOnWindow)
{
    GeneratorTable g;
    auto a = PhaseScalar::generator(g.declare("a", "sqrt2"));
    auto b = PhaseScalar::generator(g.declare("b", "pi"));
    std::vector<IntMatrix> mats = {IntMatrix{{1, 1, 0}, {0, 1, 1}, {0, 0, 1}}, IntMatrix{{0, -1, 0}, {1, 0, 0}, {1, 2, 1}},
                                   IntMatrix{{-1, 1, 0}, {0, -1, 0}, {0, 0, 1}}};
    TorusPoint x = pt({a, b * Rational(1, 3), q(2, 7) + a});
    Character v{2, -1, 3};
    for (const auto& m : mats) {
        auto cs = character_seq(m, x, v);
        ASSERT_EQ(cs.stream.tag().cls, SeqClass::nil);
        IntMatrix an = m.pow(-1000);
        for (std::int64_t n = -1000; n <= 1000; ++n) {
            std::vector<PhaseScalar> y(3);
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 3; ++j)
                    y[i] += x[j] * an(i, j);
            PhaseScalar direct = y[0] * v[0] + y[1] * v[1] + y[2] * v[2];
            ASSERT_LT(std::abs(cs.stream(n) - e(direct)), 1e-12) << n;
            an = m * an;
        }
    }
}

TEST(CharacterSeq, PositiveEntropyIsUnknown)
{
    auto cs = character_seq(IntMatrix{{2, 1}, {1, 1}}, pt({q(1, 5), q(2, 5)}), {1, 1});
    EXPECT_EQ(cs.stream.tag().cls, SeqClass::unknown);
    EXPECT_LT(std::abs(cs.stream(3) - e(character_phase(IntMatrix{{2, 1}, {1, 1}}, pt({q(1, 5), q(2, 5)}), {1, 1}, 3))), 1e-15);
}

TEST(PolynomialForm, Examples)
{
    GeneratorTable g;
    auto a = PhaseScalar::generator(g.declare("a", "sqrt5"));
    TorusPoint x = pt({a, q(1, 3) + a * Rational(1, 2)});
    auto id = verify_polynomial_form(IntMatrix::identity(2), x, {1, 1}, -100, 100);
    EXPECT_EQ(id.residue_polys[0].degree(), 0);
    auto sh = verify_polynomial_form(IntMatrix{{1, 1}, {0, 1}}, x, {3, -2}, -100, 100);
    EXPECT_EQ(sh.checked, 201);
    auto rot = verify_polynomial_form(IntMatrix{{0, -1}, {1, 0}}, x, {1, 2}, -100, 100);
    EXPECT_EQ(rot.m, 4u);
    for (const auto& p : rot.residue_polys)
        EXPECT_LE(p.degree(), 0);
}

TEST(Weyl, Examples)
{
    auto r1 = weyl_test(mono({PhaseScalar(), q(1, 2)}), {2}, {10, 1000});
    EXPECT_NEAR(r1.harmonics[0].abs_average(1), 1.0, 1e-15);
    EXPECT_FALSE(r1.harmonics[0].expect_zero);
    GeneratorTable g;
    auto g1 = PhaseScalar::generator(g.declare("g1", "sqrt2"));
    auto r2 = weyl_test(mono({PhaseScalar(), g1}), {1}, {100000});
    EXPECT_TRUE(r2.harmonics[0].expect_zero);
    EXPECT_LT(r2.harmonics[0].abs_average(0), 0.01);
    // Geometric sum: |sum_{|n|<=N} e(n a)| = |sin(pi (2N+1) a) / sin(pi a)|.
    const double alpha = std::sqrt(2.0);
    const double N = 100000;
    double closed = std::abs(std::sin(std::numbers::pi * (2 * N + 1) * (alpha - 1)) / std::sin(std::numbers::pi * alpha)) / (2 * N + 1);
    EXPECT_NEAR(r2.harmonics[0].abs_average(0), closed, 1e-10);
    auto r3 = weyl_test(PhasePolynomial::constant(g1 + q(1, 3)), {1, 5}, {100});
    EXPECT_NEAR(r3.harmonics[0].abs_average(0), 1.0, 1e-14);
    EXPECT_NEAR(r3.harmonics[1].abs_average(0), 1.0, 1e-14);
}

TEST(Weyl, RationalPeriodMean)
{
    GeneratorTable g;
    auto c = PhaseScalar::generator(g.declare("c", "e"));
    std::vector<PhasePolynomial> polys = {mono({PhaseScalar(), q(1, 5), q(1, 3)}), mono({c, q(1, 4), PhaseScalar(), q(1, 6)}),
                                          mono({PhaseScalar(), q(1, 2), q(1, 2)})};
    for (const auto& p : polys) {
        for (long long k : {1LL, 2LL, -3LL}) {
            auto base = weyl_test(p, {k}, {1});
            const auto& h = base.harmonics[0];
            ASSERT_TRUE(h.period);
            ASSERT_TRUE(h.period_mean);
            const std::uint64_t P = *h.period;
            // Brute-force minimality of the period.
            PhasePolynomial kp = p.scaled(Rational(k));
            for (std::uint64_t d = 1; d < P; ++d) {
                bool same = true;
                for (long long n = 0; n < 40 && same; ++n)
                    same = equal_mod_1(kp.eval(n + static_cast<long long>(d)), kp.eval(n));
                EXPECT_FALSE(same) << "period " << P << " not minimal: " << d;
            }
            // One-period float average equals the exact histogram mean.
            Complex s(0.0);
            for (std::uint64_t n = 0; n < P; ++n)
                s += e(kp.eval(static_cast<long long>(n)));
            EXPECT_LT(std::abs(s / static_cast<double>(P) - *h.period_mean), 1e-12);
            // Windows of 2N+1 = c P terms give |period mean| up to rounding.
            if (P % 2 == 1) {
                std::uint64_t N = (7 * P - 1) / 2;
                auto w = weyl_test(p, {k}, {N});
                EXPECT_NEAR(w.harmonics[0].abs_average(0), std::abs(*h.period_mean), 1e-12);
            }
        }
    }
}

TEST(Weyl, FastPathAgreesWithExact)
{
    GeneratorTable g;
    auto a = PhaseScalar::generator(g.declare("a", "sqrt2"));
    auto b = PhaseScalar::generator(g.declare("b", "sqrt3"));
    PhasePolynomial p = mono({q(1, 7), b, a * Rational(1, 3), a * Rational(1, 5)});
    WeylOptions fast;
    fast.precision = Precision::fast;
    auto cps = default_checkpoints(300000);
    auto ex = weyl_test(p, {1, 2}, cps);
    auto fa = weyl_test(p, {1, 2}, cps, fast);
    for (std::size_t h = 0; h < 2; ++h)
        for (std::size_t i = 0; i < cps.size(); ++i)
            EXPECT_LT(std::abs(ex.harmonics[h].averages[i] - fa.harmonics[h].averages[i]), 1e-9);
    WeylOptions par = fast;
    par.reduce.threads = 3;
    auto fp = weyl_test(p, {1}, cps, par);
    for (std::size_t i = 0; i < cps.size(); ++i)
        EXPECT_EQ(fp.harmonics[0].averages[i], fa.harmonics[0].averages[i]);
}
