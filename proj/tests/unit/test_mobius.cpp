#include "nilseq/exactnum.hpp"
#include "nilseq/mobius.hpp"
#include "nilseq/sequences.hpp"

#include <gtest/gtest.h>
#include <json.hpp>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace nilseq;

namespace {

nlohmann::json golden(const std::string& name)
{
    std::ifstream is(std::string(NILSEQ_SOURCE_DIR) + "/tests/golden/" + name);
    return nlohmann::json::parse(is);
}

const MobiusTable& table_1e6()
{
    static const MobiusTable t = sieve_mobius(1'000'000);
    return t;
}

} // namespace

TEST(Sieve, FirstValues)
{
    MobiusTable t = sieve_mobius(10);
    std::vector<int> expect{1, -1, -1, 0, -1, 1, -1, 0, 0, 1};
    for (std::uint64_t n = 1; n <= 10; ++n)
        EXPECT_EQ(t(n), expect[n - 1]) << n;
    EXPECT_EQ(sieve_mobius(210)(210), 1);
}

TEST(Sieve, MatchesTrialDivisionToOneMillion)
{
    const auto& t = table_1e6();
    std::uint64_t bad = 0;
    for (std::uint64_t n = 1; n <= 1'000'000; ++n)
        if (t(n) != mobius_trial(n))
            ++bad;
    EXPECT_EQ(bad, 0u);
}

TEST(Sieve, DivisorSumIdentity)
{
    const auto& t = table_1e6();
    std::vector<int> acc(10001, 0);
    for (std::uint64_t d = 1; d <= 10000; ++d)
        for (std::uint64_t n = d; n <= 10000; n += d)
            acc[n] += t(d);
    EXPECT_EQ(acc[1], 1);
    for (int n = 2; n <= 10000; ++n)
        ASSERT_EQ(acc[static_cast<std::size_t>(n)], 0) << n;
}

TEST(Sieve, SegmentationAndThreadsDoNotChangeTable)
{
    SieveOptions small;
    small.segment = 1000;
    small.threads = 3;
    MobiusTable a = sieve_mobius(123457, small);
    MobiusTable b = sieve_mobius(123457);
    EXPECT_EQ(a.packed(), b.packed());
}

TEST(Sieve, LimitTooLarge)
{
    SieveOptions o;
    o.cap = 1000;
    try {
        sieve_mobius(1001, o);
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::limit_too_large);
    }
}

TEST(Sieve, RuntimeAtOneMillion)
{
    auto t0 = std::chrono::steady_clock::now();
    MobiusTable t = sieve_mobius(1'000'000);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    EXPECT_LT(secs, 5.0);
    EXPECT_EQ(t.limit(), 1'000'000u);
}

TEST(Mertens, MatchesTrialDivisionGolden)
{
    auto g = golden("mertens.json");
    std::vector<std::uint64_t> cps;
    for (auto& [k, v] : g["mertens"].items())
        cps.push_back(std::stoull(k));
    std::sort(cps.begin(), cps.end());
    auto m = mertens(table_1e6(), cps);
    for (std::size_t i = 0; i < cps.size(); ++i)
        EXPECT_EQ(m[i], g["mertens"][std::to_string(cps[i])].get<std::int64_t>()) << cps[i];
    EXPECT_EQ(mertens(table_1e6(), {1})[0], 1);
}

TEST(MobiusCache, RoundTripAndReuse)
{
    auto dir = std::filesystem::temp_directory_path() / "nilseq_cache_test";
    std::filesystem::remove_all(dir);
    MobiusTable a = load_or_sieve(5000, dir.string());
    ASSERT_TRUE(std::filesystem::exists(dir / "mobius.bin"));
    std::ifstream is(dir / "mobius.bin", std::ios::binary);
    char magic[4];
    is.read(magic, 4);
    EXPECT_EQ(std::string(magic, 4), "MOB1");
    MobiusTable b = load_or_sieve(1234, dir.string());
    EXPECT_EQ(b.limit(), 1234u);
    for (std::uint64_t n = 1; n <= 1234; ++n)
        ASSERT_EQ(a(n), b(n));
    EXPECT_EQ(b.packed(), sieve_mobius(1234).packed());
    std::filesystem::remove_all(dir);
}

TEST(Reduction, ThreadsAndBlocksReproduceSerialBits)
{
    auto f = [](std::uint64_t i) -> std::array<double, 1> { return {std::sin(static_cast<double>(i) * 0.37) / (1.0 + i % 7)}; };
    std::vector<std::uint64_t> ends{1, 17, 1000, 65536, 70001, 300000};
    ReduceOptions serial;
    ReduceOptions par = serial;
    par.threads = 4;
    auto a = prefix_sums<1>(f, ends, serial);
    auto b = prefix_sums<1>(f, ends, par);
    for (std::size_t k = 0; k < ends.size(); ++k)
        EXPECT_EQ(a[k][0], b[k][0]);
    ReduceOptions comp;
    comp.method = SumMethod::compensated;
    comp.threads = 3;
    auto c = prefix_sums<1>(f, ends, comp);
    for (std::size_t k = 0; k < ends.size(); ++k)
        EXPECT_NEAR(a[k][0], c[k][0], 1e-9);
}

TEST(Correlate, ConstantAndMobiusSequences)
{
    MobiusTable t = sieve_mobius(1000);
    auto one = correlate(constant_seq(1.0), t, {10, 100});
    EXPECT_DOUBLE_EQ(one.averages[0].real(), -0.1);
    EXPECT_DOUBLE_EQ(one.averages[1].real(), 0.01);
    SequenceStream mu_seq([&t](std::int64_t n) { return Complex(n >= 1 && n <= 1000 ? t(static_cast<std::uint64_t>(n)) : 0); }, 1.0,
                          SeqTag::unknown(), "mu");
    auto sq = correlate(mu_seq, t, {10});
    EXPECT_DOUBLE_EQ(sq.averages[0].real(), 0.7);
    auto zero = correlate(constant_seq(0.0), t, {1000});
    EXPECT_EQ(zero.averages[0], Complex(0.0));
}

TEST(Correlate, RejectsUnbounded)
{
    SequenceStream s([](std::int64_t n) { return Complex(static_cast<double>(n)); }, std::nullopt, SeqTag::unknown(), "n");
    try {
        correlate(s, sieve_mobius(10), {10});
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.code(), errc::unbounded_sequence);
    }
}

TEST(Correlate, BoundInvariantAndLinearity)
{
    const auto& t = table_1e6();
    GeneratorTable g;
    auto a = PhaseScalar::generator(g.declare("a", "sqrt2"));
    auto b = PhaseScalar::generator(g.declare("b", "sqrt3"));
    SequenceStream xi = poly_exp(PhasePolynomial(Basis::monomial, {PhaseScalar(), a}));
    SequenceStream eta = poly_exp(PhasePolynomial(Basis::monomial, {PhaseScalar(), PhaseScalar(), b}));
    Complex ca(0.5, -1.25), cb(2.0, 0.75);
    auto cps = default_checkpoints(100000);
    auto rx = correlate(xi, t, cps);
    auto ry = correlate(eta, t, cps);
    auto rz = correlate(add(scale(xi, ca), scale(eta, cb)), t, cps);
    for (std::size_t k = 0; k < cps.size(); ++k) {
        EXPECT_LE(std::abs(rx.averages[k]), 1.0);
        Complex lin = ca * rx.averages[k] + cb * ry.averages[k];
        EXPECT_LT(std::abs(rz.averages[k] - lin), 1e-12);
    }
    ReduceOptions par;
    par.threads = 4;
    auto rp = correlate(xi, t, cps, par);
    for (std::size_t k = 0; k < cps.size(); ++k)
        EXPECT_EQ(rp.averages[k], rx.averages[k]);
}

TEST(Correlate, CsvColumns)
{
    auto r = correlate(constant_seq(1.0), sieve_mobius(100), {10, 100});
    std::ostringstream os;
    write_correlation_csv(os, r);
    EXPECT_EQ(os.str().substr(0, os.str().find('\n')), "N,re_S,im_S,abs_S");
    EXPECT_NE(os.str().find("10,-0.10000000000000001,0,0.10000000000000001"), std::string::npos);
}

TEST(Checkpoints, Defaults)
{
    EXPECT_EQ(default_checkpoints(1000), (std::vector<std::uint64_t>{10, 100, 1000}));
    EXPECT_EQ(default_checkpoints(2500), (std::vector<std::uint64_t>{10, 100, 1000, 2500}));
}

TEST(Cesaro, Examples)
{
    auto c1 = cesaro_stats(constant_seq(1.0), {10, 1000});
    EXPECT_DOUBLE_EQ(c1.mean_abs[1], 1.0);
    EXPECT_DOUBLE_EQ(c1.mean_sq[1], 1.0);
    auto c2 = cesaro_stats(indicator(0), {10, 1000});
    EXPECT_DOUBLE_EQ(c2.mean_abs[0], 1.0 / 21);
    EXPECT_DOUBLE_EQ(c2.mean_abs[1], 1.0 / 2001);
    GeneratorTable g;
    auto a = PhaseScalar::generator(g.declare("a", "sqrt2"));
    auto c3 = cesaro_stats(poly_exp(PhasePolynomial(Basis::monomial, {PhaseScalar(), a})), {100, 10000});
    EXPECT_NEAR(c3.mean_abs[1], 1.0, 1e-12);
    EXPECT_NEAR(c3.quadratic_norm, 1.0, 1e-12);
}

TEST(Cesaro, ZeroDensityTimesBoundedDecays)
{
    GeneratorTable g;
    auto a = PhaseScalar::generator(g.declare("a", "sqrt5"));
    SequenceStream nil = poly_exp(PhasePolynomial(Basis::monomial, {PhaseScalar(), a, a}));
    std::vector<SequenceStream> corpus = {mul(square_indicator(), nil), mul(indicator(3), nil),
                                          mul(square_indicator(), constant_seq(Complex(0.6, 0.8)))};
    for (const auto& s : corpus) {
        ASSERT_EQ(s.tag().cls, SeqClass::zero_density);
        auto r = cesaro_stats(s, {1000, 10000, 100000});
        EXPECT_GE(r.mean_abs[0], r.mean_abs[1]);
        EXPECT_GE(r.mean_abs[1], r.mean_abs[2]);
        EXPECT_LT(r.mean_abs[2], 0.01);
        for (std::size_t k = 0; k < 3; ++k) {
            EXPECT_GE(r.mean_abs[k], 0.0);
            EXPECT_LE(r.mean_abs[k], *s.bound() + 1e-12);
            EXPECT_LE(r.mean_sq[k], *s.bound() * *s.bound() + 1e-12);
        }
    }
}
