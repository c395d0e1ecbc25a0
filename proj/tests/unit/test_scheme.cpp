#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "fliplab/errors.hpp"
#include "fliplab/scheme.hpp"
#include "fliplab/scheme_io.hpp"
#include "oracles.hpp"

using namespace fliplab;
namespace fs = std::filesystem;

namespace {

std::vector<Ring> all_rings()
{
    return {Ring::z2(), Ring::zp(3), Ring::z2k(16), Ring::rationals()};
}

fs::path scratch_dir(const std::string& name)
{
    fs::path p = fs::temp_directory_path() / ("fliplab_scheme_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

const FormatPerm kAllPerms[] = {{{0, 1, 2}}, {{1, 2, 0}}, {{2, 0, 1}}, {{2, 1, 0}}, {{1, 0, 2}}, {{0, 2, 1}}};

} // namespace

TEST(Verify, StandardAndStrassen)
{
    EXPECT_TRUE(verify(standard_scheme(Format(2, 2, 2), Ring::rationals())));
    Scheme s = strassen_scheme(Ring::z2());
    EXPECT_EQ(s.rank(), 7u);
    EXPECT_TRUE(verify(s));
    EXPECT_TRUE(oracle::brent_holds(s));
}

TEST(Verify, PerturbedStandardFails)
{
    Scheme s = standard_scheme(Format(2, 2, 2), Ring::z2());
    Mat& u = s.triples()[3].u;
    u.set_residue(1, 0, u.residue(1, 0) ^ 1);
    VerifyResult vr = verify(s);
    EXPECT_FALSE(vr);
    EXPECT_GT(vr.violations, 0u);
    EXPECT_LE(vr.failures.size(), 10u);
    EXPECT_FALSE(oracle::brent_holds(s));
}

TEST(Verify, FailureReportCapsAtTen)
{
    Scheme s = standard_scheme(Format(3, 3, 3), Ring::zp(3));
    s.triples().resize(10);
    VerifyResult vr = verify(s);
    EXPECT_FALSE(vr);
    EXPECT_EQ(vr.failures.size(), 10u);
    EXPECT_EQ(vr.violations, 27u - 10u);
}

TEST(Verify, ShapeMismatchIsStructural)
{
    Scheme s = standard_scheme(Format(2, 2, 2), Ring::z2());
    s.triples()[0].v = Mat(Ring::z2(), 3, 2);
    EXPECT_THROW(verify(s), StructuralError);
}

TEST(StandardScheme, Ranks)
{
    EXPECT_EQ(standard_scheme(Format(2, 2, 2), Ring::z2()).rank(), 8u);
    EXPECT_EQ(standard_scheme(Format(3, 4, 5), Ring::z2()).rank(), 60u);
    Scheme q = standard_scheme(Format(2, 2, 3), Ring::rationals());
    EXPECT_EQ(q.rank(), 12u);
    EXPECT_TRUE(verify(q));
}

TEST(StandardScheme, TripleShape)
{
    Scheme s = standard_scheme(Format(2, 3, 4), Ring::zp(5));
    for (const Triple& t : s.triples()) {
        EXPECT_EQ(t.u.nonzeros(), 1u);
        EXPECT_EQ(t.v.nonzeros(), 1u);
        EXPECT_EQ(t.w.nonzeros(), 1u);
        EXPECT_EQ(t.u.rows(), 2u);
        EXPECT_EQ(t.v.rows(), 3u);
        EXPECT_EQ(t.w.rows(), 4u);
    }
}

TEST(SchemeProperty, StandardSchemesVerifyOverAllRings)
{
    for (const Ring& r : all_rings())
        for (std::size_t n = 1; n <= 4; ++n)
            for (std::size_t m = 1; m <= 4; ++m)
                for (std::size_t p = 1; p <= 4; ++p) {
                    Scheme s = standard_scheme(Format(n, m, p), r);
                    ASSERT_TRUE(verify(s)) << r.name() << " " << s.format().str();
                    if (n * m * p <= 18)
                        ASSERT_TRUE(oracle::brent_holds(s)) << r.name() << " " << s.format().str();
                }
}

TEST(SchemeProperty, VerifierAgreesWithOracleOnPerturbations)
{
    std::mt19937_64 rng(31);
    for (int t = 0; t < 300; ++t) {
        const Ring ring = t % 2 ? Ring::z2() : Ring::zp(3);
        Scheme s = oracle::random_walk_state(oracle::random_format(rng, 1, 3), ring, rng, 40);
        if (rng() % 2) {
            Triple& tr = s.triples()[rng() % s.rank()];
            Mat& a = tr.slot(static_cast<int>(rng() % 3));
            const std::size_t r = rng() % a.rows(), c = rng() % a.cols();
            a.set_residue(r, c, ring.add(a.residue(r, c), 1));
        }
        ASSERT_EQ(static_cast<bool>(verify(s)), oracle::brent_holds(s));
    }
}

TEST(Permute, IdentityKeepsScheme)
{
    Scheme s = strassen_scheme(Ring::z2());
    EXPECT_EQ(permute_format(s, FormatPerm::identity()), s);
}

TEST(Permute, RotateStandard234)
{
    Scheme r = permute_format(standard_scheme(Format(2, 3, 4), Ring::z2()), FormatPerm::rotation());
    EXPECT_EQ(r.format(), Format(3, 4, 2));
    EXPECT_EQ(r.rank(), 24u);
    EXPECT_TRUE(verify(r));
}

TEST(Permute, RotationHasOrderThree)
{
    std::mt19937_64 rng(4);
    Scheme s = oracle::random_walk_state(Format(2, 3, 4), Ring::zp(3), rng, 200);
    Scheme r = s;
    for (int k = 0; k < 3; ++k)
        r = permute_format(r, FormatPerm::rotation());
    EXPECT_EQ(r, s);
}

TEST(Permute, RejectsNonVerifyingInput)
{
    Scheme s = standard_scheme(Format(2, 2, 2), Ring::z2());
    s.triples().pop_back();
    EXPECT_THROW(permute_format(s, FormatPerm::rotation()), ContractError);
}

TEST(Permute, ParseNames)
{
    EXPECT_EQ(FormatPerm::parse("id"), FormatPerm::identity());
    EXPECT_EQ(FormatPerm::parse("120"), FormatPerm::rotation());
    EXPECT_EQ(FormatPerm::parse("swap-np"), FormatPerm::transpose());
    EXPECT_THROW(FormatPerm::parse("011"), StructuralError);
    EXPECT_THROW(FormatPerm::parse("spin"), StructuralError);
}

TEST(PermuteProperty, PreservesVerificationAndRank)
{
    std::mt19937_64 rng(1000);
    for (int t = 0; t < 1000; ++t) {
        const Ring ring = t % 3 == 0 ? Ring::zp(3) : Ring::z2();
        Scheme s = oracle::random_walk_state(oracle::random_format(rng, 1, 3), ring, rng, 30);
        const FormatPerm& sigma = kAllPerms[rng() % 6];
        Scheme r = permute_format(s, sigma);
        ASSERT_EQ(r.format(), sigma.apply(s.format()));
        ASSERT_EQ(r.rank(), s.rank());
        ASSERT_TRUE(verify(r));
        ASSERT_EQ(permute_format(r, sigma.inverse()), s);
    }
}

TEST(CanonicalFormat, Examples)
{
    auto [a, pa] = canonical_format(Format(2, 2, 3));
    EXPECT_EQ(a, Format(2, 2, 3));
    EXPECT_TRUE(pa.is_identity());
    auto [b, pb] = canonical_format(Format(5, 4, 4));
    EXPECT_EQ(b, Format(4, 4, 5));
    EXPECT_EQ(pb, FormatPerm::rotation());
    // identity, rot, rot^2, then the swaps: the rotation is found first here too
    auto [c, pc] = canonical_format(Format(3, 2, 2));
    EXPECT_EQ(c, Format(2, 2, 3));
    EXPECT_EQ(pc, FormatPerm::rotation());
    EXPECT_EQ(FormatPerm::transpose().apply(Format(3, 2, 2)), Format(2, 2, 3));
}

TEST(CanonicalFormat, AlwaysSortedAndRealized)
{
    for (std::size_t n = 1; n <= 5; ++n)
        for (std::size_t m = 1; m <= 5; ++m)
            for (std::size_t p = 1; p <= 5; ++p) {
                auto [g, sigma] = canonical_format(Format(n, m, p));
                ASSERT_LE(g.n, g.m);
                ASSERT_LE(g.m, g.p);
                ASSERT_EQ(sigma.apply(Format(n, m, p)), g);
            }
}

TEST(RingEmbedding, Z2SchemesVerifyOverZ2k1)
{
    std::mt19937_64 rng(8);
    for (int t = 0; t < 100; ++t) {
        Scheme s = oracle::random_walk_state(oracle::random_format(rng, 1, 3), Ring::z2(), rng, 50);
        ASSERT_TRUE(verify(s));
        Scheme e = with_ring(s, Ring::z2k(1));
        ASSERT_TRUE(verify(e));
        ASSERT_TRUE(oracle::brent_holds(e));
    }
}

TEST(CanonicalHash, InsensitiveToTripleOrder)
{
    Scheme s = strassen_scheme(Ring::z2());
    Scheme r = s;
    std::reverse(r.triples().begin(), r.triples().end());
    EXPECT_NE(s, r);
    EXPECT_EQ(canonical_hash(s), canonical_hash(r));
    EXPECT_EQ(canonical_order(s), canonical_order(r));
}

TEST(SchemeIo, RoundTripAllRings)
{
    fs::path dir = scratch_dir("roundtrip");
    std::mt19937_64 rng(12);
    for (const Ring& r : all_rings()) {
        Scheme s = standard_scheme(Format(2, 2, 2), r);
        write_scheme(s, dir / "s.json");
        EXPECT_EQ(read_scheme(dir / "s.json"), s) << r.name();
    }
    for (int t = 0; t < 30; ++t) {
        Scheme s = oracle::random_walk_state(oracle::random_format(rng, 1, 4), t % 2 ? Ring::zp(5) : Ring::z2(), rng, 60);
        EXPECT_EQ(scheme_from_string(scheme_to_string(s)), s);
    }
}

TEST(SchemeIo, RationalEntry)
{
    const std::string text = R"({"format":[1,1,1],"ring":{"kind":"Q"},"rank":1,"triples":[{"u":[["-1/2"]],"v":[["2"]],"w":[[-1]]}]})";
    Scheme s = scheme_from_string(text);
    EXPECT_EQ(s[0].u.rational(0, 0), Rational(-1, 2));
    EXPECT_EQ(s[0].w.rational(0, 0), Rational(-1));
    EXPECT_TRUE(verify(s));
}

TEST(SchemeIo, WrongShapeIsParseError)
{
    const std::string text = R"({"format":[1,1,1],"ring":{"kind":"Z2"},"rank":1,"triples":[{"u":[[1,0]],"v":[[1]],"w":[[1]]}]})";
    try {
        scheme_from_string(text);
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("triples[0].u"), std::string::npos) << e.what();
    }
}

TEST(SchemeIo, MalformedJsonReportsLine)
{
    try {
        scheme_from_string("{\n  \"format\": [1,1,\n}");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_NE(std::string(e.what()).find("line"), std::string::npos) << e.what();
    }
}

TEST(SchemeIo, UnsupportedRingIsDistinct)
{
    const std::string bad_kind = R"({"format":[1,1,1],"ring":{"kind":"GF4"},"rank":0,"triples":[]})";
    EXPECT_THROW(scheme_from_string(bad_kind), UnsupportedRingError);
    const std::string bad_p = R"({"format":[1,1,1],"ring":{"kind":"Zp","p":9},"rank":0,"triples":[]})";
    EXPECT_THROW(scheme_from_string(bad_p), UnsupportedRingError);
}

TEST(SchemeIo, ReadingDoesNotVerify)
{
    const std::string text = R"({"format":[1,1,1],"ring":{"kind":"Z2"},"rank":0,"triples":[]})";
    Scheme s = scheme_from_string(text);
    EXPECT_EQ(s.rank(), 0u);
    EXPECT_FALSE(verify(s));
}

TEST(SchemeIo, RankMustMatchTriples)
{
    const std::string text = R"({"format":[1,1,1],"ring":{"kind":"Z2"},"rank":2,"triples":[{"u":[[1]],"v":[[1]],"w":[[1]]}]})";
    EXPECT_THROW(scheme_from_string(text), ParseError);
}

TEST(SchemeIo, MissingFile)
{
    EXPECT_THROW(read_scheme("/nonexistent/dir/s.json"), ParseError);
}
