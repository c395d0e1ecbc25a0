#include <gtest/gtest.h>

#include <random>

#include "fliplab/errors.hpp"
#include "fliplab/moves.hpp"
#include "oracles.hpp"

using namespace fliplab;

namespace {

std::size_t find_triple(const Scheme& s, const Mat& u, const Mat& v, const Mat& w)
{
    for (std::size_t i = 0; i < s.rank(); ++i)
        if (s[i].u == u && s[i].v == v && s[i].w == w)
            return i;
    return s.rank();
}

Mat e(const Ring& r, std::size_t rows, std::size_t cols, std::size_t i, std::size_t j)
{
    return Mat::unit(r, rows, cols, i, j);
}

} // namespace

TEST(Flip, StandardExample)
{
    const Ring z2 = Ring::z2();
    Scheme s = standard_scheme(Format(2, 2, 2), z2);
    // (E11, E11, E11) and (E11, E12, E21), zero-based below
    const std::size_t a = find_triple(s, e(z2, 2, 2, 0, 0), e(z2, 2, 2, 0, 0), e(z2, 2, 2, 0, 0));
    const std::size_t b = find_triple(s, e(z2, 2, 2, 0, 0), e(z2, 2, 2, 0, 1), e(z2, 2, 2, 1, 0));
    ASSERT_LT(a, s.rank());
    ASSERT_LT(b, s.rank());
    Scheme r = apply_flip(s, FlipMove{a, b, 0, 1, 1});
    EXPECT_EQ(r[a].v, Mat::from_ints(z2, 2, 2, {1, 1, 0, 0}));
    EXPECT_EQ(r[b].w, Mat::from_ints(z2, 2, 2, {1, 0, 1, 0}));
    EXPECT_EQ(r.rank(), s.rank());
    EXPECT_TRUE(verify(r));
    EXPECT_TRUE(oracle::brent_holds(r));
}

TEST(Flip, RejectsInvalidMoves)
{
    Scheme s = standard_scheme(Format(2, 2, 2), Ring::zp(3));
    EXPECT_THROW(apply_flip(s, FlipMove{0, 0, 0, 1, 1}), RejectedMove);
    EXPECT_THROW(apply_flip(s, FlipMove{0, 1, 0, 0, 1}), RejectedMove);
    EXPECT_THROW(apply_flip(s, FlipMove{0, 99, 0, 1, 1}), RejectedMove);
    EXPECT_THROW(apply_flip(s, FlipMove{0, 1, 0, 1, 0}), RejectedMove);
    // triples 0 and 7 share nothing in the standard scheme
    auto flips = enumerate_flips(s);
    bool shared07 = false;
    for (const auto& f : flips)
        shared07 = shared07 || (f.i == 0 && f.j == 7);
    ASSERT_FALSE(shared07);
    EXPECT_THROW(apply_flip(s, FlipMove{0, 7, 0, 1, 1}), RejectedMove);
}

TEST(Flip, InverseOverZp)
{
    std::mt19937_64 rng(3);
    for (std::uint32_t p : {3u, 5u, 7u}) {
        Scheme s = oracle::random_walk_state(Format(3, 3, 3), Ring::zp(p), rng, 100);
        auto flips = enumerate_flips(s);
        for (int t = 0; t < 200 && !flips.empty(); ++t) {
            FlipMove mv = flips[rng() % flips.size()];
            FlipMove back = mv;
            back.lambda = p - mv.lambda;
            ASSERT_EQ(apply_flip(apply_flip(s, mv), back), s);
        }
    }
}

TEST(Flip, Z3TensorPreserved)
{
    std::mt19937_64 rng(21);
    for (int t = 0; t < 20; ++t) {
        Scheme s = oracle::random_walk_state(Format(3, 3, 3), Ring::zp(3), rng, 300);
        ASSERT_TRUE(oracle::brent_holds(s));
        auto flips = enumerate_flips(s);
        for (const auto& f : flips)
            if (f.lambda == 2) {
                ASSERT_TRUE(verify(apply_flip(s, f)));
                break;
            }
    }
}

TEST(EnumerateFlips, StandardCountPerSlot)
{
    Scheme s = standard_scheme(Format(2, 2, 2), Ring::z2());
    auto flips = enumerate_flips(s);
    std::size_t slot0 = 0;
    for (const auto& f : flips)
        slot0 += f.shared == 0;
    EXPECT_EQ(slot0, 16u);
    EXPECT_EQ(flips.size(), oracle::structural_flip_count(s));
}

TEST(EnumerateFlips, AllDistinctIsEmpty)
{
    Scheme s = standard_scheme(Format(1, 1, 1), Ring::z2());
    EXPECT_TRUE(enumerate_flips(s).empty());
    EXPECT_TRUE(enumerate_flips(strassen_scheme(Ring::zp(3))).size() % 2 == 0);
}

TEST(EnumerateFlips, ZpMultiplicity)
{
    Scheme s2 = standard_scheme(Format(2, 2, 2), Ring::z2());
    Scheme s3 = standard_scheme(Format(2, 2, 2), Ring::zp(3));
    EXPECT_EQ(enumerate_flips(s3).size(), 2 * enumerate_flips(s2).size());
}

TEST(EnumerateFlipsProperty, AgreesWithBruteForce)
{
    std::mt19937_64 rng(17);
    for (int t = 0; t < 200; ++t) {
        const bool z3 = t % 2;
        Scheme s = oracle::random_walk_state(oracle::random_format(rng, 1, 3), z3 ? Ring::zp(3) : Ring::z2(), rng,
                                             static_cast<int>(rng() % 60));
        ASSERT_LE(s.rank(), 30u);
        auto flips = enumerate_flips(s);
        ASSERT_EQ(flips.size(), oracle::structural_flip_count(s) * (z3 ? 2 : 1));
        for (const auto& f : flips) {
            ASSERT_NE(f.i, f.j);
            ASSERT_EQ(s[f.i].slot(f.shared), s[f.j].slot(f.shared));
        }
    }
}

TEST(FindReduction, ZeroSlotFirst)
{
    Scheme s = standard_scheme(Format(2, 2, 2), Ring::z2());
    s.triples()[5].w = Mat(Ring::z2(), 2, 2);
    auto red = find_reduction(s);
    ASSERT_TRUE(red);
    ASSERT_TRUE(std::holds_alternative<ZeroTriple>(*red));
    EXPECT_EQ(std::get<ZeroTriple>(*red).index, 5u);
}

TEST(FindReduction, MergePairOnSharedUV)
{
    const Ring z2 = Ring::z2();
    Scheme s(Format(2, 2, 2), z2);
    s.push_back(Triple{e(z2, 2, 2, 0, 0), e(z2, 2, 2, 0, 0), e(z2, 2, 2, 0, 0)});
    s.push_back(Triple{e(z2, 2, 2, 0, 0), e(z2, 2, 2, 0, 0), e(z2, 2, 2, 1, 1)});
    auto red = find_reduction(s);
    ASSERT_TRUE(red);
    ASSERT_TRUE(std::holds_alternative<MergePair>(*red));
    const MergePair mp = std::get<MergePair>(*red);
    EXPECT_EQ(mp.shared1, 0);
    EXPECT_EQ(mp.shared2, 1);
    EXPECT_EQ(mp.free_slot, 2);
    ReductionResult rr = apply_reduction(s, mp);
    EXPECT_EQ(rr.rank_delta, -1);
    ASSERT_EQ(rr.scheme.rank(), 1u);
    EXPECT_EQ(rr.scheme[0].w, Mat::from_ints(z2, 2, 2, {1, 0, 0, 1}));
}

TEST(FindReduction, StandardHasNone)
{
    Scheme s = standard_scheme(Format(2, 2, 2), Ring::z2());
    EXPECT_FALSE(find_reduction(s));
    // exhaustive scan: no pair shares two slots
    for (std::size_t i = 0; i < s.rank(); ++i)
        for (std::size_t j = i + 1; j < s.rank(); ++j) {
            int shared = 0;
            for (int sl = 0; sl < 3; ++sl)
                shared += s[i].slot(sl) == s[j].slot(sl);
            ASSERT_LT(shared, 2);
        }
}

TEST(ApplyReduction, ZeroTriplePreservesVerification)
{
    Scheme s = standard_scheme(Format(2, 2, 2), Ring::zp(5));
    Triple z = s[0];
    z.u = Mat(Ring::zp(5), 2, 2);
    s.push_back(z);
    ASSERT_TRUE(verify(s));
    ReductionResult rr = apply_reduction(s, ZeroTriple{8});
    EXPECT_EQ(rr.rank_delta, -1);
    EXPECT_TRUE(verify(rr.scheme));
    EXPECT_THROW(apply_reduction(s, ZeroTriple{0}), RejectedMove);
}

TEST(ApplyReduction, IdenticalTriplesVanishOverZ2)
{
    Scheme s = standard_scheme(Format(2, 2, 2), Ring::z2());
    s.push_back(s[2]);
    s.push_back(s[2]);
    ASSERT_TRUE(verify(s));
    auto red = find_reduction(s);
    ASSERT_TRUE(red);
    ReductionResult rr = apply_reduction(s, *red);
    EXPECT_EQ(rr.rank_delta, -2);
    EXPECT_EQ(rr.scheme.rank(), 8u);
    EXPECT_TRUE(verify(rr.scheme));
}

TEST(ApplyReduction, RejectsUnsharedPair)
{
    Scheme s = standard_scheme(Format(2, 2, 2), Ring::z2());
    EXPECT_THROW(apply_reduction(s, MergePair{0, 1, 0, 1, 2}), RejectedMove);
}

TEST(Plus, SplitExample)
{
    const Ring z2 = Ring::z2();
    Scheme st = standard_scheme(Format(2, 2, 2), z2);
    const std::size_t a = find_triple(st, e(z2, 2, 2, 0, 0), e(z2, 2, 2, 0, 0), e(z2, 2, 2, 0, 0));
    ASSERT_LT(a, st.rank());
    Scheme r = apply_plus(st, PlusMove{a, 1, e(z2, 2, 2, 0, 1)});
    EXPECT_EQ(r.rank(), 9u);
    EXPECT_EQ(r[a].v, e(z2, 2, 2, 0, 1));
    EXPECT_EQ(r[8].v, Mat::from_ints(z2, 2, 2, {1, 1, 0, 0}));
    EXPECT_EQ(r[8].u, e(z2, 2, 2, 0, 0));
    EXPECT_EQ(r[8].w, e(z2, 2, 2, 0, 0));
    EXPECT_TRUE(verify(r));
    EXPECT_TRUE(oracle::brent_holds(r));
}

TEST(Plus, MergeRestoresRank)
{
    std::mt19937_64 rng(5);
    for (int t = 0; t < 50; ++t) {
        Scheme s = standard_scheme(Format(2, 2, 2), t % 2 ? Ring::zp(3) : Ring::z2());
        PlusMove mv = sample_plus(s, rng);
        Scheme r = apply_plus(s, mv);
        ASSERT_EQ(r.rank(), 9u);
        // a child may also share two slots with another triple, so name the pair
        const int s1 = (mv.slot + 1) % 3, s2 = (mv.slot + 2) % 3;
        ReductionResult back = apply_reduction(r, MergePair{mv.index, 8, std::min(s1, s2), std::max(s1, s2), mv.slot});
        ASSERT_EQ(back.scheme.rank(), 8u);
        ASSERT_EQ(canonical_hash(back.scheme), canonical_hash(s));
    }
}

TEST(Plus, RejectsDegenerateSplits)
{
    Scheme s = standard_scheme(Format(2, 2, 2), Ring::z2());
    EXPECT_THROW(apply_plus(s, PlusMove{0, 0, Mat(Ring::z2(), 2, 2)}), RejectedMove);
    EXPECT_THROW(apply_plus(s, PlusMove{0, 0, s[0].u}), RejectedMove);
    EXPECT_THROW(apply_plus(s, PlusMove{0, 0, Mat(Ring::z2(), 3, 2)}), RejectedMove);
}

TEST(Plus, SampledSplitsAreSparse)
{
    std::mt19937_64 rng(6);
    Scheme s = standard_scheme(Format(3, 3, 3), Ring::zp(5));
    for (int t = 0; t < 500; ++t) {
        PlusMove mv = sample_plus(s, rng);
        ASSERT_GE(mv.x.nonzeros(), 1u);
        ASSERT_LE(mv.x.nonzeros(), 2u);
        ASSERT_FALSE(mv.x == s[mv.index].slot(mv.slot));
    }
}

// Mixed random move sequences; the rank delta of each move is checked against
// its kind and the tensor is re-verified after every step.
TEST(MovesProperty, MixedSequencesPreserveTensor)
{
    std::mt19937_64 rng(2718);
    struct Case {
        Format f;
        Ring ring;
    };
    const Case cases[] = {{Format(3, 3, 3), Ring::z2()}, {Format(2, 2, 2), Ring::zp(3)},
                          {Format(2, 3, 3), Ring::zp(3)}, {Format(1, 2, 3), Ring::z2()}};
    for (const Case& c : cases) {
        Scheme s = standard_scheme(c.f, c.ring);
        for (int step = 0; step < 2500; ++step) {
            const std::size_t before = s.rank();
            const unsigned roll = rng() % 100;
            if (auto red = find_reduction(s); red && roll < 60) {
                ReductionResult rr = apply_reduction(s, *red);
                const int expect = rr.rank_delta;
                ASSERT_TRUE(expect == -1 || expect == -2);
                if (expect == -2)
                    ASSERT_TRUE(std::holds_alternative<MergePair>(*red));
                s = std::move(rr.scheme);
                ASSERT_EQ(static_cast<int>(s.rank()) - static_cast<int>(before), expect);
            } else if (roll < 92 || s.rank() > 2 * c.f.volume()) {
                auto flips = enumerate_flips(s);
                if (flips.empty())
                    continue;
                s = apply_flip(s, flips[rng() % flips.size()]);
                ASSERT_EQ(s.rank(), before);
            } else {
                s = apply_plus(s, sample_plus(s, rng));
                ASSERT_EQ(s.rank(), before + 1);
            }
            ASSERT_TRUE(verify(s)) << c.f.str() << " step " << step;
            if (step % 250 == 0)
                ASSERT_TRUE(oracle::brent_holds(s));
        }
    }
}
