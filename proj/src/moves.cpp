#include "fliplab/moves.hpp"

#include <algorithm>
#include <array>
#include <string>
#include <unordered_map>

#include "fliplab/errors.hpp"

namespace fliplab {

std::pair<std::size_t, std::size_t> slot_shape(const Format& f, int slot)
{
    switch (slot) {
    case 0:
        return {f.n, f.m};
    case 1:
        return {f.m, f.p};
    default:
        return {f.p, f.n};
    }
}

namespace {

void check_slot(int s, const char* what)
{
    if (s < 0 || s > 2)
        throw RejectedMove(std::string(what) + " slot must be 0, 1 or 2");
}

void check_index(const Scheme& s, std::size_t i, const char* what)
{
    if (i >= s.rank())
        throw RejectedMove(std::string(what) + " index " + std::to_string(i) + " out of range (rank " +
                           std::to_string(s.rank()) + ")");
}

bool valid_scalar(const Ring& ring, std::uint64_t lambda)
{
    return lambda != 0 && ring.reduce_word(lambda) == lambda;
}

} // namespace

Scheme apply_flip(const Scheme& s, const FlipMove& mv)
{
    if (!s.ring().is_modular())
        throw RejectedMove("flips are defined over modular rings only");
    check_index(s, mv.i, "flip");
    check_index(s, mv.j, "flip");
    check_slot(mv.shared, "shared");
    check_slot(mv.target, "target");
    if (mv.i == mv.j)
        throw RejectedMove("flip needs two distinct triples");
    if (mv.shared == mv.target)
        throw RejectedMove("flip target slot must differ from the shared slot");
    if (!valid_scalar(s.ring(), mv.lambda))
        throw RejectedMove("flip scalar must be a nonzero canonical residue");
    if (!(s[mv.i].slot(mv.shared) == s[mv.j].slot(mv.shared)))
        throw RejectedMove("triples " + std::to_string(mv.i) + " and " + std::to_string(mv.j) +
                           " do not share slot " + std::to_string(mv.shared));

    Scheme out = s;
    Triple& ti = out.triples()[mv.i];
    Triple& tj = out.triples()[mv.j];
    const int other = mv.other();
    ti.slot(mv.target) = mat_add(ti.slot(mv.target), mat_scale(tj.slot(mv.target), mv.lambda));
    tj.slot(other) = mat_sub(tj.slot(other), mat_scale(ti.slot(other), mv.lambda));
    return out;
}

std::vector<FlipMove> enumerate_flips(const Scheme& s)
{
    std::vector<FlipMove> out;
    if (!s.ring().is_modular())
        return out;
    std::vector<std::uint64_t> lambdas{1};
    if (s.ring().kind() == RingKind::Zp)
        for (std::uint64_t l = 2; l < s.ring().prime(); ++l)
            lambdas.push_back(l);

    const std::size_t r = s.rank();
    for (int slot = 0; slot < 3; ++slot) {
        std::unordered_map<std::size_t, std::vector<std::size_t>> groups;
        std::vector<std::size_t> key(r);
        for (std::size_t i = 0; i < r; ++i) {
            key[i] = s[i].slot(slot).hash();
            groups[key[i]].push_back(i);
        }
        for (std::size_t i = 0; i < r; ++i) {
            for (std::size_t j : groups[key[i]]) {
                if (j == i || !(s[i].slot(slot) == s[j].slot(slot)))
                    continue;
                for (int target = 0; target < 3; ++target) {
                    if (target == slot)
                        continue;
                    for (auto l : lambdas)
                        out.push_back(FlipMove{i, j, slot, target, l});
                }
            }
        }
    }
    return out;
}

std::optional<ReductionMove> find_reduction(const Scheme& s)
{
    const std::size_t r = s.rank();
    for (std::size_t i = 0; i < r; ++i)
        if (s[i].has_zero_slot())
            return ZeroTriple{i};

    std::vector<std::array<std::size_t, 3>> h(r);
    for (std::size_t i = 0; i < r; ++i)
        for (int sl = 0; sl < 3; ++sl)
            h[i][sl] = s[i].slot(sl).hash();

    auto same = [&](std::size_t i, std::size_t j, int sl) {
        return h[i][sl] == h[j][sl] && s[i].slot(sl) == s[j].slot(sl);
    };
    for (std::size_t i = 0; i < r; ++i)
        for (std::size_t j = i + 1; j < r; ++j) {
            const bool e0 = same(i, j, 0), e1 = same(i, j, 1), e2 = same(i, j, 2);
            if (e0 && e1)
                return MergePair{i, j, 0, 1, 2};
            if (e0 && e2)
                return MergePair{i, j, 0, 2, 1};
            if (e1 && e2)
                return MergePair{i, j, 1, 2, 0};
        }
    return std::nullopt;
}

ReductionResult apply_reduction(const Scheme& s, const ReductionMove& mv)
{
    ReductionResult res;
    res.scheme = s;
    auto& triples = res.scheme.triples();
    if (const auto* z = std::get_if<ZeroTriple>(&mv)) {
        check_index(s, z->index, "reduction");
        if (!s[z->index].has_zero_slot())
            throw RejectedMove("triple " + std::to_string(z->index) + " has no zero slot");
        triples.erase(triples.begin() + static_cast<std::ptrdiff_t>(z->index));
        res.rank_delta = -1;
        return res;
    }

    const auto& mp = std::get<MergePair>(mv);
    check_index(s, mp.i, "merge");
    check_index(s, mp.j, "merge");
    check_slot(mp.shared1, "merge");
    check_slot(mp.shared2, "merge");
    check_slot(mp.free_slot, "merge");
    if (mp.i == mp.j || mp.shared1 == mp.shared2 || mp.free_slot == mp.shared1 || mp.free_slot == mp.shared2)
        throw RejectedMove("merge needs distinct triples and three distinct slots");
    if (!(s[mp.i].slot(mp.shared1) == s[mp.j].slot(mp.shared1)) ||
        !(s[mp.i].slot(mp.shared2) == s[mp.j].slot(mp.shared2)))
        throw RejectedMove("triples " + std::to_string(mp.i) + " and " + std::to_string(mp.j) +
                           " do not share the declared slots");

    Mat merged = mat_add(s[mp.i].slot(mp.free_slot), s[mp.j].slot(mp.free_slot));
    const bool vanished = merged.is_zero();
    triples[mp.i].slot(mp.free_slot) = std::move(merged);
    // erase the higher index first so the lower one stays valid
    const std::size_t lo = std::min(mp.i, mp.j), hi = std::max(mp.i, mp.j);
    if (vanished) {
        triples.erase(triples.begin() + static_cast<std::ptrdiff_t>(hi));
        triples.erase(triples.begin() + static_cast<std::ptrdiff_t>(lo));
        res.rank_delta = -2;
    } else {
        triples.erase(triples.begin() + static_cast<std::ptrdiff_t>(mp.j));
        res.rank_delta = -1;
    }
    return res;
}

Scheme apply_plus(const Scheme& s, const PlusMove& mv)
{
    check_index(s, mv.index, "plus");
    check_slot(mv.slot, "plus");
    const Mat& old = s[mv.index].slot(mv.slot);
    if (mv.x.rows() != old.rows() || mv.x.cols() != old.cols() || !(mv.x.ring() == old.ring()))
        throw RejectedMove("plus matrix has the wrong shape or ring");
    if (mv.x.is_zero())
        throw RejectedMove("plus matrix must be nonzero");
    if (mv.x == old)
        throw RejectedMove("plus matrix must differ from the current slot value");

    Scheme out = s;
    Triple rest = s[mv.index];
    rest.slot(mv.slot) = mat_sub(old, mv.x);
    out.triples()[mv.index].slot(mv.slot) = mv.x;
    out.triples().push_back(std::move(rest));
    return out;
}

PlusMove sample_plus(const Scheme& s, std::mt19937_64& rng)
{
    if (s.rank() == 0)
        throw RejectedMove("plus needs a nonempty scheme");
    const Ring& ring = s.ring();
    if (ring.kind() != RingKind::Z2 && ring.kind() != RingKind::Zp)
        throw RejectedMove("plus sampling is defined over Z2 and Zp only");
    const std::uint64_t q1 = ring.prime() - 1; // nonzero scalars

    PlusMove mv;
    std::uniform_int_distribution<std::size_t> pick_triple(0, s.rank() - 1);
    std::uniform_int_distribution<int> pick_slot(0, 2);
    std::uniform_int_distribution<std::uint64_t> pick_scalar(1, q1);
    for (;;) {
        mv.index = pick_triple(rng);
        mv.slot = pick_slot(rng);
        auto [rows, cols] = slot_shape(s.format(), mv.slot);
        const std::size_t cells = rows * cols;
        // uniform over {one nonzero entry} u {two nonzero entries}, weighted by their counts
        const std::uint64_t singles = cells * q1;
        const std::uint64_t pairs = cells * (cells - 1) / 2 * q1 * q1;
        std::uniform_int_distribution<std::uint64_t> coin(0, singles + pairs - 1);
        std::uniform_int_distribution<std::size_t> cell(0, cells - 1);
        Mat x(ring, rows, cols);
        const std::size_t a = cell(rng);
        x.set_residue(a / cols, a % cols, pick_scalar(rng));
        if (cells > 1 && coin(rng) >= singles) {
            std::size_t b = a;
            while (b == a)
                b = cell(rng);
            x.set_residue(b / cols, b % cols, pick_scalar(rng));
        }
        if (!(x == s[mv.index].slot(mv.slot))) {
            mv.x = std::move(x);
            return mv;
        }
    }
}

} // namespace fliplab
