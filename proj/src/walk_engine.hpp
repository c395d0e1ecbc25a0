#pragma once

// Mutable flip-graph state used inside random walks. Moves mirror the pure
// operations in moves.hpp exactly (same index semantics), so a logged walk can
// be replayed on Scheme values.

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "fliplab/errors.hpp"
#include "fliplab/moves.hpp"
#include "fliplab/search.hpp"

namespace fliplab::detail {

/// Z2 slots packed into one word each (requires every slot to have <= 64 entries).
struct PackedZ2 {
    using Slot = std::uint64_t;

    Format format;

    static bool fits(const Format& f) { return f.n * f.m <= 64 && f.m * f.p <= 64 && f.p * f.n <= 64; }

    Slot load(const Mat& a) const { return a.to_bits64(); }
    Mat store(const Slot& s, int slot) const
    {
        auto [r, c] = slot_shape(format, slot);
        return Mat::from_bits64(r, c, s);
    }
    void add_scaled(Slot& a, const Slot& b, std::uint64_t) const { a ^= b; }
    void sub_scaled(Slot& a, const Slot& b, std::uint64_t) const { a ^= b; }
    Slot difference(const Slot& a, const Slot& b) const { return a ^ b; }
    bool is_zero(const Slot& a) const { return a == 0; }
    std::uint64_t minus_one() const { return 1; }
    std::uint64_t random_lambda(std::mt19937_64&) const { return 1; }
};

/// Residue vectors over Z2 or Zp (any slot size).
struct ModVec {
    using Slot = std::vector<std::uint32_t>;

    Format format;
    Ring ring;

    Slot load(const Mat& a) const
    {
        Slot s(a.rows() * a.cols());
        for (std::size_t r = 0; r < a.rows(); ++r)
            for (std::size_t c = 0; c < a.cols(); ++c)
                s[r * a.cols() + c] = static_cast<std::uint32_t>(a.residue(r, c));
        return s;
    }
    Mat store(const Slot& s, int slot) const
    {
        auto [rows, cols] = slot_shape(format, slot);
        Mat a(ring, rows, cols);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c)
                a.set_residue(r, c, s[r * cols + c]);
        return a;
    }
    void add_scaled(Slot& a, const Slot& b, std::uint64_t lambda) const
    {
        for (std::size_t k = 0; k < a.size(); ++k)
            a[k] = static_cast<std::uint32_t>(ring.add(a[k], ring.mul(b[k], lambda)));
    }
    void sub_scaled(Slot& a, const Slot& b, std::uint64_t lambda) const
    {
        for (std::size_t k = 0; k < a.size(); ++k)
            a[k] = static_cast<std::uint32_t>(ring.sub(a[k], ring.mul(b[k], lambda)));
    }
    Slot difference(const Slot& a, const Slot& b) const
    {
        Slot d(a.size());
        for (std::size_t k = 0; k < a.size(); ++k)
            d[k] = static_cast<std::uint32_t>(ring.sub(a[k], b[k]));
        return d;
    }
    bool is_zero(const Slot& a) const
    {
        for (auto v : a)
            if (v)
                return false;
        return true;
    }
    std::uint64_t minus_one() const { return ring.prime() - 1; }
    std::uint64_t random_lambda(std::mt19937_64& rng) const
    {
        if (ring.prime() == 2)
            return 1;
        return std::uniform_int_distribution<std::uint64_t>(1, ring.prime() - 1)(rng);
    }
};

template <class Ops>
class WalkEngine {
public:
    using Slot = typename Ops::Slot;

    WalkEngine(Ops ops, const Scheme& s) : ops_(std::move(ops)), format_(s.format()), ring_(s.ring())
    {
        for (auto& c : cols_)
            c.reserve(s.rank() + 8);
        for (const Triple& t : s.triples())
            for (int k = 0; k < 3; ++k)
                cols_[k].push_back(ops_.load(t.slot(k)));
        rebuild();
    }

    std::size_t rank() const noexcept { return cols_[0].size(); }
    bool has_reduction() const noexcept { return pending_.has_value(); }
    bool has_flips() const noexcept { return !pairs_.empty(); }
    std::size_t flip_pairs() const noexcept { return pairs_.size(); }

    Scheme to_scheme() const
    {
        Scheme s(format_, ring_);
        s.triples().reserve(rank());
        for (std::size_t l = 0; l < rank(); ++l)
            s.triples().push_back(
                Triple{ops_.store(cols_[0][l], 0), ops_.store(cols_[1][l], 1), ops_.store(cols_[2][l], 2)});
        return s;
    }

    /// Applies the pending reduction; returns the rank change (-1 or -2).
    int apply_reduction(std::vector<WalkMove>* log)
    {
        ReductionMove mv = *pending_;
        pending_.reset();
        if (log)
            log->push_back(mv);
        int delta = -1;
        if (const auto* z = std::get_if<ZeroTriple>(&mv)) {
            erase(z->index);
        } else {
            const auto& mp = std::get<MergePair>(mv);
            Slot& dst = cols_[mp.free_slot][mp.i];
            ops_.add_scaled(dst, cols_[mp.free_slot][mp.j], 1);
            if (ops_.is_zero(dst)) {
                erase(std::max(mp.i, mp.j));
                erase(std::min(mp.i, mp.j));
                delta = -2;
            } else {
                erase(mp.j);
            }
        }
        rebuild();
        return delta;
    }

    /// Uniform flip: uniform unordered pair, direction, target slot and scalar.
    void random_flip(std::mt19937_64& rng, std::vector<WalkMove>* log)
    {
        const Pair pr = pairs_[std::uniform_int_distribution<std::size_t>(0, pairs_.size() - 1)(rng)];
        const unsigned coin = static_cast<unsigned>(rng() & 3);
        FlipMove mv;
        mv.shared = pr.s;
        mv.i = (coin & 1) ? pr.j : pr.i;
        mv.j = (coin & 1) ? pr.i : pr.j;
        mv.target = (pr.s + 1 + static_cast<int>(coin >> 1)) % 3;
        mv.lambda = ops_.random_lambda(rng);
        flip(mv, log);
    }

    /// Plus edge on triples i != j: (a,b,c) + (a',b',c') becomes
    /// (a-a',b,c) + (a',b-b',c) + (a',b',c'+c), realized as a split of i
    /// followed by a flip of the new triple with j. Returns false if no
    /// admissible pair was found in a few attempts.
    bool random_plus(std::mt19937_64& rng, std::vector<WalkMove>* log)
    {
        const std::size_t r = rank();
        if (r < 2)
            return false;
        std::uniform_int_distribution<std::size_t> pick(0, r - 1);
        for (int attempt = 0; attempt < 16; ++attempt) {
            const std::size_t i = pick(rng);
            const std::size_t j = pick(rng);
            const int s = static_cast<int>(rng() % 3);
            if (i == j)
                continue;
            const int t = (s + 1) % 3, u = (s + 2) % 3;
            if (cols_[s][i] == cols_[s][j] || cols_[t][i] == cols_[t][j])
                continue;
            Slot cu = cols_[u][j];
            ops_.add_scaled(cu, cols_[u][i], 1);
            if (ops_.is_zero(cu))
                continue;

            // split: i keeps a - a', the appended copy carries a'
            Slot x = ops_.difference(cols_[s][i], cols_[s][j]);
            if (log)
                log->push_back(PlusMove{i, s, ops_.store(x, s)});
            for (int k = 0; k < 3; ++k)
                cols_[k].push_back(k == s ? cols_[s][j] : cols_[k][i]);
            cols_[s][i] = std::move(x);
            const std::size_t k = rank() - 1;

            FlipMove mv{k, j, s, t, ops_.minus_one()};
            if (log)
                log->push_back(mv);
            apply_flip_slots(mv);
            rebuild();
            return true;
        }
        return false;
    }

private:
    struct Pair {
        std::uint32_t i, j;
        int s;
    };

    void erase(std::size_t x)
    {
        for (auto& c : cols_)
            c.erase(c.begin() + static_cast<std::ptrdiff_t>(x));
    }

    void apply_flip_slots(const FlipMove& mv)
    {
        const int other = mv.other();
        ops_.add_scaled(cols_[mv.target][mv.i], cols_[mv.target][mv.j], mv.lambda);
        ops_.sub_scaled(cols_[other][mv.j], cols_[other][mv.i], mv.lambda);
    }

    void flip(const FlipMove& mv, std::vector<WalkMove>* log)
    {
        if (log)
            log->push_back(mv);
        const std::size_t i = mv.i, j = mv.j;
        const int si = mv.target, sj = mv.other();
        const Slot old_i = cols_[si][i], old_j = cols_[sj][j];
        apply_flip_slots(mv);
        // A new reduction can only involve a freshly changed slot: before the
        // flip no two triples shared two slots and no slot was zero.
        merge_i_ = merge_j_ = SIZE_MAX;
        update_slot(i, si, old_i);
        update_slot(j, sj, old_j);
        const bool zi = ops_.is_zero(cols_[si][i]), zj = ops_.is_zero(cols_[sj][j]);
        if (zi || zj)
            pending_ = ZeroTriple{zi && zj ? std::min(i, j) : (zi ? i : j)};
        else if (merge_i_ != SIZE_MAX)
            pending_ = *mergeable(merge_i_, merge_j_);
    }

    // Slot s of triple x changed from old: drops stale pairs, adds new ones
    // and records the lowest merge candidate.
    void update_slot(std::size_t x, int s, const Slot& old)
    {
        const Slot* col = cols_[s].data();
        const Slot now = col[x];
        const int s1 = (s + 1) % 3, s2 = (s + 2) % 3;
        const std::size_t r = rank();
        for (std::size_t k = 0; k < r; ++k) {
            if (k == x)
                continue;
            if (col[k] == old) {
                remove_pair(std::min(k, x), std::max(k, x), s);
            } else if (col[k] == now) {
                const std::size_t lo = std::min(k, x), hi = std::max(k, x);
                add_pair(lo, hi, s);
                if ((cols_[s1][k] == cols_[s1][x] || cols_[s2][k] == cols_[s2][x]) &&
                    (merge_i_ == SIZE_MAX || std::pair(lo, hi) < std::pair(merge_i_, merge_j_))) {
                    merge_i_ = lo;
                    merge_j_ = hi;
                }
            }
        }
    }

    std::size_t pos_key(std::size_t lo, std::size_t hi, int s) const { return (lo * cap_ + hi) * 3 + s; }

    void add_pair(std::size_t lo, std::size_t hi, int s)
    {
        pos_[pos_key(lo, hi, s)] = static_cast<std::uint32_t>(pairs_.size());
        pairs_.push_back(Pair{static_cast<std::uint32_t>(lo), static_cast<std::uint32_t>(hi), s});
    }

    void remove_pair(std::size_t lo, std::size_t hi, int s)
    {
        const std::uint32_t at = pos_[pos_key(lo, hi, s)];
        const Pair last = pairs_.back();
        pairs_[at] = last;
        pos_[pos_key(last.i, last.j, last.s)] = at;
        pairs_.pop_back();
    }

    std::optional<MergePair> mergeable(std::size_t a, std::size_t b) const
    {
        const std::size_t i = std::min(a, b), j = std::max(a, b);
        const bool e0 = cols_[0][i] == cols_[0][j], e1 = cols_[1][i] == cols_[1][j], e2 = cols_[2][i] == cols_[2][j];
        if (e0 && e1)
            return MergePair{i, j, 0, 1, 2};
        if (e0 && e2)
            return MergePair{i, j, 0, 2, 1};
        if (e1 && e2)
            return MergePair{i, j, 1, 2, 0};
        return std::nullopt;
    }

    bool has_zero(std::size_t x) const
    {
        return ops_.is_zero(cols_[0][x]) || ops_.is_zero(cols_[1][x]) || ops_.is_zero(cols_[2][x]);
    }

    // Full recomputation, in the same priority order as find_reduction().
    void rebuild()
    {
        pairs_.clear();
        pending_.reset();
        const std::size_t r = rank();
        if (r > cap_) {
            cap_ = r + 8;
            pos_.assign(cap_ * cap_ * 3, 0);
        }
        for (std::size_t i = 0; i < r && !pending_; ++i)
            if (has_zero(i))
                pending_ = ZeroTriple{i};
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = i + 1; j < r; ++j) {
                int shared = 0;
                for (int s = 0; s < 3; ++s)
                    if (cols_[s][i] == cols_[s][j]) {
                        add_pair(i, j, s);
                        ++shared;
                    }
                if (shared >= 2 && !pending_)
                    pending_ = *mergeable(i, j);
            }
    }

    Ops ops_;
    Format format_;
    Ring ring_;
    std::array<std::vector<Slot>, 3> cols_;
    std::vector<Pair> pairs_;
    std::optional<ReductionMove> pending_;
    std::size_t merge_i_ = SIZE_MAX, merge_j_ = SIZE_MAX;
    // pair (lo, hi, s) -> its index in pairs_, for a capacity of cap_ triples
    std::vector<std::uint32_t> pos_;
    std::size_t cap_ = 0;
};

} // namespace fliplab::detail
