#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <variant>
#include <vector>

#include "fliplab/scheme.hpp"

namespace fliplab {

// Slots are 0 (u), 1 (v), 2 (w).

/// Rank-preserving rewrite of triples i and j that agree in slot `shared`:
///   triple_i[target] += lambda * triple_j[target]
///   triple_j[other]  -= lambda * triple_i[other]
/// where `other` is the remaining slot. Over Z2 lambda is 1.
struct FlipMove {
    std::size_t i = 0, j = 0;
    int shared = 0;
    int target = 1;
    std::uint64_t lambda = 1;

    int other() const noexcept { return 3 - shared - target; }
    friend bool operator==(const FlipMove&, const FlipMove&) = default;
};

struct ZeroTriple {
    std::size_t index = 0;
    friend bool operator==(const ZeroTriple&, const ZeroTriple&) = default;
};

/// Triples i < j agreeing in two slots; the free slot is summed into i and j is removed.
struct MergePair {
    std::size_t i = 0, j = 0;
    int shared1 = 0, shared2 = 1;
    int free_slot = 2;
    friend bool operator==(const MergePair&, const MergePair&) = default;
};

using ReductionMove = std::variant<ZeroTriple, MergePair>;

/// Split of one triple: slot `slot` becomes x in place, and a copy with
/// (old - x) in that slot is appended at the end.
struct PlusMove {
    std::size_t index = 0;
    int slot = 0;
    Mat x;
};

struct ReductionResult {
    Scheme scheme;
    /// -1, or -2 when a merged triple cancels completely.
    int rank_delta = -1;
};

/// Throws RejectedMove if the move's invariants do not hold. Modular rings only.
Scheme apply_flip(const Scheme& s, const FlipMove& mv);

/// Every valid flip: each ordered pair (i, j) sharing a slot value, each of
/// the two target slots and, over Zp, every nonzero lambda. Shared values are
/// grouped by content hash with exact equality confirmation.
std::vector<FlipMove> enumerate_flips(const Scheme& s);

/// A zero-slot triple if any (lowest index), otherwise the first mergeable pair
/// in (i, j) index order, otherwise nullopt.
std::optional<ReductionMove> find_reduction(const Scheme& s);
ReductionResult apply_reduction(const Scheme& s, const ReductionMove& mv);

/// Throws RejectedMove if x is zero, equals the old slot value, or has the wrong shape/ring.
Scheme apply_plus(const Scheme& s, const PlusMove& mv);

/// Uniform random nonzero matrix with at most two nonzero entries of the
/// given slot's shape, different from the current slot value.
PlusMove sample_plus(const Scheme& s, std::mt19937_64& rng);

/// Slot shape of a format: (n,m), (m,p), (p,n).
std::pair<std::size_t, std::size_t> slot_shape(const Format& f, int slot);

} // namespace fliplab
