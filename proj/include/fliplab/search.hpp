#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fliplab/moves.hpp"
#include "fliplab/scheme.hpp"

namespace fliplab {

/// Progress record emitted by reduce_pool; rendered as one JSON line by the CLI.
struct ProgressEvent {
    std::size_t rank = 0;
    std::uint64_t walks_done = 0;
    std::uint64_t improvements = 0;
    double elapsed_s = 0;

    std::string to_json_line() const;
};

struct SearchConfig {
    /// Walks per rank level: paths_multiplier * n*m*p.
    std::uint64_t paths_multiplier = 100;
    /// Edge budget per walk: length_multiplier * n*m*p.
    std::uint64_t length_multiplier = 100000;
    /// Chance per step of taking a plus edge once the walk is stalled.
    double plus_probability = 1e-4;
    /// Plus edges are only taken while rank < start rank + this.
    std::size_t plus_overshoot_budget = 2;
    /// Steps without a reduction before plus edges are considered.
    std::uint64_t stall_threshold = 1000;
    std::uint64_t seed = 0;
    unsigned workers = 1;

    /// Cap on the improved pool kept per rank (uniform eviction beyond it).
    std::size_t pool_cap = 10000;
    /// If nonzero, a rank level ends once the shortest completed prefix of
    /// walks holds this many improvements. The result stays deterministic.
    std::size_t stop_after_improvements = 0;
    /// search_to_minimum stops as soon as the pool rank is <= target_rank.
    std::optional<std::size_t> target_rank;
    /// Called from the collecting thread only.
    std::function<void(const ProgressEvent&)> progress;

    /// Throws StructuralError on out-of-range values.
    void validate() const;
};

struct WalkOutcome {
    /// First scheme reached with rank below the start rank.
    std::optional<Scheme> improved;
    std::uint64_t steps_taken = 0;
    std::uint64_t reductions_taken = 0;
    std::uint64_t plus_taken = 0;
    /// Net rank change over the walk (negative when improved).
    std::int64_t rank_change = 0;
    std::size_t start_pool_index = 0;
};

/// Edges taken by a walk in order. A plus edge appears as a PlusMove followed
/// by the FlipMove that completes it.
using WalkMove = std::variant<FlipMove, ReductionMove, PlusMove>;

/// One bounded random walk in the flip graph of start's format.
///
/// Each step takes a reduction if one exists; otherwise a uniformly sampled
/// flip, or, once stalled for stall_threshold steps and while the rank budget
/// allows, a plus edge with probability plus_probability. Stops at the first
/// scheme whose rank is below the start rank, or after length_multiplier*n*m*p
/// steps. The RNG stream depends only on (cfg.seed, walk_index).
///
/// Ring must be Z2 or Zp; start must verify (ContractError otherwise).
WalkOutcome random_walk(const Scheme& start, const SearchConfig& cfg, std::uint64_t walk_index,
                        std::vector<WalkMove>* log = nullptr);

struct LevelStats {
    std::size_t rank = 0;
    std::uint64_t walks = 0;
    std::uint64_t improvements = 0;
    std::uint64_t distinct = 0;
    std::uint64_t steps = 0;
    std::uint64_t plus_edges = 0;
    double elapsed_s = 0;
};

struct PoolReduction {
    /// Deduplicated schemes of rank r - 1, in walk order.
    std::vector<Scheme> schemes;
    /// Schemes that dropped further (merge-to-zero), lowest rank first.
    std::vector<Scheme> deeper;
    LevelStats stats;
};

/// Runs paths_multiplier*n*m*p walks from uniformly sampled pool members.
/// All pool members must share format, ring and rank (StructuralError) and verify
/// (ContractError).
PoolReduction reduce_pool(const std::vector<Scheme>& pool, const SearchConfig& cfg);

struct SearchResult {
    std::size_t final_rank = 0;
    std::vector<Scheme> final_pool;
    std::vector<LevelStats> trace;
};

/// Repeats reduce_pool until no walk improves the pool (or target_rank is met).
SearchResult search_to_minimum(const std::vector<Scheme>& pool, const SearchConfig& cfg);

/// Order-insensitive dedup (canonical hash, confirmed by comparing canonical orders).
std::vector<Scheme> dedup_schemes(const std::vector<Scheme>& schemes);

} // namespace fliplab
