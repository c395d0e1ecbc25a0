#include "fliplab/search.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <map>
#include <mutex>
#include <json.hpp>
#include <random>
#include <thread>
#include <unordered_map>

#include "fliplab/errors.hpp"
#include "fliplab/hash.hpp"
#include "walk_engine.hpp"

namespace fliplab {

std::string ProgressEvent::to_json_line() const
{
    nlohmann::json j{{"rank", rank}, {"walks_done", walks_done}, {"improvements", improvements},
                     {"elapsed_s", elapsed_s}};
    return j.dump();
}

void SearchConfig::validate() const
{
    if (paths_multiplier == 0)
        throw StructuralError("paths_multiplier must be positive");
    if (length_multiplier == 0)
        throw StructuralError("length_multiplier must be positive");
    if (!(plus_probability >= 0.0 && plus_probability < 1.0))
        throw StructuralError("plus_probability must lie in [0, 1)");
    if (workers == 0)
        throw StructuralError("workers must be positive");
    if (pool_cap == 0)
        throw StructuralError("pool_cap must be positive");
}

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t walk_index)
{
    return splitmix64(splitmix64(seed) ^ splitmix64(walk_index + 0x5851f42d4c957f2dULL));
}

void check_walk_ring(const Ring& ring)
{
    if (ring.kind() != RingKind::Z2 && ring.kind() != RingKind::Zp)
        throw StructuralError("random walks need ring Z2 or Zp, got " + ring.name());
}

template <class Ops>
WalkOutcome run_walk(Ops ops, const Scheme& start, const SearchConfig& cfg, std::mt19937_64& rng,
                     std::vector<WalkMove>* log, const std::function<bool()>& cancelled)
{
    detail::WalkEngine<Ops> eng(std::move(ops), start);
    WalkOutcome out;
    const std::size_t start_rank = start.rank();
    const std::uint64_t budget = cfg.length_multiplier * start.format().volume();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uint64_t stall = 0;

    while (out.steps_taken < budget) {
        if (cancelled && (out.steps_taken & 4095) == 0 && cancelled())
            break;
        if (eng.has_reduction()) {
            eng.apply_reduction(log);
            ++out.steps_taken;
            ++out.reductions_taken;
            stall = 0;
            if (eng.rank() < start_rank) {
                out.improved = eng.to_scheme();
                break;
            }
            continue;
        }
        const bool plus_ok = eng.rank() < start_rank + cfg.plus_overshoot_budget;
        if (plus_ok && stall >= cfg.stall_threshold && cfg.plus_probability > 0 &&
            unit(rng) < cfg.plus_probability && eng.random_plus(rng, log)) {
            ++out.steps_taken;
            ++out.plus_taken;
            stall = 0;
            continue;
        }
        if (!eng.has_flips()) {
            if (plus_ok && eng.random_plus(rng, log)) {
                ++out.steps_taken;
                ++out.plus_taken;
                stall = 0;
                continue;
            }
            break;
        }
        eng.random_flip(rng, log);
        ++out.steps_taken;
        ++stall;
    }
    out.rank_change = static_cast<std::int64_t>(eng.rank()) - static_cast<std::int64_t>(start_rank);
    return out;
}

WalkOutcome walk_dispatch(const Scheme& start, const SearchConfig& cfg, std::mt19937_64& rng,
                          std::vector<WalkMove>* log, const std::function<bool()>& cancelled)
{
    if (start.ring().kind() == RingKind::Z2 && detail::PackedZ2::fits(start.format()))
        return run_walk(detail::PackedZ2{start.format()}, start, cfg, rng, log, cancelled);
    return run_walk(detail::ModVec{start.format(), start.ring()}, start, cfg, rng, log, cancelled);
}

} // namespace

WalkOutcome random_walk(const Scheme& start, const SearchConfig& cfg, std::uint64_t walk_index,
                        std::vector<WalkMove>* log)
{
    cfg.validate();
    check_walk_ring(start.ring());
    if (!verify(start))
        throw ContractError("random_walk: start scheme does not verify");
    std::mt19937_64 rng(stream_seed(cfg.seed, walk_index));
    return walk_dispatch(start, cfg, rng, log, {});
}

std::vector<Scheme> dedup_schemes(const std::vector<Scheme>& schemes)
{
    std::vector<Scheme> out;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> seen;
    std::vector<Scheme> canon;
    for (const Scheme& s : schemes) {
        const std::uint64_t h = canonical_hash(s);
        Scheme c = canonical_order(s);
        auto& bucket = seen[h];
        bool dup = false;
        for (std::size_t k : bucket)
            if (canon[k] == c) {
                dup = true;
                break;
            }
        if (dup)
            continue;
        bucket.push_back(canon.size());
        canon.push_back(std::move(c));
        out.push_back(s);
    }
    return out;
}

PoolReduction reduce_pool(const std::vector<Scheme>& pool, const SearchConfig& cfg)
{
    cfg.validate();
    if (pool.empty())
        throw StructuralError("reduce_pool: empty pool");
    const Format format = pool[0].format();
    const Ring ring = pool[0].ring();
    const std::size_t rank = pool[0].rank();
    check_walk_ring(ring);
    for (std::size_t k = 0; k < pool.size(); ++k) {
        if (!(pool[k].format() == format) || !(pool[k].ring() == ring) || pool[k].rank() != rank)
            throw StructuralError("reduce_pool: pool members differ in format, ring or rank (member " +
                                  std::to_string(k) + ")");
        if (!verify(pool[k]))
            throw ContractError("reduce_pool: pool member " + std::to_string(k) + " does not verify");
    }

    const auto t0 = Clock::now();
    const std::uint64_t walks = cfg.paths_multiplier * format.volume();
    std::vector<std::optional<WalkOutcome>> results(walks);
    std::vector<char> done(walks, 0);

    std::atomic<std::uint64_t> next{0};
    std::atomic<std::uint64_t> cutoff{walks};
    std::mutex mu;
    std::condition_variable cv;
    std::uint64_t frontier = 0, frontier_improvements = 0, finished = 0, improvements = 0;
    unsigned running = cfg.workers;

    auto worker = [&] {
        for (;;) {
            const std::uint64_t w = next.fetch_add(1);
            if (w >= walks || w >= cutoff.load())
                break;
            std::mt19937_64 rng(stream_seed(cfg.seed, (static_cast<std::uint64_t>(rank) << 32) | w));
            const std::size_t start = std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng);
            std::function<bool()> cancelled = [&cutoff, w] { return w >= cutoff.load(); };
            WalkOutcome out = walk_dispatch(pool[start], cfg, rng, nullptr, cancelled);
            out.start_pool_index = start;

            std::lock_guard lock(mu);
            ++finished;
            if (out.improved)
                ++improvements;
            results[w] = std::move(out);
            done[w] = 1;
            while (frontier < walks && done[frontier]) {
                if (results[frontier]->improved)
                    ++frontier_improvements;
                ++frontier;
                if (cfg.stop_after_improvements && frontier_improvements >= cfg.stop_after_improvements &&
                    frontier < cutoff.load()) {
                    cutoff.store(frontier);
                    break;
                }
            }
            cv.notify_all();
        }
        std::lock_guard lock(mu);
        --running;
        cv.notify_all();
    };

    std::vector<std::thread> threads;
    for (unsigned t = 0; t < cfg.workers; ++t)
        threads.emplace_back(worker);
    {
        std::unique_lock lock(mu);
        auto last = Clock::now();
        while (running > 0) {
            cv.wait_for(lock, std::chrono::milliseconds(200));
            if (cfg.progress && Clock::now() - last >= std::chrono::seconds(1)) {
                last = Clock::now();
                cfg.progress(ProgressEvent{rank, finished, improvements,
                                           std::chrono::duration<double>(last - t0).count()});
            }
        }
    }
    for (auto& t : threads)
        t.join();

    PoolReduction res;
    LevelStats& st = res.stats;
    st.rank = rank;
    const std::uint64_t limit = cutoff.load();
    std::vector<Scheme> level, deeper;
    for (std::uint64_t w = 0; w < limit; ++w) {
        const WalkOutcome& o = *results[w];
        ++st.walks;
        st.steps += o.steps_taken;
        st.plus_edges += o.plus_taken;
        if (!o.improved)
            continue;
        if (!verify(*o.improved))
            throw ContractError("reduce_pool: walk " + std::to_string(w) + " produced an invalid scheme");
        ++st.improvements;
        if (o.improved->rank() + 1 == rank)
            level.push_back(*o.improved);
        else
            deeper.push_back(*o.improved);
    }

    res.schemes = dedup_schemes(level);
    st.distinct = res.schemes.size();
    if (res.schemes.size() > cfg.pool_cap) {
        // uniform subset, kept in walk order
        std::mt19937_64 rng(stream_seed(cfg.seed ^ 0xa5a5a5a5ULL, rank));
        std::vector<std::size_t> idx(res.schemes.size());
        for (std::size_t k = 0; k < idx.size(); ++k)
            idx[k] = k;
        for (std::size_t k = 0; k < cfg.pool_cap; ++k)
            std::swap(idx[k], idx[std::uniform_int_distribution<std::size_t>(k, idx.size() - 1)(rng)]);
        idx.resize(cfg.pool_cap);
        std::sort(idx.begin(), idx.end());
        std::vector<Scheme> kept;
        kept.reserve(idx.size());
        for (std::size_t k : idx)
            kept.push_back(std::move(res.schemes[k]));
        res.schemes = std::move(kept);
    }
    std::stable_sort(deeper.begin(), deeper.end(),
                     [](const Scheme& a, const Scheme& b) { return a.rank() < b.rank(); });
    res.deeper = dedup_schemes(deeper);
    st.elapsed_s = std::chrono::duration<double>(Clock::now() - t0).count();
    if (cfg.progress)
        cfg.progress(ProgressEvent{rank, st.walks, st.improvements, st.elapsed_s});
    return res;
}

SearchResult search_to_minimum(const std::vector<Scheme>& pool, const SearchConfig& cfg)
{
    cfg.validate();
    if (pool.empty())
        throw StructuralError("search_to_minimum: empty pool");
    SearchResult res;
    std::vector<Scheme> current = dedup_schemes(pool);
    const Format f = current[0].format();
    const bool trivial = std::min({f.n, f.m, f.p}) == 1;
    for (;;) {
        const std::size_t r = current[0].rank();
        if (cfg.target_rank && r <= *cfg.target_rank)
            break;
        // with a unit dimension the standard rank n*m*p is optimal
        if (trivial && r <= f.volume())
            break;
        PoolReduction pr = reduce_pool(current, cfg);
        res.trace.push_back(pr.stats);
        if (!pr.deeper.empty()) {
            const std::size_t lowest = pr.deeper.front().rank();
            std::vector<Scheme> next;
            for (auto& s : pr.deeper)
                if (s.rank() == lowest)
                    next.push_back(std::move(s));
            current = std::move(next);
            continue;
        }
        if (pr.schemes.empty())
            break;
        current = std::move(pr.schemes);
    }
    res.final_rank = current[0].rank();
    res.final_pool = std::move(current);
    return res;
}

} // namespace fliplab
