#include "fliplab/campaign.hpp"

#include <algorithm>
#include <set>

#include "fliplab/hash.hpp"
#include "fliplab/meta.hpp"
#include "fliplab/scheme_io.hpp"

namespace fliplab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

Format format_from_json(const json& j, const std::string& where)
{
    if (!j.is_array() || j.size() != 3)
        throw ParseError(where, "expected [n, m, p]");
    for (std::size_t k = 0; k < 3; ++k)
        if (!j[k].is_number_unsigned() || j[k].get<std::uint64_t>() == 0)
            throw ParseError(where + "[" + std::to_string(k) + "]", "expected a positive integer");
    return Format(j[0].get<std::size_t>(), j[1].get<std::size_t>(), j[2].get<std::size_t>());
}

Format format_from_key(const std::string& key, const std::string& where)
{
    std::size_t d[3];
    std::size_t pos = 0;
    for (int k = 0; k < 3; ++k) {
        const std::size_t end = k < 2 ? key.find('x', pos) : key.size();
        const std::string part = key.substr(pos, end == std::string::npos ? std::string::npos : end - pos);
        if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos || end == std::string::npos)
            throw ParseError(where, "expected a format key like \"2x2x3\", got \"" + key + "\"");
        d[k] = std::stoul(part);
        if (d[k] == 0)
            throw ParseError(where, "format dimensions must be positive");
        pos = end + 1;
    }
    return Format(d[0], d[1], d[2]);
}

std::vector<FormatPerm> all_perms()
{
    std::vector<FormatPerm> out;
    std::array<std::uint8_t, 3> p{0, 1, 2};
    do
        out.push_back(FormatPerm{p});
    while (std::next_permutation(p.begin(), p.end()));
    return out; // identity first
}

std::optional<FormatPerm> perm_between(const Format& from, const Format& to)
{
    for (const FormatPerm& s : all_perms())
        if (s.apply(from) == to)
            return s;
    return std::nullopt;
}

Format shifted(const Format& f, int axis, long delta)
{
    std::array<std::size_t, 3> d{f.n, f.m, f.p};
    d[axis] = static_cast<std::size_t>(static_cast<long>(d[axis]) + delta);
    return Format(d[0], d[1], d[2]);
}

std::size_t get_size(const json& j, const char* key, std::size_t fallback)
{
    if (!j.contains(key))
        return fallback;
    if (!j[key].is_number_unsigned())
        throw ParseError(key, "expected a non-negative integer");
    return j[key].get<std::size_t>();
}

} // namespace

void apply_search_overrides(const json& j, SearchConfig& cfg)
{
    if (!j.is_object())
        throw ParseError("search", "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string& k = it.key();
        const json& v = it.value();
        const std::string where = "search." + k;
        auto uint = [&] {
            if (!v.is_number_unsigned())
                throw ParseError(where, "expected a non-negative integer");
            return v.get<std::uint64_t>();
        };
        if (k == "paths_multiplier")
            cfg.paths_multiplier = uint();
        else if (k == "length_multiplier")
            cfg.length_multiplier = uint();
        else if (k == "plus_overshoot_budget")
            cfg.plus_overshoot_budget = uint();
        else if (k == "stall_threshold")
            cfg.stall_threshold = uint();
        else if (k == "pool_cap")
            cfg.pool_cap = uint();
        else if (k == "stop_after_improvements")
            cfg.stop_after_improvements = uint();
        else if (k == "target_rank")
            cfg.target_rank = uint();
        else if (k == "seed")
            cfg.seed = uint();
        else if (k == "workers")
            cfg.workers = static_cast<unsigned>(uint());
        else if (k == "plus_probability") {
            if (!v.is_number())
                throw ParseError(where, "expected a number");
            cfg.plus_probability = v.get<double>();
        } else
            throw ParseError(where, "unknown search setting");
    }
}

CampaignSpec campaign_from_json(const json& j, const fs::path& base_dir)
{
    CampaignSpec spec;
    const json* edges = &j;
    if (j.is_object()) {
        if (!j.contains("edges"))
            throw ParseError("edges", "missing field");
        edges = &j["edges"];
        if (j.contains("ring"))
            spec.ring = ring_from_json(j["ring"]);
        if (spec.ring.kind() != RingKind::Z2 && spec.ring.kind() != RingKind::Zp)
            throw UnsupportedRingError("ring", "campaigns search over Z2 or Zp only");
        if (j.contains("seeds")) {
            if (!j["seeds"].is_object())
                throw ParseError("seeds", "expected an object keyed by format");
            for (auto it = j["seeds"].begin(); it != j["seeds"].end(); ++it) {
                const std::string where = "seeds." + it.key();
                const Format f = format_from_key(it.key(), where);
                const json& files = it.value().is_array() ? it.value() : json::array({it.value()});
                for (const auto& x : files) {
                    if (!x.is_string())
                        throw ParseError(where, "expected file names");
                    fs::path p = x.get<std::string>();
                    spec.seeds[f].push_back(p.is_absolute() ? p : base_dir / p);
                }
            }
        }
        if (j.contains("reference_ranks")) {
            if (!j["reference_ranks"].is_object())
                throw ParseError("reference_ranks", "expected an object keyed by format");
            for (auto it = j["reference_ranks"].begin(); it != j["reference_ranks"].end(); ++it) {
                const std::string where = "reference_ranks." + it.key();
                if (!it.value().is_number_unsigned())
                    throw ParseError(where, "expected a positive integer");
                spec.reference_ranks[format_from_key(it.key(), where)] = it.value().get<std::size_t>();
            }
        }
        if (j.contains("standard_seeds")) {
            if (!j["standard_seeds"].is_boolean())
                throw ParseError("standard_seeds", "expected a boolean");
            spec.standard_seeds = j["standard_seeds"].get<bool>();
        }
        if (j.contains("stop_at_reference")) {
            if (!j["stop_at_reference"].is_boolean())
                throw ParseError("stop_at_reference", "expected a boolean");
            spec.stop_at_reference = j["stop_at_reference"].get<bool>();
        }
        spec.runner_ups = get_size(j, "runner_ups", spec.runner_ups);
        spec.combine_pairs = get_size(j, "combine_pairs", spec.combine_pairs);
        spec.max_start_pool = get_size(j, "max_start_pool", spec.max_start_pool);
        if (j.contains("search")) {
            SearchConfig probe;
            apply_search_overrides(j["search"], probe); // validates keys
            spec.search = j["search"];
        }
    }
    if (!edges->is_array())
        throw ParseError("edges", "expected an array of edges");
    for (std::size_t k = 0; k < edges->size(); ++k) {
        const json& e = (*edges)[k];
        const std::string where = "edges[" + std::to_string(k) + "]";
        if (!e.is_object())
            throw ParseError(where, "expected an object");
        for (const char* key : {"from", "to", "kind"})
            if (!e.contains(key))
                throw ParseError(where + "." + key, "missing field");
        CampaignEdge ce;
        ce.from = format_from_json(e["from"], where + ".from");
        ce.to = format_from_json(e["to"], where + ".to");
        const std::string kind = e["kind"].is_string() ? e["kind"].get<std::string>() : "";
        if (kind == "extend")
            ce.kind = CampaignEdgeKind::Extend;
        else if (kind == "project")
            ce.kind = CampaignEdgeKind::Project;
        else if (kind == "combine")
            ce.kind = CampaignEdgeKind::Combine;
        else
            throw ParseError(where + ".kind", "expected \"extend\", \"project\" or \"combine\"");
        if (ce.kind == CampaignEdgeKind::Combine) {
            if (!e.contains("with_second"))
                throw ParseError(where + ".with_second", "missing field for a combine edge");
            ce.with_second = format_from_json(e["with_second"], where + ".with_second");
        }
        spec.edges.push_back(ce);
    }
    return spec;
}

CampaignSpec read_campaign(const fs::path& path)
{
    const std::string text = read_text_file(path);
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(path.string(), std::string("invalid JSON: ") + e.what());
    }
    try {
        return campaign_from_json(j, path.parent_path());
    } catch (const UnsupportedRingError& e) {
        throw UnsupportedRingError(path.string(), e.what());
    } catch (const ParseError& e) {
        throw ParseError(path.string(), e.what());
    }
}

PoolEntry import_scheme(const fs::path& path, const Format& expected_format, const Ring& expected_ring)
{
    Scheme s = read_scheme(path);
    if (!(s.format() == expected_format))
        throw StructuralError(path.string() + ": format " + s.format().str() + " differs from the declared " +
                              expected_format.str());
    if (!(s.ring() == expected_ring))
        throw StructuralError(path.string() + ": ring " + s.ring().name() + " differs from the declared " +
                              expected_ring.name());
    VerifyResult vr = verify(s);
    if (!vr)
        throw ImportRejected(path.string() + ": " + vr.summary(), vr);
    return PoolEntry{std::move(s), "external", path.string()};
}

Scheme realize_extend(const Scheme& s, const Format& to)
{
    for (int a = 0; a < 3; ++a) {
        const Format g = shifted(s.format(), a, 1);
        if (auto sigma = perm_between(g, to)) {
            Scheme e = extend(s, static_cast<DimAxis>(a));
            return sigma->is_identity() ? e : permute_format(e, *sigma);
        }
    }
    throw StructuralError("no extension leads from " + s.format().str() + " to " + to.str());
}

Scheme realize_project(const Scheme& s, const Format& to)
{
    for (int a = 0; a < 3; ++a) {
        if (s.format()[a] < 2)
            continue;
        const Format g = shifted(s.format(), a, -1);
        if (auto sigma = perm_between(g, to)) {
            Scheme e = project(s, static_cast<DimAxis>(a));
            return sigma->is_identity() ? e : permute_format(e, *sigma);
        }
    }
    throw StructuralError("no projection leads from " + s.format().str() + " to " + to.str());
}

Scheme realize_combine(const Scheme& a, const Scheme& b, const Format& to)
{
    const auto perms = all_perms();
    for (int ax = 0; ax < 3; ++ax)
        for (const FormatPerm& s1 : perms) {
            const Format fa = s1.apply(a.format());
            for (const FormatPerm& s2 : perms) {
                const Format fb = s2.apply(b.format());
                bool ok = fa[ax] + fb[ax] == to[ax];
                for (int k = 0; k < 3 && ok; ++k)
                    if (k != ax && (fa[k] != fb[k] || fa[k] != to[k]))
                        ok = false;
                if (!ok)
                    continue;
                const Scheme pa = s1.is_identity() ? a : permute_format(a, s1);
                const Scheme pb = s2.is_identity() ? b : permute_format(b, s2);
                return combine(pa, pb, static_cast<DimAxis>(ax));
            }
        }
    throw StructuralError("formats " + a.format().str() + " and " + b.format().str() + " do not combine to " +
                          to.str());
}

CampaignResult run_meta_campaign(const CampaignSpec& spec, const SearchConfig& base_cfg, PoolStore& store,
                                 const std::function<void(const std::string&)>& log)
{
    auto say = [&](const std::string& msg) {
        if (log)
            log(msg);
    };
    SearchConfig cfg = base_cfg;
    apply_search_overrides(spec.search, cfg);
    cfg.validate();

    CampaignResult res;
    GenealogyDag& dag = res.dag;

    // dependency graph over formats
    std::set<Format> formats;
    std::map<Format, std::vector<std::size_t>> incoming;
    std::map<Format, std::set<Format>> deps;
    for (std::size_t k = 0; k < spec.edges.size(); ++k) {
        const CampaignEdge& e = spec.edges[k];
        formats.insert(e.from);
        formats.insert(e.to);
        incoming[e.to].push_back(k);
        deps[e.to].insert(e.from);
        if (e.with_second) {
            formats.insert(*e.with_second);
            deps[e.to].insert(*e.with_second);
        }
    }
    for (const auto& [f, files] : spec.seeds)
        formats.insert(f);

    std::vector<Format> order;
    {
        std::map<Format, std::size_t> pending;
        for (const Format& f : formats)
            pending[f] = deps[f].size();
        std::set<Format> ready;
        for (const auto& [f, n] : pending)
            if (n == 0)
                ready.insert(f);
        while (!ready.empty()) {
            const Format f = *ready.begin();
            ready.erase(ready.begin());
            order.push_back(f);
            for (const Format& g : formats)
                if (deps[g].count(f) && --pending[g] == 0)
                    ready.insert(g);
        }
        if (order.size() != formats.size())
            throw StructuralError("campaign edges contain a cycle");
    }

    for (const Format& f : order) {
        DagVertex& v = dag.format_vertex(f);
        if (auto it = spec.reference_ranks.find(f); it != spec.reference_ranks.end())
            v.reference_rank = it->second;
    }

    for (const Format& f : order) {
        std::vector<Scheme> start;
        const bool root = incoming[f].empty();

        if (auto it = spec.seeds.find(f); it != spec.seeds.end())
            for (const fs::path& p : it->second)
                start.push_back(import_scheme(p, f, spec.ring).scheme);
        if (root && start.empty()) {
            const auto ranks = store.ranks(f, spec.ring);
            if (!ranks.empty())
                start = store.load(f, spec.ring, ranks.front());
            else if (spec.standard_seeds)
                start.push_back(standard_scheme(f, spec.ring));
            else
                throw StructuralError("campaign: missing seed pool for root format " + f.str());
        }
        dag.format_vertex(f).seed = root;

        for (std::size_t k : incoming[f]) {
            const CampaignEdge& e = spec.edges[k];
            const auto& src = res.formats.at(e.from).best;
            if (e.kind == CampaignEdgeKind::Combine) {
                const auto& second = res.formats.at(*e.with_second).best;
                std::size_t made = 0;
                for (std::size_t a = 0; a < src.size() && made < spec.combine_pairs; ++a)
                    for (std::size_t b = 0; b < second.size() && made < spec.combine_pairs; ++b, ++made)
                        start.push_back(realize_combine(src[a], second[b], f));
                const std::string d = dag.add_combine_dummy();
                dag.add_edge(e.from.label(), d, EdgeKind::CombineIn);
                dag.add_edge(e.with_second->label(), d, EdgeKind::CombineIn);
                dag.add_edge(d, f.label(), EdgeKind::CombineOut);
            } else {
                for (const Scheme& s : src)
                    start.push_back(e.kind == CampaignEdgeKind::Extend ? realize_extend(s, f) : realize_project(s, f));
                dag.add_edge(e.from.label(), f.label(),
                             e.kind == CampaignEdgeKind::Extend ? EdgeKind::Extend : EdgeKind::Project);
            }
        }
        if (start.empty())
            throw StructuralError("campaign: empty starting pool for " + f.str());

        start = dedup_schemes(start);
        std::stable_sort(start.begin(), start.end(),
                         [](const Scheme& a, const Scheme& b) { return a.rank() < b.rank(); });
        if (start.size() > spec.max_start_pool)
            start.resize(spec.max_start_pool);

        SearchConfig fcfg = cfg;
        fcfg.seed = splitmix64(cfg.seed ^ fnv1a(f.str()));
        if (spec.stop_at_reference)
            if (auto it = spec.reference_ranks.find(f); it != spec.reference_ranks.end())
                fcfg.target_rank = it->second;

        // search every rank group, keep everything we end up with
        std::vector<Scheme> found;
        for (std::size_t lo = 0; lo < start.size();) {
            std::size_t hi = lo;
            while (hi < start.size() && start[hi].rank() == start[lo].rank())
                ++hi;
            std::vector<Scheme> group(start.begin() + static_cast<std::ptrdiff_t>(lo),
                                      start.begin() + static_cast<std::ptrdiff_t>(hi));
            say("format " + f.str() + ": searching " + std::to_string(group.size()) + " scheme(s) of rank " +
                std::to_string(group.front().rank()));
            SearchResult sr = search_to_minimum(group, fcfg);
            say("format " + f.str() + ": rank " + std::to_string(group.front().rank()) + " -> " +
                std::to_string(sr.final_rank));
            found.insert(found.end(), sr.final_pool.begin(), sr.final_pool.end());
            found.insert(found.end(), group.begin(), group.end());
            lo = hi;
        }
        found = dedup_schemes(found);
        std::stable_sort(found.begin(), found.end(),
                         [](const Scheme& a, const Scheme& b) { return a.rank() < b.rank(); });

        CampaignFormatResult fr;
        fr.start_rank = start.front().rank();
        fr.best_rank = found.front().rank();
        std::size_t runner = 0;
        for (const Scheme& s : found) {
            if (s.rank() == fr.best_rank) {
                if (fr.best.size() < cfg.pool_cap) {
                    store.add(s, "campaign:best");
                    fr.best.push_back(s);
                }
            } else if (runner < spec.runner_ups) {
                store.add(s, "campaign:runner-up");
                ++runner;
            }
        }
        DagVertex& v = dag.format_vertex(f);
        v.best_rank = fr.best_rank;
        v.pool_ref = store.directory(f, spec.ring, fr.best_rank).string();
        res.formats[f] = std::move(fr);
    }
    return res;
}

} // namespace fliplab
