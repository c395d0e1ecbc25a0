#include <gtest/gtest.h>

#include <filesystem>

#include "fliplab/campaign.hpp"
#include "fliplab/errors.hpp"
#include "fliplab/meta.hpp"
#include "fliplab/scheme_io.hpp"
#include "oracles.hpp"

using namespace fliplab;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch_dir(const std::string& name)
{
    fs::path p = fs::temp_directory_path() / ("fliplab_campaign_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

SearchConfig quick_config()
{
    SearchConfig cfg;
    cfg.seed = 17;
    cfg.paths_multiplier = 4;
    cfg.length_multiplier = 1000;
    return cfg;
}

// Every format vertex points at a pool holding verifying schemes of its best rank.
void expect_pools_consistent(const CampaignResult& res, const PoolStore& store, const Ring& ring)
{
    std::string why;
    EXPECT_TRUE(res.dag.well_formed(&why)) << why;
    EXPECT_TRUE(store.check(&why)) << why;
    for (const DagVertex& v : res.dag.vertices()) {
        if (v.combine_dummy)
            continue;
        ASSERT_TRUE(v.best_rank) << v.id;
        EXPECT_EQ(fs::path(v.pool_ref), store.directory(v.format, ring, *v.best_rank));
        auto best = store.load(v.format, ring, *v.best_rank);
        ASSERT_FALSE(best.empty()) << v.id;
        for (const Scheme& s : best) {
            EXPECT_EQ(s.rank(), *v.best_rank);
            EXPECT_TRUE(verify(s));
        }
    }
}

} // namespace

TEST(CampaignSpec, BareEdgeList)
{
    CampaignSpec spec = campaign_from_json(json::parse(R"([{"from":[2,2,2],"to":[2,2,3],"kind":"extend"}])"));
    ASSERT_EQ(spec.edges.size(), 1u);
    EXPECT_EQ(spec.edges[0].from, Format(2, 2, 2));
    EXPECT_EQ(spec.edges[0].to, Format(2, 2, 3));
    EXPECT_EQ(spec.edges[0].kind, CampaignEdgeKind::Extend);
    EXPECT_TRUE(spec.standard_seeds);
}

TEST(CampaignSpec, ObjectForm)
{
    CampaignSpec spec = campaign_from_json(json::parse(R"({
        "edges": [{"from":[3,3,8],"to":[3,6,8],"kind":"combine","with_second":[3,3,8]}],
        "ring": {"kind":"Zp","p":3},
        "seeds": {"3x3x8": ["a.json", "/abs/b.json"]},
        "reference_ranks": {"3x3x8": 56, "3x6x8": 108},
        "standard_seeds": false,
        "stop_at_reference": true,
        "runner_ups": 5,
        "search": {"paths_multiplier": 3}
    })"),
                                           "/base");
    EXPECT_EQ(spec.ring, Ring::zp(3));
    ASSERT_EQ(spec.seeds.at(Format(3, 3, 8)).size(), 2u);
    EXPECT_EQ(spec.seeds.at(Format(3, 3, 8))[0], fs::path("/base/a.json"));
    EXPECT_EQ(spec.seeds.at(Format(3, 3, 8))[1], fs::path("/abs/b.json"));
    EXPECT_EQ(spec.reference_ranks.at(Format(3, 6, 8)), 108u);
    EXPECT_EQ(spec.edges[0].with_second, Format(3, 3, 8));
    EXPECT_FALSE(spec.standard_seeds);
    EXPECT_TRUE(spec.stop_at_reference);
    EXPECT_EQ(spec.runner_ups, 5u);
    SearchConfig cfg;
    apply_search_overrides(spec.search, cfg);
    EXPECT_EQ(cfg.paths_multiplier, 3u);
}

TEST(CampaignSpec, Errors)
{
    EXPECT_THROW(campaign_from_json(json::parse(R"([{"from":[2,2,2],"to":[2,2,3],"kind":"warp"}])")), ParseError);
    EXPECT_THROW(campaign_from_json(json::parse(R"([{"from":[2,2],"to":[2,2,3],"kind":"extend"}])")), ParseError);
    EXPECT_THROW(campaign_from_json(json::parse(R"([{"from":[3,3,8],"to":[3,6,8],"kind":"combine"}])")), ParseError);
    EXPECT_THROW(campaign_from_json(json::parse(R"({"edges":[],"search":{"warp_factor":9}})")), ParseError);
    EXPECT_THROW(campaign_from_json(json::parse(R"({"edges":[],"ring":{"kind":"Q"}})")), UnsupportedRingError);
}

TEST(CampaignSpec, ShippedSpecsParse)
{
    const fs::path dir = fs::path(FLIPLAB_SOURCE_DIR) / "campaigns";
    std::size_t count = 0;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".json") {
            CampaignSpec spec = read_campaign(entry.path());
            EXPECT_FALSE(spec.edges.empty()) << entry.path();
            ++count;
        }
    EXPECT_GE(count, 4u);
}

TEST(CampaignSpec, ShippedEdgesAreRealizable)
{
    const fs::path dir = fs::path(FLIPLAB_SOURCE_DIR) / "campaigns";
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (entry.path().extension() != ".json")
            continue;
        CampaignSpec spec = read_campaign(entry.path());
        for (const CampaignEdge& e : spec.edges) {
            Scheme from = standard_scheme(e.from, spec.ring);
            Scheme out = e.kind == CampaignEdgeKind::Extend    ? realize_extend(from, e.to)
                         : e.kind == CampaignEdgeKind::Project ? realize_project(from, e.to)
                                                               : realize_combine(from, standard_scheme(*e.with_second, spec.ring), e.to);
            ASSERT_EQ(out.format(), e.to) << entry.path() << " " << e.from.str() << "->" << e.to.str();
            ASSERT_TRUE(verify(out)) << entry.path() << " " << e.to.str();
        }
    }
}

TEST(Import, AdmitsVerifyingFile)
{
    fs::path dir = scratch_dir("import");
    write_scheme(standard_scheme(Format(5, 5, 5), Ring::z2()), dir / "s555.json");
    PoolEntry e = import_scheme(dir / "s555.json", Format(5, 5, 5), Ring::z2());
    EXPECT_EQ(e.scheme.rank(), 125u);
    EXPECT_EQ(e.provenance, "external");
}

TEST(Import, RejectsCorruptedFile)
{
    fs::path dir = scratch_dir("corrupt");
    Scheme s = strassen_scheme(Ring::z2());
    Mat& u = s.triples()[2].u;
    u.set_residue(0, 1, u.residue(0, 1) ^ 1);
    write_scheme(s, dir / "bad.json");
    try {
        import_scheme(dir / "bad.json", Format(2, 2, 2), Ring::z2());
        FAIL() << "expected ImportRejected";
    } catch (const ImportRejected& e) {
        EXPECT_FALSE(e.report());
        EXPECT_GT(e.report().violations, 0u);
    }
}

TEST(Import, RejectsWrongFormatOrRing)
{
    fs::path dir = scratch_dir("wrongfmt");
    write_scheme(strassen_scheme(Ring::z2()), dir / "s.json");
    EXPECT_THROW(import_scheme(dir / "s.json", Format(2, 2, 3), Ring::z2()), StructuralError);
    EXPECT_THROW(import_scheme(dir / "s.json", Format(2, 2, 2), Ring::zp(3)), StructuralError);
    EXPECT_THROW(import_scheme(dir / "missing.json", Format(2, 2, 2), Ring::z2()), ParseError);
}

TEST(Realize, EdgesUpToPermutation)
{
    Scheme s = strassen_scheme(Ring::z2());
    Scheme e = realize_extend(extend(s, DimAxis::P), Format(2, 3, 3));
    EXPECT_EQ(e.format(), Format(2, 3, 3));
    EXPECT_EQ(e.rank(), 11u + 6u);
    EXPECT_TRUE(verify(e));
    Scheme c = realize_combine(s, s, Format(2, 4, 2));
    EXPECT_EQ(c.rank(), 14u);
    EXPECT_TRUE(verify(c));
    Scheme p = realize_project(extend(s, DimAxis::P), Format(2, 2, 2));
    EXPECT_TRUE(verify(p));
    EXPECT_THROW(realize_extend(s, Format(2, 2, 4)), StructuralError);
    EXPECT_THROW(realize_combine(s, s, Format(3, 3, 3)), StructuralError);
}

TEST(Campaign, StrassenThenEleven)
{
    PoolStore store(scratch_dir("run223"));
    CampaignSpec spec = campaign_from_json(json::parse(R"([{"from":[2,2,2],"to":[2,2,3],"kind":"extend"}])"));
    CampaignResult res = run_meta_campaign(spec, quick_config(), store);
    EXPECT_EQ(res.formats.at(Format(2, 2, 2)).best_rank, 7u);
    EXPECT_EQ(res.formats.at(Format(2, 2, 2)).start_rank, 8u);
    EXPECT_EQ(res.formats.at(Format(2, 2, 3)).best_rank, 11u);
    EXPECT_EQ(res.formats.at(Format(2, 2, 3)).start_rank, 11u);
    EXPECT_TRUE(res.dag.find("222")->seed);
    EXPECT_FALSE(res.dag.find("223")->seed);
    ASSERT_EQ(res.dag.edges().size(), 1u);
    EXPECT_EQ(res.dag.edges()[0].kind, EdgeKind::Extend);
    expect_pools_consistent(res, store, Ring::z2());
}

TEST(Campaign, CombinationDoublesStartRank)
{
    PoolStore store(scratch_dir("combine"));
    CampaignSpec spec = campaign_from_json(json::parse(R"({
        "edges": [{"from":[2,2,2],"to":[2,2,4],"kind":"combine","with_second":[2,2,2]}],
        "reference_ranks": {"2x2x2": 7, "2x2x4": 14},
        "stop_at_reference": true,
        "combine_pairs": 3
    })"));
    CampaignResult res = run_meta_campaign(spec, quick_config(), store);
    const std::size_t best222 = res.formats.at(Format(2, 2, 2)).best_rank;
    EXPECT_EQ(best222, 7u);
    EXPECT_EQ(res.formats.at(Format(2, 2, 4)).start_rank, 2 * best222);
    EXPECT_LE(res.formats.at(Format(2, 2, 4)).best_rank, 14u);
    std::size_t dummies = 0;
    for (const DagVertex& v : res.dag.vertices())
        dummies += v.combine_dummy;
    EXPECT_EQ(dummies, 1u);
    expect_pools_consistent(res, store, Ring::z2());
}

TEST(Campaign, EmptyEdgeListKeepsSeedsOnly)
{
    fs::path dir = scratch_dir("seedsonly");
    write_scheme(strassen_scheme(Ring::z2()), dir / "strassen.json");
    CampaignSpec spec = campaign_from_json(json::parse(R"({"edges":[],"seeds":{"2x2x2":"strassen.json"}})"), dir);
    PoolStore store(dir / "pool");
    CampaignResult res = run_meta_campaign(spec, quick_config(), store);
    ASSERT_EQ(res.dag.vertices().size(), 1u);
    EXPECT_TRUE(res.dag.vertices()[0].seed);
    EXPECT_TRUE(res.dag.edges().empty());
    EXPECT_EQ(res.formats.at(Format(2, 2, 2)).best_rank, 7u);

    CampaignSpec none = campaign_from_json(json::parse(R"({"edges":[]})"));
    EXPECT_TRUE(run_meta_campaign(none, quick_config(), store).dag.vertices().empty());
}

TEST(Campaign, MissingSeedPool)
{
    PoolStore store(scratch_dir("missing"));
    CampaignSpec spec = campaign_from_json(
        json::parse(R"({"edges":[{"from":[2,2,2],"to":[2,2,3],"kind":"extend"}],"standard_seeds":false})"));
    EXPECT_THROW(run_meta_campaign(spec, quick_config(), store), StructuralError);
}

TEST(Campaign, StoredPoolSeedsRoot)
{
    PoolStore store(scratch_dir("stored"));
    store.add(strassen_scheme(Ring::z2()), "prior run");
    CampaignSpec spec = campaign_from_json(
        json::parse(R"({"edges":[{"from":[2,2,2],"to":[2,2,3],"kind":"extend"}],"standard_seeds":false})"));
    CampaignResult res = run_meta_campaign(spec, quick_config(), store);
    EXPECT_EQ(res.formats.at(Format(2, 2, 2)).start_rank, 7u);
    EXPECT_EQ(res.formats.at(Format(2, 2, 3)).best_rank, 11u);
}

TEST(Campaign, CycleRejected)
{
    PoolStore store(scratch_dir("cycle"));
    CampaignSpec spec = campaign_from_json(json::parse(
        R"([{"from":[2,2,2],"to":[2,2,3],"kind":"extend"},{"from":[2,2,3],"to":[2,2,2],"kind":"project"}])"));
    EXPECT_THROW(run_meta_campaign(spec, quick_config(), store), StructuralError);
}

TEST(Campaign, ProjectionEdge)
{
    PoolStore store(scratch_dir("project"));
    CampaignSpec spec = campaign_from_json(json::parse(R"({
        "edges": [{"from":[2,2,3],"to":[2,2,2],"kind":"project"}],
        "reference_ranks": {"2x2x3": 11, "2x2x2": 7},
        "stop_at_reference": true
    })"));
    CampaignResult res = run_meta_campaign(spec, quick_config(), store);
    EXPECT_EQ(res.formats.at(Format(2, 2, 3)).best_rank, 11u);
    EXPECT_EQ(res.formats.at(Format(2, 2, 2)).best_rank, 7u);
    EXPECT_NE(res.dag.to_dot().find("[style=dashed]"), std::string::npos);
    expect_pools_consistent(res, store, Ring::z2());
}
