#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fliplab/errors.hpp"
#include "fliplab/genealogy.hpp"
#include "fliplab/pool_store.hpp"
#include "fliplab/scheme.hpp"
#include "fliplab/search.hpp"

namespace fliplab {

enum class CampaignEdgeKind { Extend, Project, Combine };

struct CampaignEdge {
    Format from, to;
    CampaignEdgeKind kind = CampaignEdgeKind::Extend;
    /// Second operand of a combination.
    std::optional<Format> with_second;
};

/// Campaign file: either a bare edge list
///   [{"from":[2,2,2], "to":[2,2,3], "kind":"extend"}, ...]
/// or an object
///   {"edges":[...], "ring":{"kind":"Z2"}, "seeds":{"3x3x8":["a.json"]},
///    "standard_seeds":true, "reference_ranks":{"2x2x2":7},
///    "stop_at_reference":false, "search":{"paths_multiplier":100, ...},
///    "runner_ups":100, "combine_pairs":100, "max_start_pool":1000}
/// Seed paths are relative to the campaign file.
struct CampaignSpec {
    std::vector<CampaignEdge> edges;
    Ring ring = Ring::z2();
    std::map<Format, std::vector<std::filesystem::path>> seeds;
    /// Roots without seed files or stored pools start from the standard scheme.
    bool standard_seeds = true;
    std::map<Format, std::size_t> reference_ranks;
    /// Use the reference rank as the search target of each format.
    bool stop_at_reference = false;
    std::size_t runner_ups = 100;
    std::size_t combine_pairs = 100;
    std::size_t max_start_pool = 1000;
    /// Search settings overriding the caller's configuration.
    nlohmann::json search = nlohmann::json::object();
};

CampaignSpec campaign_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
CampaignSpec read_campaign(const std::filesystem::path& path);

/// Applies {"paths_multiplier", "length_multiplier", "plus_probability",
/// "plus_overshoot_budget", "stall_threshold", "pool_cap",
/// "stop_after_improvements", "target_rank", "seed", "workers"} onto cfg.
void apply_search_overrides(const nlohmann::json& j, SearchConfig& cfg);

/// An import that failed verification; carries the verification report.
class ImportRejected : public ContractError {
public:
    ImportRejected(const std::string& what, VerifyResult report)
        : ContractError(what), report_(std::move(report)) {}
    const VerifyResult& report() const noexcept { return report_; }

private:
    VerifyResult report_;
};

struct PoolEntry {
    Scheme scheme;
    std::string provenance;
    std::string source;
};

/// Reads and verifies an external scheme. Throws ParseError on unreadable
/// files, StructuralError on a format or ring other than expected, and
/// ImportRejected if it does not verify.
PoolEntry import_scheme(const std::filesystem::path& path, const Format& expected_format, const Ring& expected_ring);

/// Realizes one edge on concrete schemes, permuting formats where the edge
/// connects formats that only match up to a permutation. Throws
/// StructuralError if the edge is not realizable.
Scheme realize_extend(const Scheme& s, const Format& to);
Scheme realize_project(const Scheme& s, const Format& to);
Scheme realize_combine(const Scheme& a, const Scheme& b, const Format& to);

struct CampaignFormatResult {
    std::size_t best_rank = 0;
    std::vector<Scheme> best;
    std::size_t start_rank = 0;
};

struct CampaignResult {
    GenealogyDag dag;
    std::map<Format, CampaignFormatResult> formats;
};

/// Processes formats in dependency order (ties by format order); for each
/// format assembles the starting pool from seeds and incoming edges, searches
/// each rank group to its minimum and persists best and runner-up schemes.
/// Throws StructuralError on cycles or a root without any seed pool.
CampaignResult run_meta_campaign(const CampaignSpec& spec, const SearchConfig& cfg, PoolStore& store,
                                 const std::function<void(const std::string&)>& log = {});

} // namespace fliplab
