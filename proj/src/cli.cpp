#include "fliplab/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>
#include <thread>

#include "fliplab/campaign.hpp"
#include "fliplab/errors.hpp"
#include "fliplab/genealogy.hpp"
#include "fliplab/hash.hpp"
#include "fliplab/lift.hpp"
#include "fliplab/meta.hpp"
#include "fliplab/pool_store.hpp"
#include "fliplab/scheme_io.hpp"
#include "fliplab/search.hpp"

#ifndef FLIPLAB_VERSION
#define FLIPLAB_VERSION "0.0.0"
#endif

namespace fliplab {

namespace fs = std::filesystem;
using nlohmann::json;

json RunManifest::to_json() const
{
    auto files = [](const std::vector<std::pair<std::string, std::string>>& v) {
        json a = json::array();
        for (const auto& [path, digest] : v)
            a.push_back({{"path", path}, {"fnv1a64", digest}});
        return a;
    };
    return json{{"command_line", command_line}, {"config", config},   {"seed", seed},
                {"version", version},           {"started", started}, {"finished", finished},
                {"inputs", files(inputs)},      {"outputs", files(outputs)}};
}

RunManifest RunManifest::from_json(const json& j)
{
    RunManifest m;
    try {
        m.command_line = j.at("command_line").get<std::vector<std::string>>();
        m.config = j.value("config", json::object());
        m.seed = j.value("seed", std::uint64_t{0});
        m.version = j.value("version", std::string());
        m.started = j.value("started", std::string());
        m.finished = j.value("finished", std::string());
        for (const char* key : {"inputs", "outputs"}) {
            auto& dst = std::string(key) == "inputs" ? m.inputs : m.outputs;
            for (const auto& f : j.value(key, json::array()))
                dst.emplace_back(f.at("path").get<std::string>(), f.at("fnv1a64").get<std::string>());
        }
    } catch (const json::exception& e) {
        throw ParseError("manifest", e.what());
    }
    return m;
}

std::string file_digest(const std::string& path)
{
    return to_hex(fnv1a(read_text_file(path)));
}

namespace {

bool g_replaying = false;

std::string utc_now()
{
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Ring parse_ring(const std::string& text)
{
    std::string t = text;
    for (char& c : t)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    try {
        if (t == "z2")
            return Ring::z2();
        if (t == "q")
            return Ring::rationals();
        if (t.rfind("zp:", 0) == 0)
            return Ring::zp(static_cast<std::uint32_t>(std::stoul(t.substr(3))));
        if (t.rfind("z2k:", 0) == 0)
            return Ring::z2k(static_cast<unsigned>(std::stoul(t.substr(4))));
        if (t.size() > 1 && t[0] == 'z' && t.find_first_not_of("0123456789", 1) == std::string::npos)
            return Ring::zp(static_cast<std::uint32_t>(std::stoul(t.substr(1))));
    } catch (const std::logic_error&) {
    }
    throw StructuralError("unknown ring \"" + text + "\" (use Z2, Z3, Zp:5, Z2k:20 or Q)");
}

struct Run {
    std::ostream& out;
    std::ostream& err;
    std::vector<std::string> argv;
    RunManifest manifest;

    void write_result(const std::string& path, const std::string& text)
    {
        if (path.empty() || path == "-") {
            out << text;
            return;
        }
        write_text_file(path, text);
        manifest.outputs.emplace_back(path, file_digest(path));
    }

    void input(const std::string& path) { manifest.inputs.emplace_back(path, file_digest(path)); }

    void finish_manifest(const std::string& explicit_path, const std::string& out_path)
    {
        if (g_replaying)
            return;
        std::string path = explicit_path;
        if (path.empty() && !out_path.empty() && out_path != "-")
            path = out_path + ".manifest.json";
        if (path.empty())
            return;
        manifest.finished = utc_now();
        write_text_file(path, manifest.to_json().dump(2) + "\n");
    }
};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag, std::ostream& err)
{
    std::uint64_t seed;
    if (flag) {
        seed = *flag;
    } else if (const char* env = std::getenv("FLIPLAB_SEED"); env && *env) {
        try {
            seed = std::stoull(env);
        } catch (const std::logic_error&) {
            throw StructuralError(std::string("FLIPLAB_SEED is not an unsigned integer: ") + env);
        }
    } else {
        std::random_device rd;
        seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    }
    err << "seed=" << seed << "\n";
    return seed;
}

struct SearchFlags {
    std::optional<std::uint64_t> seed;
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    std::uint64_t paths_mult = 100;
    std::uint64_t len_mult = 100000;
    double plus_prob = 1e-4;
    std::uint64_t stall = 1000;
    std::size_t overshoot = 2;
    std::size_t stop_after = 0;
    std::optional<std::size_t> target_rank;
    bool progress = false;

    void add(CLI::App* app, bool budgets)
    {
        app->add_option("--seed", seed, "RNG seed (default: FLIPLAB_SEED or entropy)");
        app->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
        app->add_flag("--progress", progress, "line-JSON progress on stderr");
        if (!budgets)
            return;
        app->add_option("--paths-mult", paths_mult, "walks per level = paths-mult * n*m*p")->check(CLI::PositiveNumber);
        app->add_option("--len-mult", len_mult, "steps per walk = len-mult * n*m*p")->check(CLI::PositiveNumber);
        app->add_option("--plus-prob", plus_prob, "plus-edge probability once stalled")->check(CLI::Range(0.0, 1.0));
        app->add_option("--stall", stall, "steps without reduction before plus edges");
        app->add_option("--overshoot", overshoot, "plus edges allowed while rank < start + overshoot");
        app->add_option("--stop-after", stop_after, "end a level after this many improvements (0 = all walks)");
        app->add_option("--target-rank", target_rank, "stop once this rank is reached");
    }

    SearchConfig config(std::uint64_t s, std::ostream& err) const
    {
        SearchConfig cfg;
        cfg.seed = s;
        cfg.workers = workers;
        cfg.paths_multiplier = paths_mult;
        cfg.length_multiplier = len_mult;
        cfg.plus_probability = plus_prob;
        cfg.stall_threshold = stall;
        cfg.plus_overshoot_budget = overshoot;
        cfg.stop_after_improvements = stop_after;
        cfg.target_rank = target_rank;
        if (progress)
            cfg.progress = [&err](const ProgressEvent& ev) { err << ev.to_json_line() << "\n" << std::flush; };
        return cfg;
    }
};

json config_json(const SearchConfig& c)
{
    json j{{"paths_multiplier", c.paths_multiplier},
           {"length_multiplier", c.length_multiplier},
           {"plus_probability", c.plus_probability},
           {"plus_overshoot_budget", c.plus_overshoot_budget},
           {"stall_threshold", c.stall_threshold},
           {"workers", c.workers},
           {"pool_cap", c.pool_cap},
           {"stop_after_improvements", c.stop_after_improvements}};
    j["target_rank"] = c.target_rank ? json(*c.target_rank) : json(nullptr);
    return j;
}

int run_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    try {
        return run_dispatch(args, out, err);
    } catch (const UnsupportedRingError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const ContractError& e) {
        err << "error: " << e.what() << "\n";
        return kExitFailure;
    } catch (const StructuralError& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const RejectedMove& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const std::runtime_error& e) {
        err << "error: " << e.what() << "\n";
        return kExitIo;
    }
}

namespace {

int run_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Flip-graph search for matrix multiplication schemes", "fliplab"};
    app.require_subcommand(1);
    app.set_version_flag("--version", FLIPLAB_VERSION);

    Run run{out, err, args, {}};
    run.manifest.command_line = args;
    run.manifest.version = FLIPLAB_VERSION;
    run.manifest.started = utc_now();

    std::string in1, in2, out_path, manifest_path, axis, perm_text, ring_text = "Z2", report_path;
    std::vector<std::size_t> standard;
    SearchFlags sf;
    unsigned level = 32;
    std::string pool_root, dag_out, dot_out;
    GridConstraints grid;
    bool list_paths = false;

    auto add_out = [&](CLI::App* c) {
        c->add_option("--out,-o", out_path, "output file (default: stdout)");
        c->add_option("--manifest", manifest_path, "run manifest path (default: <out>.manifest.json)");
    };

    auto* verify_cmd = app.add_subcommand("verify", "check the Brent equations exactly");
    verify_cmd->add_option("file", in1, "scheme file")->required();

    auto* search_cmd = app.add_subcommand("search", "random-walk rank reduction down to a minimum");
    search_cmd->add_option("file", in1, "starting scheme file");
    search_cmd->add_option("--standard", standard, "start from the standard n m p scheme")->expected(3);
    search_cmd->add_option("--ring", ring_text, "ring for --standard: Z2 or Zp (e.g. Z3)");
    search_cmd->add_option("--pool-root", pool_root, "also store the final pool in this pool directory");
    sf.add(search_cmd, true);
    add_out(search_cmd);

    auto* extend_cmd = app.add_subcommand("extend", "grow one dimension by one");
    extend_cmd->add_option("file", in1)->required();
    extend_cmd->add_option("--axis", axis, "n, m or p")->required();
    add_out(extend_cmd);

    auto* project_cmd = app.add_subcommand("project", "drop the last index of one dimension");
    project_cmd->add_option("file", in1)->required();
    project_cmd->add_option("--axis", axis, "n, m or p")->required();
    add_out(project_cmd);

    auto* combine_cmd = app.add_subcommand("combine", "juxtapose two schemes along one dimension");
    combine_cmd->add_option("file1", in1)->required();
    combine_cmd->add_option("file2", in2)->required();
    combine_cmd->add_option("--axis", axis, "n, m or p")->required();
    add_out(combine_cmd);

    auto* permute_cmd = app.add_subcommand("permute", "move a scheme to a permuted format");
    permute_cmd->add_option("file", in1)->required();
    permute_cmd->add_option("--perm", perm_text, "permutation: 012-style or id, rot, rot2, swap-np, swap-nm, swap-mp")
        ->required();
    add_out(permute_cmd);

    auto* lift_cmd = app.add_subcommand("lift", "Hensel lifting and rational reconstruction of a Z2 scheme");
    lift_cmd->add_option("file", in1)->required();
    lift_cmd->add_option("--level", level, "target 2-adic level")->check(CLI::Range(1, 64));
    lift_cmd->add_option("--report", report_path, "lift report JSON (default: stderr)");
    add_out(lift_cmd);

    auto* campaign_cmd = app.add_subcommand("campaign", "run a meta flip graph campaign");
    campaign_cmd->add_option("spec", in1, "campaign JSON")->required();
    campaign_cmd->add_option("--pool-root", pool_root, "pool directory")->required();
    campaign_cmd->add_option("--dag-out", dag_out, "genealogy JSON (default: <pool-root>/genealogy.json)");
    campaign_cmd->add_option("--dot-out", dot_out, "also write the genealogy as DOT");
    campaign_cmd->add_option("--manifest", manifest_path, "run manifest path (default: <dag-out>.manifest.json)");
    sf.add(campaign_cmd, false);

    auto* paths_cmd = app.add_subcommand("enumerate-paths", "count extension paths in the format grid");
    paths_cmd->add_option("--min-dim", grid.min_dim)->check(CLI::PositiveNumber);
    paths_cmd->add_option("--max-dim", grid.max_dim);
    paths_cmd->add_option("--sum-cap", grid.sum_cap);
    paths_cmd->add_option("--max-len", grid.max_length);
    paths_cmd->add_flag("--list", list_paths, "print every path");

    auto* dot_cmd = app.add_subcommand("export-dot", "render a genealogy JSON as DOT");
    dot_cmd->add_option("dag", in1)->required();
    dot_cmd->add_option("--out,-o", out_path);

    auto* replay_cmd = app.add_subcommand("replay", "re-run a manifest and compare output digests");
    replay_cmd->add_option("manifest", in1)->required();

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    if (*verify_cmd) {
        Scheme s = read_scheme(in1);
        VerifyResult vr = verify(s);
        if (vr) {
            out << "rank=" << s.rank() << " verified\n";
            return kExitOk;
        }
        out << "rank=" << s.rank() << " FAILED: " << vr.summary() << "\n";
        return kExitFailure;
    }

    if (*search_cmd) {
        if (in1.empty() == standard.empty()) {
            err << "error: give either a scheme file or --standard n m p\n";
            return kExitUsage;
        }
        Scheme start;
        if (!standard.empty()) {
            start = standard_scheme(Format(standard[0], standard[1], standard[2]), parse_ring(ring_text));
        } else {
            start = read_scheme(in1);
            run.input(in1);
        }
        const std::uint64_t seed = resolve_seed(sf.seed, err);
        SearchConfig cfg = sf.config(seed, err);
        run.manifest.seed = seed;
        run.manifest.config = config_json(cfg);
        SearchResult res = search_to_minimum({start}, cfg);
        for (const LevelStats& st : res.trace)
            err << "rank " << st.rank << ": walks=" << st.walks << " improvements=" << st.improvements
                << " distinct=" << st.distinct << " steps=" << st.steps << " time=" << st.elapsed_s << "s\n";
        err << "final rank " << res.final_rank << " (" << res.final_pool.size() << " scheme(s))\n";
        if (!pool_root.empty())
            PoolStore(pool_root).add_all(res.final_pool, "search");
        run.write_result(out_path, scheme_to_string(res.final_pool.front()));
        run.finish_manifest(manifest_path, out_path);
        return kExitOk;
    }

    if (*extend_cmd || *project_cmd || *permute_cmd) {
        Scheme s = read_scheme(in1);
        run.input(in1);
        Scheme r;
        if (*extend_cmd) {
            r = extend(s, parse_axis(axis));
            run.manifest.config = {{"axis", axis}};
        } else if (*project_cmd) {
            r = project(s, parse_axis(axis));
            run.manifest.config = {{"axis", axis}};
        } else {
            r = permute_format(s, FormatPerm::parse(perm_text));
            run.manifest.config = {{"perm", perm_text}};
        }
        err << r.format().str() << " rank=" << r.rank() << "\n";
        run.write_result(out_path, scheme_to_string(r));
        run.finish_manifest(manifest_path, out_path);
        return kExitOk;
    }

    if (*combine_cmd) {
        Scheme a = read_scheme(in1), b = read_scheme(in2);
        run.input(in1);
        run.input(in2);
        Scheme r = combine(a, b, parse_axis(axis));
        run.manifest.config = {{"axis", axis}};
        err << r.format().str() << " rank=" << r.rank() << "\n";
        run.write_result(out_path, scheme_to_string(r));
        run.finish_manifest(manifest_path, out_path);
        return kExitOk;
    }

    if (*lift_cmd) {
        Scheme s = read_scheme(in1);
        run.input(in1);
        LiftResult lr = lift_and_reconstruct(s, level);
        run.manifest.config = {{"level", level}};
        const std::string report = lr.report().dump() + "\n";
        if (report_path.empty())
            err << report;
        else
            write_text_file(report_path, report);
        if (!lr.rational) {
            err << "no rational scheme reconstructed (" << lr.report()["status"].get<std::string>() << ")\n";
            return kExitFailure;
        }
        run.write_result(out_path, scheme_to_string(*lr.rational));
        run.finish_manifest(manifest_path, out_path);
        return kExitOk;
    }

    if (*campaign_cmd) {
        CampaignSpec spec = read_campaign(in1);
        run.input(in1);
        const std::uint64_t seed = resolve_seed(sf.seed, err);
        SearchConfig cfg = sf.config(seed, err);
        run.manifest.seed = seed;
        PoolStore store(pool_root);
        CampaignResult res = run_meta_campaign(spec, cfg, store, [&](const std::string& m) { err << m << "\n"; });
        SearchConfig effective = cfg;
        apply_search_overrides(spec.search, effective);
        run.manifest.config = config_json(effective);
        for (const auto& [f, fr] : res.formats)
            out << f.str() << " start=" << fr.start_rank << " best=" << fr.best_rank << "\n";
        if (dag_out.empty())
            dag_out = (fs::path(pool_root) / "genealogy.json").string();
        run.write_result(dag_out, res.dag.to_json().dump(2) + "\n");
        if (!dot_out.empty())
            run.write_result(dot_out, res.dag.to_dot());
        run.finish_manifest(manifest_path, dag_out);
        return kExitOk;
    }

    if (*paths_cmd) {
        std::size_t count = 0;
        enumerate_grid_paths(grid, [&](const FormatPath& p) {
            ++count;
            if (list_paths) {
                for (std::size_t k = 0; k < p.size(); ++k)
                    out << (k ? " -> " : "") << p[k].label();
                out << "\n";
            }
            return true;
        });
        out << "paths=" << count << "\n";
        return kExitOk;
    }

    if (*dot_cmd) {
        json j;
        try {
            j = json::parse(read_text_file(in1));
        } catch (const json::parse_error& e) {
            throw ParseError(in1, std::string("invalid JSON: ") + e.what());
        }
        GenealogyDag dag = GenealogyDag::from_json(j);
        std::string why;
        if (!dag.well_formed(&why))
            throw ParseError(in1, why);
        run.write_result(out_path, dag.to_dot());
        return kExitOk;
    }

    if (*replay_cmd) {
        json j;
        try {
            j = json::parse(read_text_file(in1));
        } catch (const json::parse_error& e) {
            throw ParseError(in1, std::string("invalid JSON: ") + e.what());
        }
        RunManifest m = RunManifest::from_json(j);
        for (const auto& [path, digest] : m.inputs)
            if (file_digest(path) != digest) {
                err << "input changed since the recorded run: " << path << "\n";
                return kExitFailure;
            }
        std::vector<std::string> again = m.command_line;
        if (m.seed && std::find(again.begin(), again.end(), "--seed") == again.end()) {
            again.push_back("--seed");
            again.push_back(std::to_string(m.seed));
        }
        g_replaying = true;
        std::ostringstream sink;
        const int rc = cli_dispatch(again, sink, err);
        g_replaying = false;
        if (rc != kExitOk)
            return rc;
        bool same = true;
        for (const auto& [path, digest] : m.outputs) {
            const bool ok = file_digest(path) == digest;
            out << (ok ? "identical " : "DIFFERS ") << path << "\n";
            same = same && ok;
        }
        return same ? kExitOk : kExitFailure;
    }
    return kExitUsage;
}

} // namespace

} // namespace fliplab
