#include "fliplab/pool_store.hpp"

#include <algorithm>
#include <json.hpp>

#include "fliplab/errors.hpp"
#include "fliplab/hash.hpp"
#include "fliplab/scheme_io.hpp"

namespace fliplab {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json read_manifest(const fs::path& dir)
{
    const fs::path m = dir / "manifest.json";
    if (!fs::exists(m))
        return json{{"entries", json::array()}};
    try {
        return json::parse(read_text_file(m));
    } catch (const json::parse_error&) {
        throw ParseError(m.string(), "invalid manifest");
    }
}

} // namespace

PoolStore::PoolStore(fs::path root) : root_(std::move(root)) {}

fs::path PoolStore::directory(const Format& f, const Ring& ring, std::size_t rank) const
{
    return root_ / f.str() / ring.tag() / std::to_string(rank);
}

fs::path PoolStore::add(const Scheme& s, const std::string& provenance)
{
    VerifyResult vr = verify(s);
    if (!vr)
        throw ContractError("pool store: refusing a scheme that does not verify (" + vr.summary() + ")");
    std::lock_guard lock(mu_);
    const fs::path dir = directory(s.format(), s.ring(), s.rank());
    const std::string hash = to_hex(canonical_hash(s));
    const fs::path file = dir / (hash + ".json");
    json manifest = read_manifest(dir);
    for (const auto& e : manifest["entries"])
        if (e.value("hash", "") == hash && fs::exists(dir / e.value("file", ""))) {
            // same canonical hash: confirm it is really the same scheme
            if (canonical_order(read_scheme(dir / e["file"].get<std::string>())) == canonical_order(s))
                return file;
        }
    fs::path target = file;
    for (int k = 1; fs::exists(target); ++k)
        target = dir / (hash + "-" + std::to_string(k) + ".json");
    write_scheme(s, target);
    manifest["entries"].push_back(
        {{"hash", hash}, {"file", target.filename().string()}, {"provenance", provenance}});
    manifest["format"] = {s.format().n, s.format().m, s.format().p};
    manifest["ring"] = ring_to_json(s.ring());
    manifest["rank"] = s.rank();
    manifest["count"] = manifest["entries"].size();
    write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
    return target;
}

void PoolStore::add_all(const std::vector<Scheme>& schemes, const std::string& provenance)
{
    for (const auto& s : schemes)
        add(s, provenance);
}

std::vector<Scheme> PoolStore::load(const Format& f, const Ring& ring, std::size_t rank) const
{
    std::lock_guard lock(mu_);
    const fs::path dir = directory(f, ring, rank);
    std::vector<Scheme> out;
    if (!fs::exists(dir / "manifest.json"))
        return out;
    const json manifest = read_manifest(dir);
    for (const auto& e : manifest.at("entries"))
        out.push_back(read_scheme(dir / e.at("file").get<std::string>()));
    return out;
}

std::vector<std::size_t> PoolStore::ranks(const Format& f, const Ring& ring) const
{
    std::vector<std::size_t> out;
    const fs::path dir = root_ / f.str() / ring.tag();
    if (!fs::is_directory(dir))
        return out;
    for (const auto& ent : fs::directory_iterator(dir)) {
        const std::string name = ent.path().filename().string();
        if (ent.is_directory() && !name.empty() && name.find_first_not_of("0123456789") == std::string::npos &&
            fs::exists(ent.path() / "manifest.json"))
            out.push_back(std::stoul(name));
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool PoolStore::check(std::string* why) const
{
    std::lock_guard lock(mu_);
    auto fail = [&](const std::string& msg) {
        if (why)
            *why = msg;
        return false;
    };
    if (!fs::exists(root_))
        return true;
    for (const auto& ent : fs::recursive_directory_iterator(root_)) {
        if (ent.path().filename() != "manifest.json")
            continue;
        const fs::path dir = ent.path().parent_path();
        const json m = read_manifest(dir);
        std::size_t files = 0;
        for (const auto& f : fs::directory_iterator(dir))
            if (f.path().extension() == ".json" && f.path().filename() != "manifest.json")
                ++files;
        if (files != m["entries"].size())
            return fail(dir.string() + ": manifest lists " + std::to_string(m["entries"].size()) + " files, found " +
                        std::to_string(files));
        for (const auto& e : m["entries"]) {
            const fs::path file = dir / e.value("file", "");
            if (!fs::exists(file))
                return fail(file.string() + ": missing");
            if (to_hex(canonical_hash(read_scheme(file))) != e.value("hash", ""))
                return fail(file.string() + ": content hash differs from manifest");
        }
    }
    return true;
}

} // namespace fliplab
