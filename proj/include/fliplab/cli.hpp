#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace fliplab {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitUsage = 2, kExitIo = 3 };

/// Record of one mutating CLI run. Written next to the output as
/// <out>.manifest.json (or to --manifest).
struct RunManifest {
    std::vector<std::string> command_line;
    nlohmann::json config = nlohmann::json::object();
    std::uint64_t seed = 0;
    std::string version;
    std::string started, finished;
    /// {path, fnv1a64 hex} per file.
    std::vector<std::pair<std::string, std::string>> inputs, outputs;

    nlohmann::json to_json() const;
    static RunManifest from_json(const nlohmann::json& j);
};

/// Hex FNV-1a 64 of a file's bytes. Throws ParseError if unreadable.
std::string file_digest(const std::string& path);

/// Runs one command. args excludes the program name. Results go to out,
/// diagnostics (including the effective seed) to err.
int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace fliplab
