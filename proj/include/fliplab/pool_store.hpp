#pragma once

#include <cstddef>
#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

#include "fliplab/scheme.hpp"

namespace fliplab {

/// On-disk scheme pools:
///   <root>/<n>x<m>x<p>/<ring tag>/<rank>/<hash>.json
///   <root>/<n>x<m>x<p>/<ring tag>/<rank>/manifest.json
/// The manifest lists {"hash", "file", "provenance"} per entry. Writes go
/// through one mutex and a rename, so readers only see complete manifests.
class PoolStore {
public:
    explicit PoolStore(std::filesystem::path root);

    const std::filesystem::path& root() const noexcept { return root_; }
    std::filesystem::path directory(const Format& f, const Ring& ring, std::size_t rank) const;

    /// Verifies and stores s (no-op if an equal scheme up to triple order is
    /// present). Returns the scheme file path. Throws ContractError if s does
    /// not verify.
    std::filesystem::path add(const Scheme& s, const std::string& provenance);
    void add_all(const std::vector<Scheme>& schemes, const std::string& provenance);

    /// Schemes in manifest order; empty if the pool does not exist.
    std::vector<Scheme> load(const Format& f, const Ring& ring, std::size_t rank) const;
    /// Ranks present on disk, ascending.
    std::vector<std::size_t> ranks(const Format& f, const Ring& ring) const;

    /// True if every manifest hash matches a file whose content hash agrees.
    bool check(std::string* why = nullptr) const;

private:
    std::filesystem::path root_;
    mutable std::mutex mu_;
};

} // namespace fliplab
