#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace fliplab {

/// 64-bit FNV-1a. Used for content ids; callers confirm equality on collisions.
class Fnv1a {
public:
    void bytes(const void* data, std::size_t n) noexcept
    {
        auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            h_ ^= p[i];
            h_ *= 0x100000001b3ULL;
        }
    }
    void word(std::uint64_t v) noexcept { bytes(&v, sizeof v); }
    void text(std::string_view s) noexcept { bytes(s.data(), s.size()); }
    std::uint64_t value() const noexcept { return h_; }

private:
    std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

inline std::uint64_t fnv1a(std::string_view s) noexcept
{
    Fnv1a h;
    h.text(s);
    return h.value();
}

std::string to_hex(std::uint64_t v);

/// Deterministic 64-bit mixer (splitmix64 finalizer), used to derive RNG streams.
inline std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

} // namespace fliplab
