#include "fliplab/ring.hpp"

#include "fliplab/errors.hpp"

namespace fliplab {

bool is_prime(std::uint64_t n) noexcept
{
    if (n < 2)
        return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

Ring Ring::zp(std::uint32_t p)
{
    if (p == 2)
        return z2();
    if (p >= (1u << 16) || p % 2 == 0 || !is_prime(p))
        throw StructuralError("Zp requires an odd prime below 2^16, got " + std::to_string(p));
    return Ring(RingKind::Zp, p, 0);
}

Ring Ring::z2k(std::uint32_t level)
{
    if (level < 1 || level > 64)
        throw StructuralError("Z2k level must be in [1, 64], got " + std::to_string(level));
    return Ring(RingKind::Z2k, 0, level);
}

std::uint64_t Ring::add(std::uint64_t a, std::uint64_t b) const noexcept
{
    switch (kind_) {
    case RingKind::Z2:
        return a ^ b;
    case RingKind::Zp: {
        std::uint64_t s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    case RingKind::Z2k:
        return (a + b) & mask();
    case RingKind::Q:
        break;
    }
    return 0;
}

std::uint64_t Ring::sub(std::uint64_t a, std::uint64_t b) const noexcept
{
    switch (kind_) {
    case RingKind::Z2:
        return a ^ b;
    case RingKind::Zp:
        return a >= b ? a - b : a + p_ - b;
    case RingKind::Z2k:
        return (a - b) & mask();
    case RingKind::Q:
        break;
    }
    return 0;
}

std::uint64_t Ring::mul(std::uint64_t a, std::uint64_t b) const noexcept
{
    switch (kind_) {
    case RingKind::Z2:
        return a & b;
    case RingKind::Zp:
        return (a * b) % p_;
    case RingKind::Z2k:
        return (a * b) & mask();
    case RingKind::Q:
        break;
    }
    return 0;
}

std::uint64_t Ring::reduce(std::int64_t v) const noexcept
{
    switch (kind_) {
    case RingKind::Z2:
    case RingKind::Z2k:
        // two's complement wrap is reduction modulo 2^64, hence modulo 2^level
        return static_cast<std::uint64_t>(v) & mask();
    case RingKind::Zp: {
        std::int64_t r = v % static_cast<std::int64_t>(p_);
        return static_cast<std::uint64_t>(r < 0 ? r + p_ : r);
    }
    case RingKind::Q:
        break;
    }
    return 0;
}

std::uint64_t Ring::reduce_word(std::uint64_t v) const noexcept
{
    switch (kind_) {
    case RingKind::Z2:
    case RingKind::Z2k:
        return v & mask();
    case RingKind::Zp:
        return v % p_;
    case RingKind::Q:
        break;
    }
    return 0;
}

std::string Ring::name() const
{
    switch (kind_) {
    case RingKind::Z2:
        return "Z2";
    case RingKind::Zp:
        return "Z" + std::to_string(p_);
    case RingKind::Z2k:
        return "Z2^" + std::to_string(level_);
    case RingKind::Q:
        return "Q";
    }
    return "?";
}

std::string Ring::tag() const
{
    switch (kind_) {
    case RingKind::Z2:
        return "Z2";
    case RingKind::Zp:
        return "Zp" + std::to_string(p_);
    case RingKind::Z2k:
        return "Z2k" + std::to_string(level_);
    case RingKind::Q:
        return "Q";
    }
    return "?";
}

} // namespace fliplab
