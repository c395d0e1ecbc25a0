#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

namespace fliplab {

using Rational = mpq_class;

enum class RingKind : std::uint8_t { Z2, Zp, Z2k, Q };

/// Coefficient ring of a scheme. Modular rings keep residues in one machine
/// word with canonical representatives 0 <= e < modulus; Q uses GMP rationals.
class Ring {
public:
    static Ring z2() { return Ring(RingKind::Z2, 2, 1); }
    /// Throws StructuralError unless p is an odd prime below 2^16.
    static Ring zp(std::uint32_t p);
    /// Throws StructuralError unless 1 <= level <= 64.
    static Ring z2k(std::uint32_t level);
    static Ring rationals() { return Ring(RingKind::Q, 0, 0); }

    Ring() : Ring(z2()) {}

    RingKind kind() const noexcept { return kind_; }
    bool is_modular() const noexcept { return kind_ != RingKind::Q; }
    /// Odd prime for Zp, 2 for Z2, 0 otherwise.
    std::uint32_t prime() const noexcept { return kind_ == RingKind::Z2k || kind_ == RingKind::Q ? 0 : p_; }
    /// 2-adic level for Z2k (1 for Z2), 0 otherwise.
    std::uint32_t level() const noexcept { return level_; }
    /// Bitmask for Z2k (and Z2); valid only for power-of-two moduli.
    std::uint64_t mask() const noexcept {
        return level_ >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << level_) - 1;
    }

    // Residue arithmetic. Arguments must already be canonical.
    std::uint64_t add(std::uint64_t a, std::uint64_t b) const noexcept;
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const noexcept;
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const noexcept;
    std::uint64_t neg(std::uint64_t a) const noexcept { return sub(0, a); }
    /// Canonical representative of an arbitrary integer.
    std::uint64_t reduce(std::int64_t v) const noexcept;
    /// Canonical representative of a residue given modulo 2^64.
    std::uint64_t reduce_word(std::uint64_t v) const noexcept;

    /// "Z2", "Z3", "Z2^20", "Q".
    std::string name() const;
    /// Directory-safe tag used by the pool store: "Z2", "Zp3", "Z2k20", "Q".
    std::string tag() const;

    friend bool operator==(const Ring&, const Ring&) = default;

private:
    Ring(RingKind k, std::uint32_t p, std::uint32_t level) : kind_(k), p_(p), level_(level) {}

    RingKind kind_;
    std::uint32_t p_;
    std::uint32_t level_;
};

bool is_prime(std::uint64_t n) noexcept;

} // namespace fliplab
