#pragma once

#include <cstdint>
#include <optional>

#include "fliplab/ring.hpp"

namespace fliplab {

/// Largest numerator / denominator magnitude admitted at 2-adic level l:
/// floor(sqrt(2^(l-1))).
std::uint64_t reconstruction_bound(unsigned level);

/// Rational reconstruction of a residue modulo 2^level (1 <= level <= 64).
///
/// Runs the extended Euclidean remainder sequence on (2^level, u) and stops at
/// the first remainder <= B = reconstruction_bound(level). Returns n/d with d odd
/// and positive, gcd(n, d) = 1, |n| <= B, d <= B and n = u*d (mod 2^level), or
/// nullopt when no such fraction exists. Throws StructuralError if u >= 2^level.
std::optional<Rational> rat_reconstruct(std::uint64_t u, unsigned level);

/// Image of n/d in Z/2^level, if d is odd.
std::optional<std::uint64_t> rational_to_residue(const Rational& q, unsigned level);

} // namespace fliplab
