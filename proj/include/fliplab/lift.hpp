#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fliplab/gf2.hpp"
#include "fliplab/scheme.hpp"

namespace fliplab {

/// A scheme over Z/2^level that verifies modulo 2^level.
struct LiftState {
    Scheme scheme;
    unsigned level = 1;
    /// history[k]: whether the step from level k+1 to k+2 was solvable.
    std::vector<bool> history;

    /// Starts at level 1 from a Z2 (or Z2k(1)) scheme. Throws StructuralError
    /// for other rings and ContractError if s does not verify.
    static LiftState from_z2(const Scheme& s);
};

/// Number of unknowns r*(nm + mp + pn), ordered per triple as u, v, w (row-major).
std::size_t lift_unknowns(const Scheme& s);

/// The linear system J * delta = residual / 2^level (mod 2) solved by one
/// Hensel step. Rows follow the Brent equation index.
LinSystemGF2 hensel_system(const LiftState& state);

/// One Hensel step to level + 1, or nullopt if the system is inconsistent.
/// Free variables of the system are set to zero. Requires level < 64.
std::optional<LiftState> hensel_step(const LiftState& state);

enum class LiftStatus { Rational, Partial, Unsolvable };

struct LiftResult {
    LiftStatus status = LiftStatus::Partial;
    /// Set for Rational: verifies exactly over Q.
    std::optional<Scheme> rational;
    /// Last modular scheme reached.
    Scheme modular;
    unsigned level_reached = 1;
    std::vector<bool> solvable_per_level;
    /// Distinct primes dividing any denominator of the rational scheme.
    std::vector<std::uint64_t> denominator_primes;

    /// {levels_reached, solvable_per_level, reconstructed, denominator_primes, status}.
    nlohmann::json report() const;
};

/// Entrywise rational reconstruction of a Z2k scheme; nullopt if any entry fails.
std::optional<Scheme> reconstruct_scheme(const Scheme& modular);

/// Lifts s (over Z2) level by level up to target_level (<= 64) and attempts
/// rational reconstruction at each level. A reconstruction is accepted early
/// when levels l-2 and l give identical fractions and the result verifies
/// exactly over Q; at target_level any verifying reconstruction is accepted.
LiftResult lift_and_reconstruct(const Scheme& s, unsigned target_level = 32);

} // namespace fliplab
