#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fliplab/mat.hpp"
#include "fliplab/ring.hpp"

namespace fliplab {

/// Matrix product format: an n x m matrix times an m x p matrix.
struct Format {
    std::size_t n = 1, m = 1, p = 1;

    Format() = default;
    /// Throws StructuralError if any dimension is zero.
    Format(std::size_t n_, std::size_t m_, std::size_t p_);

    std::size_t operator[](std::size_t axis) const { return axis == 0 ? n : axis == 1 ? m : p; }
    std::size_t volume() const noexcept { return n * m * p; }
    /// "nmp" when all dims are single digits, otherwise "n_m_p".
    std::string label() const;
    /// "NxMxP".
    std::string str() const;

    friend bool operator==(const Format&, const Format&) = default;
    friend auto operator<=>(const Format&, const Format&) = default;
};

/// One rank-one summand. u is n x m, v is m x p and w is p x n; w[k][i] is the
/// coefficient of this product in the output entry c[i][k].
struct Triple {
    Mat u, v, w;

    Mat& slot(int s) { return s == 0 ? u : s == 1 ? v : w; }
    const Mat& slot(int s) const { return s == 0 ? u : s == 1 ? v : w; }
    bool has_zero_slot() const { return u.is_zero() || v.is_zero() || w.is_zero(); }

    friend bool operator==(const Triple&, const Triple&) = default;
};

/// A bilinear matrix multiplication scheme. Triples are ordered; equality is
/// order-sensitive (see canonical_hash for order-insensitive dedup).
class Scheme {
public:
    Scheme() = default;
    Scheme(Format f, Ring r, std::vector<Triple> triples = {});

    const Format& format() const noexcept { return format_; }
    const Ring& ring() const noexcept { return ring_; }
    std::size_t rank() const noexcept { return triples_.size(); }
    const std::vector<Triple>& triples() const noexcept { return triples_; }
    std::vector<Triple>& triples() noexcept { return triples_; }
    const Triple& operator[](std::size_t i) const { return triples_.at(i); }

    /// Throws StructuralError if t's shapes or ring disagree with the scheme.
    void push_back(Triple t);
    /// Throws StructuralError on any inconsistent triple.
    void check_shapes() const;

    friend bool operator==(const Scheme&, const Scheme&) = default;

private:
    Format format_;
    Ring ring_;
    std::vector<Triple> triples_;
};

/// One violated Brent equation: sum_l u[i][j] v[j2][k] w[k2][i2] != delta.
struct BrentViolation {
    std::size_t i, j, j2, k, k2, i2;
};

struct VerifyResult {
    bool ok = false;
    /// Total number of violated equations.
    std::size_t violations = 0;
    /// The first (up to) ten violated index tuples, in lexicographic order.
    std::vector<BrentViolation> failures;

    explicit operator bool() const noexcept { return ok; }
    std::string summary() const;
};

/// Checks all (nmp)^2 Brent equations exactly in the scheme's ring.
VerifyResult verify(const Scheme& s);

/// Brent residuals LHS - delta for every equation, modulo 2^64 (modular rings
/// only, entries taken as their canonical representatives). Equation index
/// ((((i*m + j)*m + j2)*p + k)*p + k2)*n + i2.
std::vector<std::uint64_t> brent_residuals_u64(const Scheme& s);

/// The n*m*p products a_ij * b_jk -> c_ik, ordered by (i, j, k).
Scheme standard_scheme(const Format& f, const Ring& ring);

/// Strassen's seven-product scheme for 2x2 matrices.
Scheme strassen_scheme(const Ring& ring);

/// Permutation of the three format slots: new format[k] = old format[perm[k]].
struct FormatPerm {
    std::array<std::uint8_t, 3> perm{0, 1, 2};

    static FormatPerm identity() { return {}; }
    /// (n,m,p) -> (m,p,n); on triples (u,v,w) -> (v,w,u).
    static FormatPerm rotation() { return {{1, 2, 0}}; }
    /// (n,m,p) -> (p,m,n); on triples (u,v,w) -> (v^T,u^T,w^T).
    static FormatPerm transpose() { return {{2, 1, 0}}; }
    /// Parses "012", "120", ... or the names id, rot, rot2, swap-np, swap-nm, swap-mp.
    static FormatPerm parse(const std::string& text);

    bool is_identity() const noexcept { return perm == std::array<std::uint8_t, 3>{0, 1, 2}; }
    Format apply(const Format& f) const;
    FormatPerm inverse() const;
    /// (this after other): apply other first.
    FormatPerm after(const FormatPerm& other) const;
    std::string str() const;

    friend bool operator==(const FormatPerm&, const FormatPerm&) = default;
};

/// Rebuilds the scheme for the permuted format via the rotation and transpose
/// generators. Throws ContractError if s does not verify.
Scheme permute_format(const Scheme& s, const FormatPerm& sigma);
/// Same without the verification precondition check (internal use).
Scheme permute_format_unchecked(const Scheme& s, const FormatPerm& sigma);

/// Sorted format n <= m <= p and a permutation realizing it. Candidates are
/// tried in the order identity, rotation, rotation^2, then the three swaps.
std::pair<Format, FormatPerm> canonical_format(const Format& f);

/// Drops triples with a zero slot.
Scheme normalized(const Scheme& s);

/// The same coefficients viewed in another modular ring (e.g. Z2 -> Z2k(1)).
Scheme with_ring(const Scheme& s, const Ring& target);

/// Content hash over format, ring and triples in their stored order.
std::uint64_t scheme_id(const Scheme& s);
/// Content hash with triples sorted by their serialized bytes (order-insensitive).
std::uint64_t canonical_hash(const Scheme& s);
/// Triples sorted by serialized bytes; equal canonical schemes are equal up to order.
Scheme canonical_order(const Scheme& s);
/// Compact deterministic text of one triple, used for ordering and hashing.
std::string triple_key(const Triple& t);

} // namespace fliplab
