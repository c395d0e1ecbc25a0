#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fliplab/ring.hpp"

namespace fliplab {

/// Dense matrix over a Ring.
///
/// Storage depends on the ring:
///  - Z2: bit-packed rows, `ceil(cols/64)` machine words per row;
///  - Zp, Z2k: one canonical residue per entry, row-major;
///  - Q: one canonical GMP rational per entry, row-major.
///
/// Every stored entry is canonical, so equality and hashing are structural.
class Mat {
public:
    Mat() = default;
    /// Zero matrix.
    Mat(Ring ring, std::size_t rows, std::size_t cols);
    /// Single-entry 0/1 matrix with a one at (r, c).
    static Mat unit(Ring ring, std::size_t rows, std::size_t cols, std::size_t r, std::size_t c);
    /// Row-major integer entries reduced into the ring.
    static Mat from_ints(Ring ring, std::size_t rows, std::size_t cols, const std::vector<std::int64_t>& entries);

    const Ring& ring() const noexcept { return ring_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    /// Modular rings only.
    std::uint64_t residue(std::size_t r, std::size_t c) const;
    void set_residue(std::size_t r, std::size_t c, std::uint64_t v);
    /// Q only.
    const Rational& rational(std::size_t r, std::size_t c) const;
    void set_rational(std::size_t r, std::size_t c, const Rational& v);
    /// Any ring: the entry viewed as a rational (residues as their representatives).
    Rational as_rational(std::size_t r, std::size_t c) const;
    /// Any ring: sets the image of the integer v.
    void set_int(std::size_t r, std::size_t c, std::int64_t v);

    bool is_zero() const noexcept;
    std::size_t nonzeros() const noexcept;
    std::size_t hash() const noexcept;

    Mat transposed() const;
    /// Top-left corner kept, zero padded or truncated to the new shape.
    Mat resized(std::size_t rows, std::size_t cols) const;
    /// This matrix embedded into a zero rows x cols matrix at the given offset.
    Mat placed(std::size_t rows, std::size_t cols, std::size_t row_off, std::size_t col_off) const;

    /// Same entries, interpreted in another ring: residues are reduced
    /// (Z2k -> Z2, Z2k(l) -> Z2k(l')) or copied (Z2 -> Z2k). Q is not a source.
    Mat with_ring(const Ring& target) const;

    /// Z2 packing of the whole matrix into one word, bit r*cols + c.
    /// Requires Z2 and rows*cols <= 64.
    std::uint64_t to_bits64() const;
    static Mat from_bits64(std::size_t rows, std::size_t cols, std::uint64_t bits);

    /// Z2 row words (rows * words_per_row).
    const std::vector<std::uint64_t>& words() const noexcept { return data_; }
    std::size_t words_per_row() const noexcept { return wpr_; }

    friend bool operator==(const Mat& a, const Mat& b);

private:
    friend Mat mat_add(const Mat&, const Mat&);
    friend Mat mat_sub(const Mat&, const Mat&);
    friend Mat mat_scale(const Mat&, std::uint64_t);
    friend Mat mat_scale(const Mat&, const Rational&);

    void check_index(std::size_t r, std::size_t c) const;

    Ring ring_;
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t wpr_ = 0;
    std::vector<std::uint64_t> data_;
    std::vector<Rational> rat_;
};

// Elementwise ring operations. Shape or ring mismatch -> StructuralError.
Mat mat_add(const Mat& a, const Mat& b);
Mat mat_sub(const Mat& a, const Mat& b);
/// Modular rings; lambda must be canonical.
Mat mat_scale(const Mat& a, std::uint64_t lambda);
/// Q only.
Mat mat_scale(const Mat& a, const Rational& lambda);
inline bool mat_is_zero(const Mat& a) { return a.is_zero(); }
inline bool mat_eq(const Mat& a, const Mat& b) { return a == b; }
inline std::size_t mat_hash(const Mat& a) { return a.hash(); }

struct MatHash {
    std::size_t operator()(const Mat& m) const noexcept { return m.hash(); }
};

} // namespace fliplab
