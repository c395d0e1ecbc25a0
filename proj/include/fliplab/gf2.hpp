#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace fliplab {

/// Dense bit vector packed into 64-bit words.
class BitVec {
public:
    BitVec() = default;
    explicit BitVec(std::size_t n) : n_(n), words_((n + 63) / 64, 0) {}

    std::size_t size() const noexcept { return n_; }
    bool get(std::size_t i) const noexcept { return (words_[i / 64] >> (i % 64)) & 1; }
    void set(std::size_t i, bool v) noexcept
    {
        std::uint64_t bit = std::uint64_t{1} << (i % 64);
        words_[i / 64] = v ? (words_[i / 64] | bit) : (words_[i / 64] & ~bit);
    }
    void flip(std::size_t i) noexcept { words_[i / 64] ^= std::uint64_t{1} << (i % 64); }
    const std::vector<std::uint64_t>& words() const noexcept { return words_; }

    friend bool operator==(const BitVec&, const BitVec&) = default;

private:
    std::size_t n_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Row-major bit-packed matrix over GF(2).
class BitMatrix {
public:
    BitMatrix() = default;
    BitMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), wpr_((cols + 63) / 64), data_(rows * wpr_, 0) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t words_per_row() const noexcept { return wpr_; }

    bool get(std::size_t r, std::size_t c) const noexcept { return (data_[r * wpr_ + c / 64] >> (c % 64)) & 1; }
    void set(std::size_t r, std::size_t c, bool v) noexcept
    {
        std::uint64_t& w = data_[r * wpr_ + c / 64];
        std::uint64_t bit = std::uint64_t{1} << (c % 64);
        w = v ? (w | bit) : (w & ~bit);
    }
    void flip(std::size_t r, std::size_t c) noexcept { data_[r * wpr_ + c / 64] ^= std::uint64_t{1} << (c % 64); }

    std::uint64_t* row(std::size_t r) noexcept { return data_.data() + r * wpr_; }
    const std::uint64_t* row(std::size_t r) const noexcept { return data_.data() + r * wpr_; }

    /// Matrix-vector product over GF(2).
    BitVec multiply(const BitVec& x) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::size_t wpr_ = 0;
    std::vector<std::uint64_t> data_;
};

/// Inhomogeneous system `matrix * x = rhs` over GF(2); rows are equations.
struct LinSystemGF2 {
    BitMatrix matrix;
    BitVec rhs;
};

/// Gaussian elimination with word-parallel row operations. Pivots are taken
/// column by column, choosing the first remaining row with a one; free
/// variables are set to 0. Returns nullopt when the system is inconsistent.
/// Throws StructuralError if rhs.size() != matrix.rows().
std::optional<BitVec> solve_gf2(const LinSystemGF2& sys);

} // namespace fliplab
