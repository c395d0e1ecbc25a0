#include "fliplab/gf2.hpp"

#include <bit>
#include <utility>

#include "fliplab/errors.hpp"

namespace fliplab {

BitVec BitMatrix::multiply(const BitVec& x) const
{
    if (x.size() != cols_)
        throw StructuralError("BitMatrix::multiply: dimension mismatch");
    BitVec y(rows_);
    const auto& xw = x.words();
    for (std::size_t r = 0; r < rows_; ++r) {
        const std::uint64_t* rw = row(r);
        std::uint64_t acc = 0;
        for (std::size_t k = 0; k < wpr_; ++k)
            acc ^= rw[k] & xw[k];
        y.set(r, std::popcount(acc) & 1);
    }
    return y;
}

std::optional<BitVec> solve_gf2(const LinSystemGF2& sys)
{
    const BitMatrix& a = sys.matrix;
    if (sys.rhs.size() != a.rows())
        throw StructuralError("solve_gf2: rhs length " + std::to_string(sys.rhs.size()) + " != equation count " +
                              std::to_string(a.rows()));

    const std::size_t rows = a.rows();
    const std::size_t cols = a.cols();
    // augmented matrix; the rhs lives in column `cols`
    BitMatrix aug(rows, cols + 1);
    const std::size_t wpr = aug.words_per_row();
    for (std::size_t r = 0; r < rows; ++r) {
        std::uint64_t* dst = aug.row(r);
        const std::uint64_t* src = a.row(r);
        for (std::size_t k = 0; k < a.words_per_row(); ++k)
            dst[k] = src[k];
        if (sys.rhs.get(r))
            aug.set(r, cols, true);
    }

    std::vector<std::size_t> pivot_col;
    std::size_t rank = 0;
    for (std::size_t c = 0; c < cols && rank < rows; ++c) {
        const std::size_t word = c / 64;
        const std::uint64_t bit = std::uint64_t{1} << (c % 64);
        std::size_t piv = rank;
        while (piv < rows && !(aug.row(piv)[word] & bit))
            ++piv;
        if (piv == rows)
            continue;
        if (piv != rank) {
            std::uint64_t* p = aug.row(piv);
            std::uint64_t* q = aug.row(rank);
            for (std::size_t k = word; k < wpr; ++k)
                std::swap(p[k], q[k]);
        }
        const std::uint64_t* prow = aug.row(rank);
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank)
                continue;
            std::uint64_t* rr = aug.row(r);
            if (rr[word] & bit)
                for (std::size_t k = word; k < wpr; ++k)
                    rr[k] ^= prow[k];
        }
        pivot_col.push_back(c);
        ++rank;
    }

    for (std::size_t r = rank; r < rows; ++r)
        if (aug.get(r, cols))
            return std::nullopt;

    BitVec x(cols);
    for (std::size_t i = 0; i < rank; ++i)
        x.set(pivot_col[i], aug.get(i, cols));
    return x;
}

} // namespace fliplab
