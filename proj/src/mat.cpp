#include "fliplab/mat.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <string>

#include "fliplab/errors.hpp"
#include "fliplab/hash.hpp"

namespace fliplab {

std::string to_hex(std::uint64_t v)
{
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

namespace {

void require_same(const Mat& a, const Mat& b, const char* op)
{
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw StructuralError(std::string(op) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                              std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                              std::to_string(b.cols()));
    if (!(a.ring() == b.ring()))
        throw StructuralError(std::string(op) + ": ring mismatch " + a.ring().name() + " vs " + b.ring().name());
}

} // namespace

Mat::Mat(Ring ring, std::size_t rows, std::size_t cols) : ring_(ring), rows_(rows), cols_(cols)
{
    switch (ring_.kind()) {
    case RingKind::Z2:
        wpr_ = (cols + 63) / 64;
        data_.assign(rows * wpr_, 0);
        break;
    case RingKind::Zp:
    case RingKind::Z2k:
        data_.assign(rows * cols, 0);
        break;
    case RingKind::Q:
        rat_.assign(rows * cols, Rational(0));
        break;
    }
}

Mat Mat::unit(Ring ring, std::size_t rows, std::size_t cols, std::size_t r, std::size_t c)
{
    Mat m(ring, rows, cols);
    m.set_int(r, c, 1);
    return m;
}

Mat Mat::from_ints(Ring ring, std::size_t rows, std::size_t cols, const std::vector<std::int64_t>& entries)
{
    if (entries.size() != rows * cols)
        throw StructuralError("from_ints: expected " + std::to_string(rows * cols) + " entries, got " +
                              std::to_string(entries.size()));
    Mat m(ring, rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c)
            m.set_int(r, c, entries[r * cols + c]);
    return m;
}

void Mat::check_index(std::size_t r, std::size_t c) const
{
    if (r >= rows_ || c >= cols_)
        throw StructuralError("matrix index (" + std::to_string(r) + "," + std::to_string(c) + ") out of range for " +
                              std::to_string(rows_) + "x" + std::to_string(cols_));
}

std::uint64_t Mat::residue(std::size_t r, std::size_t c) const
{
    check_index(r, c);
    switch (ring_.kind()) {
    case RingKind::Z2:
        return (data_[r * wpr_ + c / 64] >> (c % 64)) & 1;
    case RingKind::Zp:
    case RingKind::Z2k:
        return data_[r * cols_ + c];
    case RingKind::Q:
        break;
    }
    throw StructuralError("residue() on a rational matrix");
}

void Mat::set_residue(std::size_t r, std::size_t c, std::uint64_t v)
{
    check_index(r, c);
    switch (ring_.kind()) {
    case RingKind::Z2: {
        std::uint64_t& w = data_[r * wpr_ + c / 64];
        std::uint64_t bit = std::uint64_t{1} << (c % 64);
        w = (v & 1) ? (w | bit) : (w & ~bit);
        return;
    }
    case RingKind::Zp:
    case RingKind::Z2k:
        data_[r * cols_ + c] = ring_.reduce_word(v);
        return;
    case RingKind::Q:
        break;
    }
    throw StructuralError("set_residue() on a rational matrix");
}

const Rational& Mat::rational(std::size_t r, std::size_t c) const
{
    check_index(r, c);
    if (ring_.kind() != RingKind::Q)
        throw StructuralError("rational() on a modular matrix");
    return rat_[r * cols_ + c];
}

void Mat::set_rational(std::size_t r, std::size_t c, const Rational& v)
{
    check_index(r, c);
    if (ring_.kind() != RingKind::Q)
        throw StructuralError("set_rational() on a modular matrix");
    Rational& e = rat_[r * cols_ + c];
    // mpq_set assumes a positive denominator; copy the parts instead
    e.get_num() = v.get_num();
    e.get_den() = v.get_den();
    e.canonicalize();
}

Rational Mat::as_rational(std::size_t r, std::size_t c) const
{
    if (ring_.kind() == RingKind::Q)
        return rational(r, c);
    std::uint64_t v = residue(r, c);
    mpz_class z;
    mpz_import(z.get_mpz_t(), 1, 1, sizeof v, 0, 0, &v);
    return Rational(z);
}

void Mat::set_int(std::size_t r, std::size_t c, std::int64_t v)
{
    if (ring_.kind() == RingKind::Q)
        set_rational(r, c, Rational(static_cast<long>(v)));
    else
        set_residue(r, c, ring_.reduce(v));
}

bool Mat::is_zero() const noexcept
{
    if (ring_.kind() == RingKind::Q) {
        for (const auto& q : rat_)
            if (sgn(q) != 0)
                return false;
        return true;
    }
    for (auto w : data_)
        if (w != 0)
            return false;
    return true;
}

std::size_t Mat::nonzeros() const noexcept
{
    std::size_t n = 0;
    switch (ring_.kind()) {
    case RingKind::Z2:
        for (auto w : data_)
            n += static_cast<std::size_t>(std::popcount(w));
        break;
    case RingKind::Zp:
    case RingKind::Z2k:
        for (auto w : data_)
            n += w != 0;
        break;
    case RingKind::Q:
        for (const auto& q : rat_)
            n += sgn(q) != 0;
        break;
    }
    return n;
}

std::size_t Mat::hash() const noexcept
{
    Fnv1a h;
    h.word(rows_);
    h.word(cols_);
    h.word(static_cast<std::uint64_t>(ring_.kind()));
    h.word(ring_.prime());
    h.word(ring_.level());
    if (ring_.kind() == RingKind::Q) {
        for (const auto& q : rat_)
            h.text(q.get_str());
    } else {
        for (auto w : data_)
            h.word(w);
    }
    return static_cast<std::size_t>(h.value());
}

bool operator==(const Mat& a, const Mat& b)
{
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.ring_ == b.ring_ && a.data_ == b.data_ && a.rat_ == b.rat_;
}

Mat Mat::transposed() const
{
    Mat t(ring_, cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) {
            if (ring_.kind() == RingKind::Q)
                t.rat_[c * rows_ + r] = rat_[r * cols_ + c];
            else
                t.set_residue(c, r, residue(r, c));
        }
    return t;
}

Mat Mat::resized(std::size_t rows, std::size_t cols) const
{
    Mat out(ring_, rows, cols);
    for (std::size_t r = 0; r < std::min(rows, rows_); ++r)
        for (std::size_t c = 0; c < std::min(cols, cols_); ++c) {
            if (ring_.kind() == RingKind::Q)
                out.rat_[r * cols + c] = rat_[r * cols_ + c];
            else
                out.set_residue(r, c, residue(r, c));
        }
    return out;
}

Mat Mat::placed(std::size_t rows, std::size_t cols, std::size_t row_off, std::size_t col_off) const
{
    if (row_off + rows_ > rows || col_off + cols_ > cols)
        throw StructuralError("placed: block does not fit");
    Mat out(ring_, rows, cols);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) {
            if (ring_.kind() == RingKind::Q)
                out.rat_[(r + row_off) * cols + c + col_off] = rat_[r * cols_ + c];
            else
                out.set_residue(r + row_off, c + col_off, residue(r, c));
        }
    return out;
}

Mat Mat::with_ring(const Ring& target) const
{
    if (!ring_.is_modular())
        throw StructuralError("with_ring: rational matrices cannot be reinterpreted");
    Mat out(target, rows_, cols_);
    for (std::size_t r = 0; r < rows_; ++r)
        for (std::size_t c = 0; c < cols_; ++c) {
            std::uint64_t v = residue(r, c);
            if (target.kind() == RingKind::Q)
                out.set_rational(r, c, as_rational(r, c));
            else
                out.set_residue(r, c, v);
        }
    return out;
}

std::uint64_t Mat::to_bits64() const
{
    if (ring_.kind() != RingKind::Z2 || rows_ * cols_ > 64)
        throw StructuralError("to_bits64 requires a Z2 matrix with at most 64 entries");
    std::uint64_t bits = 0;
    for (std::size_t r = 0; r < rows_; ++r)
        bits |= (data_[r] & ((cols_ == 64) ? ~0ULL : ((1ULL << cols_) - 1))) << (r * cols_);
    return bits;
}

Mat Mat::from_bits64(std::size_t rows, std::size_t cols, std::uint64_t bits)
{
    if (rows * cols > 64)
        throw StructuralError("from_bits64: more than 64 entries");
    Mat m(Ring::z2(), rows, cols);
    std::uint64_t row_mask = cols == 64 ? ~0ULL : (1ULL << cols) - 1;
    for (std::size_t r = 0; r < rows; ++r)
        m.data_[r] = (bits >> (r * cols)) & row_mask;
    return m;
}

Mat mat_add(const Mat& a, const Mat& b)
{
    require_same(a, b, "mat_add");
    Mat out = a;
    if (a.ring_.kind() == RingKind::Q) {
        for (std::size_t i = 0; i < out.rat_.size(); ++i)
            out.rat_[i] += b.rat_[i];
    } else {
        for (std::size_t i = 0; i < out.data_.size(); ++i)
            out.data_[i] = a.ring_.add(a.data_[i], b.data_[i]);
    }
    return out;
}

Mat mat_sub(const Mat& a, const Mat& b)
{
    require_same(a, b, "mat_sub");
    Mat out = a;
    if (a.ring_.kind() == RingKind::Q) {
        for (std::size_t i = 0; i < out.rat_.size(); ++i)
            out.rat_[i] -= b.rat_[i];
    } else {
        for (std::size_t i = 0; i < out.data_.size(); ++i)
            out.data_[i] = a.ring_.sub(a.data_[i], b.data_[i]);
    }
    return out;
}

Mat mat_scale(const Mat& a, std::uint64_t lambda)
{
    if (!a.ring_.is_modular())
        throw StructuralError("mat_scale: residue scalar applied to a rational matrix");
    lambda = a.ring_.reduce_word(lambda);
    Mat out = a;
    if (a.ring_.kind() == RingKind::Z2) {
        if (lambda == 0)
            std::fill(out.data_.begin(), out.data_.end(), 0);
        return out;
    }
    for (auto& w : out.data_)
        w = a.ring_.mul(w, lambda);
    return out;
}

Mat mat_scale(const Mat& a, const Rational& lambda)
{
    if (a.ring_.kind() != RingKind::Q)
        throw StructuralError("mat_scale: rational scalar applied to a modular matrix");
    Mat out = a;
    for (auto& q : out.rat_)
        q *= lambda;
    return out;
}

} // namespace fliplab
