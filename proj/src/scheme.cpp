#include "fliplab/scheme.hpp"

#include <algorithm>
#include <sstream>

#include "fliplab/errors.hpp"
#include "fliplab/hash.hpp"

namespace fliplab {

Format::Format(std::size_t n_, std::size_t m_, std::size_t p_) : n(n_), m(m_), p(p_)
{
    if (n == 0 || m == 0 || p == 0)
        throw StructuralError("format dimensions must be positive, got " + str());
}

std::string Format::label() const
{
    if (n < 10 && m < 10 && p < 10)
        return std::to_string(n) + std::to_string(m) + std::to_string(p);
    return std::to_string(n) + "_" + std::to_string(m) + "_" + std::to_string(p);
}

std::string Format::str() const
{
    return std::to_string(n) + "x" + std::to_string(m) + "x" + std::to_string(p);
}

Scheme::Scheme(Format f, Ring r, std::vector<Triple> triples) : format_(f), ring_(r), triples_(std::move(triples))
{
    check_shapes();
}

namespace {

void check_mat(const Mat& a, const Ring& ring, std::size_t rows, std::size_t cols, std::size_t idx, const char* name)
{
    if (a.rows() != rows || a.cols() != cols)
        throw StructuralError("triple " + std::to_string(idx) + ": " + name + " is " + std::to_string(a.rows()) + "x" +
                              std::to_string(a.cols()) + ", expected " + std::to_string(rows) + "x" +
                              std::to_string(cols));
    if (!(a.ring() == ring))
        throw StructuralError("triple " + std::to_string(idx) + ": " + name + " is over " + a.ring().name() +
                              ", expected " + ring.name());
}

void check_triple(const Format& f, const Ring& ring, const Triple& t, std::size_t idx)
{
    check_mat(t.u, ring, f.n, f.m, idx, "u");
    check_mat(t.v, ring, f.m, f.p, idx, "v");
    check_mat(t.w, ring, f.p, f.n, idx, "w");
}

struct Entry {
    std::size_t r, c;
    std::uint64_t v;
};

std::vector<Entry> sparse(const Mat& a)
{
    std::vector<Entry> out;
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            if (auto v = a.residue(r, c))
                out.push_back({r, c, v});
    return out;
}

struct RatEntry {
    std::size_t r, c;
    Rational v;
};

std::vector<RatEntry> sparse_q(const Mat& a)
{
    std::vector<RatEntry> out;
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            if (sgn(a.rational(r, c)) != 0)
                out.push_back({r, c, a.rational(r, c)});
    return out;
}

struct EqIndexer {
    std::size_t n, m, p;
    std::size_t operator()(std::size_t i, std::size_t j, std::size_t j2, std::size_t k, std::size_t k2,
                           std::size_t i2) const
    {
        return ((((i * m + j) * m + j2) * p + k) * p + k2) * n + i2;
    }
    BrentViolation decode(std::size_t idx) const
    {
        BrentViolation b{};
        b.i2 = idx % n;
        idx /= n;
        b.k2 = idx % p;
        idx /= p;
        b.k = idx % p;
        idx /= p;
        b.j2 = idx % m;
        idx /= m;
        b.j = idx % m;
        idx /= m;
        b.i = idx;
        return b;
    }
    bool diagonal(std::size_t idx) const
    {
        BrentViolation b = decode(idx);
        return b.j == b.j2 && b.k == b.k2 && b.i == b.i2;
    }
};

// Accumulates sum_l u*v*w per equation, wrapping modulo 2^64; for Zp each
// product is reduced first so the sum stays exact.
std::vector<std::uint64_t> accumulate_modular(const Scheme& s)
{
    const Format& f = s.format();
    const Ring& ring = s.ring();
    EqIndexer ix{f.n, f.m, f.p};
    std::vector<std::uint64_t> acc(f.volume() * f.volume(), 0);
    const bool zp = ring.kind() == RingKind::Zp;
    for (const Triple& t : s.triples()) {
        auto us = sparse(t.u), vs = sparse(t.v), ws = sparse(t.w);
        for (const auto& a : us)
            for (const auto& b : vs) {
                std::uint64_t ab = zp ? (a.v * b.v) % ring.prime() : a.v * b.v;
                for (const auto& c : ws) {
                    std::uint64_t prod = zp ? (ab * c.v) % ring.prime() : ab * c.v;
                    acc[ix(a.r, a.c, b.r, b.c, c.r, c.c)] += prod;
                }
            }
    }
    return acc;
}

} // namespace

void Scheme::push_back(Triple t)
{
    check_triple(format_, ring_, t, triples_.size());
    triples_.push_back(std::move(t));
}

void Scheme::check_shapes() const
{
    for (std::size_t i = 0; i < triples_.size(); ++i)
        check_triple(format_, ring_, triples_[i], i);
}

std::string VerifyResult::summary() const
{
    if (ok)
        return "verified";
    std::ostringstream os;
    os << violations << " Brent equation(s) violated";
    for (const auto& b : failures)
        os << "; (i=" << b.i << ",j=" << b.j << ",j'=" << b.j2 << ",k=" << b.k << ",k'=" << b.k2 << ",i'=" << b.i2
           << ")";
    return os.str();
}

std::vector<std::uint64_t> brent_residuals_u64(const Scheme& s)
{
    if (!s.ring().is_modular())
        throw StructuralError("brent_residuals_u64 requires a modular ring");
    s.check_shapes();
    const Format& f = s.format();
    EqIndexer ix{f.n, f.m, f.p};
    auto acc = accumulate_modular(s);
    for (std::size_t e = 0; e < acc.size(); ++e)
        if (ix.diagonal(e))
            acc[e] -= 1;
    return acc;
}

VerifyResult verify(const Scheme& s)
{
    s.check_shapes();
    const Format& f = s.format();
    const Ring& ring = s.ring();
    EqIndexer ix{f.n, f.m, f.p};
    const std::size_t neq = f.volume() * f.volume();

    VerifyResult res;
    auto record = [&](std::size_t e) {
        ++res.violations;
        if (res.failures.size() < 10)
            res.failures.push_back(ix.decode(e));
    };

    if (ring.is_modular()) {
        auto acc = accumulate_modular(s);
        for (std::size_t e = 0; e < neq; ++e) {
            std::uint64_t want = ix.diagonal(e) ? 1 : 0;
            if (ring.reduce_word(acc[e]) != want)
                record(e);
        }
    } else {
        std::vector<Rational> acc(neq, Rational(0));
        for (const Triple& t : s.triples()) {
            auto us = sparse_q(t.u), vs = sparse_q(t.v), ws = sparse_q(t.w);
            for (const auto& a : us)
                for (const auto& b : vs) {
                    Rational ab = a.v * b.v;
                    for (const auto& c : ws)
                        acc[ix(a.r, a.c, b.r, b.c, c.r, c.c)] += ab * c.v;
                }
        }
        for (std::size_t e = 0; e < neq; ++e) {
            int want = ix.diagonal(e) ? 1 : 0;
            if (acc[e] != want)
                record(e);
        }
    }
    res.ok = res.violations == 0;
    return res;
}

Scheme standard_scheme(const Format& f, const Ring& ring)
{
    Scheme s(f, ring);
    for (std::size_t i = 0; i < f.n; ++i)
        for (std::size_t j = 0; j < f.m; ++j)
            for (std::size_t k = 0; k < f.p; ++k)
                s.push_back(Triple{Mat::unit(ring, f.n, f.m, i, j), Mat::unit(ring, f.m, f.p, j, k),
                                   Mat::unit(ring, f.p, f.n, k, i)});
    return s;
}

Scheme strassen_scheme(const Ring& ring)
{
    // {u (a11 a12 a21 a22), v (b11 b12 b21 b22), w (w[k][i]: c11 c21 c12 c22)}
    static const std::int64_t table[7][3][4] = {
        {{1, 0, 0, 1}, {1, 0, 0, 1}, {1, 0, 0, 1}},    // (a11+a22)(b11+b22) -> c11, c22
        {{0, 0, 1, 1}, {1, 0, 0, 0}, {0, 1, 0, -1}},   // (a21+a22) b11 -> c21, -c22
        {{1, 0, 0, 0}, {0, 1, 0, -1}, {0, 0, 1, 1}},   // a11 (b12-b22) -> c12, c22
        {{0, 0, 0, 1}, {-1, 0, 1, 0}, {1, 1, 0, 0}},   // a22 (b21-b11) -> c11, c21
        {{1, 1, 0, 0}, {0, 0, 0, 1}, {-1, 0, 1, 0}},   // (a11+a12) b22 -> -c11, c12
        {{-1, 0, 1, 0}, {1, 1, 0, 0}, {0, 0, 0, 1}},   // (a21-a11)(b11+b12) -> c22
        {{0, 1, 0, -1}, {0, 0, 1, 1}, {1, 0, 0, 0}},   // (a12-a22)(b21+b22) -> c11
    };
    Scheme s(Format(2, 2, 2), ring);
    for (const auto& row : table) {
        Triple t;
        t.u = Mat::from_ints(ring, 2, 2, {row[0][0], row[0][1], row[0][2], row[0][3]});
        t.v = Mat::from_ints(ring, 2, 2, {row[1][0], row[1][1], row[1][2], row[1][3]});
        t.w = Mat::from_ints(ring, 2, 2, {row[2][0], row[2][1], row[2][2], row[2][3]});
        s.push_back(std::move(t));
    }
    return s;
}

FormatPerm FormatPerm::parse(const std::string& text)
{
    if (text == "id" || text == "identity")
        return identity();
    if (text == "rot" || text == "rotation")
        return rotation();
    if (text == "rot2")
        return rotation().after(rotation());
    if (text == "swap-np" || text == "transpose")
        return transpose();
    if (text == "swap-nm")
        return {{1, 0, 2}};
    if (text == "swap-mp")
        return {{0, 2, 1}};
    if (text.size() == 3) {
        FormatPerm out;
        bool seen[3] = {false, false, false};
        for (int k = 0; k < 3; ++k) {
            int d = text[k] - '0';
            if (d < 0 || d > 2 || seen[d])
                throw StructuralError("invalid permutation '" + text + "'");
            seen[d] = true;
            out.perm[k] = static_cast<std::uint8_t>(d);
        }
        return out;
    }
    throw StructuralError("invalid permutation '" + text + "'");
}

Format FormatPerm::apply(const Format& f) const
{
    return Format(f[perm[0]], f[perm[1]], f[perm[2]]);
}

FormatPerm FormatPerm::inverse() const
{
    FormatPerm inv;
    for (std::uint8_t k = 0; k < 3; ++k)
        inv.perm[perm[k]] = k;
    return inv;
}

FormatPerm FormatPerm::after(const FormatPerm& other) const
{
    FormatPerm out;
    for (int k = 0; k < 3; ++k)
        out.perm[k] = other.perm[perm[k]];
    return out;
}

std::string FormatPerm::str() const
{
    return std::string{char('0' + perm[0]), char('0' + perm[1]), char('0' + perm[2])};
}

namespace {

Scheme rotate(const Scheme& s)
{
    const Format& f = s.format();
    Scheme out(Format(f.m, f.p, f.n), s.ring());
    out.triples().reserve(s.rank());
    for (const Triple& t : s.triples())
        out.triples().push_back(Triple{t.v, t.w, t.u});
    return out;
}

Scheme transpose(const Scheme& s)
{
    const Format& f = s.format();
    Scheme out(Format(f.p, f.m, f.n), s.ring());
    out.triples().reserve(s.rank());
    for (const Triple& t : s.triples())
        out.triples().push_back(Triple{t.v.transposed(), t.u.transposed(), t.w.transposed()});
    return out;
}

// Shortest word in {rotation, transpose} realizing sigma (rotation preferred).
std::vector<bool> generator_word(const FormatPerm& sigma)
{
    // false = rotation, true = transpose; words are applied left to right
    std::vector<std::vector<bool>> frontier{{}};
    for (int len = 0; len <= 3; ++len) {
        std::vector<std::vector<bool>> next;
        for (const auto& w : frontier) {
            FormatPerm acc;
            for (bool t : w)
                acc = (t ? FormatPerm::transpose() : FormatPerm::rotation()).after(acc);
            if (acc == sigma)
                return w;
            for (bool g : {false, true}) {
                auto w2 = w;
                w2.push_back(g);
                next.push_back(std::move(w2));
            }
        }
        frontier = std::move(next);
    }
    throw StructuralError("permutation not generated: " + sigma.str());
}

} // namespace

Scheme permute_format_unchecked(const Scheme& s, const FormatPerm& sigma)
{
    Scheme out = s;
    for (bool t : generator_word(sigma))
        out = t ? transpose(out) : rotate(out);
    return out;
}

Scheme permute_format(const Scheme& s, const FormatPerm& sigma)
{
    if (auto r = verify(s); !r)
        throw ContractError("permute_format: input does not verify (" + r.summary() + ")");
    return permute_format_unchecked(s, sigma);
}

std::pair<Format, FormatPerm> canonical_format(const Format& f)
{
    const FormatPerm candidates[] = {FormatPerm::identity(),
                                     FormatPerm::rotation(),
                                     FormatPerm::rotation().after(FormatPerm::rotation()),
                                     FormatPerm::transpose(),
                                     FormatPerm{{1, 0, 2}},
                                     FormatPerm{{0, 2, 1}}};
    for (const auto& c : candidates) {
        Format g = c.apply(f);
        if (g.n <= g.m && g.m <= g.p)
            return {g, c};
    }
    throw StructuralError("canonical_format: unreachable");
}

Scheme normalized(const Scheme& s)
{
    Scheme out(s.format(), s.ring());
    for (const Triple& t : s.triples())
        if (!t.has_zero_slot())
            out.triples().push_back(t);
    return out;
}

Scheme with_ring(const Scheme& s, const Ring& target)
{
    Scheme out(s.format(), target);
    out.triples().reserve(s.rank());
    for (const Triple& t : s.triples())
        out.triples().push_back(Triple{t.u.with_ring(target), t.v.with_ring(target), t.w.with_ring(target)});
    return out;
}

namespace {

void append_mat(std::string& out, const Mat& a)
{
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c) {
            if (a.ring().is_modular())
                out += std::to_string(a.residue(r, c));
            else
                out += a.rational(r, c).get_str();
            out += ',';
        }
}

} // namespace

std::string triple_key(const Triple& t)
{
    std::string out;
    append_mat(out, t.u);
    out += '|';
    append_mat(out, t.v);
    out += '|';
    append_mat(out, t.w);
    return out;
}

namespace {

std::uint64_t hash_keys(const Scheme& s, const std::vector<std::string>& keys)
{
    Fnv1a h;
    h.word(s.format().n);
    h.word(s.format().m);
    h.word(s.format().p);
    h.text(s.ring().tag());
    for (const auto& k : keys) {
        h.text(k);
        h.word(0x1e);
    }
    return h.value();
}

} // namespace

std::uint64_t scheme_id(const Scheme& s)
{
    std::vector<std::string> keys;
    keys.reserve(s.rank());
    for (const Triple& t : s.triples())
        keys.push_back(triple_key(t));
    return hash_keys(s, keys);
}

std::uint64_t canonical_hash(const Scheme& s)
{
    std::vector<std::string> keys;
    keys.reserve(s.rank());
    for (const Triple& t : s.triples())
        keys.push_back(triple_key(t));
    std::sort(keys.begin(), keys.end());
    return hash_keys(s, keys);
}

Scheme canonical_order(const Scheme& s)
{
    std::vector<std::pair<std::string, std::size_t>> keyed;
    keyed.reserve(s.rank());
    for (std::size_t i = 0; i < s.rank(); ++i)
        keyed.emplace_back(triple_key(s[i]), i);
    std::sort(keyed.begin(), keyed.end());
    Scheme out(s.format(), s.ring());
    for (const auto& [key, i] : keyed)
        out.triples().push_back(s[i]);
    return out;
}

} // namespace fliplab
