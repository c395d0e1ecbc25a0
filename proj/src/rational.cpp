#include "fliplab/rational.hpp"

#include <string>

#include "fliplab/errors.hpp"

namespace fliplab {

namespace {

mpz_class from_u64(std::uint64_t v)
{
    mpz_class z;
    mpz_import(z.get_mpz_t(), 1, 1, sizeof v, 0, 0, &v);
    return z;
}

std::uint64_t to_u64(const mpz_class& z)
{
    // z is in [0, 2^64)
    std::uint64_t v = 0;
    std::size_t count = 0;
    mpz_export(&v, &count, 1, sizeof v, 0, 0, z.get_mpz_t());
    return count == 0 ? 0 : v;
}

void check_level(unsigned level)
{
    if (level < 1 || level > 64)
        throw StructuralError("2-adic level must be in [1, 64], got " + std::to_string(level));
}

} // namespace

std::uint64_t reconstruction_bound(unsigned level)
{
    check_level(level);
    mpz_class pow2 = mpz_class(1) << (level - 1);
    mpz_class root;
    mpz_sqrt(root.get_mpz_t(), pow2.get_mpz_t());
    return to_u64(root);
}

std::optional<Rational> rat_reconstruct(std::uint64_t u, unsigned level)
{
    check_level(level);
    if (level < 64 && u >= (std::uint64_t{1} << level))
        throw StructuralError("rat_reconstruct: residue " + std::to_string(u) + " out of range for level " +
                              std::to_string(level));

    const mpz_class modulus = mpz_class(1) << level;
    const mpz_class bound = from_u64(reconstruction_bound(level));

    // invariant: r_i = t_i * u (mod 2^level)
    mpz_class r0 = modulus, r1 = from_u64(u);
    mpz_class t0 = 0, t1 = 1;
    while (r1 > bound) {
        mpz_class q = r0 / r1;
        mpz_class r2 = r0 - q * r1;
        mpz_class t2 = t0 - q * t1;
        r0 = std::move(r1);
        r1 = std::move(r2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }

    mpz_class num = r1, den = t1;
    if (den < 0) {
        num = -num;
        den = -den;
    }
    if (den == 0 || den > bound || mpz_even_p(den.get_mpz_t()))
        return std::nullopt;
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
    if (g != 1)
        return std::nullopt;
    Rational out(num, den);
    out.canonicalize();
    return out;
}

std::optional<std::uint64_t> rational_to_residue(const Rational& q, unsigned level)
{
    check_level(level);
    const mpz_class modulus = mpz_class(1) << level;
    if (mpz_even_p(q.get_den_mpz_t()))
        return std::nullopt;
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), q.get_den_mpz_t(), modulus.get_mpz_t());
    mpz_class v = q.get_num() * inv;
    mpz_class r;
    mpz_fdiv_r(r.get_mpz_t(), v.get_mpz_t(), modulus.get_mpz_t());
    return to_u64(r);
}

} // namespace fliplab
