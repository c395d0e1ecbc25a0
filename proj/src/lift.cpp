#include "fliplab/lift.hpp"

#include <set>

#include "fliplab/errors.hpp"
#include "fliplab/rational.hpp"

namespace fliplab {

LiftState LiftState::from_z2(const Scheme& s)
{
    const Ring& ring = s.ring();
    const bool z2 = ring.kind() == RingKind::Z2 || (ring.kind() == RingKind::Z2k && ring.level() == 1);
    if (!z2)
        throw StructuralError("lifting starts from a scheme over Z2, got " + ring.name());
    VerifyResult vr = verify(s);
    if (!vr)
        throw ContractError("lift: input does not verify over Z2 (" + vr.summary() + ")");
    return LiftState{with_ring(s, Ring::z2k(1)), 1, {}};
}

std::size_t lift_unknowns(const Scheme& s)
{
    const Format& f = s.format();
    return s.rank() * (f.n * f.m + f.m * f.p + f.p * f.n);
}

namespace {

struct Odd {
    std::size_t r, c;
};

std::vector<Odd> odd_entries(const Mat& a)
{
    std::vector<Odd> out;
    for (std::size_t r = 0; r < a.rows(); ++r)
        for (std::size_t c = 0; c < a.cols(); ++c)
            if (a.residue(r, c) & 1)
                out.push_back({r, c});
    return out;
}

} // namespace

LinSystemGF2 hensel_system(const LiftState& state)
{
    const Scheme& s = state.scheme;
    if (s.ring().kind() != RingKind::Z2k || s.ring().level() != state.level)
        throw StructuralError("lift state ring does not match its level");
    if (state.level >= 64)
        throw StructuralError("lift level must stay below 64");
    const Format& f = s.format();
    const std::size_t n = f.n, m = f.m, p = f.p;
    const std::size_t neq = f.volume() * f.volume();
    const std::size_t per = n * m + m * p + p * n;

    LinSystemGF2 sys{BitMatrix(neq, lift_unknowns(s)), BitVec(neq)};
    const auto res = brent_residuals_u64(s);
    for (std::size_t e = 0; e < neq; ++e)
        if ((res[e] >> state.level) & 1)
            sys.rhs.set(e, true);

    auto eq = [&](std::size_t i, std::size_t j, std::size_t j2, std::size_t k, std::size_t k2, std::size_t i2) {
        return ((((i * m + j) * m + j2) * p + k) * p + k2) * n + i2;
    };
    for (std::size_t l = 0; l < s.rank(); ++l) {
        const auto us = odd_entries(s[l].u), vs = odd_entries(s[l].v), ws = odd_entries(s[l].w);
        const std::size_t base = l * per;
        // d/du[i][j] = v[j2][k] w[k2][i2]
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < m; ++j)
                for (const Odd& b : vs)
                    for (const Odd& c : ws)
                        sys.matrix.set(eq(i, j, b.r, b.c, c.r, c.c), base + i * m + j, true);
        // d/dv[j2][k] = u[i][j] w[k2][i2]
        for (std::size_t j2 = 0; j2 < m; ++j2)
            for (std::size_t k = 0; k < p; ++k)
                for (const Odd& a : us)
                    for (const Odd& c : ws)
                        sys.matrix.set(eq(a.r, a.c, j2, k, c.r, c.c), base + n * m + j2 * p + k, true);
        // d/dw[k2][i2] = u[i][j] v[j2][k]
        for (std::size_t k2 = 0; k2 < p; ++k2)
            for (std::size_t i2 = 0; i2 < n; ++i2)
                for (const Odd& a : us)
                    for (const Odd& b : vs)
                        sys.matrix.set(eq(a.r, a.c, b.r, b.c, k2, i2), base + n * m + m * p + k2 * n + i2, true);
    }
    return sys;
}

std::optional<LiftState> hensel_step(const LiftState& state)
{
    LinSystemGF2 sys = hensel_system(state);
    std::optional<BitVec> delta = solve_gf2(sys);
    if (!delta)
        return std::nullopt;

    const unsigned next = state.level + 1;
    const Ring ring = Ring::z2k(next);
    const std::uint64_t bit = std::uint64_t{1} << state.level;
    LiftState out{with_ring(state.scheme, ring), next, state.history};
    out.history.push_back(true);
    const Format& f = out.scheme.format();
    const std::size_t per = f.n * f.m + f.m * f.p + f.p * f.n;
    for (std::size_t l = 0; l < out.scheme.rank(); ++l) {
        Triple& t = out.scheme.triples()[l];
        std::size_t col = l * per;
        for (int s = 0; s < 3; ++s) {
            Mat& a = t.slot(s);
            for (std::size_t r = 0; r < a.rows(); ++r)
                for (std::size_t c = 0; c < a.cols(); ++c, ++col)
                    if (delta->get(col))
                        a.set_residue(r, c, ring.add(a.residue(r, c), bit));
        }
    }
    return out;
}

std::optional<Scheme> reconstruct_scheme(const Scheme& modular)
{
    if (modular.ring().kind() != RingKind::Z2k)
        throw StructuralError("reconstruction needs a scheme over Z/2^k");
    const unsigned level = modular.ring().level();
    Scheme out(modular.format(), Ring::rationals());
    out.triples().reserve(modular.rank());
    for (const Triple& t : modular.triples()) {
        Triple q;
        for (int s = 0; s < 3; ++s) {
            const Mat& a = t.slot(s);
            Mat b(Ring::rationals(), a.rows(), a.cols());
            for (std::size_t r = 0; r < a.rows(); ++r)
                for (std::size_t c = 0; c < a.cols(); ++c) {
                    auto x = rat_reconstruct(a.residue(r, c), level);
                    if (!x)
                        return std::nullopt;
                    b.set_rational(r, c, *x);
                }
            q.slot(s) = std::move(b);
        }
        out.triples().push_back(std::move(q));
    }
    return out;
}

namespace {

std::vector<std::uint64_t> denominator_primes(const Scheme& q)
{
    std::set<std::uint64_t> primes;
    for (const Triple& t : q.triples())
        for (int s = 0; s < 3; ++s) {
            const Mat& a = t.slot(s);
            for (std::size_t r = 0; r < a.rows(); ++r)
                for (std::size_t c = 0; c < a.cols(); ++c) {
                    mpz_class d = a.rational(r, c).get_den();
                    for (mpz_class pr = 2; pr * pr <= d; ++pr)
                        while (d % pr == 0) {
                            primes.insert(pr.get_ui());
                            d /= pr;
                        }
                    if (d > 1)
                        primes.insert(d.get_ui());
                }
        }
    return {primes.begin(), primes.end()};
}

} // namespace

nlohmann::json LiftResult::report() const
{
    const char* st = status == LiftStatus::Rational ? "rational" : status == LiftStatus::Partial ? "partial" : "unsolvable";
    return nlohmann::json{{"levels_reached", level_reached},
                          {"solvable_per_level", solvable_per_level},
                          {"reconstructed", rational.has_value()},
                          {"denominator_primes", denominator_primes},
                          {"status", st}};
}

LiftResult lift_and_reconstruct(const Scheme& s, unsigned target_level)
{
    if (target_level < 1 || target_level > 64)
        throw StructuralError("lift target level must lie in 1..64");
    LiftState state = LiftState::from_z2(s);
    LiftResult res;
    std::vector<std::optional<Scheme>> recon(target_level + 1);

    auto accept = [&](Scheme q) {
        res.status = LiftStatus::Rational;
        res.denominator_primes = denominator_primes(q);
        res.rational = std::move(q);
    };
    auto finish = [&] {
        res.modular = state.scheme;
        res.level_reached = state.level;
        res.solvable_per_level = state.history;
        return res;
    };

    for (;;) {
        const unsigned l = state.level;
        recon[l] = reconstruct_scheme(state.scheme);
        if (recon[l]) {
            const bool stable = l >= 3 && recon[l - 2] && *recon[l - 2] == *recon[l];
            if ((stable || l == target_level) && verify(*recon[l])) {
                accept(*recon[l]);
                return finish();
            }
        }
        if (l >= target_level) {
            res.status = LiftStatus::Partial;
            return finish();
        }
        std::optional<LiftState> next = hensel_step(state);
        if (!next) {
            state.history.push_back(false);
            res.status = LiftStatus::Unsolvable;
            return finish();
        }
        state = std::move(*next);
    }
}

} // namespace fliplab
