#include "fliplab/meta.hpp"

#include <algorithm>
#include <array>

#include "fliplab/errors.hpp"

namespace fliplab {

DimAxis parse_axis(const std::string& text)
{
    if (text == "n" || text == "N")
        return DimAxis::N;
    if (text == "m" || text == "M")
        return DimAxis::M;
    if (text == "p" || text == "P")
        return DimAxis::P;
    throw StructuralError("axis must be n, m or p, got \"" + text + "\"");
}

char axis_name(DimAxis a)
{
    return a == DimAxis::N ? 'n' : a == DimAxis::M ? 'm' : 'p';
}

namespace {

void require_verified(const Scheme& s, const char* op)
{
    VerifyResult vr = verify(s);
    if (!vr)
        throw ContractError(std::string(op) + ": input does not verify (" + vr.summary() + ")");
}

Format grown(const Format& f, DimAxis axis, std::size_t by)
{
    std::array<std::size_t, 3> d{f.n, f.m, f.p};
    d[static_cast<int>(axis)] += by;
    return Format(d[0], d[1], d[2]);
}

} // namespace

Scheme extend(const Scheme& s, DimAxis axis)
{
    require_verified(s, "extend");
    const Format& f = s.format();
    const Format g = grown(f, axis, 1);
    const Ring& ring = s.ring();
    Scheme out(g, ring);
    auto& ts = out.triples();
    ts.reserve(s.rank() + f.volume() / f[static_cast<int>(axis)]);
    for (const Triple& t : s.triples())
        ts.push_back(Triple{t.u.resized(g.n, g.m), t.v.resized(g.m, g.p), t.w.resized(g.p, g.n)});

    // products feeding the new last index: a_ij b_jk -> c_ik with one index fixed
    switch (axis) {
    case DimAxis::N:
        for (std::size_t j = 0; j < f.m; ++j)
            for (std::size_t k = 0; k < f.p; ++k)
                ts.push_back(Triple{Mat::unit(ring, g.n, g.m, f.n, j), Mat::unit(ring, g.m, g.p, j, k),
                                    Mat::unit(ring, g.p, g.n, k, f.n)});
        break;
    case DimAxis::M:
        for (std::size_t i = 0; i < f.n; ++i)
            for (std::size_t k = 0; k < f.p; ++k)
                ts.push_back(Triple{Mat::unit(ring, g.n, g.m, i, f.m), Mat::unit(ring, g.m, g.p, f.m, k),
                                    Mat::unit(ring, g.p, g.n, k, i)});
        break;
    case DimAxis::P:
        for (std::size_t i = 0; i < f.n; ++i)
            for (std::size_t j = 0; j < f.m; ++j)
                ts.push_back(Triple{Mat::unit(ring, g.n, g.m, i, j), Mat::unit(ring, g.m, g.p, j, f.p),
                                    Mat::unit(ring, g.p, g.n, f.p, i)});
        break;
    }
    return out;
}

Scheme project(const Scheme& s, DimAxis axis)
{
    const Format& f = s.format();
    if (f[static_cast<int>(axis)] < 2)
        throw StructuralError(std::string("project: axis ") + axis_name(axis) + " has dimension 1");
    require_verified(s, "project");
    std::array<std::size_t, 3> d{f.n, f.m, f.p};
    d[static_cast<int>(axis)] -= 1;
    const Format g(d[0], d[1], d[2]);
    Scheme out(g, s.ring());
    for (const Triple& t : s.triples()) {
        Triple r{t.u.resized(g.n, g.m), t.v.resized(g.m, g.p), t.w.resized(g.p, g.n)};
        if (!r.has_zero_slot())
            out.triples().push_back(std::move(r));
    }
    return out;
}

Scheme combine(const Scheme& s1, const Scheme& s2, DimAxis axis)
{
    if (!(s1.ring() == s2.ring()))
        throw StructuralError("combine: rings differ (" + s1.ring().name() + " vs " + s2.ring().name() + ")");
    const Format& a = s1.format();
    const Format& b = s2.format();
    const int ax = static_cast<int>(axis);
    for (int k = 0; k < 3; ++k)
        if (k != ax && a[k] != b[k])
            throw StructuralError("combine: formats " + a.str() + " and " + b.str() +
                                  " differ off the combination axis " + axis_name(axis));
    require_verified(s1, "combine");
    require_verified(s2, "combine");

    const Format g = grown(a, axis, b[ax]);
    Scheme out(g, s1.ring());
    out.triples().reserve(s1.rank() + s2.rank());
    auto place = [&](const Triple& t, std::size_t off) {
        switch (axis) {
        case DimAxis::N:
            return Triple{t.u.placed(g.n, g.m, off, 0), t.v, t.w.placed(g.p, g.n, 0, off)};
        case DimAxis::M:
            return Triple{t.u.placed(g.n, g.m, 0, off), t.v.placed(g.m, g.p, off, 0), t.w};
        default:
            return Triple{t.u, t.v.placed(g.m, g.p, 0, off), t.w.placed(g.p, g.n, off, 0)};
        }
    };
    for (const Triple& t : s1.triples())
        out.triples().push_back(place(t, 0));
    for (const Triple& t : s2.triples())
        out.triples().push_back(place(t, a[ax]));
    return out;
}

namespace {

std::vector<Format> successors(const Format& f, const GridConstraints& c)
{
    std::vector<Format> out;
    for (int k = 0; k < 3; ++k) {
        std::array<std::size_t, 3> d{f.n, f.m, f.p};
        d[k] += 1;
        std::sort(d.begin(), d.end());
        if (d[2] > c.max_dim || d[0] + d[1] + d[2] > c.sum_cap)
            continue;
        Format g(d[0], d[1], d[2]);
        if (std::find(out.begin(), out.end(), g) == out.end())
            out.push_back(g);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool walk_paths(FormatPath& path, const GridConstraints& c, const std::function<bool(const FormatPath&)>& visit)
{
    const std::size_t len = path.size() - 1;
    std::vector<Format> next = len < c.max_length ? successors(path.back(), c) : std::vector<Format>{};
    if (next.empty())
        return len == 0 ? true : visit(path);
    for (const Format& g : next) {
        path.push_back(g);
        const bool go_on = walk_paths(path, c, visit);
        path.pop_back();
        if (!go_on)
            return false;
    }
    return true;
}

} // namespace

void enumerate_grid_paths(const GridConstraints& c, const std::function<bool(const FormatPath&)>& visit)
{
    if (c.min_dim == 0)
        throw StructuralError("grid: min_dim must be positive");
    if (c.min_dim > c.max_dim || 3 * c.min_dim > c.sum_cap)
        return;
    FormatPath path{Format(c.min_dim, c.min_dim, c.min_dim)};
    walk_paths(path, c, visit);
}

std::vector<FormatPath> grid_paths(const GridConstraints& c)
{
    std::vector<FormatPath> out;
    enumerate_grid_paths(c, [&](const FormatPath& p) {
        out.push_back(p);
        return true;
    });
    return out;
}

std::size_t count_grid_paths(const GridConstraints& c)
{
    std::size_t n = 0;
    enumerate_grid_paths(c, [&](const FormatPath&) {
        ++n;
        return true;
    });
    return n;
}

} // namespace fliplab
