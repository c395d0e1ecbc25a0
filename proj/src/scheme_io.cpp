#include "fliplab/scheme_io.hpp"

#include <fstream>
#include <sstream>

#include "fliplab/errors.hpp"

namespace fliplab {

using nlohmann::json;

json ring_to_json(const Ring& r)
{
    switch (r.kind()) {
    case RingKind::Z2:
        return json{{"kind", "Z2"}};
    case RingKind::Zp:
        return json{{"kind", "Zp"}, {"p", r.prime()}};
    case RingKind::Z2k:
        return json{{"kind", "Z2k"}, {"k", r.level()}};
    case RingKind::Q:
        return json{{"kind", "Q"}};
    }
    return {};
}

Ring ring_from_json(const json& j, const std::string& where)
{
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw ParseError(where, "expected an object with a string \"kind\"");
    const std::string kind = j["kind"].get<std::string>();
    try {
        if (kind == "Z2")
            return Ring::z2();
        if (kind == "Q")
            return Ring::rationals();
        if (kind == "Zp") {
            if (!j.contains("p") || !j["p"].is_number_unsigned())
                throw ParseError(where + ".p", "expected a positive integer");
            return Ring::zp(j["p"].get<std::uint32_t>());
        }
        if (kind == "Z2k") {
            if (!j.contains("k") || !j["k"].is_number_unsigned())
                throw ParseError(where + ".k", "expected a positive integer");
            return Ring::z2k(j["k"].get<std::uint32_t>());
        }
    } catch (const StructuralError& e) {
        throw UnsupportedRingError(where, e.what());
    }
    throw UnsupportedRingError(where + ".kind", "unsupported ring kind \"" + kind + "\"");
}

namespace {

std::string entry_text(const Mat& a, std::size_t r, std::size_t c)
{
    if (a.ring().is_modular())
        return std::to_string(a.residue(r, c));
    return "\"" + a.rational(r, c).get_str() + "\"";
}

void append_matrix(std::string& out, const Mat& a)
{
    out += '[';
    for (std::size_t r = 0; r < a.rows(); ++r) {
        if (r)
            out += ',';
        out += '[';
        for (std::size_t c = 0; c < a.cols(); ++c) {
            if (c)
                out += ',';
            out += entry_text(a, r, c);
        }
        out += ']';
    }
    out += ']';
}

std::string line_col(const std::string& text, std::size_t byte)
{
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

void set_entry(Mat& a, std::size_t r, std::size_t c, const json& e, const std::string& where)
{
    const Ring& ring = a.ring();
    if (ring.kind() == RingKind::Q) {
        Rational q;
        if (e.is_number_integer()) {
            q = Rational(e.dump());
        } else if (e.is_string()) {
            const std::string s = e.get<std::string>();
            if (s.empty() || s.find_first_not_of("+-0123456789/") != std::string::npos)
                throw ParseError(where, "malformed rational \"" + s + "\"");
            try {
                q = Rational(s[0] == '+' ? s.substr(1) : s);
            } catch (const std::invalid_argument&) {
                throw ParseError(where, "malformed rational \"" + s + "\"");
            }
            if (q.get_den() == 0)
                throw ParseError(where, "zero denominator");
            q.canonicalize();
        } else {
            throw ParseError(where, "expected a rational string \"a/b\" or an integer");
        }
        a.set_rational(r, c, q);
        return;
    }
    if (e.is_number_unsigned()) {
        a.set_residue(r, c, ring.reduce_word(e.get<std::uint64_t>()));
    } else if (e.is_number_integer()) {
        a.set_residue(r, c, ring.reduce(e.get<std::int64_t>()));
    } else {
        throw ParseError(where, "expected an integer entry for ring " + ring.name());
    }
}

Mat parse_matrix(const json& j, const Ring& ring, std::size_t rows, std::size_t cols, const std::string& where)
{
    if (!j.is_array())
        throw ParseError(where, "expected an array of rows");
    if (j.size() != rows)
        throw ParseError(where, "expected " + std::to_string(rows) + " rows, got " + std::to_string(j.size()));
    Mat a(ring, rows, cols);
    for (std::size_t r = 0; r < rows; ++r) {
        const json& row = j[r];
        const std::string rw = where + "[" + std::to_string(r) + "]";
        if (!row.is_array())
            throw ParseError(rw, "expected an array of entries");
        if (row.size() != cols)
            throw ParseError(rw, "expected " + std::to_string(cols) + " entries, got " + std::to_string(row.size()));
        for (std::size_t c = 0; c < cols; ++c)
            set_entry(a, r, c, row[c], rw + "[" + std::to_string(c) + "]");
    }
    return a;
}

std::size_t positive_dim(const json& j, const std::string& where)
{
    if (!j.is_number_unsigned() || j.get<std::uint64_t>() == 0)
        throw ParseError(where, "expected a positive integer");
    return j.get<std::size_t>();
}

} // namespace

std::string scheme_to_string(const Scheme& s)
{
    const Format& f = s.format();
    std::string out;
    out += "{\n";
    out += "  \"format\": [" + std::to_string(f.n) + ", " + std::to_string(f.m) + ", " + std::to_string(f.p) + "],\n";
    out += "  \"ring\": " + ring_to_json(s.ring()).dump() + ",\n";
    out += "  \"orientation\": \"brent\",\n";
    out += "  \"rank\": " + std::to_string(s.rank()) + ",\n";
    out += "  \"triples\": [";
    for (std::size_t l = 0; l < s.rank(); ++l) {
        out += l ? ",\n    " : "\n    ";
        out += "{\"u\": ";
        append_matrix(out, s[l].u);
        out += ", \"v\": ";
        append_matrix(out, s[l].v);
        out += ", \"w\": ";
        append_matrix(out, s[l].w);
        out += "}";
    }
    out += s.rank() ? "\n  ]\n" : "]\n";
    out += "}\n";
    return out;
}

Scheme scheme_from_json(const json& j)
{
    if (!j.is_object())
        throw ParseError("", "expected a JSON object");
    for (const char* key : {"format", "ring", "rank", "triples"})
        if (!j.contains(key))
            throw ParseError(key, "missing field");

    const json& jf = j["format"];
    if (!jf.is_array() || jf.size() != 3)
        throw ParseError("format", "expected [n, m, p]");
    Format f(positive_dim(jf[0], "format[0]"), positive_dim(jf[1], "format[1]"), positive_dim(jf[2], "format[2]"));
    Ring ring = ring_from_json(j["ring"]);

    bool transpose_w = false;
    if (j.contains("orientation")) {
        const json& o = j["orientation"];
        if (o == "nxp")
            transpose_w = true;
        else if (o != "brent")
            throw ParseError("orientation", "expected \"brent\" or \"nxp\"");
    }

    const json& jt = j["triples"];
    if (!jt.is_array())
        throw ParseError("triples", "expected an array");
    if (!j["rank"].is_number_unsigned() || j["rank"].get<std::size_t>() != jt.size())
        throw ParseError("rank", "does not match the number of triples (" + std::to_string(jt.size()) + ")");

    Scheme s(f, ring);
    s.triples().reserve(jt.size());
    for (std::size_t l = 0; l < jt.size(); ++l) {
        const std::string where = "triples[" + std::to_string(l) + "]";
        const json& t = jt[l];
        if (!t.is_object())
            throw ParseError(where, "expected an object with u, v, w");
        for (const char* key : {"u", "v", "w"})
            if (!t.contains(key))
                throw ParseError(where + "." + key, "missing field");
        Triple tr;
        tr.u = parse_matrix(t["u"], ring, f.n, f.m, where + ".u");
        tr.v = parse_matrix(t["v"], ring, f.m, f.p, where + ".v");
        if (transpose_w)
            tr.w = parse_matrix(t["w"], ring, f.n, f.p, where + ".w").transposed();
        else
            tr.w = parse_matrix(t["w"], ring, f.p, f.n, where + ".w");
        s.triples().push_back(std::move(tr));
    }
    return s;
}

Scheme scheme_from_string(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(line_col(text, e.byte == 0 ? 0 : e.byte - 1), "invalid JSON");
    }
    return scheme_from_json(j);
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ParseError(path.string(), "cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write " + tmp.string());
        out << text;
        if (!out)
            throw std::runtime_error("write failed: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

void write_scheme(const Scheme& s, const std::filesystem::path& path)
{
    write_text_file(path, scheme_to_string(s));
}

Scheme read_scheme(const std::filesystem::path& path)
{
    const std::string text = read_text_file(path);
    try {
        return scheme_from_string(text);
    } catch (const UnsupportedRingError& e) {
        throw UnsupportedRingError(path.string(), e.what());
    } catch (const ParseError& e) {
        throw ParseError(path.string(), e.what());
    }
}

} // namespace fliplab
