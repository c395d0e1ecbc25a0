#include "fliplab/genealogy.hpp"

#include <algorithm>
#include <map>

#include "fliplab/errors.hpp"

namespace fliplab {

using nlohmann::json;

std::string edge_kind_name(EdgeKind k)
{
    switch (k) {
    case EdgeKind::Extend:
        return "extend";
    case EdgeKind::Project:
        return "project";
    case EdgeKind::CombineIn:
        return "combine-in";
    case EdgeKind::CombineOut:
        return "combine-out";
    case EdgeKind::Search:
        return "search";
    }
    return "extend";
}

EdgeKind parse_edge_kind(const std::string& s)
{
    for (EdgeKind k : {EdgeKind::Extend, EdgeKind::Project, EdgeKind::CombineIn, EdgeKind::CombineOut,
                       EdgeKind::Search})
        if (edge_kind_name(k) == s)
            return k;
    throw ParseError("kind", "unknown edge kind \"" + s + "\"");
}

DagVertex* GenealogyDag::find_mut(const std::string& id)
{
    for (auto& v : vertices_)
        if (v.id == id)
            return &v;
    return nullptr;
}

const DagVertex* GenealogyDag::find(const std::string& id) const
{
    for (const auto& v : vertices_)
        if (v.id == id)
            return &v;
    return nullptr;
}

DagVertex& GenealogyDag::format_vertex(const Format& f)
{
    if (DagVertex* v = find_mut(f.label()))
        return *v;
    DagVertex v;
    v.id = f.label();
    v.format = f;
    vertices_.push_back(v);
    return vertices_.back();
}

std::string GenealogyDag::add_combine_dummy()
{
    DagVertex v;
    v.id = "+" + std::to_string(++dummies_);
    v.combine_dummy = true;
    vertices_.push_back(v);
    return v.id;
}

void GenealogyDag::add_edge(const std::string& from, const std::string& to, EdgeKind kind)
{
    if (!find(from) || !find(to))
        throw StructuralError("genealogy: edge " + from + " -> " + to + " names an unknown vertex");
    edges_.push_back(DagEdge{from, to, kind});
}

bool GenealogyDag::well_formed(std::string* why) const
{
    auto fail = [&](const std::string& msg) {
        if (why)
            *why = msg;
        return false;
    };
    std::map<std::string, std::size_t> index;
    for (std::size_t k = 0; k < vertices_.size(); ++k)
        index[vertices_[k].id] = k;
    std::vector<std::vector<std::size_t>> out(vertices_.size());
    std::vector<std::size_t> indeg(vertices_.size(), 0), outdeg(vertices_.size(), 0);
    for (const auto& e : edges_) {
        auto a = index.find(e.from), b = index.find(e.to);
        if (a == index.end() || b == index.end())
            return fail("edge " + e.from + " -> " + e.to + " names an unknown vertex");
        out[a->second].push_back(b->second);
        ++indeg[b->second];
        ++outdeg[a->second];
    }
    for (std::size_t k = 0; k < vertices_.size(); ++k)
        if (vertices_[k].combine_dummy && (indeg[k] != 2 || outdeg[k] != 1))
            return fail("combination vertex " + vertices_[k].id + " needs 2 inputs and 1 output");

    std::vector<std::size_t> deg = indeg, queue;
    for (std::size_t k = 0; k < deg.size(); ++k)
        if (deg[k] == 0)
            queue.push_back(k);
    std::size_t seen = 0;
    while (!queue.empty()) {
        const std::size_t k = queue.back();
        queue.pop_back();
        ++seen;
        for (std::size_t t : out[k])
            if (--deg[t] == 0)
                queue.push_back(t);
    }
    if (seen != vertices_.size())
        return fail("genealogy contains a cycle");
    return true;
}

json GenealogyDag::to_json() const
{
    json vs = json::array();
    for (const auto& v : vertices_) {
        json j{{"id", v.id}};
        if (v.combine_dummy) {
            j["combine"] = true;
        } else {
            j["format"] = {v.format.n, v.format.m, v.format.p};
            j["seed"] = v.seed;
            j["best_rank"] = v.best_rank ? json(*v.best_rank) : json(nullptr);
            j["reference_rank"] = v.reference_rank ? json(*v.reference_rank) : json(nullptr);
            j["pool"] = v.pool_ref;
        }
        vs.push_back(j);
    }
    json es = json::array();
    for (const auto& e : edges_)
        es.push_back({{"from", e.from}, {"to", e.to}, {"kind", edge_kind_name(e.kind)}});
    return json{{"vertices", vs}, {"edges", es}};
}

GenealogyDag GenealogyDag::from_json(const json& j)
{
    if (!j.is_object() || !j.contains("vertices") || !j.contains("edges") || !j["vertices"].is_array() ||
        !j["edges"].is_array())
        throw ParseError("", "expected {\"vertices\": [...], \"edges\": [...]}");
    GenealogyDag dag;
    for (std::size_t k = 0; k < j["vertices"].size(); ++k) {
        const json& v = j["vertices"][k];
        const std::string where = "vertices[" + std::to_string(k) + "]";
        try {
            DagVertex d;
            d.id = v.at("id").get<std::string>();
            d.combine_dummy = v.value("combine", false);
            if (d.combine_dummy) {
                ++dag.dummies_;
            } else {
                const json& f = v.at("format");
                d.format = Format(f.at(0).get<std::size_t>(), f.at(1).get<std::size_t>(), f.at(2).get<std::size_t>());
                d.seed = v.value("seed", false);
                if (v.contains("best_rank") && !v["best_rank"].is_null())
                    d.best_rank = v["best_rank"].get<std::size_t>();
                if (v.contains("reference_rank") && !v["reference_rank"].is_null())
                    d.reference_rank = v["reference_rank"].get<std::size_t>();
                d.pool_ref = v.value("pool", std::string());
            }
            dag.vertices_.push_back(d);
        } catch (const json::exception& e) {
            throw ParseError(where, e.what());
        } catch (const StructuralError& e) {
            throw ParseError(where, e.what());
        }
    }
    for (std::size_t k = 0; k < j["edges"].size(); ++k) {
        const json& e = j["edges"][k];
        const std::string where = "edges[" + std::to_string(k) + "]";
        try {
            dag.add_edge(e.at("from").get<std::string>(), e.at("to").get<std::string>(),
                         parse_edge_kind(e.at("kind").get<std::string>()));
        } catch (const json::exception& x) {
            throw ParseError(where, x.what());
        } catch (const StructuralError& x) {
            throw ParseError(where, x.what());
        } catch (const ParseError& x) {
            throw ParseError(where, x.what());
        }
    }
    return dag;
}

std::string GenealogyDag::to_dot() const
{
    std::string out = "digraph genealogy {\n";
    out += "  rankdir=TB;\n";
    out += "  node [shape=ellipse, fontname=\"Helvetica\"];\n";
    for (const auto& v : vertices_) {
        out += "  \"" + v.id + "\" [";
        if (v.combine_dummy) {
            out += "label=\"+\", shape=circle";
        } else {
            out += "label=\"" + v.format.label() + "\"";
            if (v.improved())
                out += ", shape=box";
            if (v.seed)
                out += ", style=filled, fillcolor=black, fontcolor=white";
        }
        out += "];\n";
    }
    for (const auto& e : edges_) {
        out += "  \"" + e.from + "\" -> \"" + e.to + "\"";
        if (e.kind == EdgeKind::Project)
            out += " [style=dashed]";
        out += ";\n";
    }
    out += "}\n";
    return out;
}

} // namespace fliplab
