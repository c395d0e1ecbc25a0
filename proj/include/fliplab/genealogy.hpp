#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fliplab/scheme.hpp"

namespace fliplab {

enum class EdgeKind { Extend, Project, CombineIn, CombineOut, Search };

std::string edge_kind_name(EdgeKind k);
EdgeKind parse_edge_kind(const std::string& s);

struct DagVertex {
    /// Format vertices use the format label; combination dummies "+<k>".
    std::string id;
    bool combine_dummy = false;
    Format format;
    bool seed = false;
    std::optional<std::size_t> best_rank;
    std::optional<std::size_t> reference_rank;
    /// Pool directory holding the best schemes (empty if none).
    std::string pool_ref;

    /// best_rank strictly below the reference rank.
    bool improved() const { return best_rank && reference_rank && *best_rank < *reference_rank; }
};

struct DagEdge {
    std::string from, to;
    EdgeKind kind = EdgeKind::Extend;
};

class GenealogyDag {
public:
    /// Returns the existing vertex for f, or adds one.
    DagVertex& format_vertex(const Format& f);
    /// Adds a fresh "+" dummy and returns its id.
    std::string add_combine_dummy();
    void add_edge(const std::string& from, const std::string& to, EdgeKind kind);

    const std::vector<DagVertex>& vertices() const noexcept { return vertices_; }
    const std::vector<DagEdge>& edges() const noexcept { return edges_; }
    const DagVertex* find(const std::string& id) const;

    /// True if there is no directed cycle and every dummy has 2 in-edges and 1 out-edge.
    bool well_formed(std::string* why = nullptr) const;

    nlohmann::json to_json() const;
    static GenealogyDag from_json(const nlohmann::json& j);

    /// Graphviz text: vertices labelled "nmp", improvements boxed, seeds
    /// filled black, dummies drawn as "+" circles. Output order is the
    /// insertion order of vertices and edges.
    std::string to_dot() const;

private:
    DagVertex* find_mut(const std::string& id);

    std::vector<DagVertex> vertices_;
    std::vector<DagEdge> edges_;
    std::size_t dummies_ = 0;
};

} // namespace fliplab
