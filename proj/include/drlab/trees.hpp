#ifndef DRLAB_TREES_HPP
#define DRLAB_TREES_HPP

#include <string>
#include <vector>

#include "drlab/rational.hpp"

namespace drlab {

struct invalid_move_error : std::runtime_error {
    explicit invalid_move_error(const std::string& w) : std::runtime_error(w) {}
};

// Stable rooted tree with genus-decorated vertices, numbered legs and an
// explicit half-edge involution.  Half-edges are indexed 0..2(m-1)-1, paired
// by iota; the root is the vertex carrying leg 0.
struct StableTree {
    struct Vertex {
        int genus = 0;
        std::vector<int> legs;        // leg markings at this vertex
        std::vector<int> half_edges;  // indices into the involution
    };
    std::vector<Vertex> vertices;
    std::vector<int> iota;       // iota[h] = partner half-edge
    std::vector<int> half_home;  // half_home[h] = vertex of h

    int num_vertices() const { return static_cast<int>(vertices.size()); }
    int total_genus() const {
        int g = 0;
        for (auto& v : vertices) g += v.genus;
        return g;
    }
    int num_legs() const {
        int n = 0;
        for (auto& v : vertices) n += static_cast<int>(v.legs.size());
        return n;
    }
    // valence: incident half-edges plus legs
    int valence(int v) const {
        return static_cast<int>(vertices[v].legs.size() + vertices[v].half_edges.size());
    }
    // r(v) = 2 g(v) - 2 + n(v)
    int r(int v) const { return 2 * vertices[v].genus - 2 + valence(v); }

    int root() const;                 // vertex carrying leg 0
    int leg_vertex(int marking) const;
    bool is_stable() const;
    bool is_tree() const;

    // parent orientation away from the root: parent[v] = -1 at the root
    std::vector<int> parents() const;
    // descendants of v including v itself
    std::vector<int> descendants(int v) const;
    int r_descendant_sum(int v) const;

    // canonical form (sorted recursive vertex signatures); equal strings
    // iff marked-isomorphic
    std::string canonical_form() const;

    std::string to_json() const;
};

// all stable trees of genus g with m vertices and legs 0..n, up to
// isomorphism fixing the markings; admissible_only applies the two
// admissibility conditions (every vertex carries a positive-marking leg;
// minimal markings decrease towards the root)
std::vector<StableTree> enumerate_trees(int g, int n, int m, bool admissible_only = false);

// C(Gamma) = prod_v r(v) / sum_{descendants} r
Rat coefficient_C(const StableTree& t);

// splitting: divide vertex v into (g1, I) and (g2, complement); I indexes
// the downward half-edges and non-root legs of v (see downward_slots)
struct Slot {
    bool is_leg;
    int value;  // leg marking or half-edge index
    friend bool operator==(const Slot&, const Slot&) = default;
};
std::vector<Slot> downward_slots(const StableTree& t, int v);

StableTree split(const StableTree& t, int v, int g1, const std::vector<Slot>& I);
StableTree contract(const StableTree& t, int v, int h);

// the closing coefficient identity at the vertex carrying leg 1:
// B * (upward factor) * prod_h r(child_h)/R_h * (1 - sum_h R_h/R) == C(Gamma)
bool coefficient_identity_check(const StableTree& t);

}  // namespace drlab

#endif
