#pragma once

#include <cmath>
#include <cstdint>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

#include "itree/graph.hpp"
#include "itree/rng.hpp"

namespace itree {

namespace detail {

inline void check_probability(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probability must lie in [0, 1], got " + std::to_string(p));
}

}  // namespace detail

/// G(n, p). Pairs are visited as (0,1), (0,2), ..., (n-2,n-1) and each
/// consumes exactly one uniform draw, so the output depends only on the seed.
inline Graph sample_gnp(std::size_t n, double p, Seed seed) {
    if (n == 0) throw std::invalid_argument("sample_gnp: n must be at least 1");
    detail::check_probability(p);
    GraphBuilder b(n);
    Rng rng(seed);
    for (Vertex u = 0; u + 1 < n; ++u) {
        for (Vertex v = u + 1; v < n; ++v) {
            if (rng.uniform01() < p) b.add_new_edge_unchecked(u, v);
        }
    }
    return std::move(b).build();
}

/// G(n, p) conditioned on `anchor` being an induced copy of `tree`: pairs
/// inside the anchor image copy the tree, every other pair is an independent
/// coin. The draw sequence is the same as sample_gnp's (one per pair,
/// anchored pairs included), so the two samplers stay aligned per seed.
inline Graph sample_planted(const Tree& tree, const Embedding& anchor, std::size_t n, double p, Seed seed) {
    if (n == 0) throw std::invalid_argument("sample_planted: n must be at least 1");
    detail::check_probability(p);
    if (anchor.size() != tree.b()) {
        throw std::invalid_argument("sample_planted: anchor has " + std::to_string(anchor.size()) +
                                    " labels but the tree has " + std::to_string(tree.b()) + " vertices");
    }
    if (anchor.n() != n) throw std::invalid_argument("sample_planted: anchor was built for a different n");
    const auto label = anchor.inverse();
    GraphBuilder b(n);
    Rng rng(seed);
    for (Vertex u = 0; u + 1 < n; ++u) {
        for (Vertex v = u + 1; v < n; ++v) {
            const bool coin = rng.uniform01() < p;
            const bool planted = label[u] >= 0 && label[v] >= 0;
            const bool edge = planted ? tree.adjacent(static_cast<Vertex>(label[u]), static_cast<Vertex>(label[v]))
                                      : coin;
            if (edge) b.add_new_edge_unchecked(u, v);
        }
    }
    return std::move(b).build();
}

/// Random recursive tree with a degree cap: vertex i attaches to a uniform
/// vertex among 0..i-1 whose degree is still below max_degree.
inline Tree random_tree_bounded(std::size_t b, std::size_t max_degree, Seed seed) {
    if (b == 0) throw std::invalid_argument("random_tree_bounded: b must be at least 1");
    if ((b >= 2 && max_degree == 0) || (b >= 3 && max_degree < 2)) {
        throw std::invalid_argument("random_tree_bounded: no tree on " + std::to_string(b) +
                                    " vertices has maximum degree <= " + std::to_string(max_degree));
    }
    Rng rng(seed);
    std::vector<std::size_t> degree(b, 0);
    std::vector<Vertex> open{0};
    std::vector<Edge> edges;
    edges.reserve(b - 1);
    for (Vertex v = 1; v < b; ++v) {
        const auto slot = static_cast<std::size_t>(rng.below(open.size()));
        const Vertex parent = open[slot];
        edges.push_back(Edge{parent, v});
        if (++degree[parent] == max_degree) {
            open[slot] = open.back();
            open.pop_back();
        }
        if (++degree[v] < max_degree) open.push_back(v);
    }
    return Tree::from_edges(b, edges);
}

inline Tree path_tree(std::size_t b) {
    if (b == 0) throw std::invalid_argument("path_tree: b must be at least 1");
    std::vector<Edge> edges;
    for (Vertex v = 1; v < b; ++v) edges.push_back({v - 1, v});
    return Tree::from_edges(b, edges);
}

/// Vertex 0 joined to `leaves` leaves.
inline Tree star_tree(std::size_t leaves) {
    std::vector<Edge> edges;
    for (Vertex v = 1; v <= leaves; ++v) edges.push_back({0, v});
    return Tree::from_edges(leaves + 1, edges);
}

/// Breadth-first filled tree: the root takes up to max_degree children,
/// every other vertex up to max_degree - 1.
inline Tree full_ary_tree(std::size_t b, std::size_t max_degree) {
    if (b == 0) throw std::invalid_argument("full_ary_tree: b must be at least 1");
    if (b >= 3 && max_degree < 2) throw std::invalid_argument("full_ary_tree: max_degree must be at least 2");
    std::vector<Edge> edges;
    Vertex parent = 0;
    std::size_t used = 0;
    for (Vertex v = 1; v < b; ++v) {
        const std::size_t cap = parent == 0 ? max_degree : max_degree - 1;
        if (used == cap) {
            ++parent;
            used = 0;
        }
        edges.push_back({parent, v});
        ++used;
    }
    return Tree::from_edges(b, edges);
}

/// Spine path 0..spine-1, each spine vertex carrying `legs` pendant leaves.
inline Tree caterpillar_tree(std::size_t spine, std::size_t legs) {
    if (spine == 0) throw std::invalid_argument("caterpillar_tree: spine must be at least 1");
    std::vector<Edge> edges;
    for (Vertex v = 1; v < spine; ++v) edges.push_back({v - 1, v});
    auto next = static_cast<Vertex>(spine);
    for (Vertex s = 0; s < spine; ++s) {
        for (std::size_t i = 0; i < legs; ++i) edges.push_back({s, next++});
    }
    return Tree::from_edges(next, edges);
}

/// Decodes a Prüfer sequence (length b-2, values < b) into its labeled tree.
inline Tree tree_from_pruefer(std::size_t b, const std::vector<Vertex>& code) {
    if (b < 2) {
        if (!code.empty() || b == 0) throw std::invalid_argument("tree_from_pruefer: bad length");
        return Tree::from_edges(1, {});
    }
    if (code.size() != b - 2) throw std::invalid_argument("tree_from_pruefer: code must have length b - 2");
    std::vector<std::size_t> degree(b, 1);
    for (Vertex x : code) {
        if (x >= b) throw std::out_of_range("tree_from_pruefer: label out of range");
        ++degree[x];
    }
    std::priority_queue<Vertex, std::vector<Vertex>, std::greater<>> leaves;
    for (Vertex v = 0; v < b; ++v) {
        if (degree[v] == 1) leaves.push(v);
    }
    std::vector<Edge> edges;
    for (Vertex x : code) {
        const Vertex leaf = leaves.top();
        leaves.pop();
        edges.push_back(Edge{leaf, x}.normalized());
        if (--degree[x] == 1) leaves.push(x);
    }
    const Vertex a = leaves.top();
    leaves.pop();
    edges.push_back(Edge{a, leaves.top()}.normalized());
    return Tree::from_edges(b, edges);
}

/// Every labeled tree on b vertices (b^(b-2) of them), in Prüfer order.
inline std::vector<Tree> all_labeled_trees(std::size_t b) {
    if (b == 0 || b > 8) throw std::invalid_argument("all_labeled_trees: supported for 1 <= b <= 8");
    if (b <= 2) return {tree_from_pruefer(b, {})};
    std::vector<Tree> out;
    std::vector<Vertex> code(b - 2, 0);
    while (true) {
        out.push_back(tree_from_pruefer(b, code));
        std::size_t i = 0;
        while (i < code.size() && ++code[i] == b) code[i++] = 0;
        if (i == code.size()) break;
    }
    return out;
}

/// Turns a forest into a tree: a fresh path of `spine` vertices (labels
/// F.size() .. F.size()+spine-1) gets F's components attached round-robin,
/// each through an edge to the component's smallest vertex. F's vertices
/// keep their labels and still induce F.
inline Tree forest_gadget_tree(const Forest& forest, std::size_t spine) {
    if (spine == 0) throw std::invalid_argument("forest_gadget_tree: spine length must be at least 1");
    if (forest.size() == 0) throw std::invalid_argument("forest_gadget_tree: forest must be nonempty");
    auto edges = forest.edges();
    const auto base = static_cast<Vertex>(forest.size());
    for (Vertex i = 1; i < spine; ++i) edges.push_back({base + i - 1, base + i});
    const auto comps = forest.components();
    for (std::size_t c = 0; c < comps.size(); ++c) {
        edges.push_back({comps[c].front(), static_cast<Vertex>(base + c % spine)});
    }
    return Tree::from_edges(forest.size() + spine, edges);
}

}  // namespace itree
