#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "itree/graph.hpp"

namespace itree {

/// Subgraph induced on `vertices`; result vertex i is vertices[i].
inline Graph induced_subgraph(const Graph& g, const std::vector<Vertex>& vertices) {
    GraphBuilder b(vertices.size());
    std::vector<char> seen(g.n(), 0);
    for (Vertex v : vertices) {
        if (v >= g.n()) throw std::out_of_range("induced_subgraph: vertex " + std::to_string(v) + " out of range");
        if (seen[v]) throw std::invalid_argument("induced_subgraph: vertex " + std::to_string(v) + " repeated");
        seen[v] = 1;
    }
    for (Vertex i = 0; i < vertices.size(); ++i) {
        for (Vertex j = i + 1; j < vertices.size(); ++j) {
            if (g.adjacent(vertices[i], vertices[j])) b.add_new_edge_unchecked(i, j);
        }
    }
    return std::move(b).build();
}

/// True iff {phi(u), phi(v)} is an edge of g exactly when {u, v} is an edge
/// of the tree, for every pair of labels.
inline bool is_induced_copy(const Graph& g, const Forest& tree, const Embedding& phi) {
    if (phi.size() != tree.size()) {
        throw std::invalid_argument("is_induced_copy: embedding length " + std::to_string(phi.size()) +
                                    " does not match tree size " + std::to_string(tree.size()));
    }
    for (Vertex v : phi.values()) {
        if (v >= g.n()) throw std::out_of_range("is_induced_copy: embedding value " + std::to_string(v) + " >= n");
    }
    const auto b = static_cast<Vertex>(tree.size());
    for (Vertex u = 0; u < b; ++u) {
        for (Vertex v = u + 1; v < b; ++v) {
            if (g.adjacent(phi[u], phi[v]) != tree.adjacent(u, v)) return false;
        }
    }
    return true;
}

namespace detail {

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t out = 0;
    if (__builtin_mul_overflow(a, b, &out)) throw std::overflow_error("tree_automorphism_count: result exceeds 64 bits");
    return out;
}

/// Bottom-up AHU: canonical id and automorphism count of the subtree rooted
/// at `root` when the edge to `parent` is removed.
class RootedCanon {
public:
    explicit RootedCanon(const Forest& t) : t_(t) {}

    struct Result {
        std::size_t id = 0;
        std::uint64_t automorphisms = 1;
    };

    Result run(Vertex root, std::int64_t parent) {
        std::vector<std::pair<Vertex, std::int64_t>> order{{root, parent}};
        for (std::size_t i = 0; i < order.size(); ++i) {
            const auto [v, par] = order[i];
            for (Vertex w : t_.neighbors(v)) {
                if (static_cast<std::int64_t>(w) != par) order.emplace_back(w, v);
            }
        }
        std::map<Vertex, Result> done;
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const auto [v, par] = *it;
            std::vector<std::size_t> child_ids;
            std::uint64_t aut = 1;
            for (Vertex w : t_.neighbors(v)) {
                if (static_cast<std::int64_t>(w) == par) continue;
                const Result& r = done.at(w);
                child_ids.push_back(r.id);
                aut = checked_mul(aut, r.automorphisms);
            }
            std::sort(child_ids.begin(), child_ids.end());
            for (std::size_t i = 0; i < child_ids.size();) {
                std::size_t j = i;
                while (j < child_ids.size() && child_ids[j] == child_ids[i]) ++j;
                for (std::uint64_t f = 2; f <= j - i; ++f) aut = checked_mul(aut, f);
                i = j;
            }
            const auto [pos, inserted] = ids_.try_emplace(child_ids, ids_.size());
            done[v] = Result{pos->second, aut};
        }
        return done.at(root);
    }

private:
    const Forest& t_;
    std::map<std::vector<std::size_t>, std::size_t> ids_;
};

/// One or two central vertices (by repeated leaf stripping).
inline std::vector<Vertex> tree_centers(const Forest& t) {
    const std::size_t b = t.size();
    if (b <= 2) {
        std::vector<Vertex> all(b);
        for (Vertex v = 0; v < b; ++v) all[v] = v;
        return all;
    }
    std::vector<std::size_t> degree(b);
    std::vector<Vertex> layer;
    for (Vertex v = 0; v < b; ++v) {
        degree[v] = t.neighbors(v).size();
        if (degree[v] == 1) layer.push_back(v);
    }
    std::size_t remaining = b;
    while (remaining > 2) {
        remaining -= layer.size();
        std::vector<Vertex> next;
        for (Vertex v : layer) {
            for (Vertex w : t.neighbors(v)) {
                if (--degree[w] == 1) next.push_back(w);
            }
        }
        layer = std::move(next);
    }
    std::sort(layer.begin(), layer.end());
    return layer;
}

}  // namespace detail

/// Number of label permutations preserving the edge set, via canonical
/// forms rooted at the tree's center. Throws std::overflow_error past 2^64.
inline std::uint64_t tree_automorphism_count(const Tree& t) {
    const auto centers = detail::tree_centers(t);
    detail::RootedCanon canon(t);
    if (centers.size() == 1) return canon.run(centers[0], -1).automorphisms;
    const auto left = canon.run(centers[0], centers[1]);
    const auto right = canon.run(centers[1], centers[0]);
    const std::uint64_t both = detail::checked_mul(left.automorphisms, right.automorphisms);
    return left.id == right.id ? detail::checked_mul(both, 2) : both;
}

}  // namespace itree
