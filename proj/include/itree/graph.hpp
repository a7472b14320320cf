#pragma once

// Immutable simple undirected graphs with bit-row adjacency, plus the tree,
// forest and embedding value types built on top of them.
//
// Vertices are 0-based everywhere in this library and in every file format.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace itree {

using Vertex = std::uint32_t;
using Word = std::uint64_t;

inline constexpr std::size_t kWordBits = 64;

inline constexpr std::size_t words_for(std::size_t bits) noexcept { return (bits + kWordBits - 1) / kWordBits; }

struct Edge {
    Vertex u = 0;
    Vertex v = 0;

    /// Same edge with u < v.
    [[nodiscard]] constexpr Edge normalized() const noexcept { return u < v ? Edge{u, v} : Edge{v, u}; }

    friend constexpr bool operator==(const Edge&, const Edge&) = default;
    friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

class GraphBuilder;

class Graph {
public:
    Graph() = default;

    /// Edgeless graph on n vertices.
    explicit Graph(std::size_t n) : n_(n), words_(words_for(n)), bits_(n * words_for(n), 0) {}

    /// Throws std::invalid_argument on loops or duplicate edges and
    /// std::out_of_range on endpoints >= n.
    static Graph from_edges(std::size_t n, std::span<const Edge> edges);

    [[nodiscard]] std::size_t n() const noexcept { return n_; }
    [[nodiscard]] std::size_t edge_count() const noexcept { return edge_count_; }
    [[nodiscard]] std::size_t words_per_row() const noexcept { return words_; }

    [[nodiscard]] bool adjacent(Vertex u, Vertex v) const noexcept {
        return (bits_[u * words_ + v / kWordBits] >> (v % kWordBits)) & 1u;
    }

    [[nodiscard]] std::span<const Word> row(Vertex u) const noexcept {
        return {bits_.data() + static_cast<std::size_t>(u) * words_, words_};
    }

    [[nodiscard]] std::size_t degree(Vertex u) const noexcept {
        std::size_t d = 0;
        for (Word w : row(u)) d += static_cast<std::size_t>(std::popcount(w));
        return d;
    }

    [[nodiscard]] std::vector<Vertex> neighbors(Vertex u) const {
        std::vector<Vertex> out;
        const auto r = row(u);
        for (std::size_t i = 0; i < r.size(); ++i) {
            for (Word w = r[i]; w != 0; w &= w - 1) {
                out.push_back(static_cast<Vertex>(i * kWordBits + static_cast<std::size_t>(std::countr_zero(w))));
            }
        }
        return out;
    }

    /// All edges, normalized and sorted ascending.
    [[nodiscard]] std::vector<Edge> edges() const {
        std::vector<Edge> out;
        out.reserve(edge_count_);
        for (Vertex u = 0; u < n_; ++u) {
            for (Vertex v : neighbors(u)) {
                if (u < v) out.push_back({u, v});
            }
        }
        return out;
    }

    [[nodiscard]] std::size_t max_degree() const noexcept {
        std::size_t best = 0;
        for (Vertex u = 0; u < n_; ++u) best = std::max(best, degree(u));
        return best;
    }

    friend bool operator==(const Graph& a, const Graph& b) noexcept {
        return a.n_ == b.n_ && a.edge_count_ == b.edge_count_ && a.bits_ == b.bits_;
    }

private:
    friend class GraphBuilder;

    std::size_t n_ = 0;
    std::size_t words_ = 0;
    std::size_t edge_count_ = 0;
    std::vector<Word> bits_;
};

/// Mutable staging area for a Graph. The finished Graph never changes.
class GraphBuilder {
public:
    explicit GraphBuilder(std::size_t n) : g_(n) {}

    [[nodiscard]] std::size_t n() const noexcept { return g_.n_; }

    /// Adds {u, v}; returns false if the edge was already present.
    bool add_edge(Vertex u, Vertex v) {
        if (u >= g_.n_ || v >= g_.n_) {
            throw std::out_of_range("edge endpoint out of range: {" + std::to_string(u) + ", " +
                                    std::to_string(v) + "} with n = " + std::to_string(g_.n_));
        }
        if (u == v) throw std::invalid_argument("self-loop at vertex " + std::to_string(u));
        if (g_.adjacent(u, v)) return false;
        set(u, v);
        set(v, u);
        ++g_.edge_count_;
        return true;
    }

    /// Unchecked fast path for samplers: u != v, both in range, not yet
    /// present.
    void add_new_edge_unchecked(Vertex u, Vertex v) noexcept {
        set(u, v);
        set(v, u);
        ++g_.edge_count_;
    }

    [[nodiscard]] bool has_edge(Vertex u, Vertex v) const noexcept { return g_.adjacent(u, v); }

    [[nodiscard]] Graph build() && { return std::move(g_); }

private:
    void set(Vertex u, Vertex v) noexcept { g_.bits_[u * g_.words_ + v / kWordBits] |= Word{1} << (v % kWordBits); }

    Graph g_;
};

inline Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges) {
    GraphBuilder b(n);
    for (const Edge& e : edges) {
        if (!b.add_edge(e.u, e.v)) {
            throw std::invalid_argument("duplicate edge {" + std::to_string(e.u) + ", " + std::to_string(e.v) + "}");
        }
    }
    return std::move(b).build();
}

namespace detail {

/// Component label per vertex via union-find; returns number of components.
inline std::size_t count_components(std::size_t n, std::span<const Edge> edges, bool* has_cycle = nullptr) {
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    std::size_t components = n;
    bool cycle = false;
    for (const Edge& e : edges) {
        const auto a = find(e.u);
        const auto b = find(e.v);
        if (a == b) {
            cycle = true;
        } else {
            parent[a] = b;
            --components;
        }
    }
    if (has_cycle != nullptr) *has_cycle = cycle;
    return components;
}

}  // namespace detail

/// Acyclic graph. Keeps a Graph for O(1) adjacency plus adjacency lists.
class Forest {
public:
    Forest() = default;

    /// Throws std::invalid_argument if the edges contain a cycle, a loop or
    /// a duplicate.
    static Forest from_edges(std::size_t vertices, std::span<const Edge> edges) {
        Forest f;
        f.graph_ = Graph::from_edges(vertices, edges);
        bool cycle = false;
        f.components_ = detail::count_components(vertices, edges, &cycle);
        if (cycle) throw std::invalid_argument("forest edge set contains a cycle");
        f.build_lists();
        return f;
    }

    [[nodiscard]] std::size_t size() const noexcept { return graph_.n(); }
    [[nodiscard]] std::size_t component_count() const noexcept { return components_; }
    [[nodiscard]] std::size_t max_degree() const noexcept { return max_degree_; }
    [[nodiscard]] const Graph& graph() const noexcept { return graph_; }
    [[nodiscard]] std::span<const Vertex> neighbors(Vertex v) const noexcept { return adj_[v]; }
    [[nodiscard]] bool adjacent(Vertex u, Vertex v) const noexcept { return graph_.adjacent(u, v); }
    [[nodiscard]] std::vector<Edge> edges() const { return graph_.edges(); }

    /// Vertex sets of the connected components, each sorted, ordered by
    /// smallest member.
    [[nodiscard]] std::vector<std::vector<Vertex>> components() const {
        std::vector<std::vector<Vertex>> out;
        std::vector<char> seen(size(), 0);
        for (Vertex s = 0; s < size(); ++s) {
            if (seen[s]) continue;
            std::vector<Vertex> comp{s};
            seen[s] = 1;
            for (std::size_t i = 0; i < comp.size(); ++i) {
                for (Vertex w : adj_[comp[i]]) {
                    if (!seen[w]) {
                        seen[w] = 1;
                        comp.push_back(w);
                    }
                }
            }
            std::sort(comp.begin(), comp.end());
            out.push_back(std::move(comp));
        }
        return out;
    }

protected:
    void build_lists() {
        adj_.assign(graph_.n(), {});
        max_degree_ = 0;
        for (Vertex u = 0; u < graph_.n(); ++u) {
            adj_[u] = graph_.neighbors(u);
            max_degree_ = std::max(max_degree_, adj_[u].size());
        }
    }

    Graph graph_;
    std::vector<std::vector<Vertex>> adj_;
    std::size_t components_ = 0;
    std::size_t max_degree_ = 0;
};

/// Connected forest on b >= 1 vertices.
class Tree : public Forest {
public:
    Tree() = default;

    /// Throws std::invalid_argument unless the edges form a spanning tree
    /// on `b` vertices.
    static Tree from_edges(std::size_t b, std::span<const Edge> edges) {
        if (b == 0) throw std::invalid_argument("a tree needs at least one vertex");
        if (edges.size() + 1 != b) {
            throw std::invalid_argument("a tree on " + std::to_string(b) + " vertices needs " +
                                        std::to_string(b - 1) + " edges, got " + std::to_string(edges.size()));
        }
        Tree t;
        static_cast<Forest&>(t) = Forest::from_edges(b, edges);
        if (t.components_ != 1) throw std::invalid_argument("tree edge set is disconnected");
        return t;
    }

    [[nodiscard]] std::size_t b() const noexcept { return size(); }
};

/// Injective map from tree labels {0..b-1} into graph vertices {0..n-1}.
class Embedding {
public:
    Embedding() = default;

    /// Throws std::out_of_range on values >= n and std::invalid_argument on
    /// repeated values.
    Embedding(std::vector<Vertex> map, std::size_t n) : map_(std::move(map)), n_(n) {
        std::vector<char> seen(n, 0);
        for (Vertex v : map_) {
            if (v >= n) {
                throw std::out_of_range("embedding value " + std::to_string(v) + " out of range for n = " +
                                        std::to_string(n));
            }
            if (seen[v]) throw std::invalid_argument("embedding is not injective: " + std::to_string(v) + " repeats");
            seen[v] = 1;
        }
    }

    [[nodiscard]] std::size_t size() const noexcept { return map_.size(); }
    [[nodiscard]] std::size_t n() const noexcept { return n_; }
    [[nodiscard]] Vertex operator[](std::size_t label) const noexcept { return map_[label]; }
    [[nodiscard]] std::span<const Vertex> values() const noexcept { return map_; }

    /// Inverse map; entries for vertices outside the image are -1.
    [[nodiscard]] std::vector<std::int64_t> inverse() const {
        std::vector<std::int64_t> inv(n_, -1);
        for (std::size_t i = 0; i < map_.size(); ++i) inv[map_[i]] = static_cast<std::int64_t>(i);
        return inv;
    }

    friend bool operator==(const Embedding&, const Embedding&) = default;

private:
    std::vector<Vertex> map_;
    std::size_t n_ = 0;
};

inline Embedding identity_embedding(std::size_t b, std::size_t n) {
    std::vector<Vertex> map(b);
    std::iota(map.begin(), map.end(), Vertex{0});
    return Embedding(std::move(map), n);
}

}  // namespace itree
