#pragma once

// Edge-list text format shared by graphs and trees:
//
//   n m
//   u v        (m lines, 0-based, u < v, strictly ascending, no duplicates)
//
// Blank lines and lines starting with '#' are skipped on input.

#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "itree/graph.hpp"

namespace itree {

class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

namespace detail {

struct EdgeList {
    std::size_t n = 0;
    std::vector<Edge> edges;
};

inline bool next_content_line(std::istream& in, std::string& line, std::size_t& lineno) {
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        return true;
    }
    return false;
}

inline EdgeList read_edge_list(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    if (!next_content_line(in, line, lineno)) throw ParseError(lineno, "missing header \"n m\"");

    EdgeList out;
    long long n = -1;
    long long m = -1;
    {
        std::istringstream hs(line);
        std::string extra;
        if (!(hs >> n >> m) || (hs >> extra) || n < 0 || m < 0) {
            throw ParseError(lineno, "malformed header, expected two non-negative integers \"n m\"");
        }
    }
    if (static_cast<unsigned long long>(m) > static_cast<unsigned long long>(n) * (n > 0 ? n - 1 : 0) / 2) {
        throw ParseError(lineno, "edge count " + std::to_string(m) + " exceeds n(n-1)/2");
    }
    out.n = static_cast<std::size_t>(n);
    out.edges.reserve(static_cast<std::size_t>(m));
    for (long long i = 0; i < m; ++i) {
        if (!next_content_line(in, line, lineno)) {
            throw ParseError(lineno, "expected " + std::to_string(m) + " edges, found " + std::to_string(i));
        }
        std::istringstream ls(line);
        long long u = -1;
        long long v = -1;
        std::string extra;
        if (!(ls >> u >> v) || (ls >> extra)) throw ParseError(lineno, "malformed edge line \"" + line + "\"");
        if (u < 0 || v < 0 || u >= n || v >= n) throw ParseError(lineno, "endpoint out of range");
        if (u == v) throw ParseError(lineno, "self-loop at vertex " + std::to_string(u));
        if (u > v) throw ParseError(lineno, "edge not normalized (expected u < v)");
        const Edge e{static_cast<Vertex>(u), static_cast<Vertex>(v)};
        if (!out.edges.empty()) {
            if (e == out.edges.back()) throw ParseError(lineno, "duplicate edge");
            if (e < out.edges.back()) throw ParseError(lineno, "edges not in ascending order");
        }
        out.edges.push_back(e);
    }
    if (next_content_line(in, line, lineno)) {
        throw ParseError(lineno, "trailing content after " + std::to_string(m) + " edges");
    }
    return out;
}

}  // namespace detail

inline void write_edges(std::ostream& out, std::size_t n, const std::vector<Edge>& edges) {
    out << n << ' ' << edges.size() << '\n';
    for (const Edge& e : edges) out << e.u << ' ' << e.v << '\n';
}

inline void write_graph(std::ostream& out, const Graph& g) { write_edges(out, g.n(), g.edges()); }

inline void write_tree(std::ostream& out, const Forest& t) { write_edges(out, t.size(), t.edges()); }

inline Graph read_graph(std::istream& in) {
    const auto list = detail::read_edge_list(in);
    return Graph::from_edges(list.n, list.edges);
}

inline Tree read_tree(std::istream& in) {
    const auto list = detail::read_edge_list(in);
    try {
        return Tree::from_edges(list.n, list.edges);
    } catch (const std::invalid_argument& e) {
        throw ParseError(0, std::string("not a tree: ") + e.what());
    }
}

inline Forest read_forest(std::istream& in) {
    const auto list = detail::read_edge_list(in);
    try {
        return Forest::from_edges(list.n, list.edges);
    } catch (const std::invalid_argument& e) {
        throw ParseError(0, std::string("not a forest: ") + e.what());
    }
}

inline std::string to_text(const Graph& g) {
    std::ostringstream os;
    write_graph(os, g);
    return os.str();
}

}  // namespace itree
