#include <stdexcept>
#include <vector>

#include <gtest/gtest.h>

#include "itree/graph.hpp"

using namespace itree;

TEST(Graph, EmptyGraph) {
    Graph g(5);
    EXPECT_EQ(g.n(), 5u);
    EXPECT_EQ(g.edge_count(), 0u);
    EXPECT_TRUE(g.edges().empty());
    EXPECT_EQ(g.max_degree(), 0u);
}

TEST(Graph, FromEdgesIsSymmetric) {
    const std::vector<Edge> edges{{0, 1}, {3, 1}, {2, 4}};
    const auto g = Graph::from_edges(5, edges);
    EXPECT_EQ(g.edge_count(), 3u);
    for (Vertex u = 0; u < 5; ++u) {
        EXPECT_FALSE(g.adjacent(u, u));
        for (Vertex v = 0; v < 5; ++v) EXPECT_EQ(g.adjacent(u, v), g.adjacent(v, u));
    }
    EXPECT_TRUE(g.adjacent(1, 3));
    EXPECT_EQ(g.degree(1), 2u);
    EXPECT_EQ(g.neighbors(1), (std::vector<Vertex>{0, 3}));
    EXPECT_EQ(g.edges(), (std::vector<Edge>{{0, 1}, {1, 3}, {2, 4}}));
}

TEST(Graph, RejectsLoopsDuplicatesRange) {
    const std::vector<Edge> loop{{2, 2}};
    const std::vector<Edge> dup{{0, 1}, {1, 0}};
    const std::vector<Edge> range{{0, 5}};
    EXPECT_THROW(Graph::from_edges(5, loop), std::invalid_argument);
    EXPECT_THROW(Graph::from_edges(5, dup), std::invalid_argument);
    EXPECT_THROW(Graph::from_edges(5, range), std::out_of_range);
}

TEST(Graph, WideRowsCrossWordBoundary) {
    std::vector<Edge> edges;
    for (Vertex v = 1; v < 200; ++v) edges.push_back({0, v});
    const auto g = Graph::from_edges(200, edges);
    EXPECT_EQ(g.words_per_row(), 4u);
    EXPECT_EQ(g.degree(0), 199u);
    EXPECT_TRUE(g.adjacent(199, 0));
    EXPECT_FALSE(g.adjacent(64, 128));
}

TEST(GraphBuilder, AddEdgeReportsDuplicates) {
    GraphBuilder b(3);
    EXPECT_TRUE(b.add_edge(0, 2));
    EXPECT_FALSE(b.add_edge(2, 0));
    EXPECT_THROW(b.add_edge(1, 1), std::invalid_argument);
    EXPECT_THROW(b.add_edge(0, 3), std::out_of_range);
    const auto g = std::move(b).build();
    EXPECT_EQ(g.edge_count(), 1u);
}

TEST(Forest, ComponentsAndDegree) {
    const std::vector<Edge> edges{{0, 1}, {1, 2}, {4, 5}};
    const auto f = Forest::from_edges(7, edges);
    EXPECT_EQ(f.component_count(), 4u);  // vertices - edges
    EXPECT_EQ(f.max_degree(), 2u);
    const auto comps = f.components();
    ASSERT_EQ(comps.size(), 4u);
    EXPECT_EQ(comps[0], (std::vector<Vertex>{0, 1, 2}));
    EXPECT_EQ(comps[1], (std::vector<Vertex>{3}));
    EXPECT_EQ(comps[2], (std::vector<Vertex>{4, 5}));
    EXPECT_EQ(comps[3], (std::vector<Vertex>{6}));
}

TEST(Forest, RejectsCycle) {
    const std::vector<Edge> tri{{0, 1}, {1, 2}, {0, 2}};
    EXPECT_THROW(Forest::from_edges(3, tri), std::invalid_argument);
}

TEST(Tree, Validation) {
    const std::vector<Edge> path{{0, 1}, {1, 2}};
    const auto t = Tree::from_edges(3, path);
    EXPECT_EQ(t.b(), 3u);
    EXPECT_EQ(t.max_degree(), 2u);
    EXPECT_EQ(t.component_count(), 1u);
    const std::vector<Edge> split{{0, 1}};
    EXPECT_THROW(Tree::from_edges(3, split), std::invalid_argument);
    const std::vector<Edge> cyc{{0, 1}, {1, 2}, {0, 2}};
    EXPECT_THROW(Tree::from_edges(4, cyc), std::invalid_argument);
    EXPECT_THROW(Tree::from_edges(0, {}), std::invalid_argument);
    EXPECT_EQ(Tree::from_edges(1, {}).b(), 1u);
}

TEST(Embedding, ValidatesInjectivityAndRange) {
    EXPECT_NO_THROW(Embedding({3, 1, 0}, 4));
    EXPECT_THROW(Embedding({3, 1, 3}, 4), std::invalid_argument);
    EXPECT_THROW(Embedding({4, 1}, 4), std::out_of_range);
    const Embedding e({3, 1}, 5);
    EXPECT_EQ(e.inverse(), (std::vector<std::int64_t>{-1, 1, -1, 0, -1}));
    EXPECT_EQ(identity_embedding(3, 5).values()[2], 2u);
}
