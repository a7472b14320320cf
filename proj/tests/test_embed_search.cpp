#include <algorithm>
#include <bit>
#include <numeric>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "itree/embed_search.hpp"
#include "itree/generators.hpp"
#include "itree/structure.hpp"

using namespace itree;

namespace {

Graph cycle(std::size_t n) {
    std::vector<Edge> edges;
    for (Vertex v = 0; v < n; ++v) edges.push_back(Edge{v, static_cast<Vertex>((v + 1) % n)}.normalized());
    return Graph::from_edges(n, edges);
}

/// Every injection {0..b-1} -> {0..n-1}, tested with is_induced_copy.
std::uint64_t naive_count(const Graph& g, const Tree& t) {
    const std::size_t n = g.n();
    const std::size_t b = t.b();
    if (b > n) return 0;
    std::vector<Vertex> phi(b);
    std::vector<char> used(n, 0);
    std::uint64_t count = 0;
    auto rec = [&](auto&& self, std::size_t depth) -> void {
        if (depth == b) {
            count += is_induced_copy(g, t, Embedding(phi, n)) ? 1 : 0;
            return;
        }
        for (Vertex v = 0; v < n; ++v) {
            if (used[v]) continue;
            used[v] = 1;
            phi[depth] = v;
            self(self, depth + 1);
            used[v] = 0;
        }
    };
    rec(rec, 0);
    return count;
}

/// Vertex sets of size b whose induced subgraph is isomorphic to t.
std::uint64_t copy_sets(const Graph& g, const Tree& t) {
    const std::size_t n = g.n();
    const std::size_t b = t.b();
    std::uint64_t sets = 0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<std::size_t>(std::popcount(mask)) != b) continue;
        std::vector<Vertex> vs;
        for (Vertex v = 0; v < n; ++v) {
            if (mask >> v & 1u) vs.push_back(v);
        }
        do {
            if (is_induced_copy(g, t, Embedding(vs, n))) {
                ++sets;
                break;
            }
        } while (std::next_permutation(vs.begin(), vs.end()));
    }
    return sets;
}

std::vector<Tree> small_trees(std::size_t max_b, std::size_t max_delta) {
    std::vector<Tree> out;
    for (std::size_t b = 1; b <= max_b; ++b) {
        for (auto& t : all_labeled_trees(b)) {
            if (t.max_degree() <= max_delta) out.push_back(std::move(t));
        }
    }
    return out;
}

/// Maximum induced family size by plain subset enumeration with an
/// independent structural check.
std::size_t naive_max(const Graph& g, MaxFamily family) {
    const std::size_t n = g.n();
    std::size_t best = 0;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        std::vector<Vertex> vs;
        for (Vertex v = 0; v < n; ++v) {
            if (mask >> v & 1u) vs.push_back(v);
        }
        const auto sub = induced_subgraph(g, vs);
        bool ok = false;
        if (family == MaxFamily::matching) {
            ok = true;
            for (Vertex v = 0; v < sub.n(); ++v) ok = ok && sub.degree(v) == 1;
        } else {
            try {
                const auto t = Tree::from_edges(sub.n(), sub.edges());
                ok = family == MaxFamily::tree || t.max_degree() <= 2;
            } catch (const std::invalid_argument&) {
                ok = false;
            }
        }
        if (ok) best = std::max(best, vs.size());
    }
    return best;
}

}  // namespace

TEST(Count, Examples) {
    const auto k3 = sample_gnp(3, 1.0, Seed{});
    EXPECT_EQ(count_ordered_embeddings(k3, path_tree(3)), 0u);
    EXPECT_EQ(count_ordered_embeddings(Graph::from_edges(3, path_tree(3).edges()), path_tree(3)), 2u);
    EXPECT_EQ(count_ordered_embeddings(cycle(5), path_tree(3)), 10u);
}

TEST(Count, CapAndForce) {
    const auto g = sample_gnp(13, 0.3, Seed{1, 1});
    EXPECT_THROW((void)count_ordered_embeddings(g, path_tree(3)), CapExceeded);
    EXPECT_EQ(count_ordered_embeddings(g, path_tree(3), true), naive_count(g, path_tree(3)));
}

TEST(Count, TreeLargerThanGraph) { EXPECT_EQ(count_ordered_embeddings(cycle(3), path_tree(4)), 0u); }

TEST(Count, OracleEquivalenceRandomGraphs) {
    const auto trees = small_trees(5, 3);
    for (std::uint64_t s = 0; s < 60; ++s) {
        const std::size_t n = 6 + s % 2;
        const auto g = sample_gnp(n, 0.2 + 0.1 * double(s % 5), Seed{31337, s});
        for (std::size_t i = s % 7; i < trees.size(); i += 7) {
            ASSERT_EQ(count_ordered_embeddings(g, trees[i]), naive_count(g, trees[i])) << "seed " << s << " tree " << i;
        }
    }
}

TEST(Count, AutomorphismIdentity) {
    const auto trees = small_trees(5, 4);
    for (std::uint64_t s = 0; s < 25; ++s) {
        const auto g = sample_gnp(8, 0.35, Seed{99, s});
        for (std::size_t i = s % 11; i < trees.size(); i += 11) {
            const auto& t = trees[i];
            ASSERT_EQ(count_ordered_embeddings(g, t), copy_sets(g, t) * tree_automorphism_count(t));
        }
    }
}

TEST(HasInducedCopy, AgreesWithCount) {
    const auto trees = small_trees(5, 3);
    for (std::uint64_t s = 0; s < 40; ++s) {
        const auto g = sample_gnp(7, 0.3, Seed{5, s});
        for (std::size_t i = s % 5; i < trees.size(); i += 5) {
            ASSERT_EQ(has_induced_copy(g, trees[i]), count_ordered_embeddings(g, trees[i]) > 0);
        }
    }
}

TEST(Find, Examples) {
    const SearchBudget budget{1000, 3, Seed{1, 0}};
    EXPECT_FALSE(find_induced_embedding(Graph(10), path_tree(2), budget).has_value());
    const auto e = find_induced_embedding(cycle(5), path_tree(4), budget);
    ASSERT_TRUE(e.has_value());
    EXPECT_TRUE(is_induced_copy(cycle(5), path_tree(4), *e));
}

TEST(Find, BudgetValidation) {
    EXPECT_THROW((void)find_induced_embedding(cycle(5), path_tree(3), SearchBudget{0, 1, {}}), std::invalid_argument);
    EXPECT_THROW((void)find_induced_embedding(cycle(5), path_tree(3), SearchBudget{1, 0, {}}), std::invalid_argument);
    EXPECT_THROW((void)find_induced_embedding(cycle(3), path_tree(4), SearchBudget{}), std::invalid_argument);
}

TEST(Find, PlantedAlwaysFound) {
    for (std::uint64_t s = 0; s < 100; ++s) {
        const std::size_t n = 40 + s % 30;
        const std::size_t b = 5 + s % 10;
        const auto t = random_tree_bounded(b, 3, Seed{s, 1});
        std::vector<Vertex> anchor(b);
        for (std::size_t i = 0; i < b; ++i) anchor[i] = static_cast<Vertex>((3 * i + s) % n);  // n >= 40 > 3b
        const Embedding a(anchor, n);
        const auto g = sample_planted(t, a, n, 0.3, Seed{s, 2});
        const SearchBudget budget{n * b, 50, Seed{s, 3}};
        const auto res = search_induced_embedding(g, t, budget);
        ASSERT_TRUE(res.embedding.has_value()) << "seed " << s;
        ASSERT_TRUE(is_induced_copy(g, t, *res.embedding));
    }
}

TEST(Find, DeterministicGivenSeed) {
    const auto g = sample_gnp(60, 0.2, Seed{4, 4});
    const auto t = random_tree_bounded(8, 3, Seed{4, 5});
    const SearchBudget budget{5000, 4, Seed{8, 8}};
    const auto a = search_induced_embedding(g, t, budget);
    const auto b = search_induced_embedding(g, t, budget);
    EXPECT_EQ(a.embedding, b.embedding);
    EXPECT_EQ(a.steps, b.steps);
}

TEST(Find, ExhaustiveAgreementOnSmallGraphs) {
    const auto trees = small_trees(5, 3);
    for (std::uint64_t s = 0; s < 30; ++s) {
        const auto g = sample_gnp(7, 0.4, Seed{12, s});
        for (std::size_t i = s % 9; i < trees.size(); i += 9) {
            const auto res = find_induced_embedding(g, trees[i], SearchBudget{1'000'000, 1, Seed{s, 0}});
            ASSERT_EQ(res.has_value(), has_induced_copy(g, trees[i]));
        }
    }
}

TEST(Maxima, Examples) {
    EXPECT_EQ(max_induced_size(sample_gnp(4, 1.0, Seed{}), MaxFamily::tree), 2u);
    EXPECT_EQ(max_induced_size(Graph(5), MaxFamily::tree), 1u);
    EXPECT_EQ(max_induced_size(cycle(5), MaxFamily::tree), 4u);
    EXPECT_EQ(max_induced_size(cycle(5), MaxFamily::matching), 2u);
    EXPECT_EQ(max_induced_size(cycle(5), MaxFamily::path), 4u);
}

TEST(Maxima, CapAndWitness) {
    EXPECT_THROW((void)max_induced_size(Graph(17), MaxFamily::tree), CapExceeded);
    EXPECT_EQ(max_induced_size(Graph(17), MaxFamily::tree, true), 1u);
    EXPECT_EQ(max_induced_witness(cycle(5), MaxFamily::tree), (std::vector<Vertex>{0, 1, 2, 3}));
}

TEST(Maxima, MatchesNaiveAndOrdering) {
    for (std::uint64_t s = 0; s < 60; ++s) {
        const auto g = sample_gnp(5 + s % 5, 0.15 + 0.1 * double(s % 6), Seed{77, s});
        const auto tree = max_induced_size(g, MaxFamily::tree);
        const auto path = max_induced_size(g, MaxFamily::path);
        ASSERT_EQ(tree, naive_max(g, MaxFamily::tree));
        ASSERT_EQ(path, naive_max(g, MaxFamily::path));
        ASSERT_EQ(max_induced_size(g, MaxFamily::matching), naive_max(g, MaxFamily::matching));
        ASSERT_LE(path, tree);
    }
}
