#pragma once

// Induced tree embeddings: exact counting of ordered copies, randomized
// search for one copy, and exact maximum induced tree/path/matching sizes.
//
// Both the counter and the finder share one backtracking kernel. The pattern
// is placed in BFS order from a maximum-degree vertex, so each new vertex has
// exactly one placed neighbor (its BFS parent). The kernel keeps, per depth,
// the set of host vertices adjacent to exactly one placed image ("once") and
// to two or more ("multi"); a candidate for a child of position j is then
//
//     row(img[j]) & once & ~used
//
// because being in `once` and adjacent to img[j] means img[j] is its only
// placed neighbor. After each placement every placed vertex with unplaced
// children must still see at least that many candidates (forward check).
// Candidate sets of distinct parents are disjoint, so the check is exact per
// parent and never cuts off a completion.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "itree/graph.hpp"
#include "itree/rng.hpp"
#include "itree/structure.hpp"

namespace itree {

inline constexpr std::size_t kExactCountMaxN = 12;
inline constexpr std::size_t kExactMaximaMaxN = 16;

/// Thrown when an exact routine is asked for an instance above its cap
/// without the force flag.
class CapExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown when a result fails its own verification. Indicates a bug.
class InvariantViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// One step is one candidate vertex tried. Each restart gets at most
/// max_backtrack_steps steps and a fresh stream seed.derive(restart).
struct SearchBudget {
    std::uint64_t max_backtrack_steps = 1'000'000;
    std::uint64_t max_restarts = 1;
    Seed seed{};

    void validate() const {
        if (max_backtrack_steps < 1 || max_restarts < 1) {
            throw std::invalid_argument("search budget limits must both be at least 1");
        }
    }
};

struct SearchOutcome {
    std::optional<Embedding> embedding;
    std::uint64_t steps = 0;     // total over all restarts
    std::uint64_t restarts = 0;  // restarts started
};

enum class MaxFamily { tree, path, matching };

namespace detail {

/// BFS layout of a tree pattern.
struct PatternOrder {
    std::vector<Vertex> label;             // position -> tree label
    std::vector<std::int32_t> parent;      // position -> parent position, -1 at root
    std::vector<std::uint32_t> child_end;  // position -> one past its last child position
    std::vector<std::uint32_t> child_begin;
    std::vector<std::uint32_t> window_lo;  // after placing 0..i, smallest position with unplaced children

    explicit PatternOrder(const Forest& t) {
        const std::size_t b = t.size();
        Vertex root = 0;
        for (Vertex v = 1; v < b; ++v) {
            if (t.neighbors(v).size() > t.neighbors(root).size()) root = v;
        }
        std::vector<std::int32_t> pos_of(b, -1);
        label.push_back(root);
        parent.push_back(-1);
        pos_of[root] = 0;
        for (std::size_t i = 0; i < label.size(); ++i) {
            child_begin.push_back(static_cast<std::uint32_t>(label.size()));
            for (Vertex w : t.neighbors(label[i])) {
                if (pos_of[w] >= 0) continue;
                pos_of[w] = static_cast<std::int32_t>(label.size());
                label.push_back(w);
                parent.push_back(static_cast<std::int32_t>(i));
            }
            child_end.push_back(static_cast<std::uint32_t>(label.size()));
        }
        if (label.size() != b) throw std::invalid_argument("pattern must be connected");
        window_lo.resize(b);
        std::uint32_t lo = 0;
        for (std::uint32_t i = 0; i < b; ++i) {
            while (lo <= i && child_end[lo] <= i + 1) ++lo;
            window_lo[i] = lo;
        }
    }

    [[nodiscard]] std::size_t size() const noexcept { return label.size(); }
};

class InducedMatcher {
public:
    InducedMatcher(const Graph& g, const Forest& t) : g_(g), order_(t), words_(g.words_per_row()) {
        const std::size_t b = order_.size();
        const std::size_t levels = (b + 1) * words_;
        once_.assign(levels, 0);
        multi_.assign(levels, 0);
        used_.assign(levels, 0);
        image_.assign(b, 0);
        candidates_.assign(b, {});
    }

    /// Depth-first enumeration. `visit` is called once per complete
    /// placement with the position->vertex image and returns true to stop.
    /// `rng` (optional) shuffles every candidate list. Returns false if the
    /// step limit cut the search short.
    template <typename Visit>
    bool run(Visit&& visit, Rng* rng, std::uint64_t step_limit, std::uint64_t& steps) {
        rng_ = rng;
        step_limit_ = step_limit;
        steps_ = &steps;
        stopped_ = false;
        exhausted_budget_ = false;
        std::fill(once_.begin(), once_.begin() + static_cast<std::ptrdiff_t>(words_), 0);
        std::fill(multi_.begin(), multi_.begin() + static_cast<std::ptrdiff_t>(words_), 0);
        std::fill(used_.begin(), used_.begin() + static_cast<std::ptrdiff_t>(words_), 0);
        if (order_.size() <= g_.n()) descend(0, visit);
        return !exhausted_budget_;
    }

    /// Embedding in label order for the current complete placement.
    [[nodiscard]] Embedding current_embedding() const {
        std::vector<Vertex> map(order_.size());
        for (std::size_t i = 0; i < order_.size(); ++i) map[order_.label[i]] = image_[i];
        return Embedding(std::move(map), g_.n());
    }

private:
    Word* level(std::vector<Word>& v, std::size_t depth) noexcept { return v.data() + depth * words_; }

    template <typename Visit>
    void descend(std::size_t depth, Visit& visit) {
        const std::size_t b = order_.size();
        if (depth == b) {
            if (visit(image_)) stopped_ = true;
            return;
        }
        auto& cands = candidates_[depth];
        cands.clear();
        const std::uint32_t need_root = order_.child_end[0] - order_.child_begin[0];
        if (depth == 0) {
            for (Vertex w = 0; w < g_.n(); ++w) {
                if (g_.degree(w) >= need_root) cands.push_back(w);
            }
        } else {
            const auto prow = g_.row(image_[static_cast<std::size_t>(order_.parent[depth])]);
            const Word* once = level(once_, depth);
            const Word* used = level(used_, depth);
            for (std::size_t k = 0; k < words_; ++k) {
                for (Word x = prow[k] & once[k] & ~used[k]; x != 0; x &= x - 1) {
                    cands.push_back(static_cast<Vertex>(k * kWordBits + static_cast<std::size_t>(std::countr_zero(x))));
                }
            }
        }
        if (rng_ != nullptr) rng_->shuffle(std::span<Vertex>(cands));

        for (std::size_t ci = 0; ci < cands.size(); ++ci) {
            if (*steps_ >= step_limit_) {
                exhausted_budget_ = true;
                return;
            }
            ++*steps_;
            const Vertex w = cands[ci];
            image_[depth] = w;
            place(depth, w);
            if (forward_check(depth)) {
                descend(depth + 1, visit);
                if (stopped_ || exhausted_budget_) return;
            }
        }
    }

    void place(std::size_t depth, Vertex w) noexcept {
        const auto r = g_.row(w);
        const Word* once = level(once_, depth);
        const Word* multi = level(multi_, depth);
        const Word* used = level(used_, depth);
        Word* once2 = level(once_, depth + 1);
        Word* multi2 = level(multi_, depth + 1);
        Word* used2 = level(used_, depth + 1);
        for (std::size_t k = 0; k < words_; ++k) {
            const Word m = multi[k] | (once[k] & r[k]);
            multi2[k] = m;
            once2[k] = (once[k] | r[k]) & ~m;
            used2[k] = used[k];
        }
        used2[w / kWordBits] |= Word{1} << (w % kWordBits);
    }

    bool forward_check(std::size_t depth) noexcept {
        const Word* once = level(once_, depth + 1);
        const Word* used = level(used_, depth + 1);
        const auto placed = static_cast<std::uint32_t>(depth + 1);
        for (std::uint32_t j = order_.window_lo[depth]; j <= depth; ++j) {
            const std::uint32_t end = order_.child_end[j];
            if (end <= placed) continue;
            const std::uint32_t pending = end - std::max(order_.child_begin[j], placed);
            const auto r = g_.row(image_[j]);
            std::uint32_t available = 0;
            for (std::size_t k = 0; k < words_ && available < pending; ++k) {
                available += static_cast<std::uint32_t>(std::popcount(r[k] & once[k] & ~used[k]));
            }
            if (available < pending) return false;
        }
        return true;
    }

    const Graph& g_;
    PatternOrder order_;
    std::size_t words_;
    std::vector<Word> once_;
    std::vector<Word> multi_;
    std::vector<Word> used_;
    std::vector<Vertex> image_;
    std::vector<std::vector<Vertex>> candidates_;
    Rng* rng_ = nullptr;
    std::uint64_t step_limit_ = 0;
    std::uint64_t* steps_ = nullptr;
    bool stopped_ = false;
    bool exhausted_budget_ = false;
};

}  // namespace detail

/// Number of injections phi with is_induced_copy(g, t, phi): the value of the
/// ordered-copy count X on a concrete graph.
inline std::uint64_t count_ordered_embeddings(const Graph& g, const Tree& t, bool force = false) {
    if (!force && g.n() > kExactCountMaxN) {
        throw CapExceeded("count_ordered_embeddings: n = " + std::to_string(g.n()) + " exceeds the exact cap " +
                          std::to_string(kExactCountMaxN));
    }
    if (t.b() > g.n()) return 0;
    detail::InducedMatcher m(g, t);
    std::uint64_t count = 0;
    std::uint64_t steps = 0;
    m.run([&](const std::vector<Vertex>&) { ++count; return false; }, nullptr, UINT64_MAX, steps);
    return count;
}

/// Exact existence test (deterministic, exhaustive).
inline bool has_induced_copy(const Graph& g, const Tree& t) {
    if (t.b() > g.n()) return false;
    detail::InducedMatcher m(g, t);
    bool found = false;
    std::uint64_t steps = 0;
    m.run([&](const std::vector<Vertex>&) { found = true; return true; }, nullptr, UINT64_MAX, steps);
    return found;
}

/// Randomized restarts of the backtracking kernel. The returned embedding
/// (if any) has been checked with is_induced_copy. Absence only means "not
/// found within budget".
inline SearchOutcome search_induced_embedding(const Graph& g, const Tree& t, const SearchBudget& budget) {
    budget.validate();
    if (t.b() > g.n()) {
        throw std::invalid_argument("find_induced_embedding: pattern has " + std::to_string(t.b()) +
                                    " vertices but the host only " + std::to_string(g.n()));
    }
    SearchOutcome out;
    detail::InducedMatcher m(g, t);
    for (std::uint64_t r = 0; r < budget.max_restarts; ++r) {
        Rng rng(budget.seed.derive(r));
        std::uint64_t steps = 0;
        bool found = false;
        const bool complete = m.run([&](const std::vector<Vertex>&) { found = true; return true; }, &rng,
                                    budget.max_backtrack_steps, steps);
        out.steps += steps;
        out.restarts = r + 1;
        if (found) {
            auto e = m.current_embedding();
            if (!is_induced_copy(g, t, e)) throw InvariantViolation("search returned an embedding that is not induced");
            out.embedding = std::move(e);
            return out;
        }
        // An exhaustive pass without success means no copy exists; more
        // restarts cannot change that.
        if (complete) break;
    }
    return out;
}

inline std::optional<Embedding> find_induced_embedding(const Graph& g, const Tree& t, const SearchBudget& budget) {
    return search_induced_embedding(g, t, budget).embedding;
}

namespace detail {

inline bool induces_family(const std::vector<std::uint32_t>& adj, std::uint32_t set, MaxFamily family) {
    const int size = std::popcount(set);
    if (size == 0) return family == MaxFamily::matching;
    int degree_sum = 0;
    for (std::uint32_t s = set; s != 0; s &= s - 1) {
        const int v = std::countr_zero(s);
        const int d = std::popcount(adj[static_cast<std::size_t>(v)] & set);
        if (family == MaxFamily::matching && d != 1) return false;
        if (family == MaxFamily::path && d > 2) return false;
        degree_sum += d;
    }
    if (family == MaxFamily::matching) return true;
    if (degree_sum != 2 * (size - 1)) return false;
    // connected?
    std::uint32_t reached = set & (~set + 1);
    std::uint32_t frontier = reached;
    while (frontier != 0) {
        std::uint32_t next = 0;
        for (std::uint32_t f = frontier; f != 0; f &= f - 1) next |= adj[static_cast<std::size_t>(std::countr_zero(f))];
        next &= set & ~reached;
        reached |= next;
        frontier = next;
    }
    return reached == set;
}

}  // namespace detail

/// Lexicographically least vertex set (sorted ascending) of maximum size
/// inducing a member of `family`. Exhaustive over subsets, largest first.
inline std::vector<Vertex> max_induced_witness(const Graph& g, MaxFamily family, bool force = false) {
    const std::size_t n = g.n();
    if (n > 30) throw CapExceeded("max_induced_size: subset enumeration is limited to n <= 30");
    if (!force && n > kExactMaximaMaxN) {
        throw CapExceeded("max_induced_size: n = " + std::to_string(n) + " exceeds the exact cap " +
                          std::to_string(kExactMaximaMaxN));
    }
    std::vector<std::uint32_t> adj(n, 0);
    for (Vertex u = 0; u < n; ++u) {
        for (Vertex v = 0; v < n; ++v) {
            if (u != v && g.adjacent(u, v)) adj[u] |= std::uint32_t{1} << v;
        }
    }
    for (std::size_t k = n; k >= 1; --k) {
        if (family == MaxFamily::matching && k % 2 == 1) continue;
        std::vector<Vertex> idx(k);
        for (Vertex i = 0; i < k; ++i) idx[i] = i;
        while (true) {
            std::uint32_t set = 0;
            for (Vertex v : idx) set |= std::uint32_t{1} << v;
            if (detail::induces_family(adj, set, family)) return idx;
            // next combination in lexicographic order
            std::size_t i = k;
            while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
            if (i == 0) break;
            ++idx[i - 1];
            for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
        }
    }
    return {};
}

inline std::size_t max_induced_size(const Graph& g, MaxFamily family, bool force = false) {
    return max_induced_witness(g, family, force).size();
}

}  // namespace itree
