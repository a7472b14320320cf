#pragma once

// Overlap structure of two ordered copies of the same tree.
//
// For embeddings phi1, phi2 of a tree T, A = image(phi1) ∩ image(phi2). The
// pair is compatible when every pair x, y in A is a T-edge under phi1's
// preimages exactly when it is one under phi2's. Only compatible partners
// can be induced copies at the same time. The profile (l, k) records |A|
// and the number of components of T restricted to phi1^{-1}[A].

#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "itree/embed_search.hpp"
#include "itree/graph.hpp"

namespace itree {

inline constexpr std::size_t kOverlapMaxN = 9;
inline constexpr std::size_t kOverlapMaxB = 5;

struct OverlapProfile {
    std::size_t ell = 0;
    std::size_t k = 0;
    bool compatible = true;

    /// |A| < 2: the two indicator events are independent.
    [[nodiscard]] bool independent() const noexcept { return ell < 2; }

    friend bool operator==(const OverlapProfile&, const OverlapProfile&) = default;
};

namespace detail {

inline std::size_t components_on(const Forest& t, const std::vector<Vertex>& labels) {
    std::vector<std::int64_t> slot(t.size(), -1);
    for (std::size_t i = 0; i < labels.size(); ++i) slot[labels[i]] = static_cast<std::int64_t>(i);
    std::vector<std::size_t> parent(labels.size());
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::size_t comps = labels.size();
    for (std::size_t i = 0; i < labels.size(); ++i) {
        for (Vertex w : t.neighbors(labels[i])) {
            if (slot[w] < 0) continue;
            const auto a = find(i);
            const auto b = find(static_cast<std::size_t>(slot[w]));
            if (a != b) {
                parent[a] = b;
                --comps;
            }
        }
    }
    return comps;
}

inline OverlapProfile profile_from_inverse(const Forest& t, const std::vector<std::int64_t>& inv1,
                                           std::span<const Vertex> phi2) {
    std::vector<Vertex> pre1;  // phi1-preimages of A
    std::vector<Vertex> pre2;  // matching phi2-preimages
    for (std::size_t label = 0; label < phi2.size(); ++label) {
        const auto l1 = inv1[phi2[label]];
        if (l1 >= 0) {
            pre1.push_back(static_cast<Vertex>(l1));
            pre2.push_back(static_cast<Vertex>(label));
        }
    }
    OverlapProfile prof;
    prof.ell = pre1.size();
    for (std::size_t i = 0; i < pre1.size() && prof.compatible; ++i) {
        for (std::size_t j = i + 1; j < pre1.size(); ++j) {
            if (t.adjacent(pre1[i], pre1[j]) != t.adjacent(pre2[i], pre2[j])) {
                prof.compatible = false;
                break;
            }
        }
    }
    prof.k = prof.ell == 0 ? 0 : components_on(t, pre1);
    return prof;
}

}  // namespace detail

inline OverlapProfile overlap_profile(const Tree& t, const Embedding& phi1, const Embedding& phi2) {
    if (phi1.size() != t.b() || phi2.size() != t.b()) {
        throw std::invalid_argument("overlap_profile: embeddings must have length b = " + std::to_string(t.b()));
    }
    if (phi1.n() != phi2.n()) throw std::invalid_argument("overlap_profile: embeddings use different n");
    return detail::profile_from_inverse(t, phi1.inverse(), phi2.values());
}

/// Exhaustive classification of every injection {0..b-1} -> {0..n-1}
/// relative to a fixed phi1.
struct OverlapTable {
    std::size_t b = 0;
    std::size_t n = 0;
    /// compatible[l][k]: compatible injections with profile (l, k), all l.
    std::vector<std::vector<std::uint64_t>> compatible;
    std::uint64_t incompatible = 0;
    std::uint64_t independent = 0;  // l <= 1 (always compatible)
    std::uint64_t total = 0;        // (n)_b

    [[nodiscard]] std::uint64_t S(std::size_t ell, std::size_t k) const noexcept {
        if (ell >= compatible.size() || k >= compatible[ell].size()) return 0;
        return compatible[ell][k];
    }
};

/// Lexicographic enumeration of all (n)_b injections with early rejection of
/// incompatible prefixes.
inline OverlapTable overlap_table(const Tree& t, const Embedding& phi1, std::size_t n, bool force = false) {
    const std::size_t b = t.b();
    if (phi1.size() != b) throw std::invalid_argument("overlap_table: phi1 must have length b");
    if (phi1.n() != n) throw std::invalid_argument("overlap_table: phi1 was built for a different n");
    if (!force && (n > kOverlapMaxN || b > kOverlapMaxB)) {
        throw CapExceeded("overlap_table: enumeration capped at n <= " + std::to_string(kOverlapMaxN) +
                          ", b <= " + std::to_string(kOverlapMaxB));
    }
    OverlapTable table;
    table.b = b;
    table.n = n;
    table.compatible.assign(b + 1, std::vector<std::uint64_t>(b + 1, 0));
    const auto inv1 = phi1.inverse();

    std::vector<Vertex> phi(b);
    std::vector<char> used(n, 0);
    // Number of injections completing a prefix of length `depth`.
    auto completions = [&](std::size_t depth) {
        std::uint64_t c = 1;
        for (std::size_t i = depth; i < b; ++i) c *= n - i;
        return c;
    };
    auto rec = [&](auto&& self, std::size_t depth) -> void {
        if (depth == b) {
            ++table.total;
            const auto prof = detail::profile_from_inverse(t, inv1, phi);
            if (prof.independent()) {
                ++table.independent;
            } else {
                ++table.compatible[prof.ell][prof.k];
            }
            return;
        }
        for (Vertex v = 0; v < n; ++v) {
            if (used[v]) continue;
            phi[depth] = v;
            // Early rejection: new shared vertex must agree with every
            // earlier shared vertex.
            bool ok = true;
            if (inv1[v] >= 0) {
                const auto l1 = static_cast<Vertex>(inv1[v]);
                for (std::size_t j = 0; j < depth && ok; ++j) {
                    const auto m1 = inv1[phi[j]];
                    if (m1 < 0) continue;
                    ok = t.adjacent(l1, static_cast<Vertex>(m1)) == t.adjacent(static_cast<Vertex>(depth),
                                                                                static_cast<Vertex>(j));
                }
            }
            if (!ok) {
                const auto skipped = completions(depth + 1);
                table.incompatible += skipped;
                table.total += skipped;
                continue;
            }
            used[v] = 1;
            self(self, depth + 1);
            used[v] = 0;
        }
    };
    if (b <= n) rec(rec, 0);
    return table;
}

/// S(l, k): number of injections compatible with phi1 whose profile is
/// (l, k), by exhaustive enumeration.
inline std::uint64_t exact_S(const Tree& t, const Embedding& phi1, std::size_t n, std::size_t ell, std::size_t k,
                             bool force = false) {
    if (ell > t.b()) throw std::invalid_argument("exact_S: l exceeds b");
    return overlap_table(t, phi1, n, force).S(ell, k);
}

/// Pr[phi_j is an induced copy | phi_1 is one], for a partner with the
/// given profile:
///   p^(b-1-(l-k)) (1-p)^(C(b-1,2) - C(l,2) + (l-k)),
/// and exactly 0 for incompatible partners.
inline double conditional_embedding_probability(std::size_t b, const OverlapProfile& prof, double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("conditional_embedding_probability: p must lie in (0, 1)");
    if (prof.ell > b || prof.k > prof.ell || (prof.ell > 0 && prof.k == 0)) {
        throw std::invalid_argument("conditional_embedding_probability: inconsistent profile");
    }
    if (!prof.compatible) return 0.0;
    const double ell = static_cast<double>(prof.ell);
    const double forest_edges = ell - static_cast<double>(prof.k);
    const double bb = static_cast<double>(b);
    const double edges = bb - 1.0 - forest_edges;
    const double non_edges = (bb - 1.0) * (bb - 2.0) / 2.0 - ell * (ell - 1.0) / 2.0 + forest_edges;
    return std::exp(edges * std::log(p) + non_edges * std::log1p(-p));
}

inline double conditional_embedding_probability(const Tree& t, const OverlapProfile& prof, double p) {
    return conditional_embedding_probability(t.b(), prof, p);
}

}  // namespace itree
