#ifndef HGSTS_TESTS_HELPERS_HPP
#define HGSTS_TESTS_HELPERS_HPP

#include <functional>
#include <optional>
#include <set>
#include <vector>

#include "hgsts/core.hpp"
#include "hgsts/rng.hpp"

namespace hgsts::testing {

inline TripleSystem fano() {
    return TripleSystem(7, {Triple(0, 1, 2), Triple(0, 3, 4), Triple(0, 5, 6),
                            Triple(1, 3, 5), Triple(1, 4, 6), Triple(2, 3, 6),
                            Triple(2, 4, 5)});
}

// STS(9) from the lines of AG(2,3); point (r,c) -> 3r+c.
inline TripleSystem affine_plane_order3() {
    std::vector<Triple> lines;
    for (int r = 0; r < 3; ++r) lines.emplace_back(3 * r, 3 * r + 1, 3 * r + 2);
    for (int c = 0; c < 3; ++c) lines.emplace_back(c, 3 + c, 6 + c);
    // lines of slopes 1 and 2: {(r, c0 + s*r mod 3)}
    for (int s = 1; s <= 2; ++s)
        for (int c0 = 0; c0 < 3; ++c0) {
            std::vector<Vertex> pts;
            for (int r = 0; r < 3; ++r)
                pts.push_back(static_cast<Vertex>(3 * r + (c0 + s * r) % 3));
            lines.emplace_back(pts[0], pts[1], pts[2]);
        }
    return TripleSystem(9, lines);
}

inline TripleSystem complete_triples(Vertex n) {
    std::vector<Triple> ts;
    for (Vertex a = 0; a < n; ++a)
        for (Vertex b = a + 1; b < n; ++b)
            for (Vertex c = b + 1; c < n; ++c) ts.emplace_back(a, b, c);
    return TripleSystem(n, std::move(ts));
}

// Random partial Steiner system: greedily add random edge-disjoint triples.
inline TripleSystem random_partial_steiner(Vertex n, int want, Rng& rng) {
    std::vector<Triple> ts;
    std::set<std::uint64_t> used;
    int attempts = 0;
    while (static_cast<int>(ts.size()) < want && attempts < want * 40) {
        ++attempts;
        Vertex a = static_cast<Vertex>(rng.below(n));
        Vertex b = static_cast<Vertex>(rng.below(n));
        Vertex c = static_cast<Vertex>(rng.below(n));
        if (a == b || b == c || a == c) continue;
        Triple t(a, b, c);
        bool clash = false;
        for (auto k : edge_keys(t)) clash = clash || used.count(k);
        if (clash) continue;
        for (auto k : edge_keys(t)) used.insert(k);
        ts.push_back(t);
    }
    return TripleSystem(n, std::move(ts));
}

// Random triple set with no constraints (may share edges).
inline TripleSystem random_triples(Vertex n, int want, Rng& rng) {
    std::vector<Triple> ts;
    while (static_cast<int>(ts.size()) < want) {
        Vertex a = static_cast<Vertex>(rng.below(n));
        Vertex b = static_cast<Vertex>(rng.below(n));
        Vertex c = static_cast<Vertex>(rng.below(n));
        if (a == b || b == c || a == c) continue;
        ts.emplace_back(a, b, c);
    }
    return TripleSystem(n, std::move(ts));
}

// Independent girth oracle: plain subset scan over all triple subsets of size
// 2..g_max-2, pruned only by the monotone span bound.
inline std::optional<int> oracle_girth(const TripleSystem& sys, int g_max) {
    const auto& ts = sys.triples();
    const int m = static_cast<int>(ts.size());
    int best = g_max + 1;
    std::vector<int> cnt(sys.n_vertices(), 0);
    int span = 0;
    std::vector<int> chosen;
    std::function<void(int)> rec = [&](int start) {
        const int w = static_cast<int>(chosen.size());
        if (w >= 2 && span <= w + 2) best = std::min(best, std::max(span, 4));
        if (w >= g_max - 2) return;
        for (int t = start; t < m; ++t) {
            int added = 0;
            for (int i = 0; i < 3; ++i)
                if (cnt[ts[static_cast<std::size_t>(t)][i]]++ == 0) ++added;
            span += added;
            chosen.push_back(t);
            if (span <= g_max) rec(t + 1);
            chosen.pop_back();
            span -= added;
            for (int i = 0; i < 3; ++i) --cnt[ts[static_cast<std::size_t>(t)][i]];
        }
    };
    rec(0);
    if (best <= g_max) return best;
    return std::nullopt;
}

// Independent Erdos-configuration oracle: all subsets of size j-2 via plain
// combinations, then the definitional checks.
inline std::vector<std::vector<Triple>> oracle_erdos(const TripleSystem& sys, int j) {
    const auto& ts = sys.triples();
    const int m = static_cast<int>(ts.size());
    const int w = j - 2;
    std::vector<std::vector<Triple>> found;
    std::vector<int> chosen;
    std::function<void(int)> rec = [&](int start) {
        if (static_cast<int>(chosen.size()) == w) {
            std::vector<Triple> cfg;
            for (int i : chosen) cfg.push_back(ts[static_cast<std::size_t>(i)]);
            auto c = Configuration::of(cfg);
            if (static_cast<int>(c.triples.size()) == w && c.is_erdos(j))
                found.push_back(c.triples);
            return;
        }
        for (int t = start; t < m; ++t) {
            chosen.push_back(t);
            rec(t + 1);
            chosen.pop_back();
        }
    };
    rec(0);
    return found;
}

} // namespace hgsts::testing

#endif
