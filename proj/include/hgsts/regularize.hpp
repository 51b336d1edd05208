#ifndef HGSTS_REGULARIZE_HPP
#define HGSTS_REGULARIZE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hgsts/core.hpp"
#include "hgsts/rng.hpp"

namespace hgsts {

inline std::string format_tol(double t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", t);
    return buf;
}

// ---------------------------------------------------------------------------
// Triangle regularization. The selection probabilities psi(T) are 1/4 plus K5
// correction terms; per edge they telescope exactly to p^2 n / 4.

class TriangleFamily {
public:
    TriangleFamily(Vertex n, const EdgePairList& g_edges, std::vector<Triple> tris)
        : n_(n), triangles_(std::move(tris)) {
        adj_.assign(static_cast<std::size_t>(n_) * n_, 0);
        for (const auto& [u, v] : g_edges) {
            if (u >= n_ || v >= n_ || u == v)
                throw ParameterError("triangle family: bad edge");
            adj_at(u, v) = adj_at(v, u) = 1;
            edges_.push_back(u < v ? std::make_pair(u, v) : std::make_pair(v, u));
        }
        std::sort(edges_.begin(), edges_.end());
        edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
        std::sort(triangles_.begin(), triangles_.end());
        triangles_.erase(std::unique(triangles_.begin(), triangles_.end()),
                         triangles_.end());
        const std::size_t words = this->words();
        pair_bits_.assign(static_cast<std::size_t>(n_) * n_ * words, 0);
        for (std::size_t i = 0; i < triangles_.size(); ++i) {
            const auto& t = triangles_[i];
            for (int x = 0; x < 3; ++x)
                for (int y = x + 1; y < 3; ++y)
                    if (!adj_at(t[x], t[y]))
                        throw ParameterError("triangle family: triangle edge not in G");
            for (auto k : edge_keys(t)) tri_at_edge_[k].push_back(static_cast<int>(i));
            set_pair_bit(t[0], t[1], t[2]);
            set_pair_bit(t[0], t[2], t[1]);
            set_pair_bit(t[1], t[2], t[0]);
        }
    }

    static TriangleFamily complete(Vertex n) {
        EdgePairList es;
        std::vector<Triple> ts;
        for (Vertex a = 0; a < n; ++a)
            for (Vertex b = a + 1; b < n; ++b) {
                es.emplace_back(a, b);
                for (Vertex c = b + 1; c < n; ++c) ts.emplace_back(a, b, c);
            }
        return TriangleFamily(n, es, std::move(ts));
    }

    Vertex n() const { return n_; }
    const EdgePairList& edges() const { return edges_; }
    const std::vector<Triple>& triangles() const { return triangles_; }
    bool has_edge(Vertex u, Vertex v) const { return adj_at(u, v) != 0; }

    const std::vector<int>& triangles_at(Vertex u, Vertex v) const {
        static const std::vector<int> kEmpty;
        auto it = tri_at_edge_.find(edge_key(u, v));
        return it == tri_at_edge_.end() ? kEmpty : it->second;
    }

    // Number of vertices forming a family triangle with every pair of S.
    int extension_count(const std::vector<Vertex>& S) const {
        const std::size_t w_cnt = words();
        std::vector<std::uint64_t> acc(w_cnt, ~0ull);
        for (std::size_t i = 0; i < S.size(); ++i)
            for (std::size_t j = i + 1; j < S.size(); ++j) {
                const std::uint64_t* row = pair_row(S[i], S[j]);
                for (std::size_t w = 0; w < w_cnt; ++w) acc[w] &= row[w];
            }
        clear_tail(acc);
        int cnt = 0;
        for (std::size_t w = 0; w < w_cnt; ++w)
            cnt += __builtin_popcountll(acc[w]);
        for (Vertex v : S)
            if (test_bit(acc, v)) --cnt;
        return cnt;
    }

    // Streams every K5 of G whose ten triangles all lie in the family.
    void for_each_k5(const std::function<void(const std::array<Vertex, 5>&)>& fn) const {
        const std::size_t w_cnt = words();
        std::vector<std::uint64_t> cand(w_cnt), cand2(w_cnt);
        for (const auto& t : triangles_) {
            const std::uint64_t* r01 = pair_row(t[0], t[1]);
            const std::uint64_t* r02 = pair_row(t[0], t[2]);
            const std::uint64_t* r12 = pair_row(t[1], t[2]);
            for (std::size_t w = 0; w < w_cnt; ++w) cand[w] = r01[w] & r02[w] & r12[w];
            for (Vertex w4 = t[2] + 1; w4 < n_; ++w4) {
                if (!test_bit(cand, w4)) continue;
                const std::uint64_t* r03 = pair_row(t[0], w4);
                const std::uint64_t* r13 = pair_row(t[1], w4);
                const std::uint64_t* r23 = pair_row(t[2], w4);
                for (std::size_t w = 0; w < w_cnt; ++w)
                    cand2[w] = cand[w] & r03[w] & r13[w] & r23[w];
                for (Vertex w5 = w4 + 1; w5 < n_; ++w5)
                    if (test_bit(cand2, w5)) fn({t[0], t[1], t[2], w4, w5});
            }
        }
    }

private:
    std::size_t words() const { return (static_cast<std::size_t>(n_) + 63) / 64; }
    char& adj_at(Vertex u, Vertex v) { return adj_[static_cast<std::size_t>(u) * n_ + v]; }
    char adj_at(Vertex u, Vertex v) const {
        return adj_[static_cast<std::size_t>(u) * n_ + v];
    }
    const std::uint64_t* pair_row(Vertex u, Vertex v) const {
        return &pair_bits_[(static_cast<std::size_t>(u) * n_ + v) * words()];
    }
    void set_pair_bit(Vertex u, Vertex v, Vertex w) {
        pair_bits_[(static_cast<std::size_t>(u) * n_ + v) * words() + w / 64] |=
            1ull << (w % 64);
        pair_bits_[(static_cast<std::size_t>(v) * n_ + u) * words() + w / 64] |=
            1ull << (w % 64);
    }
    static bool test_bit(const std::vector<std::uint64_t>& bits, Vertex v) {
        return bits[v / 64] & (1ull << (v % 64));
    }
    void clear_tail(std::vector<std::uint64_t>& bits) const {
        for (Vertex v = n_; v < bits.size() * 64; ++v)
            bits[v / 64] &= ~(1ull << (v % 64));
    }

    Vertex n_;
    std::vector<char> adj_;
    EdgePairList edges_;
    std::vector<Triple> triangles_;
    std::unordered_map<std::uint64_t, std::vector<int>> tri_at_edge_;
    std::vector<std::uint64_t> pair_bits_;
};

struct RegularizeTrianglesResult {
    std::vector<char> selected;          // parallel to fam.triangles()
    std::vector<double> psi;             // selection probabilities
    bool hypothesis_ok = true;           // the near-regularity inputs held
    std::vector<std::string> hypothesis_notes;
    double worst_edge_sum_rel_dev = 0.0; // of sum psi over T(e) vs p^2 n / 4
    // sampled per-edge degree statistics
    int deg_min = 0, deg_max = 0;
    double deg_mean = 0.0;
    std::size_t edges_out_of_band = 0;   // vs (1 +- n^{-1/4}) p^2 n / 4

    std::vector<Triple> chosen(const TriangleFamily& fam) const {
        std::vector<Triple> out;
        for (std::size_t i = 0; i < selected.size(); ++i)
            if (selected[i]) out.push_back(fam.triangles()[i]);
        return out;
    }
};

inline RegularizeTrianglesResult regularize_triangles(const TriangleFamily& fam,
                                                      double p, double C,
                                                      std::uint64_t seed) {
    if (!(p > 0.0 && p <= 1.0)) throw ParameterError("regularize_triangles: p in (0,1]");
    if (C < 1.0) throw ParameterError("regularize_triangles: C must be >= 1");
    const double n = static_cast<double>(fam.n());
    const double p2n = p * p * n;
    RegularizeTrianglesResult res;

    // hypothesis (1): every edge in (1 +- 1/(12 C^5)) p^2 n family triangles
    const double tol1 = 1.0 / (12.0 * std::pow(C, 5.0));
    for (const auto& [u, v] : fam.edges()) {
        double cnt = static_cast<double>(fam.triangles_at(u, v).size());
        if (std::abs(cnt - p2n) > tol1 * p2n) {
            res.hypothesis_ok = false;
            if (res.hypothesis_notes.size() < 5)
                res.hypothesis_notes.push_back(
                    "edge " + std::to_string(u) + "-" + std::to_string(v) + " lies in " +
                    std::to_string(cnt) + " triangles, want (1+-" + format_tol(tol1) +
                    ")*" + std::to_string(p2n));
        }
    }
    // hypothesis (2): extension counts for cliques of size 2..4, sampled when large
    {
        std::vector<std::vector<Vertex>> probes;
        auto rng_probe = SeedSequence(seed).stream("regtri/probes");
        const auto& es = fam.edges();
        for (int trial = 0; trial < 200 && !es.empty(); ++trial) {
            const auto& [u, v] = es[rng_probe.below(es.size())];
            probes.push_back({u, v});
            int w = fam.extension_count({u, v});
            if (w > 0) {
                // grow to a random clique of size 3 and 4 through family triangles
                for (Vertex x = 0; x < fam.n(); ++x) {
                    if (x == u || x == v || !fam.has_edge(u, x) || !fam.has_edge(v, x))
                        continue;
                    if (rng_probe.bernoulli(0.25)) {
                        probes.push_back({u, v, x});
                        for (Vertex y = 0; y < fam.n(); ++y) {
                            if (y == u || y == v || y == x) continue;
                            if (fam.has_edge(u, y) && fam.has_edge(v, y) &&
                                fam.has_edge(x, y)) {
                                probes.push_back({u, v, x, y});
                                break;
                            }
                        }
                        break;
                    }
                }
            }
        }
        for (const auto& S : probes) {
            double lo = std::pow(p, static_cast<double>(S.size())) * n / C;
            double hi = std::pow(p, static_cast<double>(S.size())) * n * C;
            int cnt = fam.extension_count(S);
            if (cnt < lo || cnt > hi) {
                res.hypothesis_ok = false;
                if (res.hypothesis_notes.size() < 10)
                    res.hypothesis_notes.push_back(
                        "extension count " + std::to_string(cnt) + " for a clique of size " +
                        std::to_string(S.size()) + " outside [" + std::to_string(lo) +
                        ", " + std::to_string(hi) + "]");
            }
        }
    }

    // c_e = (p^2 n - |T(e)|) / |T5(e)|
    std::unordered_map<std::uint64_t, double> c_e;
    std::unordered_map<std::uint64_t, std::int64_t> k5_at_edge;
    fam.for_each_k5([&](const std::array<Vertex, 5>& q) {
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = i + 1; j < 5; ++j) ++k5_at_edge[edge_key(q[i], q[j])];
    });
    for (const auto& [u, v] : fam.edges()) {
        auto k = edge_key(u, v);
        auto it = k5_at_edge.find(k);
        if (it == k5_at_edge.end() || it->second == 0)
            throw ParameterError("regularize_triangles: an edge lies in no family K5");
        double cnt = static_cast<double>(fam.triangles_at(u, v).size());
        c_e[k] = (p2n - cnt) / static_cast<double>(it->second);
    }

    // psi(T) = 1/4 + (1/4) sum over K5s J >= T of
    //          [ (1/2)(c_in + c_out) - (1/6) c_total ]
    // where c_in sums T's edges, c_out is J's edge opposite T, and c_total is
    // the sum over J's ten edges; this is the case split (-1/6 vs 1/3) folded.
    std::unordered_map<std::uint64_t, int> tri_index;
    for (std::size_t i = 0; i < fam.triangles().size(); ++i)
        tri_index[fam.triangles()[i].key()] = static_cast<int>(i);
    res.psi.assign(fam.triangles().size(), 0.25);
    fam.for_each_k5([&](const std::array<Vertex, 5>& q) {
        double c[5][5];
        double total = 0;
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = i + 1; j < 5; ++j) {
                double val = c_e[edge_key(q[i], q[j])];
                c[i][j] = c[j][i] = val;
                total += val;
            }
        for (std::size_t a = 0; a < 5; ++a)
            for (std::size_t b = a + 1; b < 5; ++b)
                for (std::size_t d = b + 1; d < 5; ++d) {
                    std::size_t e1 = 0, e2 = 0; // the two vertices outside {a,b,d}
                    bool seen1 = false;
                    for (std::size_t x = 0; x < 5; ++x) {
                        if (x == a || x == b || x == d) continue;
                        if (!seen1) { e1 = x; seen1 = true; } else { e2 = x; }
                    }
                    double c_in = c[a][b] + c[a][d] + c[b][d];
                    double c_out = c[e1][e2];
                    double contrib = 0.25 * (0.5 * (c_in + c_out) - total / 6.0);
                    auto it = tri_index.find(Triple(q[a], q[b], q[d]).key());
                    if (it == tri_index.end())
                        throw InvariantError("regularize_triangles: K5 triangle missing");
                    res.psi[static_cast<std::size_t>(it->second)] += contrib;
                }
    });

    // exact invariants of the construction; the [0,1] bound is the proof's
    // conclusion under the hypotheses, so it is only an internal error when
    // the hypothesis check passed
    for (double& x : res.psi) {
        if (x < -1e-9 || x > 1.0 + 1e-9) {
            if (res.hypothesis_ok)
                throw InvariantError("regularize_triangles: psi outside [0,1]");
            if (res.hypothesis_notes.size() < 12)
                res.hypothesis_notes.push_back("psi escaped [0,1]; clamped");
        }
        x = std::min(1.0, std::max(0.0, x));
    }
    for (const auto& [u, v] : fam.edges()) {
        double sum = 0;
        for (int ti : fam.triangles_at(u, v)) sum += res.psi[static_cast<std::size_t>(ti)];
        double rel = std::abs(sum - p2n / 4.0) / (p2n / 4.0);
        res.worst_edge_sum_rel_dev = std::max(res.worst_edge_sum_rel_dev, rel);
        if (rel > 1e-6 && res.hypothesis_ok)
            throw InvariantError("regularize_triangles: edge psi-sum deviates from p^2 n/4");
    }

    // independent inclusion with probability psi(T)
    auto rng = SeedSequence(seed).stream("regtri/sample");
    res.selected.assign(fam.triangles().size(), 0);
    for (std::size_t i = 0; i < res.psi.size(); ++i)
        res.selected[i] = rng.bernoulli(res.psi[i]) ? 1 : 0;

    // per-edge degree statistics of the sample
    const double band = std::pow(n, -0.25) * p2n / 4.0;
    bool first = true;
    double total_deg = 0;
    for (const auto& [u, v] : fam.edges()) {
        int deg = 0;
        for (int ti : fam.triangles_at(u, v)) deg += res.selected[static_cast<std::size_t>(ti)];
        if (first || deg < res.deg_min) res.deg_min = deg;
        if (first || deg > res.deg_max) res.deg_max = deg;
        first = false;
        total_deg += deg;
        if (std::abs(deg - p2n / 4.0) > band) ++res.edges_out_of_band;
    }
    if (!fam.edges().empty()) res.deg_mean = total_deg / static_cast<double>(fam.edges().size());
    return res;
}

// The psi_{e,J} case values in units of 1/6, for exact identity tests:
// -1 when |V(T) cap e| == 1 and T inside J, 2 when T inside J otherwise, 0 outside.
inline int psi_case_sixths(const Triple& T, Vertex eu, Vertex ev,
                           const std::array<Vertex, 5>& J) {
    for (int i = 0; i < 3; ++i) {
        bool found = false;
        for (Vertex v : J) found = found || v == T[i];
        if (!found) return 0;
    }
    int inter = (T.contains(eu) ? 1 : 0) + (T.contains(ev) ? 1 : 0);
    return inter == 1 ? -1 : 2;
}

// ---------------------------------------------------------------------------
// Iterative hypergraph regularization.

struct UniformHypergraph {
    int n = 0;
    int k = 0;
    std::vector<std::vector<int>> edges; // sorted k-sets, lexicographic order
    std::vector<int> degrees;

    static UniformHypergraph of(int n, int k, std::vector<std::vector<int>> es) {
        UniformHypergraph h;
        h.n = n;
        h.k = k;
        for (auto& e : es) {
            std::sort(e.begin(), e.end());
            if (static_cast<int>(e.size()) != k ||
                std::adjacent_find(e.begin(), e.end()) != e.end())
                throw ParameterError("hypergraph: edge is not a k-set");
            if (e.front() < 0 || e.back() >= n)
                throw ParameterError("hypergraph: vertex out of range");
        }
        std::sort(es.begin(), es.end());
        es.erase(std::unique(es.begin(), es.end()), es.end());
        h.edges = std::move(es);
        h.degrees.assign(static_cast<std::size_t>(n), 0);
        for (const auto& e : h.edges)
            for (int v : e) ++h.degrees[static_cast<std::size_t>(v)];
        return h;
    }

    bool contains(const std::vector<int>& e) const {
        return std::binary_search(edges.begin(), edges.end(), e);
    }
    int max_degree() const {
        int d = 0;
        for (int x : degrees) d = std::max(d, x);
        return d;
    }
    std::size_t size() const { return edges.size(); }
};

struct HyperRegRound {
    int t = 0;
    std::int64_t F_before = 0;
    std::int64_t round_max_degree = 0;
    double max_set_probability = 0.0;
    double probability_cap = 0.0; // 2^k F(t) / C(n-1, k-1)
    bool margin_ok = true;        // the 13/16 expectation side held
    std::string margin_note;
    std::size_t sampled = 0;
};

struct HyperRegReport {
    bool success = false;
    std::string give_up; // "", "B" or "C"
    int rounds = 0;
    std::int64_t F_final = 0;
    std::int64_t d_max_in = 0;
    bool h_cap_ok = true; // max degree of H vs binom(n-1,k-1)/(36*2^k)
    std::vector<HyperRegRound> trace;
    UniformHypergraph g_prime; // the added edges, disjoint from H
};

namespace detail {

inline double binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    double r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

// elementary symmetric polynomial e_m over weights
inline std::vector<double> elementary_sym(const std::vector<double>& w, int upto) {
    std::vector<double> e(static_cast<std::size_t>(upto) + 1, 0.0);
    e[0] = 1.0;
    for (double x : w)
        for (int m = upto; m >= 1; --m)
            e[static_cast<std::size_t>(m)] += x * e[static_cast<std::size_t>(m - 1)];
    return e;
}

// e_m of w with one element removed, by deflation
inline double elementary_sym_without(const std::vector<double>& e, double wv, int m) {
    double r = 0; // e_m( w \ v )
    double cur = 1;
    // e_i(\v) = e_i - wv * e_{i-1}(\v)
    for (int i = 1; i <= m; ++i) {
        cur = e[static_cast<std::size_t>(i)] - wv * cur;
        if (i == m) r = cur;
    }
    return m == 0 ? 1.0 : r;
}

} // namespace detail

// Adds random hyperedges (avoiding H) so that degrees nearly equalize:
// stop on success when the degree spread is at most (log n)^2; give up when a
// round fails to halve the spread (B) or adds too much degree (C).
inline HyperRegReport regularize_hypergraph(const UniformHypergraph& G,
                                            const UniformHypergraph& H,
                                            std::uint64_t seed) {
    const int n = G.n, k = G.k;
    if (H.n != n || H.k != k)
        throw ParameterError("regularize_hypergraph: G and H shapes differ");
    if (n < k + 1) throw ParameterError("regularize_hypergraph: n too small");
    if (n > 200 || k > 4)
        throw ParameterError("regularize_hypergraph: capped at n <= 200, k <= 4");
    for (const auto& e : G.edges)
        if (!H.contains(e))
            throw ParameterError("regularize_hypergraph: G must be contained in H");

    HyperRegReport rep;
    rep.d_max_in = G.max_degree();
    const double h_cap = detail::binom(n - 1, k - 1) / (36.0 * std::pow(2.0, k));
    rep.h_cap_ok = H.max_degree() <= h_cap;
    const double log2n = std::log(static_cast<double>(n)) * std::log(static_cast<double>(n));

    auto rng = SeedSequence(seed).stream("hyperreg/rounds");

    std::vector<std::int64_t> deg(G.degrees.begin(), G.degrees.end());
    std::set<std::vector<int>> added; // union of rounds, deduplicated
    auto spread = [&]() {
        std::int64_t lo = deg[0], hi = deg[0];
        for (auto d : deg) {
            lo = std::min(lo, d);
            hi = std::max(hi, d);
        }
        return std::make_pair(hi - lo, hi);
    };

    for (int t = 0;; ++t) {
        auto [F, dmax] = spread();
        rep.F_final = F;
        rep.rounds = t;
        if (static_cast<double>(F) <= log2n) {
            rep.success = true;
            break;
        }

        HyperRegRound round;
        round.t = t + 1;
        round.F_before = F;
        round.probability_cap =
            std::pow(2.0, k) * static_cast<double>(F) / detail::binom(n - 1, k - 1);

        std::vector<double> w(static_cast<std::size_t>(n));
        for (int v = 0; v < n; ++v)
            w[static_cast<std::size_t>(v)] =
                static_cast<double>(dmax + F - deg[static_cast<std::size_t>(v)]);
        auto esym = detail::elementary_sym(w, k);
        const double W = detail::elementary_sym(w, k - 1)[static_cast<std::size_t>(k - 1)];
        if (W <= 0) { // degenerate: no weight anywhere (already regular)
            rep.success = true;
            break;
        }

        // expectation margin check: E|E_v minus old| should stay >= 13 w_v / 16
        std::vector<std::int64_t> old_deg(static_cast<std::size_t>(n), 0);
        for (const auto& e : added)
            for (int v : e) ++old_deg[static_cast<std::size_t>(v)];
        for (const auto& e : H.edges)
            for (int v : e) ++old_deg[static_cast<std::size_t>(v)];
        round.margin_ok = true;
        for (int v = 0; v < n && round.margin_ok; ++v) {
            double wv = w[static_cast<std::size_t>(v)];
            double e_without = detail::elementary_sym_without(esym, wv, k - 1);
            double expect = wv * e_without / W;
            double per_set_cap_v = wv * std::pow(2.0 * F, k - 1) / W;
            double lower = expect - static_cast<double>(old_deg[static_cast<std::size_t>(v)]) *
                                        per_set_cap_v;
            if (expect > wv * (1.0 + 1e-9)) {
                round.margin_ok = false;
                round.margin_note = "upper side: E|E_v| > w_v at vertex " + std::to_string(v);
            } else if (lower < 13.0 * wv / 16.0) {
                round.margin_ok = false;
                round.margin_note =
                    "lower side: estimated fresh expectation below 13 w_v/16 at vertex " +
                    std::to_string(v);
            }
        }

        // independent inclusion of every k-set with probability prod(w)/W
        std::vector<std::vector<int>> sampled;
        std::vector<int> idx(static_cast<std::size_t>(k));
        std::function<void(int, int, double)> walk = [&](int start, int depth, double prod) {
            if (depth == k) {
                double prob = prod / W;
                if (prob > round.max_set_probability) round.max_set_probability = prob;
                if (rng.bernoulli(prob)) sampled.push_back(idx);
                return;
            }
            for (int v = start; v < n - (k - depth - 1); ++v) {
                idx[static_cast<std::size_t>(depth)] = v;
                walk(v + 1, depth + 1, prod * w[static_cast<std::size_t>(v)]);
            }
        };
        walk(0, 0, 1.0);
        round.sampled = sampled.size();
        if (round.max_set_probability > round.probability_cap * (1.0 + 1e-9))
            throw InvariantError("regularize_hypergraph: set probability above the cap");

        std::vector<std::int64_t> round_deg(static_cast<std::size_t>(n), 0);
        for (const auto& e : sampled)
            for (int v : e) ++round_deg[static_cast<std::size_t>(v)];
        round.round_max_degree = 0;
        for (auto d : round_deg) round.round_max_degree = std::max(round.round_max_degree, d);

        // merge fresh edges (outside H, not previously added) into the union
        for (const auto& e : sampled) {
            if (H.contains(e)) continue;
            if (added.insert(e).second)
                for (int v : e) ++deg[static_cast<std::size_t>(v)];
        }
        rep.trace.push_back(round);

        auto [F_next, dmax_next] = spread();
        rep.F_final = F_next;
        rep.rounds = t + 1;
        if (static_cast<double>(F_next) <= log2n) {
            rep.success = true;
            break;
        }
        if (2 * F_next >= F) { // F(t+1) >= F(t)/2
            rep.give_up = "B";
            break;
        }
        if (round.round_max_degree > 4 * F) {
            rep.give_up = "C";
            break;
        }
    }

    std::vector<std::vector<int>> prime(added.begin(), added.end());
    rep.g_prime = UniformHypergraph::of(n, k, std::move(prime));
    if (rep.success) {
        auto [F, dmax] = spread();
        if (static_cast<double>(dmax) > 9.0 * static_cast<double>(std::max<std::int64_t>(
                                                 rep.d_max_in, 1)))
            throw InvariantError("regularize_hypergraph: 9 d_max cap violated on success");
        for (const auto& e : rep.g_prime.edges)
            if (H.contains(e))
                throw InvariantError("regularize_hypergraph: G' intersects H");
    }
    return rep;
}

} // namespace hgsts

#endif
