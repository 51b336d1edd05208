#ifndef HGSTS_COVERDOWN_HPP
#define HGSTS_COVERDOWN_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hgsts/core.hpp"
#include "hgsts/process.hpp"
#include "hgsts/rng.hpp"

namespace hgsts {

// ---------------------------------------------------------------------------
// Adjacency-bitset graph for typicality and discrepancy computations.

class BitGraph {
public:
    explicit BitGraph(Vertex n) : n_(n), words_((n + 63) / 64) {
        rows_.assign(static_cast<std::size_t>(n_) * words_, 0);
        deg_.assign(n_, 0);
    }

    static BitGraph of(Vertex n, const EdgePairList& edges) {
        BitGraph g(n);
        for (const auto& [u, v] : edges) g.add_edge(u, v);
        return g;
    }

    Vertex n() const { return n_; }
    std::int64_t degree(Vertex v) const { return deg_[v]; }

    void add_edge(Vertex u, Vertex v) {
        if (u == v || u >= n_ || v >= n_) throw ParameterError("bitgraph: bad edge");
        if (has_edge(u, v)) return;
        row(u)[v / 64] |= 1ull << (v % 64);
        row(v)[u / 64] |= 1ull << (u % 64);
        ++deg_[u];
        ++deg_[v];
        ++edge_count_;
    }

    void remove_edge(Vertex u, Vertex v) {
        if (!has_edge(u, v)) return;
        row(u)[v / 64] &= ~(1ull << (v % 64));
        row(v)[u / 64] &= ~(1ull << (u % 64));
        --deg_[u];
        --deg_[v];
        --edge_count_;
    }

    bool has_edge(Vertex u, Vertex v) const {
        return row(u)[v / 64] & (1ull << (v % 64));
    }

    std::int64_t codegree(Vertex u, Vertex v) const {
        const std::uint64_t* a = row(u);
        const std::uint64_t* b = row(v);
        std::int64_t c = 0;
        for (std::size_t w = 0; w < words_; ++w)
            c += __builtin_popcountll(a[w] & b[w]);
        return c;
    }

    std::int64_t edge_count() const { return edge_count_; }

    EdgePairList edges() const {
        EdgePairList out;
        for (Vertex u = 0; u < n_; ++u)
            for (Vertex v = u + 1; v < n_; ++v)
                if (has_edge(u, v)) out.emplace_back(u, v);
        return out;
    }

    std::vector<Vertex> neighbors(Vertex u) const {
        std::vector<Vertex> out;
        for (Vertex v = 0; v < n_; ++v)
            if (has_edge(u, v)) out.push_back(v);
        return out;
    }

private:
    std::uint64_t* row(Vertex v) { return &rows_[static_cast<std::size_t>(v) * words_]; }
    const std::uint64_t* row(Vertex v) const {
        return &rows_[static_cast<std::size_t>(v) * words_];
    }

    Vertex n_;
    std::size_t words_;
    std::vector<std::uint64_t> rows_;
    std::vector<std::int64_t> deg_;
    std::int64_t edge_count_ = 0;
};

// ---------------------------------------------------------------------------
// Typicality: degrees (1 +- xi) p n and codegrees (1 +- xi) p^2 n.

struct TypicalityReport {
    double p_hat = 0;
    double xi_deg = 0;
    double xi_codeg = 0;
    bool pass = false;
    bool sampled = false; // pair check sampled above the exhaustive cap
    std::string note;
};

inline TypicalityReport check_typicality(const BitGraph& G, double p, double xi) {
    TypicalityReport rep;
    const double n = static_cast<double>(G.n());
    rep.p_hat = n > 1 ? 2.0 * static_cast<double>(G.edge_count()) / (n * (n - 1)) : 0;
    const double dn = p * n, cn = p * p * n;
    for (Vertex v = 0; v < G.n(); ++v)
        rep.xi_deg = std::max(rep.xi_deg,
                              std::abs(static_cast<double>(G.degree(v)) - dn) / dn);
    if (G.n() <= 500) {
        for (Vertex u = 0; u < G.n(); ++u)
            for (Vertex v = u + 1; v < G.n(); ++v)
                rep.xi_codeg = std::max(
                    rep.xi_codeg,
                    std::abs(static_cast<double>(G.codegree(u, v)) - cn) / cn);
    } else {
        rep.sampled = true;
        auto rng = SeedSequence(0x7f9a).stream("typicality/pairs");
        const int probes = 20000;
        for (int i = 0; i < probes; ++i) {
            Vertex u = static_cast<Vertex>(rng.below(G.n()));
            Vertex v = static_cast<Vertex>(rng.below(G.n()));
            if (u == v) continue;
            rep.xi_codeg = std::max(
                rep.xi_codeg, std::abs(static_cast<double>(G.codegree(u, v)) - cn) / cn);
        }
        rep.note = "codegrees sampled on 20000 pairs";
    }
    rep.pass = rep.xi_deg <= xi && rep.xi_codeg <= xi;
    return rep;
}

// Rooted triangle-availability statistics across vortex levels, checked on
// sampled edge subsets Q with up to h vertices.
struct IterationTypicalityReport {
    bool pass = false;
    double worst_deg_dev = 0;
    double worst_q_dev = 0;
    std::string worst_case;
    bool sampled = true;
};

inline IterationTypicalityReport check_iteration_typicality(
    const BitGraph& G, const std::unordered_set<std::uint64_t>& available_triples,
    const std::vector<std::vector<Vertex>>& levels, double p, double q, double xi,
    int h = 4, std::uint64_t seed = 0x1771) {
    if (h > 4) throw ParameterError("iteration typicality: h capped at 4");
    IterationTypicalityReport rep;
    auto in_A = [&](Vertex a, Vertex b, Vertex c) {
        return available_triples.count(Triple(a, b, c).key()) != 0;
    };
    auto rng = SeedSequence(seed).stream("itertypical/probes");

    for (std::size_t i = 0; i + 1 < levels.size(); ++i) {
        const auto& Ui = levels[i];
        const auto& Un = levels[i + 1];
        // degree condition into both levels
        for (Vertex v : Ui) {
            std::int64_t di = 0, dn2 = 0;
            for (Vertex w : Ui) di += (w != v && G.has_edge(v, w)) ? 1 : 0;
            for (Vertex w : Un) dn2 += (w != v && G.has_edge(v, w)) ? 1 : 0;
            double lhs1 = std::abs(di - p * static_cast<double>(Ui.size())) /
                          (p * static_cast<double>(Ui.size()));
            double lhs2 = std::abs(dn2 - p * static_cast<double>(Un.size())) /
                          (p * static_cast<double>(Un.size()));
            rep.worst_deg_dev = std::max({rep.worst_deg_dev, lhs1, lhs2});
        }
        // sampled rooted statistics: Q with 1..3 edges on up to h vertices
        for (int istar = 0; istar < 2; ++istar) {
            const auto& Ustar = istar == 0 ? Ui : Un;
            for (int probe = 0; probe < 120; ++probe) {
                // random small vertex set inside U_i spanning some edges
                std::vector<Vertex> W;
                int want = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(h - 1)));
                for (int tries = 0; tries < 40 && static_cast<int>(W.size()) < want; ++tries) {
                    Vertex v = Ui[rng.below(Ui.size())];
                    if (std::find(W.begin(), W.end(), v) == W.end()) W.push_back(v);
                }
                EdgePairList Q;
                for (std::size_t a = 0; a < W.size(); ++a)
                    for (std::size_t b = a + 1; b < W.size(); ++b)
                        if (G.has_edge(W[a], W[b]) && rng.bernoulli(0.7))
                            Q.emplace_back(W[a], W[b]);
                if (Q.empty()) continue;
                std::set<Vertex> span;
                for (auto& [a, b] : Q) {
                    span.insert(a);
                    span.insert(b);
                }
                std::int64_t good = 0;
                for (Vertex u : Ustar) {
                    if (span.count(u)) continue;
                    bool all = true;
                    for (auto& [a, b] : Q) all = all && in_A(u, a, b);
                    good += all ? 1 : 0;
                }
                double expect = std::pow(p, static_cast<double>(span.size())) *
                                std::pow(q, static_cast<double>(Q.size())) *
                                static_cast<double>(Ustar.size());
                if (expect <= 0) continue;
                double dev = std::abs(static_cast<double>(good) - expect) / expect;
                if (dev > rep.worst_q_dev) {
                    rep.worst_q_dev = dev;
                    rep.worst_case = "|V(Q)|=" + std::to_string(span.size()) +
                                     " |Q|=" + std::to_string(Q.size());
                }
            }
        }
    }
    rep.pass = rep.worst_deg_dev <= xi && rep.worst_q_dev <= xi;
    return rep;
}

// ---------------------------------------------------------------------------
// Discrepancy: |e(S,T) - p|S||T|| against 2(xi^{1/2} p n + sqrt(p n)) sqrt(|S||T|).

struct DiscrepancyResult {
    double lhs = 0;
    double rhs = 0;
    bool violation = false;
};

inline DiscrepancyResult discrepancy_check(const BitGraph& G,
                                           const std::vector<Vertex>& S,
                                           const std::vector<Vertex>& T, double p,
                                           double xi) {
    std::unordered_set<Vertex> sset(S.begin(), S.end());
    for (Vertex t : T)
        if (sset.count(t)) throw ParameterError("discrepancy: S and T must be disjoint");
    std::int64_t e = 0;
    for (Vertex s : S)
        for (Vertex t : T) e += G.has_edge(s, t) ? 1 : 0;
    const double n = static_cast<double>(G.n());
    DiscrepancyResult res;
    res.lhs = std::abs(static_cast<double>(e) -
                       p * static_cast<double>(S.size()) * static_cast<double>(T.size()));
    res.rhs = 2.0 * (std::sqrt(xi) * p * n + std::sqrt(p * n)) *
              std::sqrt(static_cast<double>(S.size()) * static_cast<double>(T.size()));
    res.violation = res.lhs > res.rhs;
    return res;
}

// ---------------------------------------------------------------------------
// Bipartite perfect matching with a Hall deficiency witness.

struct BipartiteGraph {
    int nx = 0, ny = 0;
    std::vector<std::vector<int>> adj; // adj[x] = list of y

    static BipartiteGraph of(int nx, int ny) {
        BipartiteGraph b;
        b.nx = nx;
        b.ny = ny;
        b.adj.assign(static_cast<std::size_t>(nx), {});
        return b;
    }
};

struct HallResult {
    bool perfect = false;
    std::vector<int> match_x; // x -> y, -1 when unmatched
    std::vector<int> deficient_set;  // S on the X side with |N(S)| < |S|
    std::vector<int> neighborhood;   // N(S)
};

inline HallResult hall_matching(const BipartiteGraph& B) {
    if (B.nx != B.ny) throw ParameterError("hall_matching: parts must be balanced");
    HallResult res;
    res.match_x.assign(static_cast<std::size_t>(B.nx), -1);
    std::vector<int> match_y(static_cast<std::size_t>(B.ny), -1);
    std::vector<char> seen(static_cast<std::size_t>(B.ny), 0);
    std::function<bool(int)> augment = [&](int x) -> bool {
        for (int y : B.adj[static_cast<std::size_t>(x)]) {
            if (seen[static_cast<std::size_t>(y)]) continue;
            seen[static_cast<std::size_t>(y)] = 1;
            if (match_y[static_cast<std::size_t>(y)] < 0 ||
                augment(match_y[static_cast<std::size_t>(y)])) {
                match_y[static_cast<std::size_t>(y)] = x;
                res.match_x[static_cast<std::size_t>(x)] = y;
                return true;
            }
        }
        return false;
    };
    int matched = 0;
    for (int x = 0; x < B.nx; ++x) {
        std::fill(seen.begin(), seen.end(), 0);
        if (augment(x)) ++matched;
    }
    if (matched == B.nx) {
        res.perfect = true;
        // verify: bijection over existing edges
        std::vector<char> used(static_cast<std::size_t>(B.ny), 0);
        for (int x = 0; x < B.nx; ++x) {
            int y = res.match_x[static_cast<std::size_t>(x)];
            if (y < 0 || used[static_cast<std::size_t>(y)])
                throw InvariantError("hall_matching: matching is not a bijection");
            used[static_cast<std::size_t>(y)] = 1;
            bool exists = false;
            for (int yy : B.adj[static_cast<std::size_t>(x)]) exists = exists || yy == y;
            if (!exists) throw InvariantError("hall_matching: matched pair is not an edge");
        }
        return res;
    }
    // Hall witness: alternating reachability from an unmatched x
    int x0 = -1;
    for (int x = 0; x < B.nx; ++x)
        if (res.match_x[static_cast<std::size_t>(x)] < 0) x0 = x;
    std::vector<char> inS(static_cast<std::size_t>(B.nx), 0),
        inT(static_cast<std::size_t>(B.ny), 0);
    std::queue<int> bfs;
    bfs.push(x0);
    inS[static_cast<std::size_t>(x0)] = 1;
    while (!bfs.empty()) {
        int x = bfs.front();
        bfs.pop();
        for (int y : B.adj[static_cast<std::size_t>(x)]) {
            if (inT[static_cast<std::size_t>(y)]) continue;
            inT[static_cast<std::size_t>(y)] = 1;
            int xm = match_y[static_cast<std::size_t>(y)];
            if (xm >= 0 && !inS[static_cast<std::size_t>(xm)]) {
                inS[static_cast<std::size_t>(xm)] = 1;
                bfs.push(xm);
            }
        }
    }
    for (int x = 0; x < B.nx; ++x)
        if (inS[static_cast<std::size_t>(x)]) res.deficient_set.push_back(x);
    for (int y = 0; y < B.ny; ++y)
        if (inT[static_cast<std::size_t>(y)]) res.neighborhood.push_back(y);
    if (res.neighborhood.size() >= res.deficient_set.size())
        throw InvariantError("hall_matching: witness is not deficient");
    return res;
}

// Perfect matching in a general graph by random equal bipartition plus the
// Hall matcher, retried with fresh bipartitions.
inline std::optional<std::vector<std::pair<Vertex, Vertex>>> bipartition_matching(
    const std::vector<Vertex>& verts,
    const std::function<bool(Vertex, Vertex)>& has_edge, Rng& rng, int tries,
    HallResult* last_fail = nullptr) {
    if (verts.size() % 2 != 0)
        throw ParameterError("bipartition_matching: odd vertex count");
    const int half = static_cast<int>(verts.size() / 2);
    if (half == 0) return std::vector<std::pair<Vertex, Vertex>>{};
    std::vector<Vertex> order = verts;
    for (int attempt = 0; attempt < tries; ++attempt) {
        rng.shuffle(order);
        auto B = BipartiteGraph::of(half, half);
        for (int x = 0; x < half; ++x)
            for (int y = 0; y < half; ++y)
                if (has_edge(order[static_cast<std::size_t>(x)],
                             order[static_cast<std::size_t>(half + y)]))
                    B.adj[static_cast<std::size_t>(x)].push_back(y);
        auto res = hall_matching(B);
        if (res.perfect) {
            std::vector<std::pair<Vertex, Vertex>> out;
            for (int x = 0; x < half; ++x) {
                Vertex a = order[static_cast<std::size_t>(x)];
                Vertex b = order[static_cast<std::size_t>(
                    half + res.match_x[static_cast<std::size_t>(x)])];
                out.emplace_back(std::min(a, b), std::max(a, b));
            }
            return out;
        }
        if (last_fail) *last_fail = res;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Robust matching experiment: subsample a typical graph, delete adversarially,
// match what remains.

using AdversarialDeleter =
    std::function<EdgePairList(const BitGraph& R, int max_degree_cap, Rng&)>;

inline EdgePairList adversary_none(const BitGraph&, int, Rng&) { return {}; }

// removes edges at the highest-degree vertices while the cap allows
inline EdgePairList adversary_greedy_worst_degree(const BitGraph& R, int cap, Rng&) {
    EdgePairList F;
    if (cap <= 0) return F;
    std::vector<std::int64_t> fdeg(R.n(), 0);
    std::set<std::uint64_t> taken;
    std::vector<std::pair<std::int64_t, Vertex>> order;
    for (Vertex v = 0; v < R.n(); ++v) order.emplace_back(-R.degree(v), v);
    std::sort(order.begin(), order.end());
    for (const auto& [negdeg, v] : order) {
        for (Vertex w : R.neighbors(v)) {
            if (fdeg[v] >= cap) break;
            if (fdeg[w] >= cap) continue;
            if (!taken.insert(edge_key(v, w)).second) continue;
            F.emplace_back(std::min(v, w), std::max(v, w));
            ++fdeg[v];
            ++fdeg[w];
        }
    }
    return F;
}

inline EdgePairList adversary_take_all(const BitGraph& R, int, Rng&) {
    return R.edges();
}

struct RobustMatchingResult {
    int trials = 0;
    int successes = 0;
    int cap_violations = 0; // deleter exceeded its degree budget (reported pre-run)
    double success_rate = 0;
};

inline RobustMatchingResult robust_matching_experiment(
    const BitGraph& G, double p, double gamma, double xi_param,
    const AdversarialDeleter& deleter, int trials, std::uint64_t seed) {
    if (G.n() % 2 != 0) throw ParameterError("robust matching: n must be even");
    const double n = static_cast<double>(G.n());
    if (p < std::pow(n, -1.0 / 3.0) || p > 1.0)
        throw ParameterError("robust matching: p must lie in [n^{-1/3}, 1]");
    RobustMatchingResult out;
    out.trials = trials;
    const double keep = std::min(1.0, std::pow(n, gamma) / (p * n));
    const int cap = static_cast<int>(xi_param * std::pow(n, gamma));
    SeedSequence seq(seed);
    for (int trial = 0; trial < trials; ++trial) {
        auto rng = seq.stream("robust/trial", static_cast<std::uint64_t>(trial));
        BitGraph R(G.n());
        for (Vertex u = 0; u < G.n(); ++u)
            for (Vertex v = u + 1; v < G.n(); ++v)
                if (G.has_edge(u, v) && rng.bernoulli(keep)) R.add_edge(u, v);
        EdgePairList F = deleter(R, cap, rng);
        // cap check before the run
        std::vector<int> fdeg(G.n(), 0);
        bool cap_ok = true;
        for (const auto& [u, v] : F) {
            if (!R.has_edge(u, v)) cap_ok = false;
            if (++fdeg[u] > cap || ++fdeg[v] > cap) cap_ok = false;
        }
        if (!cap_ok) {
            ++out.cap_violations;
            continue; // reported, trial not attempted
        }
        BitGraph RF = R;
        for (const auto& [u, v] : F) RF.remove_edge(u, v);
        std::vector<Vertex> verts;
        for (Vertex v = 0; v < G.n(); ++v) verts.push_back(v);
        auto match = bipartition_matching(
            verts, [&](Vertex a, Vertex b) { return RF.has_edge(a, b); }, rng, 20);
        if (!match) continue;
        // verify: a perfect matching inside R minus F
        std::vector<char> hit(G.n(), 0);
        bool ok = match->size() * 2 == G.n();
        for (const auto& [a, b] : *match) {
            ok = ok && RF.has_edge(a, b) && !hit[a] && !hit[b];
            hit[a] = hit[b] = 1;
        }
        if (ok) ++out.successes;
    }
    out.success_rate = trials > 0 ? static_cast<double>(out.successes) / trials : 0;
    return out;
}

// ---------------------------------------------------------------------------
// Reserve sampling: keep each crossing edge with probability n^-theta.

inline EdgePairList sample_reserve(const BitGraph& G, const std::vector<Vertex>& U_out,
                                   const std::vector<Vertex>& U_in, double theta,
                                   std::uint64_t seed) {
    std::unordered_set<Vertex> in_set(U_in.begin(), U_in.end());
    for (Vertex v : U_out)
        if (in_set.count(v)) throw ParameterError("sample_reserve: sets must be disjoint");
    const double n = static_cast<double>(U_out.size() + U_in.size());
    const double prob = std::min(1.0, std::pow(n, -theta));
    auto rng = SeedSequence(seed).stream("reserve/edges");
    EdgePairList out;
    for (Vertex u : U_out)
        for (Vertex v : U_in)
            if (G.has_edge(u, v) && rng.bernoulli(prob))
                out.emplace_back(std::min(u, v), std::max(u, v));
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Completion guards: does adding a triangle to the chosen set finish a
// forbidden configuration? Two flavors: an explicit family, and a girth bound.

class CompletionGuard {
public:
    virtual ~CompletionGuard() = default;
    virtual bool completes(const Triple& t) const = 0;
    virtual void add(const Triple& t) = 0;
    virtual void remove_last() = 0;
    virtual const std::vector<Triple>& chosen() const = 0;
};

class FamilyGuard : public CompletionGuard {
public:
    explicit FamilyGuard(const ForbiddenFamily& fam) : fam_(&fam) {
        for (std::size_t ci = 0; ci < fam.configs().size(); ++ci)
            for (const auto& t : fam.configs()[ci])
                by_triple_[t.key()].push_back(static_cast<int>(ci));
    }

    bool completes(const Triple& t) const override {
        auto it = by_triple_.find(t.key());
        if (it == by_triple_.end()) return false;
        for (int ci : it->second) {
            const auto& cfg = fam_->configs()[static_cast<std::size_t>(ci)];
            bool all = true;
            for (const auto& m : cfg)
                if (!(m == t) && !chosen_keys_.count(m.key())) all = false;
            if (all) return true;
        }
        return false;
    }

    void add(const Triple& t) override {
        chosen_.push_back(t);
        chosen_keys_.insert(t.key());
    }
    void remove_last() override {
        chosen_keys_.erase(chosen_.back().key());
        chosen_.pop_back();
    }
    const std::vector<Triple>& chosen() const override { return chosen_; }

private:
    const ForbiddenFamily* fam_;
    std::unordered_map<std::uint64_t, std::vector<int>> by_triple_;
    std::vector<Triple> chosen_;
    std::unordered_set<std::uint64_t> chosen_keys_;
};

// Guards girth > g over the growing partial system. Girth 5 never occurs in
// an edge-disjoint system, 6 is the pasch scan, 7 and up fall back to the
// anchored enumeration.
class GirthGuard : public CompletionGuard {
public:
    GirthGuard(Vertex n, int g) : n_(n), g_(g), by_vertex_(n) {
        if (g < 4) throw ParameterError("girth guard: g must be >= 4");
    }

    bool completes(const Triple& t) const override {
        for (auto k : edge_keys(t))
            if (at_edge_.count(k)) return true; // a (4,2)-configuration
        if (g_ >= 6 && pasch_with(t)) return true;
        if (g_ >= 7) {
            // small-system fallback: anchored search through t
            std::vector<Triple> all = chosen_;
            all.push_back(t);
            TripleSystem sys(n_, all);
            std::vector<Triple> anchor{t};
            if (!find_erdos_configs(sys, 7, g_, &anchor).empty()) return true;
        }
        return false;
    }

    void add(const Triple& t) override {
        int id = static_cast<int>(chosen_.size());
        chosen_.push_back(t);
        for (int i = 0; i < 3; ++i) by_vertex_[t[i]].push_back(id);
        for (auto k : edge_keys(t)) at_edge_[k] = id;
    }

    void remove_last() override {
        const Triple t = chosen_.back();
        chosen_.pop_back();
        for (int i = 0; i < 3; ++i) by_vertex_[t[i]].pop_back();
        for (auto k : edge_keys(t)) at_edge_.erase(k);
    }

    const std::vector<Triple>& chosen() const override { return chosen_; }

private:
    // would t close a pasch with three chosen blocks?
    bool pasch_with(const Triple& T) const {
        for (int pi = 0; pi < 3; ++pi)
            for (int qi = pi + 1; qi < 3; ++qi) {
                Vertex p = T[pi], q = T[qi], r = T[3 - pi - qi];
                for (int u : by_vertex_[p]) {
                    const Triple& U = chosen_[static_cast<std::size_t>(u)];
                    if (U.contains(q) || U.contains(r)) continue;
                    for (int v : by_vertex_[q]) {
                        if (v == u) continue;
                        const Triple& V = chosen_[static_cast<std::size_t>(v)];
                        if (V.contains(p) || V.contains(r)) continue;
                        if (shared_vertices(U, V) != 1) continue;
                        Vertex d = 0;
                        for (int i = 0; i < 3; ++i)
                            if (V.contains(U[i])) d = U[i];
                        Vertex e = 0, f = 0;
                        for (int i = 0; i < 3; ++i) {
                            if (U[i] != p && U[i] != d) e = U[i];
                            if (V[i] != q && V[i] != d) f = V[i];
                        }
                        if (e == f || T.contains(e) || T.contains(f)) continue;
                        auto it = at_edge_.find(edge_key(e, f));
                        if (it == at_edge_.end()) continue;
                        if (chosen_[static_cast<std::size_t>(it->second)].contains(r))
                            return true;
                    }
                }
            }
        return false;
    }

    Vertex n_;
    int g_;
    std::vector<Triple> chosen_;
    std::vector<std::vector<int>> by_vertex_;
    std::unordered_map<std::uint64_t, int> at_edge_;
};

// ---------------------------------------------------------------------------
// Internal-edge greedy cover: each internal edge takes a triangle made of two
// reserve edges, chosen uniformly among candidates that stay legal.

struct InternalCoverResult {
    bool ok = false;
    std::vector<Triple> triples;
    int failed_index = -1;
    std::size_t failed_candidates = 0;
};

inline InternalCoverResult cover_internal_greedy(
    const EdgePairList& internal_edges, const EdgePairList& reserve,
    const std::unordered_set<std::uint64_t>& available_triples,
    CompletionGuard& guard, std::unordered_set<std::uint64_t>& used_edges,
    std::size_t min_choices, std::uint64_t seed) {
    InternalCoverResult res;
    std::unordered_map<Vertex, std::vector<Vertex>> r_adj;
    std::unordered_set<std::uint64_t> r_edges;
    for (const auto& [u, v] : reserve) {
        r_adj[u].push_back(v);
        r_adj[v].push_back(u);
        r_edges.insert(edge_key(u, v));
    }
    auto rng = SeedSequence(seed).stream("coverdown/internal");
    auto roll_back = [&]() {
        for (auto it = res.triples.rbegin(); it != res.triples.rend(); ++it) {
            guard.remove_last();
            for (auto k : edge_keys(*it)) used_edges.erase(k);
        }
        res.triples.clear();
    };
    for (std::size_t i = 0; i < internal_edges.size(); ++i) {
        const auto& [u, v] = internal_edges[i];
        if (used_edges.count(edge_key(u, v)))
            throw ParameterError("cover_internal_greedy: edge already covered");
        std::vector<Vertex> candidates;
        auto au = r_adj.find(u);
        if (au != r_adj.end()) {
            for (Vertex w : au->second) {
                if (w == v) continue;
                if (!r_edges.count(edge_key(v, w))) continue;
                if (used_edges.count(edge_key(u, w)) || used_edges.count(edge_key(v, w)))
                    continue;
                Triple t(u, v, w);
                if (!available_triples.empty() && !available_triples.count(t.key()))
                    continue;
                if (guard.completes(t)) continue;
                candidates.push_back(w);
            }
        }
        std::sort(candidates.begin(), candidates.end());
        if (candidates.size() < std::max<std::size_t>(min_choices, 1)) {
            res.failed_index = static_cast<int>(i);
            res.failed_candidates = candidates.size();
            roll_back(); // failure leaves the guard and edge set untouched
            return res;
        }
        Vertex w = candidates[rng.below(candidates.size())];
        Triple t(u, v, w);
        res.triples.push_back(t);
        guard.add(t);
        for (auto k : edge_keys(t)) used_edges.insert(k);
    }
    res.ok = true;
    return res;
}

// ---------------------------------------------------------------------------
// Crossing-edge cover through link graphs: sparsify, delete colliding and
// dangerous edges, then match each center.

struct CrossingInstance {
    Vertex center;
    std::vector<Vertex> W; // endpoints of uncovered center edges
};

struct CrossingFailure {
    Vertex center = 0;
    std::string reason; // "odd |W_v|" or "no perfect matching"
    HallResult witness;
};

struct CoverCrossingResult {
    bool ok = false;
    std::vector<Triple> triples;
    std::optional<CrossingFailure> failure;
    std::size_t d1_deleted = 0;
    std::size_t d2_deleted = 0;
};

inline CoverCrossingResult cover_crossing(
    const std::vector<CrossingInstance>& instances,
    const std::unordered_set<std::uint64_t>& available_triples, double retain_prob,
    CompletionGuard& guard, std::unordered_set<std::uint64_t>& used_edges,
    std::uint64_t seed) {
    CoverCrossingResult res;
    SeedSequence seq(seed);

    // sparsified link edges per center
    struct LinkEdge {
        Vertex u, w;
    };
    std::vector<std::vector<LinkEdge>> sampled(instances.size());
    std::unordered_map<std::uint64_t, int> edge_multiplicity; // for D_1
    for (std::size_t ci = 0; ci < instances.size(); ++ci) {
        const auto& inst = instances[ci];
        auto rng = seq.stream("coverdown/link-sparsify", static_cast<std::uint64_t>(ci));
        const auto& W = inst.W;
        for (std::size_t a = 0; a < W.size(); ++a)
            for (std::size_t b = a + 1; b < W.size(); ++b) {
                Triple t(inst.center, W[a], W[b]);
                if (!available_triples.empty() && !available_triples.count(t.key()))
                    continue;
                if (used_edges.count(edge_key(W[a], W[b]))) continue;
                if (!rng.bernoulli(retain_prob)) continue;
                sampled[ci].push_back({W[a], W[b]});
                ++edge_multiplicity[edge_key(W[a], W[b])];
            }
    }

    auto roll_back = [&]() {
        for (auto it = res.triples.rbegin(); it != res.triples.rend(); ++it) {
            guard.remove_last();
            for (auto k : edge_keys(*it)) used_edges.erase(k);
        }
        res.triples.clear();
    };
    for (std::size_t ci = 0; ci < instances.size(); ++ci) {
        const auto& inst = instances[ci];
        if (inst.W.size() % 2 != 0) {
            res.failure = CrossingFailure{inst.center, "odd |W_v|", {}};
            roll_back();
            return res;
        }
        if (inst.W.empty()) continue;
        // per-center deletions
        std::set<std::pair<Vertex, Vertex>> kept;
        for (const auto& le : sampled[ci]) {
            if (edge_multiplicity[edge_key(le.u, le.w)] > 1) { // D_1, symmetric
                ++res.d1_deleted;
                continue;
            }
            if (used_edges.count(edge_key(inst.center, le.u)) ||
                used_edges.count(edge_key(inst.center, le.w)) ||
                used_edges.count(edge_key(le.u, le.w)))
                continue; // claimed by an earlier center
            Triple t(inst.center, le.u, le.w);
            if (guard.completes(t)) { // D_2
                ++res.d2_deleted;
                continue;
            }
            kept.insert({std::min(le.u, le.w), std::max(le.u, le.w)});
        }
        auto rng = seq.stream("coverdown/link-match", static_cast<std::uint64_t>(ci));
        HallResult fail_witness;
        auto match = bipartition_matching(
            inst.W,
            [&](Vertex a, Vertex b) {
                return kept.count({std::min(a, b), std::max(a, b)}) != 0;
            },
            rng, 24, &fail_witness);
        if (!match) {
            res.failure = CrossingFailure{inst.center, "no perfect matching", fail_witness};
            roll_back();
            return res;
        }
        for (const auto& [a, b] : *match) {
            Triple t(inst.center, a, b);
            // matched triangles from the same center can still complete a
            // configuration jointly; re-check against everything added so far
            if (guard.completes(t)) {
                res.failure = CrossingFailure{
                    inst.center, "matching completed a forbidden configuration", {}};
                roll_back();
                return res;
            }
            res.triples.push_back(t);
            guard.add(t);
            for (auto k : edge_keys(t)) used_edges.insert(k);
        }
    }
    res.ok = true;
    return res;
}

// ---------------------------------------------------------------------------
// Vortex construction: |U_k| = floor(|U_{k-1}|^{1-rho}).

inline std::vector<std::vector<Vertex>> vortex_sets(Vertex n, double rho,
                                                    std::size_t min_size = 4) {
    if (!(rho > 0 && rho < 1)) throw ParameterError("vortex: rho must be in (0,1)");
    std::vector<std::vector<Vertex>> levels;
    std::vector<Vertex> cur;
    for (Vertex v = 0; v < n; ++v) cur.push_back(v);
    levels.push_back(cur);
    for (;;) {
        auto next_size = static_cast<std::size_t>(
            std::floor(std::pow(static_cast<double>(levels.back().size()), 1.0 - rho)));
        if (next_size < min_size || next_size >= levels.back().size()) break;
        levels.push_back(std::vector<Vertex>(levels.back().begin(),
                                             levels.back().begin() +
                                                 static_cast<std::ptrdiff_t>(next_size)));
    }
    return levels;
}

} // namespace hgsts

#endif
