#ifndef HGSTS_CORE_HPP
#define HGSTS_CORE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace hgsts {

using Vertex = std::uint32_t;
using EdgePairList = std::vector<std::pair<Vertex, Vertex>>;

struct ParameterError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvariantError : std::logic_error {
    using std::logic_error::logic_error;
};

// An unordered vertex triple, stored sorted ascending.
struct Triple {
    std::array<Vertex, 3> v{0, 0, 0};

    Triple() = default;
    Triple(Vertex a, Vertex b, Vertex c) : v{a, b, c} {
        std::sort(v.begin(), v.end());
        if (v[0] == v[1] || v[1] == v[2])
            throw ParameterError("triple has repeated vertices");
    }

    Vertex operator[](int i) const { return v[static_cast<std::size_t>(i)]; }
    bool contains(Vertex x) const { return v[0] == x || v[1] == x || v[2] == x; }
    bool contains_edge(Vertex a, Vertex b) const { return contains(a) && contains(b); }

    // Works for vertex counts up to 2^21.
    std::uint64_t key() const {
        return (std::uint64_t(v[0]) << 42) | (std::uint64_t(v[1]) << 21) | v[2];
    }

    friend bool operator==(const Triple& x, const Triple& y) { return x.v == y.v; }
    friend bool operator!=(const Triple& x, const Triple& y) { return x.v != y.v; }
    friend bool operator<(const Triple& x, const Triple& y) { return x.v < y.v; }
};

inline std::uint64_t edge_key(Vertex a, Vertex b) {
    if (a > b) std::swap(a, b);
    return (std::uint64_t(a) << 32) | b;
}

inline std::array<std::uint64_t, 3> edge_keys(const Triple& t) {
    return {edge_key(t[0], t[1]), edge_key(t[0], t[2]), edge_key(t[1], t[2])};
}

struct TripleHash {
    std::size_t operator()(const Triple& t) const {
        std::uint64_t k = t.key();
        k ^= k >> 33;
        k *= 0xff51afd7ed558ccdULL;
        k ^= k >> 33;
        return static_cast<std::size_t>(k);
    }
};

inline int shared_vertices(const Triple& a, const Triple& b) {
    int c = 0;
    for (int i = 0; i < 3; ++i) c += b.contains(a[i]) ? 1 : 0;
    return c;
}

// ---------------------------------------------------------------------------
// TripleSystem

class TripleSystem {
public:
    TripleSystem() = default;

    TripleSystem(Vertex n_vertices, std::vector<Triple> triples) : n_(n_vertices) {
        std::sort(triples.begin(), triples.end());
        triples.erase(std::unique(triples.begin(), triples.end()), triples.end());
        triples_ = std::move(triples);
        for (const auto& t : triples_)
            if (t[2] >= n_) throw ParameterError("triple vertex out of range");
        rebuild_index();
    }

    Vertex n_vertices() const { return n_; }
    const std::vector<Triple>& triples() const { return triples_; }
    std::size_t size() const { return triples_.size(); }

    bool contains(const Triple& t) const {
        return std::binary_search(triples_.begin(), triples_.end(), t);
    }

    // Triples containing the edge {a,b} (indices into triples()).
    const std::vector<int>& triples_at(Vertex a, Vertex b) const {
        static const std::vector<int> kEmpty;
        auto it = edge_index_.find(edge_key(a, b));
        return it == edge_index_.end() ? kEmpty : it->second;
    }

    const std::vector<int>& triples_at_vertex(Vertex a) const {
        static const std::vector<int> kEmpty;
        if (a >= n_) return kEmpty;
        return vertex_index_[a];
    }

    const std::unordered_map<std::uint64_t, std::vector<int>>& edge_index() const {
        return edge_index_;
    }

    void add_triple(const Triple& t) {
        if (t[2] >= n_) throw ParameterError("triple vertex out of range");
        auto pos = std::lower_bound(triples_.begin(), triples_.end(), t);
        if (pos != triples_.end() && *pos == t) return;
        triples_.insert(pos, t);
        rebuild_index();
    }

    void remove_triple(const Triple& t) {
        auto pos = std::lower_bound(triples_.begin(), triples_.end(), t);
        if (pos == triples_.end() || *pos != t) return;
        triples_.erase(pos);
        rebuild_index();
    }

    // Every edge in at most one triple.
    bool is_partial_steiner() const {
        for (const auto& [k, lst] : edge_index_)
            if (lst.size() > 1) return false;
        return true;
    }

    // Recomputes the edge index from scratch and compares; and validates ranges.
    bool well_formed() const {
        std::unordered_map<std::uint64_t, std::vector<int>> fresh;
        for (std::size_t i = 0; i < triples_.size(); ++i) {
            const auto& t = triples_[i];
            if (t[0] == t[1] || t[1] == t[2] || t[2] >= n_) return false;
            if (i > 0 && !(triples_[i - 1] < t)) return false;
            for (auto k : edge_keys(t)) fresh[k].push_back(static_cast<int>(i));
        }
        return fresh == edge_index_;
    }

private:
    void rebuild_index() {
        edge_index_.clear();
        vertex_index_.assign(n_, {});
        for (std::size_t i = 0; i < triples_.size(); ++i) {
            const auto& t = triples_[i];
            for (auto k : edge_keys(t)) edge_index_[k].push_back(static_cast<int>(i));
            for (int j = 0; j < 3; ++j) vertex_index_[t[j]].push_back(static_cast<int>(i));
        }
    }

    Vertex n_ = 0;
    std::vector<Triple> triples_;
    std::unordered_map<std::uint64_t, std::vector<int>> edge_index_;
    std::vector<std::vector<int>> vertex_index_;
};

// ---------------------------------------------------------------------------
// Configuration

struct Configuration {
    std::vector<Triple> triples; // sorted
    int vertex_span = 0;
    bool edge_disjoint = true;

    static Configuration of(std::vector<Triple> ts) {
        Configuration c;
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
        c.triples = std::move(ts);
        std::vector<Vertex> vs;
        std::unordered_set<std::uint64_t> edges;
        for (const auto& t : c.triples) {
            for (int i = 0; i < 3; ++i) vs.push_back(t[i]);
            for (auto k : edge_keys(t))
                if (!edges.insert(k).second) c.edge_disjoint = false;
        }
        std::sort(vs.begin(), vs.end());
        vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
        c.vertex_span = static_cast<int>(vs.size());
        return c;
    }

    std::vector<Vertex> vertices() const {
        std::vector<Vertex> vs;
        for (const auto& t : triples)
            for (int i = 0; i < 3; ++i) vs.push_back(t[i]);
        std::sort(vs.begin(), vs.end());
        vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
        return vs;
    }

    // Span of the sub-multiset selected by bitmask over triples.
    int subset_span(unsigned mask) const {
        std::array<Vertex, 30> buf;
        int m = 0;
        for (std::size_t i = 0; i < triples.size(); ++i)
            if (mask & (1u << i))
                for (int j = 0; j < 3; ++j) buf[static_cast<std::size_t>(m++)] = triples[i][j];
        std::sort(buf.begin(), buf.begin() + m);
        return static_cast<int>(std::unique(buf.begin(), buf.begin() + m) - buf.begin());
    }

    // j-2 edge-disjoint triples on exactly j vertices, with every proper
    // subset of w triples (2 <= w <= j-3) spanning at least w+3 vertices.
    bool is_erdos(int j) const {
        if (j < 5) return false;
        if (static_cast<int>(triples.size()) != j - 2) return false;
        if (vertex_span != j) return false;
        if (!edge_disjoint) return false;
        const int w_all = j - 2;
        for (unsigned mask = 1; mask < (1u << w_all); ++mask) {
            int w = __builtin_popcount(mask);
            if (w < 2 || w > j - 3) continue;
            if (subset_span(mask) < w + 3) return false;
        }
        return true;
    }

    friend bool operator==(const Configuration& a, const Configuration& b) {
        return a.triples == b.triples;
    }
    friend bool operator<(const Configuration& a, const Configuration& b) {
        return a.triples < b.triples;
    }
};

// ---------------------------------------------------------------------------
// Connected enumeration of edge-disjoint triple sets.
//
// Enumerates each qualifying connected set exactly once: candidates removed
// from the pool stay excluded for the rest of the branch, and fresh neighbors
// enter the pool the first time they become adjacent to the growing set.
// Subsets of Erdos configurations always have span >= |S|+2, which justifies
// the excess pruning below.

namespace detail {

class ConnectedEnumerator {
public:
    // visit(S) is called for every enumerated set; return false to stop.
    using Visitor = std::function<bool(const std::vector<int>&, int /*span*/)>;

    ConnectedEnumerator(const TripleSystem& sys, int max_size, int max_span)
        : sys_(sys), max_size_(max_size), max_span_(max_span),
          in_set_(sys.size(), 0), pooled_(sys.size(), 0),
          vertex_count_(sys.n_vertices(), 0) {}

    // min_reach_span: prune branches that cannot reach this span at full size.
    void set_reach_span(int s) { min_reach_span_ = s; }
    void set_dynamic_span_limit(std::function<int()> f) { span_limit_fn_ = std::move(f); }

    // Every connected edge-disjoint set, rooted at each triple (minimum index).
    void enumerate_all(const Visitor& visit) {
        stop_ = false;
        reset();
        for (int r = 0; r < static_cast<int>(sys_.size()) && !stop_; ++r) {
            root_ = r;
            push(r);
            std::vector<int> pool = fresh_neighbors(r);
            if (!visit_and_extend(visit, pool)) stop_ = true;
            for (int u : pool) pooled_[static_cast<std::size_t>(u)] = 0;
            pop(r);
        }
    }

    // Connected (through the growing union) supersets of the anchor set.
    void enumerate_anchored(const std::vector<int>& anchor, const Visitor& visit) {
        stop_ = false;
        root_ = -1;
        reset();
        std::vector<int> pushed;
        bool bad = false;
        for (int a : anchor) {
            if (in_set_[static_cast<std::size_t>(a)]) continue;
            if (!edge_disjoint_with_set(a)) { bad = true; break; }
            push(a);
            pushed.push_back(a);
        }
        if (!bad && span_ <= effective_span_limit()) {
            std::vector<int> pool;
            for (int a : pushed) {
                auto f = fresh_neighbors(a);
                pool.insert(pool.end(), f.begin(), f.end());
            }
            visit_and_extend(visit, pool);
            for (int u : pool) pooled_[static_cast<std::size_t>(u)] = 0;
        }
        for (auto it = pushed.rbegin(); it != pushed.rend(); ++it) pop(*it);
    }

private:
    void reset() {
        set_.clear();
        span_ = 0;
        used_edges_.clear();
        std::fill(in_set_.begin(), in_set_.end(), 0);
        std::fill(pooled_.begin(), pooled_.end(), 0);
        std::fill(vertex_count_.begin(), vertex_count_.end(), 0);
    }

    int effective_span_limit() const {
        int lim = max_span_;
        if (span_limit_fn_) lim = std::min(lim, span_limit_fn_());
        return lim;
    }

    bool edge_disjoint_with_set(int idx) const {
        for (auto k : edge_keys(sys_.triples()[static_cast<std::size_t>(idx)]))
            if (used_edges_.count(k)) return false;
        return true;
    }

    int new_vertices(int idx) const {
        const auto& t = sys_.triples()[static_cast<std::size_t>(idx)];
        int nv = 0;
        for (int i = 0; i < 3; ++i) nv += vertex_count_[t[i]] == 0 ? 1 : 0;
        return nv;
    }

    void push(int idx) {
        const auto& t = sys_.triples()[static_cast<std::size_t>(idx)];
        set_.push_back(idx);
        in_set_[static_cast<std::size_t>(idx)] = 1;
        for (int i = 0; i < 3; ++i)
            if (vertex_count_[t[i]]++ == 0) ++span_;
        for (auto k : edge_keys(t)) used_edges_.insert(k);
    }

    void pop(int idx) {
        const auto& t = sys_.triples()[static_cast<std::size_t>(idx)];
        set_.pop_back();
        in_set_[static_cast<std::size_t>(idx)] = 0;
        for (int i = 0; i < 3; ++i)
            if (--vertex_count_[t[i]] == 0) --span_;
        for (auto k : edge_keys(t)) used_edges_.erase(k);
    }

    std::vector<int> fresh_neighbors(int idx) {
        std::vector<int> fresh;
        const auto& t = sys_.triples()[static_cast<std::size_t>(idx)];
        for (int i = 0; i < 3; ++i) {
            for (int u : sys_.triples_at_vertex(t[i])) {
                if (u <= root_ || in_set_[static_cast<std::size_t>(u)] ||
                    pooled_[static_cast<std::size_t>(u)])
                    continue;
                pooled_[static_cast<std::size_t>(u)] = 1;
                fresh.push_back(u);
            }
        }
        return fresh;
    }

    bool feasible(int u) const {
        if (static_cast<int>(set_.size()) >= max_size_) return false;
        if (!edge_disjoint_with_set(u)) return false;
        int nv = new_vertices(u);
        int span2 = span_ + nv;
        int size2 = static_cast<int>(set_.size()) + 1;
        if (span2 > effective_span_limit()) return false;
        int excess2 = span2 - size2;
        if (excess2 < 2) return false; // no subset of an Erdos config dips below
        // Cannot shrink the excess back to 2 within the size budget.
        if (size2 + excess2 - 2 > max_size_) return false;
        // Cannot stretch the span up to min_reach_span_ within the size budget.
        if (min_reach_span_ > 0 && span2 + 2 * (max_size_ - size2) < min_reach_span_)
            return false;
        return true;
    }

    bool visit_and_extend(const Visitor& visit, std::vector<int> pool) {
        if (!visit(set_, span_)) return false;
        if (static_cast<int>(set_.size()) >= max_size_) return true;
        // Pool elements are consumed in order; consumed elements stay excluded
        // for the rest of this branch, which is what makes the enumeration
        // exactly-once.
        for (std::size_t i = 0; i < pool.size(); ++i) {
            int u = pool[i];
            if (!feasible(u)) continue;
            push(u);
            std::vector<int> child(pool.begin() + static_cast<std::ptrdiff_t>(i) + 1,
                                   pool.end());
            auto fresh = fresh_neighbors(u);
            child.insert(child.end(), fresh.begin(), fresh.end());
            bool keep_going = visit_and_extend(visit, std::move(child));
            for (int f : fresh) pooled_[static_cast<std::size_t>(f)] = 0;
            pop(u);
            if (!keep_going) return false;
        }
        return true;
    }

    const TripleSystem& sys_;
    int max_size_;
    int max_span_;
    int min_reach_span_ = 0;
    int root_ = -1;
    bool stop_ = false;
    std::function<int()> span_limit_fn_;
    std::vector<int> set_;
    int span_ = 0;
    std::unordered_set<std::uint64_t> used_edges_;
    std::vector<char> in_set_;
    std::vector<char> pooled_;
    std::vector<int> vertex_count_;
};

} // namespace detail

// ---------------------------------------------------------------------------
// Girth

struct GirthCertificate {
    // Finite girth in [4, g_max] with a witness, or "greater than g_max".
    std::optional<int> girth;
    int search_bound = 0;
    std::optional<Configuration> witness;

    bool exceeds_bound() const { return !girth.has_value(); }
    std::string to_string() const {
        if (!girth) return "> " + std::to_string(search_bound);
        return std::to_string(*girth);
    }
};

// Smallest j in [4, g_max] such that some j-2 triples span at most j vertices.
inline GirthCertificate girth(const TripleSystem& sys, int g_max) {
    if (g_max < 4) throw ParameterError("girth: g_max must be >= 4");
    GirthCertificate cert;
    cert.search_bound = g_max;

    // (4,2): a pair of triples sharing an edge.
    for (const auto& [k, lst] : sys.edge_index()) {
        if (lst.size() >= 2) {
            cert.girth = 4;
            cert.witness = Configuration::of(
                {sys.triples()[static_cast<std::size_t>(lst[0])],
                 sys.triples()[static_cast<std::size_t>(lst[1])]});
            return cert;
        }
    }
    if (g_max == 4) return cert;

    // Linear system now; search for the least j with an excess-2 connected set.
    int best = g_max + 1;
    std::vector<int> best_set;
    detail::ConnectedEnumerator en(sys, g_max - 2, g_max);
    en.set_dynamic_span_limit([&] { return best - 1; });
    en.enumerate_all([&](const std::vector<int>& s, int span) {
        if (s.size() >= 2 && span == static_cast<int>(s.size()) + 2) {
            int j = std::max(span, 4);
            if (j < best) {
                best = j;
                best_set = s;
            }
            // Edge-disjoint pairs span >= 5 and no (5,3) exists without a
            // shared edge, so 6 is the floor here.
            if (best == 6) return false;
        }
        return true;
    });
    if (best <= g_max) {
        cert.girth = best;
        std::vector<Triple> w;
        for (int i : best_set) w.push_back(sys.triples()[static_cast<std::size_t>(i)]);
        cert.witness = Configuration::of(w);
    }
    return cert;
}

// All Erdos j-configurations with j_min <= j <= j_max, optionally restricted
// to configurations containing every triple of `anchor`.
inline std::vector<Configuration> find_erdos_configs(
    const TripleSystem& sys, int j_min, int j_max,
    const std::vector<Triple>* anchor = nullptr) {
    if (j_min < 4 || j_min > j_max)
        throw ParameterError("find_erdos_configs: need 4 <= j_min <= j_max");
    std::vector<Configuration> out;
    if (sys.size() == 0) return out;

    std::vector<int> anchor_idx;
    if (anchor) {
        for (const auto& t : *anchor) {
            auto pos = std::lower_bound(sys.triples().begin(), sys.triples().end(), t);
            if (pos == sys.triples().end() || *pos != t) return out; // not in system
            anchor_idx.push_back(static_cast<int>(pos - sys.triples().begin()));
        }
        std::sort(anchor_idx.begin(), anchor_idx.end());
        anchor_idx.erase(std::unique(anchor_idx.begin(), anchor_idx.end()),
                         anchor_idx.end());
    }

    detail::ConnectedEnumerator en(sys, j_max - 2, j_max);
    en.set_reach_span(j_min);
    auto visit = [&](const std::vector<int>& s, int span) {
        if (static_cast<int>(s.size()) >= j_min - 2 && span == static_cast<int>(s.size()) + 2 &&
            span >= j_min && span <= j_max) {
            std::vector<Triple> ts;
            for (int i : s) ts.push_back(sys.triples()[static_cast<std::size_t>(i)]);
            Configuration c = Configuration::of(std::move(ts));
            if (c.is_erdos(span)) out.push_back(std::move(c));
        }
        return true;
    };
    if (anchor) {
        if (anchor_idx.empty())
            en.enumerate_all(visit);
        else
            en.enumerate_anchored(anchor_idx, visit);
    } else {
        en.enumerate_all(visit);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

// Number of labeled girth-j configurations on {0..j-1} containing {0,1,2}.
inline std::int64_t count_erd_j(int j) {
    if (j < 4 || j > 10) throw ParameterError("count_erd_j: need 4 <= j <= 10");
    if (j <= 5) return 0; // Erdos 4- and 5-configurations do not exist
    std::vector<Triple> all;
    Vertex n = static_cast<Vertex>(j);
    for (Vertex a = 0; a < n; ++a)
        for (Vertex b = a + 1; b < n; ++b)
            for (Vertex c = b + 1; c < n; ++c) all.emplace_back(a, b, c);
    TripleSystem sys(n, std::move(all));
    std::vector<Triple> anchor{Triple(0, 1, 2)};
    auto configs = find_erdos_configs(sys, j, j, &anchor);
    std::int64_t cnt = 0;
    for (const auto& c : configs)
        if (c.vertex_span == j) ++cnt;
    return cnt;
}

// log of the count lower bound: (N^2/6) * log((1-N^-c) * N * exp(-2 - sum erd_j/(j-2)!)).
// c = 0 drops the (1-N^-c) factor (the constant is the caller's choice).
inline double counting_lower_bound_log(std::int64_t N, int g,
                                       const std::map<int, std::int64_t>& erd,
                                       double c) {
    if (N < 2) throw ParameterError("counting_lower_bound_log: N must be >= 2");
    if (N % 6 != 1 && N % 6 != 3)
        throw ParameterError("counting_lower_bound_log: N must be 1 or 3 mod 6");
    if (c < 0) throw ParameterError("counting_lower_bound_log: c must be >= 0");
    double sum = 0.0;
    for (int j = 6; j <= g; ++j) {
        auto it = erd.find(j);
        if (it == erd.end())
            throw ParameterError("counting_lower_bound_log: missing erd_" + std::to_string(j));
        double fact = 1.0;
        for (int i = 2; i <= j - 2; ++i) fact *= i;
        sum += static_cast<double>(it->second) / fact;
    }
    double logN = std::log(static_cast<double>(N));
    double log_factor = (c == 0.0) ? 0.0 : std::log1p(-std::pow(static_cast<double>(N), -c));
    double n2 = static_cast<double>(N) * static_cast<double>(N);
    return n2 / 6.0 * (log_factor + logN - 2.0 - sum);
}

// ---------------------------------------------------------------------------
// Steiner verification

struct SteinerReport {
    bool ok = false;
    std::vector<std::pair<Vertex, Vertex>> uncovered; // capped
    std::vector<std::pair<Vertex, Vertex>> multi;     // capped
    std::size_t uncovered_total = 0;
    std::size_t multi_total = 0;
    static constexpr std::size_t kCap = 100;
};

inline SteinerReport verify_steiner(const TripleSystem& sys) {
    SteinerReport rep;
    const Vertex n = sys.n_vertices();
    for (Vertex a = 0; a < n; ++a) {
        for (Vertex b = a + 1; b < n; ++b) {
            std::size_t cnt = sys.triples_at(a, b).size();
            if (cnt == 0) {
                ++rep.uncovered_total;
                if (rep.uncovered.size() < SteinerReport::kCap) rep.uncovered.emplace_back(a, b);
            } else if (cnt > 1) {
                ++rep.multi_total;
                if (rep.multi.size() < SteinerReport::kCap) rep.multi.emplace_back(a, b);
            }
        }
    }
    rep.ok = rep.uncovered_total == 0 && rep.multi_total == 0;
    return rep;
}

// ---------------------------------------------------------------------------
// Structural scans used by the post-hoc process verifier. These share no code
// with the enumerator above or with the incremental process index.

// Returns a pair of triple indices sharing an edge, or nullopt.
inline std::optional<std::pair<int, int>> scan_shared_edge(const TripleSystem& sys) {
    for (const auto& [k, lst] : sys.edge_index())
        if (lst.size() >= 2) return std::make_pair(lst[0], lst[1]);
    return std::nullopt;
}

// Finds a Pasch configuration (Erdos 6-configuration) in an edge-disjoint
// system by scanning pairs of triples through a shared vertex. For each pair
// {a,d,e},{b,d,f} sharing d, the two remaining blocks are {a,b,c},{c,e,f};
// both are located by edge lookup (at most one triple per edge).
inline std::optional<std::array<Triple, 4>> scan_pasch(const TripleSystem& sys) {
    const auto& ts = sys.triples();
    for (Vertex d = 0; d < sys.n_vertices(); ++d) {
        const auto& at_d = sys.triples_at_vertex(d);
        for (std::size_t i = 0; i < at_d.size(); ++i) {
            for (std::size_t j = i + 1; j < at_d.size(); ++j) {
                const Triple& B1 = ts[static_cast<std::size_t>(at_d[i])];
                const Triple& B2 = ts[static_cast<std::size_t>(at_d[j])];
                if (shared_vertices(B1, B2) != 1) continue;
                Vertex r1[2], r2[2];
                int p = 0, q = 0;
                for (int x = 0; x < 3; ++x) {
                    if (B1[x] != d) r1[p++] = B1[x];
                    if (B2[x] != d) r2[q++] = B2[x];
                }
                // choose a in B1\d, b in B2\d; remaining vertices e, f
                for (int ia = 0; ia < 2; ++ia) {
                    for (int ib = 0; ib < 2; ++ib) {
                        Vertex a = r1[ia], e = r1[1 - ia];
                        Vertex b = r2[ib], f = r2[1 - ib];
                        for (int t3 : sys.triples_at(a, b)) {
                            const Triple& B3 = ts[static_cast<std::size_t>(t3)];
                            Vertex c = 0;
                            for (int x = 0; x < 3; ++x)
                                if (B3[x] != a && B3[x] != b) c = B3[x];
                            if (c == d || c == e || c == f || c == a || c == b) continue;
                            for (int t4 : sys.triples_at(e, f)) {
                                const Triple& B4 = ts[static_cast<std::size_t>(t4)];
                                if (B4.contains(c))
                                    return std::array<Triple, 4>{B1, B2, B3, B4};
                            }
                        }
                    }
                }
            }
        }
    }
    return std::nullopt;
}

} // namespace hgsts

#endif
