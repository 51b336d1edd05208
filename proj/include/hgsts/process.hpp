#ifndef HGSTS_PROCESS_HPP
#define HGSTS_PROCESS_HPP

#include <algorithm>
#include <ostream>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "hgsts/core.hpp"
#include "hgsts/rng.hpp"

namespace hgsts {

inline std::string format_real_short(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

struct HostGraph {
    Vertex n = 0;
    std::vector<std::pair<Vertex, Vertex>> edges; // pairs u < v, sorted, unique

    static HostGraph complete(Vertex n) {
        HostGraph g;
        g.n = n;
        for (Vertex a = 0; a < n; ++a)
            for (Vertex b = a + 1; b < n; ++b) g.edges.emplace_back(a, b);
        return g;
    }

    static HostGraph of(Vertex n, std::vector<std::pair<Vertex, Vertex>> es) {
        HostGraph g;
        g.n = n;
        for (auto& [u, v] : es) {
            if (u == v || u >= n || v >= n) throw ParameterError("host graph: bad edge");
            if (u > v) std::swap(u, v);
        }
        std::sort(es.begin(), es.end());
        es.erase(std::unique(es.begin(), es.end()), es.end());
        g.edges = std::move(es);
        return g;
    }
};

// ---------------------------------------------------------------------------
// Explicit forbidden families: collections J_4..J_g of (j-2)-sets of
// triangles, redundancy-free (no member contains another).

class ForbiddenFamily {
public:
    ForbiddenFamily() = default;

    // strip_redundant removes duplicates and proper supersets of other members.
    static ForbiddenFamily of(std::vector<std::vector<Triple>> configs,
                              bool strip_redundant = true) {
        ForbiddenFamily f;
        for (auto& cfg : configs) {
            std::sort(cfg.begin(), cfg.end());
            cfg.erase(std::unique(cfg.begin(), cfg.end()), cfg.end());
            if (cfg.size() < 2)
                throw ParameterError("forbidden family: configurations need >= 2 triangles");
            Configuration c = Configuration::of(cfg);
            if (!c.edge_disjoint)
                throw ParameterError("forbidden family: triangles must be edge-disjoint");
        }
        std::sort(configs.begin(), configs.end(),
                  [](const auto& a, const auto& b) {
                      return a.size() != b.size() ? a.size() < b.size() : a < b;
                  });
        configs.erase(std::unique(configs.begin(), configs.end()), configs.end());
        if (strip_redundant) {
            std::set<std::vector<Triple>> kept;
            std::vector<std::vector<Triple>> out;
            for (const auto& cfg : configs) {
                bool redundant = false;
                // any kept configuration inside this one? (kept are not larger)
                const std::size_t s = cfg.size();
                for (std::uint32_t mask = 1; mask + 1 < (1u << s) && !redundant; ++mask) {
                    std::vector<Triple> sub;
                    for (std::size_t i = 0; i < s; ++i)
                        if (mask & (1u << i)) sub.push_back(cfg[i]);
                    redundant = kept.count(sub) != 0;
                }
                if (!redundant) {
                    kept.insert(cfg);
                    out.push_back(cfg);
                }
            }
            f.configs_ = std::move(out);
            f.redundancy_free_ = true;
        } else {
            f.configs_ = std::move(configs);
            f.redundancy_free_ = verify_redundancy_free(f.configs_);
        }
        return f;
    }

    // For families coming straight out of the Erdos-configuration enumerator:
    // a subset of w triples of such a configuration spans at least w+3
    // vertices for 2 <= w <= j-3, so no member can contain another and the
    // quadratic strip pass is unnecessary.
    static ForbiddenFamily of_erdos_enumeration(std::vector<std::vector<Triple>> configs) {
        ForbiddenFamily f;
        for (auto& cfg : configs) std::sort(cfg.begin(), cfg.end());
        std::sort(configs.begin(), configs.end());
        configs.erase(std::unique(configs.begin(), configs.end()), configs.end());
        f.configs_ = std::move(configs);
        f.redundancy_free_ = true;
        return f;
    }

    static bool verify_redundancy_free(const std::vector<std::vector<Triple>>& configs) {
        std::set<std::vector<Triple>> all(configs.begin(), configs.end());
        if (all.size() != configs.size()) return false;
        for (const auto& cfg : configs) {
            const std::size_t s = cfg.size();
            for (std::uint32_t mask = 1; mask + 1 < (1u << s); ++mask) {
                std::vector<Triple> sub;
                for (std::size_t i = 0; i < s; ++i)
                    if (mask & (1u << i)) sub.push_back(cfg[i]);
                if (all.count(sub)) return false;
            }
        }
        return true;
    }

    const std::vector<std::vector<Triple>>& configs() const { return configs_; }
    bool redundancy_free() const { return redundancy_free_; }
    bool empty() const { return configs_.empty(); }

    // j -> number of configurations with j-2 triangles
    std::map<int, std::int64_t> family_sizes() const {
        std::map<int, std::int64_t> m;
        for (const auto& cfg : configs_) ++m[static_cast<int>(cfg.size()) + 2];
        return m;
    }

private:
    std::vector<std::vector<Triple>> configs_;
    bool redundancy_free_ = true;
};

struct InducedFamily {
    ForbiddenFamily family;       // configurations of size >= 2 over `available`
    std::vector<Triple> blocked;  // size-1 residues: unusable triangles
};

// Restriction of a super-family to the current chosen/available sets: each
// configuration sheds its chosen members; survivors must lie in `available`.
inline InducedFamily derive_induced_family(const ForbiddenFamily& sup,
                                           const std::vector<Triple>& chosen,
                                           const std::vector<Triple>& available) {
    std::set<Triple> chosen_set(chosen.begin(), chosen.end());
    std::set<Triple> avail_set(available.begin(), available.end());
    {
        std::unordered_set<std::uint64_t> edges;
        for (const auto& t : chosen)
            for (auto k : edge_keys(t))
                if (!edges.insert(k).second)
                    throw ParameterError("derive_induced_family: chosen not edge-disjoint");
    }
    InducedFamily out;
    std::vector<std::vector<Triple>> restricted;
    std::set<Triple> blocked;
    for (const auto& cfg : sup.configs()) {
        std::vector<Triple> rest;
        bool ok = true;
        for (const auto& t : cfg) {
            if (chosen_set.count(t)) continue;
            if (!avail_set.count(t)) {
                ok = false;
                break;
            }
            rest.push_back(t);
        }
        if (!ok) continue;
        if (rest.empty())
            throw ParameterError("derive_induced_family: a configuration is fully chosen");
        if (rest.size() == 1)
            blocked.insert(rest[0]);
        else
            restricted.push_back(std::move(rest));
    }
    out.family = ForbiddenFamily::of(std::move(restricted), /*strip_redundant=*/true);
    out.blocked.assign(blocked.begin(), blocked.end());
    return out;
}

// ---------------------------------------------------------------------------
// Trajectories (deterministic predictions).

struct Trajectory {
    double E0 = 0;
    double A0 = 0;
    std::map<int, double> J; // j -> |J_j|
    double n = 0;
    double C_good = 10.0;    // the goodness constant, for error thresholds
    double B = 12.0;         // threshold exponent knob, default 2g

    double p(double t) const { return (E0 - 3.0 * t) / E0; }

    double rho(double t) const {
        double r = 0;
        for (const auto& [j, cnt] : J)
            r += (j - 2) * std::pow(t, j - 3) * cnt / std::pow(A0, j - 2);
        return r;
    }

    double f_jc(int j, int c, double t) const {
        auto it = J.find(j);
        if (it == J.end() || it->second == 0) return 0.0;
        if (c < 0) return 0.0; // quantities with negative index are zero
        double binom = 1;
        for (int i = 0; i < c; ++i) binom = binom * (j - 3 - i) / (i + 1);
        double tc = (c == 0) ? 1.0 : std::pow(t / A0, c); // 0^0 = 1 convention
        double surv = std::pow(std::pow(p(t), 3) * std::exp(-rho(t)), j - 3 - c);
        return binom * tc * surv * ((j - 2) * it->second / A0);
    }

    double f_edge(double t) const {
        return p(t) * p(t) * std::exp(-rho(t)) * (3.0 * A0 / E0);
    }

    double f_threat(double t) const {
        double r = 3.0 * f_edge(t);
        for (const auto& [j, cnt] : J) r += f_jc(j, j - 4, t);
        return r;
    }

    double e_edge(double t) const {
        return std::pow(p(t), -B) * std::pow(n, 1.0 - 1.0 / (2.0 * C_good));
    }

    double e_jc(int j, int c, double t) const {
        return e_edge(t) * std::pow(p(t) * p(t) * A0 / E0, j - 4 - c);
    }
};

// ---------------------------------------------------------------------------
// Process engine.

class ProcessEngine;

// Forbidden-configuration backend: tells the engine which available triangles
// a new chosen triangle kills, beyond plain edge sharing.
class ForbiddenBackend {
public:
    virtual ~ForbiddenBackend() = default;
    virtual void attach(ProcessEngine& eng) { eng_ = &eng; }
    virtual void on_choose(int tri, std::vector<int>& forced) = 0;
    virtual void on_die(int /*tri*/) {}
    // available partners T* that would kill T via a configuration
    virtual void threat_extras(int tri, std::vector<int>& out) const = 0;
    // |X_{T,j,c}|; -1 when the backend cannot compute it
    virtual std::int64_t count_partial(int tri, int j, int c) const = 0;
    virtual std::map<int, std::int64_t> family_sizes() const = 0;
    // does adding tri to the chosen set complete a configuration? (recomputed
    // from statuses, used by the availability spot-check)
    virtual bool would_complete(int tri) const = 0;
    // independent post-hoc scan over the final chosen set
    virtual bool posthoc_clean(const TripleSystem& chosen, std::string& why) const = 0;
    virtual bool supports_crude_stats() const { return false; }

protected:
    ProcessEngine* eng_ = nullptr;
};

struct ProcessOptions {
    std::uint64_t seed = 0;
    std::int64_t max_steps = -1;     // explicit step cutoff, if >= 0
    double coverage = -1;            // stop after coverage * |E|/3 steps
    double beta = -1;                // tau_cut = ceil((1 - n^-beta) |E| / 3)
    std::int64_t checkpoint_every = 0; // 0: |E0|/300
    int threat_sample = 32;
    double B = -1;                   // trajectory error knob; default 2g -> 12
    double C_good = 10.0;
    bool record_trace = true;
    bool availability_spot_checks = false; // recompute A against the definition
};

struct TraceRow {
    std::int64_t t = 0;
    double p = 0, rho = 0, f_edge = 0, f_threat = 0;
    std::int64_t A_size = 0;
    std::int64_t Xe_min = 0;
    double Xe_mean = 0;
    std::int64_t Xe_max = 0;
    double TT_mean_sampled = 0;
    double dev_edge = 0, dev_threat = 0;
};

enum class ProcessOutcome { ReachedCutoff, Starved };

struct ProcessResult {
    std::vector<Triple> chosen; // in selection order
    std::vector<TraceRow> trace;
    ProcessOutcome outcome = ProcessOutcome::ReachedCutoff;
    std::int64_t steps = 0;
    std::int64_t E0 = 0, A0 = 0;
    std::map<int, std::int64_t> J_sizes;
    std::int64_t tau_cut = 0;
    // post-hoc verification (independent of the incremental index)
    bool posthoc_edge_disjoint = false;
    bool posthoc_no_forbidden = false;
    bool posthoc_bookkeeping = false;
    std::string posthoc_detail;

    bool posthoc_ok() const {
        return posthoc_edge_disjoint && posthoc_no_forbidden && posthoc_bookkeeping;
    }
};

class ProcessEngine {
public:
    enum class Status : char { Available, Chosen, Dead };

    ProcessEngine(const HostGraph& G, const std::vector<Triple>& A0) : n_(G.n) {
        edge_id_.assign(static_cast<std::size_t>(n_) * n_, -1);
        for (const auto& [u, v] : G.edges) {
            int id = static_cast<int>(edge_u_.size());
            edge_id_[static_cast<std::size_t>(u) * n_ + v] = id;
            edge_id_[static_cast<std::size_t>(v) * n_ + u] = id;
            edge_u_.push_back(u);
            edge_v_.push_back(v);
        }
        covered_.assign(edge_u_.size(), 0);
        xe_.assign(edge_u_.size(), {});

        tris_ = A0;
        {
            std::unordered_set<std::uint64_t> seen;
            for (const auto& t : tris_) {
                if (!seen.insert(t.key()).second)
                    throw ParameterError("process: duplicate triangle in A0");
            }
        }
        status_.assign(tris_.size(), Status::Available);
        tri_edges_.resize(tris_.size());
        pos_in_xe_.assign(tris_.size(), {-1, -1, -1});
        pos_in_avail_.assign(tris_.size(), -1);
        id_of_.reserve(tris_.size() * 2);
        for (std::size_t i = 0; i < tris_.size(); ++i) {
            const auto& t = tris_[i];
            for (int x = 0; x < 3; ++x) {
                Vertex a = t[x == 0 ? 1 : 0], b = t[x == 2 ? 1 : 2];
                // edges: (t1,t2), (t0,t2), (t0,t1) indexed by opposite vertex
                int eid = edge_of(t[(x + 1) % 3], t[(x + 2) % 3]);
                if (eid < 0) throw ParameterError("process: triangle edge not in G");
                tri_edges_[i][static_cast<std::size_t>(x)] = eid;
            }
            id_of_[t.key()] = static_cast<int>(i);
        }
        avail_.resize(tris_.size());
        for (std::size_t i = 0; i < tris_.size(); ++i) {
            avail_[i] = static_cast<int>(i);
            pos_in_avail_[i] = static_cast<int>(i);
            for (int x = 0; x < 3; ++x) {
                int eid = tri_edges_[i][static_cast<std::size_t>(x)];
                pos_in_xe_[i][static_cast<std::size_t>(x)] =
                    static_cast<int>(xe_[static_cast<std::size_t>(eid)].size());
                xe_[static_cast<std::size_t>(eid)].push_back(static_cast<int>(i));
            }
        }
        chosen_by_vertex_.assign(n_, {});
        chosen_at_edge_.assign(edge_u_.size(), -1);
    }

    Vertex n() const { return n_; }
    std::size_t edge_count() const { return edge_u_.size(); }
    std::size_t triangle_count() const { return tris_.size(); }
    const Triple& triple(int id) const { return tris_[static_cast<std::size_t>(id)]; }
    Status status(int id) const { return status_[static_cast<std::size_t>(id)]; }
    std::int64_t steps() const { return static_cast<std::int64_t>(chosen_order_.size()); }
    const std::vector<int>& chosen_order() const { return chosen_order_; }
    std::int64_t available_count() const { return static_cast<std::int64_t>(avail_.size()); }

    int triangle_id(const Triple& t) const {
        auto it = id_of_.find(t.key());
        return it == id_of_.end() ? -1 : it->second;
    }

    int edge_of(Vertex u, Vertex v) const {
        if (u >= n_ || v >= n_) return -1;
        return edge_id_[static_cast<std::size_t>(u) * n_ + v];
    }

    bool edge_covered(Vertex u, Vertex v) const {
        int e = edge_of(u, v);
        return e >= 0 && covered_[static_cast<std::size_t>(e)];
    }

    const std::vector<int>& fan(int edge_id) const {
        return xe_[static_cast<std::size_t>(edge_id)];
    }

    const std::vector<int>& chosen_at_vertex(Vertex v) const {
        return chosen_by_vertex_[v];
    }

    // chosen triangle through the edge u-v, or -1
    int chosen_through(Vertex u, Vertex v) const {
        int e = edge_of(u, v);
        return e < 0 ? -1 : chosen_at_edge_[static_cast<std::size_t>(e)];
    }

    // Exact threat set of an available triangle (edge sharers plus
    // configuration partners reported by the backend).
    std::vector<int> threat_set(int tri, const ForbiddenBackend& backend) const {
        if (tri < 0 || static_cast<std::size_t>(tri) >= tris_.size())
            throw ParameterError("threat_set: no such triangle");
        if (status(tri) != Status::Available)
            throw ParameterError("threat_set: triangle is not available");
        std::vector<int> out;
        for (int x = 0; x < 3; ++x)
            for (int other : xe_[static_cast<std::size_t>(
                     tri_edges_[static_cast<std::size_t>(tri)][static_cast<std::size_t>(x)])])
                if (other != tri) out.push_back(other);
        backend.threat_extras(tri, out);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    ProcessResult run(ForbiddenBackend& backend, const ProcessOptions& opt) {
        backend.attach(*this);
        ProcessResult res;
        res.E0 = static_cast<std::int64_t>(edge_u_.size());
        res.A0 = static_cast<std::int64_t>(tris_.size());
        res.J_sizes = backend.family_sizes();

        Trajectory traj;
        traj.E0 = static_cast<double>(res.E0);
        traj.A0 = static_cast<double>(res.A0);
        traj.n = static_cast<double>(n_);
        traj.C_good = opt.C_good;
        int g_max = 6;
        for (const auto& [j, cnt] : res.J_sizes) {
            traj.J[j] = static_cast<double>(cnt);
            g_max = std::max(g_max, j);
        }
        traj.B = opt.B > 0 ? opt.B : 2.0 * g_max;

        std::int64_t tau = res.E0 / 3;
        if (opt.beta > 0)
            tau = static_cast<std::int64_t>(
                std::ceil((1.0 - std::pow(static_cast<double>(n_), -opt.beta)) *
                          static_cast<double>(res.E0) / 3.0));
        if (opt.coverage > 0)
            tau = std::min<std::int64_t>(
                tau, static_cast<std::int64_t>(opt.coverage * static_cast<double>(res.E0) / 3.0));
        if (opt.max_steps >= 0) tau = std::min(tau, opt.max_steps);
        res.tau_cut = tau;

        const std::int64_t every =
            opt.checkpoint_every > 0 ? opt.checkpoint_every
                                     : std::max<std::int64_t>(1, res.E0 / 300);
        auto pick_rng = SeedSequence(opt.seed).stream("process/pick");
        auto sample_rng = SeedSequence(opt.seed).stream("process/trace-sample");

        if (opt.record_trace) res.trace.push_back(trace_row(0, traj, backend, sample_rng, opt));

        std::vector<char> in_removal(tris_.size(), 0);
        std::vector<int> removal, forced;
        while (steps() < tau) {
            if (avail_.empty()) {
                res.outcome = ProcessOutcome::Starved;
                break;
            }
            const int r = static_cast<int>(pick_rng.below(avail_.size()));
            const int star = avail_[static_cast<std::size_t>(r)];

            removal.clear();
            forced.clear();
            removal.push_back(star);
            in_removal[static_cast<std::size_t>(star)] = 1;
            for (int x = 0; x < 3; ++x)
                for (int other : xe_[static_cast<std::size_t>(
                         tri_edges_[static_cast<std::size_t>(star)][static_cast<std::size_t>(x)])])
                    if (!in_removal[static_cast<std::size_t>(other)]) {
                        in_removal[static_cast<std::size_t>(other)] = 1;
                        removal.push_back(other);
                    }

            // mark chosen before asking the backend for forced removals
            status_[static_cast<std::size_t>(star)] = Status::Chosen;
            chosen_order_.push_back(star);
            const Triple& st = tris_[static_cast<std::size_t>(star)];
            for (int x = 0; x < 3; ++x) chosen_by_vertex_[st[x]].push_back(star);
            for (int x = 0; x < 3; ++x) {
                int eid = tri_edges_[static_cast<std::size_t>(star)][static_cast<std::size_t>(x)];
                if (covered_[static_cast<std::size_t>(eid)])
                    throw InvariantError("process: chose a triangle on a covered edge");
                covered_[static_cast<std::size_t>(eid)] = 1;
                chosen_at_edge_[static_cast<std::size_t>(eid)] = star;
                ++covered_count_;
            }
            backend.on_choose(star, forced);
            for (int f : forced)
                if (!in_removal[static_cast<std::size_t>(f)]) {
                    in_removal[static_cast<std::size_t>(f)] = 1;
                    removal.push_back(f);
                }

            // canonical removal: positions in the available array, descending
            std::vector<std::pair<int, int>> by_pos;
            by_pos.reserve(removal.size());
            for (int tri : removal)
                by_pos.emplace_back(pos_in_avail_[static_cast<std::size_t>(tri)], tri);
            std::sort(by_pos.begin(), by_pos.end(),
                      [](const auto& a, const auto& b) { return a.first > b.first; });
            for (const auto& [pos, tri] : by_pos) {
                remove_from_avail(tri);
                remove_from_fans(tri);
                if (tri != star) {
                    status_[static_cast<std::size_t>(tri)] = Status::Dead;
                    backend.on_die(tri);
                }
                in_removal[static_cast<std::size_t>(tri)] = 0;
            }

            if (covered_count_ != 3 * steps())
                throw InvariantError("process: |E(t)| bookkeeping broken");

            if (opt.record_trace && (steps() % every == 0 || steps() == tau))
                res.trace.push_back(trace_row(steps(), traj, backend, sample_rng, opt));

            if (opt.availability_spot_checks && steps() % std::max<std::int64_t>(1, tau / 8) == 0)
                spot_check_availability(backend);
        }
        if (opt.record_trace &&
            (res.trace.empty() || res.trace.back().t != steps()))
            res.trace.push_back(trace_row(steps(), traj, backend, sample_rng, opt));

        res.steps = steps();
        for (int id : chosen_order_) res.chosen.push_back(tris_[static_cast<std::size_t>(id)]);

        // post-hoc verification, sharing no code with the incremental index
        {
            TripleSystem sys(n_, res.chosen);
            res.posthoc_edge_disjoint =
                sys.size() == res.chosen.size() && sys.is_partial_steiner();
            std::string why;
            res.posthoc_no_forbidden = backend.posthoc_clean(sys, why);
            if (!res.posthoc_no_forbidden) res.posthoc_detail = why;
            res.posthoc_bookkeeping = covered_count_ == 3 * steps();
        }
        return res;
    }

    // Recompute availability from the definition for a sample of triangles.
    void spot_check_availability(const ForbiddenBackend& backend) const {
        for (std::size_t i = 0; i < tris_.size(); i += std::max<std::size_t>(1, tris_.size() / 64)) {
            const int id = static_cast<int>(i);
            bool edges_free = true;
            for (int x = 0; x < 3; ++x)
                edges_free = edges_free &&
                             !covered_[static_cast<std::size_t>(
                                 tri_edges_[i][static_cast<std::size_t>(x)])];
            bool should_be_available =
                status_[i] != Status::Chosen && edges_free && !backend.would_complete(id);
            bool is_available = status_[i] == Status::Available;
            if (status_[i] == Status::Chosen) continue;
            if (should_be_available != is_available)
                throw InvariantError("process: availability spot check failed");
        }
    }

private:
    friend class ExplicitBackend;
    friend class PaschBackend;

    void remove_from_avail(int tri) {
        int pos = pos_in_avail_[static_cast<std::size_t>(tri)];
        int last = avail_.back();
        avail_[static_cast<std::size_t>(pos)] = last;
        pos_in_avail_[static_cast<std::size_t>(last)] = pos;
        avail_.pop_back();
        pos_in_avail_[static_cast<std::size_t>(tri)] = -1;
    }

    void remove_from_fans(int tri) {
        for (int x = 0; x < 3; ++x) {
            int eid = tri_edges_[static_cast<std::size_t>(tri)][static_cast<std::size_t>(x)];
            auto& lst = xe_[static_cast<std::size_t>(eid)];
            int pos = pos_in_xe_[static_cast<std::size_t>(tri)][static_cast<std::size_t>(x)];
            int last = lst.back();
            lst[static_cast<std::size_t>(pos)] = last;
            // fix the moved triangle's position entry for this edge
            for (int y = 0; y < 3; ++y)
                if (tri_edges_[static_cast<std::size_t>(last)][static_cast<std::size_t>(y)] == eid)
                    pos_in_xe_[static_cast<std::size_t>(last)][static_cast<std::size_t>(y)] = pos;
            lst.pop_back();
            pos_in_xe_[static_cast<std::size_t>(tri)][static_cast<std::size_t>(x)] = -1;
        }
    }

    TraceRow trace_row(std::int64_t t, const Trajectory& traj, ForbiddenBackend& backend,
                       Rng& sample_rng, const ProcessOptions& opt) {
        TraceRow row;
        row.t = t;
        const double td = static_cast<double>(t);
        row.p = traj.p(td);
        row.rho = traj.rho(td);
        row.f_edge = traj.f_edge(td);
        row.f_threat = traj.f_threat(td);
        row.A_size = available_count();
        bool first = true;
        std::int64_t sum = 0;
        for (std::size_t e = 0; e < xe_.size(); ++e) {
            if (covered_[e]) continue;
            std::int64_t sz = static_cast<std::int64_t>(xe_[e].size());
            if (first || sz < row.Xe_min) row.Xe_min = sz;
            if (first || sz > row.Xe_max) row.Xe_max = sz;
            first = false;
            sum += sz;
        }
        std::int64_t uncovered = static_cast<std::int64_t>(xe_.size()) - covered_count_;
        row.Xe_mean = uncovered > 0 ? static_cast<double>(sum) / static_cast<double>(uncovered) : 0;
        // sampled threat means
        if (!avail_.empty() && opt.threat_sample > 0) {
            std::int64_t tot = 0;
            int k = std::min<int>(opt.threat_sample, static_cast<int>(avail_.size()));
            for (int i = 0; i < k; ++i) {
                int tri = avail_[static_cast<std::size_t>(sample_rng.below(avail_.size()))];
                tot += static_cast<std::int64_t>(threat_set(tri, backend).size());
            }
            row.TT_mean_sampled = static_cast<double>(tot) / k;
        }
        row.dev_edge = row.f_edge > 0 ? row.Xe_mean / row.f_edge - 1.0 : 0.0;
        row.dev_threat =
            row.f_threat > 0 ? row.TT_mean_sampled / row.f_threat - 1.0 : 0.0;
        return row;
    }

    Vertex n_;
    std::vector<int> edge_id_;
    std::vector<Vertex> edge_u_, edge_v_;
    std::vector<char> covered_;
    std::int64_t covered_count_ = 0;
    std::vector<std::vector<int>> xe_;

    std::vector<Triple> tris_;
    std::unordered_map<std::uint64_t, int> id_of_;
    std::vector<Status> status_;
    std::vector<std::array<int, 3>> tri_edges_;
    std::vector<std::array<int, 3>> pos_in_xe_;
    std::vector<int> pos_in_avail_;
    std::vector<int> avail_;
    std::vector<int> chosen_order_;
    std::vector<std::vector<int>> chosen_by_vertex_;
    std::vector<int> chosen_at_edge_;
};

// ---------------------------------------------------------------------------
// Explicit backend: maintains per-configuration chosen counts and an active
// flag (a configuration dies with its first dead member).

class ExplicitBackend : public ForbiddenBackend {
public:
    explicit ExplicitBackend(const ForbiddenFamily& fam) : fam_(&fam) {
        if (!fam.redundancy_free())
            throw ParameterError("process: forbidden family must be redundancy-free");
    }

    void attach(ProcessEngine& eng) override {
        ForbiddenBackend::attach(eng);
        const auto& cfgs = fam_->configs();
        members_.assign(cfgs.size(), {});
        chosen_cnt_.assign(cfgs.size(), 0);
        active_.assign(cfgs.size(), 1);
        tri_configs_.assign(eng.triangle_count(), {});
        for (std::size_t ci = 0; ci < cfgs.size(); ++ci) {
            for (const auto& t : cfgs[ci]) {
                int id = eng.triangle_id(t);
                if (id < 0)
                    throw ParameterError(
                        "process: forbidden configuration uses a triangle outside A0");
                members_[ci].push_back(id);
                tri_configs_[static_cast<std::size_t>(id)].push_back(static_cast<int>(ci));
            }
        }
    }

    void on_choose(int tri, std::vector<int>& forced) override {
        for (int ci : tri_configs_[static_cast<std::size_t>(tri)]) {
            if (!active_[static_cast<std::size_t>(ci)]) continue;
            int cnt = ++chosen_cnt_[static_cast<std::size_t>(ci)];
            int size = static_cast<int>(members_[static_cast<std::size_t>(ci)].size());
            if (cnt == size)
                throw InvariantError("process: a forbidden configuration was completed");
            if (cnt == size - 1) {
                for (int m : members_[static_cast<std::size_t>(ci)])
                    if (eng_->status(m) == ProcessEngine::Status::Available)
                        forced.push_back(m);
            }
        }
    }

    void on_die(int tri) override {
        for (int ci : tri_configs_[static_cast<std::size_t>(tri)])
            active_[static_cast<std::size_t>(ci)] = 0;
    }

    void threat_extras(int tri, std::vector<int>& out) const override {
        for (int ci : tri_configs_[static_cast<std::size_t>(tri)]) {
            if (!active_[static_cast<std::size_t>(ci)]) continue;
            int size = static_cast<int>(members_[static_cast<std::size_t>(ci)].size());
            if (chosen_cnt_[static_cast<std::size_t>(ci)] != size - 2) continue;
            for (int m : members_[static_cast<std::size_t>(ci)])
                if (m != tri && eng_->status(m) == ProcessEngine::Status::Available)
                    out.push_back(m);
        }
    }

    std::int64_t count_partial(int tri, int j, int c) const override {
        std::int64_t cnt = 0;
        for (int ci : tri_configs_[static_cast<std::size_t>(tri)]) {
            if (!active_[static_cast<std::size_t>(ci)]) continue;
            if (static_cast<int>(members_[static_cast<std::size_t>(ci)].size()) != j - 2)
                continue;
            if (chosen_cnt_[static_cast<std::size_t>(ci)] == c) ++cnt;
        }
        return cnt;
    }

    std::map<int, std::int64_t> family_sizes() const override {
        return fam_->family_sizes();
    }

    bool would_complete(int tri) const override {
        for (int ci : tri_configs_[static_cast<std::size_t>(tri)]) {
            bool all_chosen = true;
            for (int m : members_[static_cast<std::size_t>(ci)])
                if (m != tri && eng_->status(m) != ProcessEngine::Status::Chosen)
                    all_chosen = false;
            if (all_chosen) return true;
        }
        return false;
    }

    bool posthoc_clean(const TripleSystem& chosen, std::string& why) const override {
        for (const auto& cfg : fam_->configs()) {
            bool inside = true;
            for (const auto& t : cfg) inside = inside && chosen.contains(t);
            if (inside) {
                why = "forbidden configuration fully chosen";
                return false;
            }
        }
        return true;
    }

    bool supports_crude_stats() const override { return true; }

    // Crude partial-configuration statistics, computed on demand.
    std::int64_t z_pair_config(int T, int Tp, int j, int c) const {
        std::int64_t cnt = 0;
        for (int ci : tri_configs_[static_cast<std::size_t>(T)]) {
            if (!valid_partial(ci, T, j, c)) continue;
            for (int m : members_[static_cast<std::size_t>(ci)])
                if (m == Tp) ++cnt;
        }
        return cnt;
    }

    std::int64_t z_edge_tri(int edge_id_u, int edge_id_v, int T) const {
        // number of configurations whose available part is {T, T'} with the
        // edge (u,v) inside T'
        std::int64_t cnt = 0;
        for (int ci : tri_configs_[static_cast<std::size_t>(T)]) {
            int other = exactly_two_available(ci, T);
            if (other < 0) continue;
            const Triple& t = eng_->triple(other);
            if (t.contains(static_cast<Vertex>(edge_id_u)) &&
                t.contains(static_cast<Vertex>(edge_id_v)))
                ++cnt;
        }
        return cnt;
    }

    std::int64_t z_shared_threat(int T, int Tp) const {
        // ordered pairs (E, E') sharing the available partner T*
        std::map<int, std::int64_t> mine, theirs;
        collect_partners(T, mine);
        collect_partners(Tp, theirs);
        std::int64_t cnt = 0;
        for (const auto& [star, a] : mine) {
            if (star == T || star == Tp) continue;
            auto it = theirs.find(star);
            if (it == theirs.end()) continue;
            cnt += a * it->second;
            if (T == Tp) cnt -= a; // exclude E = E'
        }
        return cnt;
    }

    std::int64_t z_redundant(int T, int j, int c_minus_1) const {
        std::int64_t cnt = 0;
        for (int ci : tri_configs_[static_cast<std::size_t>(T)]) {
            if (!valid_partial(ci, T, j, c_minus_1)) continue;
            // available part of E
            std::vector<int> avail;
            for (int m : members_[static_cast<std::size_t>(ci)])
                if (eng_->status(m) == ProcessEngine::Status::Available) avail.push_back(m);
            // count configurations E' with exactly two available members, both in E
            std::set<int> seen;
            for (int a : avail)
                for (int cj : tri_configs_[static_cast<std::size_t>(a)]) {
                    if (cj == ci || seen.count(cj)) continue;
                    if (members_[static_cast<std::size_t>(cj)].size() < 3) continue;
                    int other = exactly_two_available(cj, a);
                    if (other < 0) continue;
                    bool both_in = std::find(avail.begin(), avail.end(), other) != avail.end();
                    if (both_in) {
                        seen.insert(cj);
                        ++cnt;
                    }
                }
        }
        return cnt;
    }

private:
    bool valid_partial(int ci, int T, int j, int c) const {
        if (!active_[static_cast<std::size_t>(ci)]) return false;
        if (static_cast<int>(members_[static_cast<std::size_t>(ci)].size()) != j - 2)
            return false;
        if (chosen_cnt_[static_cast<std::size_t>(ci)] != c) return false;
        return eng_->status(T) == ProcessEngine::Status::Available;
    }

    // if the configuration has exactly two available members {T, other} and
    // all the rest chosen, returns other; else -1
    int exactly_two_available(int ci, int T) const {
        if (!active_[static_cast<std::size_t>(ci)]) return -1;
        int other = -1, avail_cnt = 0;
        for (int m : members_[static_cast<std::size_t>(ci)]) {
            if (eng_->status(m) == ProcessEngine::Status::Available) {
                ++avail_cnt;
                if (m != T) other = m;
            }
        }
        bool has_T = false;
        for (int m : members_[static_cast<std::size_t>(ci)]) has_T = has_T || m == T;
        return (has_T && avail_cnt == 2 && other >= 0) ? other : -1;
    }

    void collect_partners(int T, std::map<int, std::int64_t>& out) const {
        for (int ci : tri_configs_[static_cast<std::size_t>(T)]) {
            int other = exactly_two_available(ci, T);
            if (other >= 0) ++out[other];
        }
    }

    const ForbiddenFamily* fam_;
    std::vector<std::vector<int>> members_;
    std::vector<int> chosen_cnt_;
    std::vector<char> active_;
    std::vector<std::vector<int>> tri_configs_;
};

// ---------------------------------------------------------------------------
// Structural backend for the family of all Erdos 6-configurations (Pasch
// configurations) of a complete host. Nothing is materialized; completions
// are found by scanning chosen triangles through shared vertices.

class PaschBackend : public ForbiddenBackend {
public:
    void attach(ProcessEngine& eng) override {
        ForbiddenBackend::attach(eng);
        if (eng.triangle_count() !=
            static_cast<std::size_t>(eng.n()) * (eng.n() - 1) * (eng.n() - 2) / 6)
            throw ParameterError(
                "pasch backend: requires the complete triangle set of K_n");
    }

    void on_choose(int star, std::vector<int>& forced) override {
        // Pasch blocks through T* = {p,q,r}: {p,d,e},{q,d,f},{r,e,f}. With two
        // of them already chosen the fourth (through the remaining vertex of
        // T*) dies if available.
        for_completions(star, [&](int fourth, bool fourth_available) {
            if (fourth_available) forced.push_back(fourth);
        });
    }

    void threat_extras(int tri, std::vector<int>& out) const override {
        const_cast<PaschBackend*>(this)->for_completions(
            tri, [&](int fourth, bool fourth_available) {
                if (fourth_available) out.push_back(fourth);
            });
    }

    std::int64_t count_partial(int tri, int j, int c) const override {
        if (j != 6) return 0;
        if (c != 2) return -1; // only the threat-relevant count is tracked
        std::int64_t cnt = 0;
        const_cast<PaschBackend*>(this)->for_completions(
            tri, [&](int, bool fourth_available) {
                if (fourth_available) ++cnt;
            });
        return cnt;
    }

    std::map<int, std::int64_t> family_sizes() const override {
        // 30 labeled pasch configurations per 6-subset of the complete host
        double n = static_cast<double>(eng_->n());
        double c6 = n * (n - 1) * (n - 2) * (n - 3) * (n - 4) * (n - 5) / 720.0;
        return {{6, static_cast<std::int64_t>(30.0 * c6 + 0.5)}};
    }

    bool would_complete(int tri) const override {
        bool found = false;
        const_cast<PaschBackend*>(this)->for_completions_of_candidate(
            tri, [&](int fourth) {
                if (eng_->status(fourth) == ProcessEngine::Status::Chosen) found = true;
            });
        return found;
    }

    bool posthoc_clean(const TripleSystem& chosen, std::string& why) const override {
        auto p = scan_pasch(chosen);
        if (p.has_value()) {
            why = "pasch configuration fully chosen";
            return false;
        }
        return true;
    }

private:
    // Enumerates Pasch completions through a triangle `anchor` that has just
    // been chosen (or is a candidate): pairs (U, V) of chosen triangles
    // through two distinct vertices of anchor, meeting each other in one
    // vertex off the anchor; reports the determined fourth block.
    template <typename Fn>
    void for_completions(int anchor, Fn&& fn) {
        const Triple& T = eng_->triple(anchor);
        for (int pi = 0; pi < 3; ++pi) {
            for (int qi = pi + 1; qi < 3; ++qi) {
                Vertex p = T[pi], q = T[qi], r = T[3 - pi - qi];
                for (int u : eng_->chosen_at_vertex(p)) {
                    if (u == anchor) continue;
                    const Triple& U = eng_->triple(u);
                    if (U.contains(q) || U.contains(r)) continue;
                    for (int v : eng_->chosen_at_vertex(q)) {
                        if (v == anchor || v == u) continue;
                        const Triple& V = eng_->triple(v);
                        if (V.contains(p) || V.contains(r)) continue;
                        if (shared_vertices(U, V) != 1) continue;
                        Vertex d = shared_vertex(U, V);
                        if (T.contains(d)) continue;
                        Vertex e = other_vertex(U, p, d);
                        Vertex f = other_vertex(V, q, d);
                        if (e == f || T.contains(e) || T.contains(f)) continue;
                        int fourth = eng_->triangle_id(Triple(r, e, f));
                        if (fourth < 0) continue;
                        fn(fourth,
                           eng_->status(fourth) == ProcessEngine::Status::Available);
                    }
                }
            }
        }
    }

    // Pasch configurations containing `cand` whose other three blocks might be
    // chosen: same pair scan, reporting the fourth block id regardless of its
    // status (used by the availability spot check).
    template <typename Fn>
    void for_completions_of_candidate(int cand, Fn&& fn) {
        for_completions(cand, [&](int fourth, bool) { fn(fourth); });
    }

    static Vertex shared_vertex(const Triple& a, const Triple& b) {
        for (int i = 0; i < 3; ++i)
            if (b.contains(a[i])) return a[i];
        return a[0];
    }
    static Vertex other_vertex(const Triple& t, Vertex not1, Vertex not2) {
        for (int i = 0; i < 3; ++i)
            if (t[i] != not1 && t[i] != not2) return t[i];
        return t[0];
    }
};

// ---------------------------------------------------------------------------
// Convenience drivers.

inline ProcessResult run_process(const HostGraph& G, const std::vector<Triple>& A0,
                                 const ForbiddenFamily& F, const ProcessOptions& opt) {
    ProcessEngine eng(G, A0);
    ExplicitBackend backend(F);
    return eng.run(backend, opt);
}

inline ProcessResult run_process_pasch(const HostGraph& G, const std::vector<Triple>& A0,
                                       const ProcessOptions& opt) {
    ProcessEngine eng(G, A0);
    PaschBackend backend;
    return eng.run(backend, opt);
}

inline std::vector<Triple> all_triangles(Vertex n) {
    std::vector<Triple> ts;
    for (Vertex a = 0; a < n; ++a)
        for (Vertex b = a + 1; b < n; ++b)
            for (Vertex c = b + 1; c < n; ++c) ts.emplace_back(a, b, c);
    return ts;
}

// ---------------------------------------------------------------------------
// Goodness checks (the with-probability-1 bullets on concrete inputs).

struct GoodnessReport {
    bool edge_regular = true;
    std::string edge_witness;
    bool config_regular = true;
    std::string config_witness;
    bool a_large = true;
    bool e_large = true;
    bool family_small = true;
    std::string family_witness;
    bool redundancy_free = true;
    bool pass = false;
};

inline GoodnessReport check_goodness(const HostGraph& G, const std::vector<Triple>& A0,
                                     const ForbiddenFamily& F, double C_param,
                                     double beta) {
    if (C_param < 1) throw ParameterError("check_goodness: C must be >= 1");
    GoodnessReport rep;
    const double n = static_cast<double>(G.n);
    const double E = static_cast<double>(G.edges.size());
    const double A = static_cast<double>(A0.size());
    const double tol = std::pow(n, -1.0 / C_param);

    std::unordered_map<std::uint64_t, std::int64_t> fan;
    for (const auto& t : A0)
        for (auto k : edge_keys(t)) ++fan[k];
    const double target = 3.0 * A / E;
    for (const auto& [u, v] : G.edges) {
        auto it = fan.find(edge_key(u, v));
        double cnt = it == fan.end() ? 0.0 : static_cast<double>(it->second);
        if (std::abs(cnt - target) > tol * target) {
            rep.edge_regular = false;
            rep.edge_witness = "edge " + std::to_string(u) + "-" + std::to_string(v) +
                               " in " + std::to_string(cnt) + " triangles vs (1+-" +
                               format_real_short(tol) + ")*" + format_real_short(target);
            break;
        }
    }

    auto sizes = F.family_sizes();
    std::unordered_map<std::uint64_t, std::map<int, std::int64_t>> per_tri;
    for (const auto& cfg : F.configs()) {
        int j = static_cast<int>(cfg.size()) + 2;
        for (const auto& t : cfg) ++per_tri[t.key()][j];
    }
    for (const auto& [j, Jj] : sizes) {
        double center = (j - 2) * static_cast<double>(Jj) / A;
        double slack = tol * std::pow(A / E, j - 3);
        for (const auto& t : A0) {
            std::int64_t mine = 0;
            auto it = per_tri.find(t.key());
            if (it != per_tri.end()) {
                auto jt = it->second.find(j);
                if (jt != it->second.end()) mine = jt->second;
            }
            if (std::abs(static_cast<double>(mine) - center) > slack) {
                rep.config_regular = false;
                rep.config_witness = "triangle in " + std::to_string(mine) +
                                     " configurations at j=" + std::to_string(j) +
                                     " vs " + format_real_short(center) + "+-" +
                                     format_real_short(slack);
                break;
            }
        }
        if (!rep.config_regular) break;
        double cap = C_param * std::pow(A, j - 2) / std::pow(E, j - 3);
        if (static_cast<double>(Jj) > cap) {
            rep.family_small = false;
            rep.family_witness = "|J_" + std::to_string(j) + "| = " + std::to_string(Jj) +
                                 " above " + format_real_short(cap);
        }
    }
    rep.a_large = A >= std::pow(n, 1.0 - beta) * E;
    rep.e_large = E >= std::pow(n, 2.0 - beta);
    rep.redundancy_free = F.redundancy_free();
    rep.pass = rep.edge_regular && rep.config_regular && rep.a_large && rep.e_large &&
               rep.family_small && rep.redundancy_free;
    return rep;
}

// Trajectory CSV with the stable header; reals carry 17 significant digits.
inline void write_trace_csv(std::ostream& os, const ProcessResult& res) {
    os << "t,p,rho,f_edge,f_threat,A_size,Xe_min,Xe_mean,Xe_max,TT_mean_sampled,"
          "dev_edge,dev_threat\n";
    char buf[64];
    auto real = [&](double x) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return std::string(buf);
    };
    for (const auto& r : res.trace) {
        os << r.t << ',' << real(r.p) << ',' << real(r.rho) << ',' << real(r.f_edge)
           << ',' << real(r.f_threat) << ',' << r.A_size << ',' << r.Xe_min << ','
           << real(r.Xe_mean) << ',' << r.Xe_max << ',' << real(r.TT_mean_sampled)
           << ',' << real(r.dev_edge) << ',' << real(r.dev_threat) << '\n';
    }
}

} // namespace hgsts

#endif
