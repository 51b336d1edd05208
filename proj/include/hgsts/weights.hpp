#ifndef HGSTS_WEIGHTS_HPP
#define HGSTS_WEIGHTS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hgsts/core.hpp"
#include "hgsts/rng.hpp"

namespace hgsts {

// ---------------------------------------------------------------------------
// Weight systems over an abstract ground set {0..m-1}.

class WeightSystem {
public:
    explicit WeightSystem(std::vector<double> pi) : pi_(std::move(pi)) {
        for (double x : pi_)
            if (!(x >= 0.0)) throw ParameterError("weight system: pi values must be >= 0");
    }

    std::size_t ground_size() const { return pi_.size(); }
    double pi(int e) const { return pi_[static_cast<std::size_t>(e)]; }

    void check_element(int e) const {
        if (e < 0 || static_cast<std::size_t>(e) >= pi_.size())
            throw ParameterError("element outside ground set");
    }

private:
    std::vector<double> pi_;
};

// Multiset of configurations (subsets of the ground set), each of size <= d.
struct ConfigMultiset {
    std::vector<std::pair<std::vector<int>, std::int64_t>> configs; // sorted elems, multiplicity

    static ConfigMultiset of(const std::vector<std::vector<int>>& raw) {
        std::map<std::vector<int>, std::int64_t> acc;
        for (auto cfg : raw) {
            std::sort(cfg.begin(), cfg.end());
            cfg.erase(std::unique(cfg.begin(), cfg.end()), cfg.end());
            ++acc[cfg];
        }
        ConfigMultiset out;
        for (auto& [k, v] : acc) out.configs.emplace_back(k, v);
        return out;
    }

    int max_size() const {
        std::size_t d = 0;
        for (const auto& [cfg, mult] : configs) d = std::max(d, cfg.size());
        return static_cast<int>(d);
    }

    bool empty() const { return configs.empty(); }
};

namespace detail {
inline bool subset_sorted(const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}
} // namespace detail

// psi(X, H) = sum over configs S >= H (with multiplicity) of prod pi over S\H.
inline double psi(const WeightSystem& ws, const ConfigMultiset& X,
                  const std::vector<int>& H_in) {
    std::vector<int> H = H_in;
    std::sort(H.begin(), H.end());
    H.erase(std::unique(H.begin(), H.end()), H.end());
    for (int e : H) ws.check_element(e);
    // Kahan summation: psi can be a long sum of small products.
    double sum = 0.0, comp = 0.0;
    for (const auto& [cfg, mult] : X.configs) {
        for (int e : cfg) ws.check_element(e);
        if (!detail::subset_sorted(H, cfg)) continue;
        double prod = static_cast<double>(mult);
        for (int e : cfg)
            if (!std::binary_search(H.begin(), H.end(), e)) prod *= ws.pi(e);
        double y = prod - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

struct KappaResult {
    double value = 0.0;
    std::vector<int> argmax; // lexicographically least maximizer
};

// Maximum of psi over planted sets H. Only H that are subsets of some
// configuration (plus the empty set) can matter.
inline KappaResult kappa(const WeightSystem& ws, const ConfigMultiset& X) {
    std::map<std::vector<int>, char> seen;
    seen[{}] = 1;
    for (const auto& [cfg, mult] : X.configs) {
        const std::size_t s = cfg.size();
        for (std::uint32_t mask = 1; mask < (1u << s); ++mask) {
            std::vector<int> sub;
            for (std::size_t i = 0; i < s; ++i)
                if (mask & (1u << i)) sub.push_back(cfg[i]);
            seen[sub] = 1;
        }
    }
    KappaResult best;
    bool first = true;
    for (const auto& [H, flag] : seen) { // std::map iterates in lexicographic order
        double v = psi(ws, X, H);
        if (first || v > best.value) {
            best.value = v;
            best.argmax = H;
            first = false;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Monte-Carlo sanity check of the moment tail bound: with inclusion
// probabilities dominated by C * prod(pi), the count X of fully-included
// configurations satisfies Pr[X >= gamma*kappa] <= C*(ds)^(ds)/gamma^s.

struct TailBoundResult {
    double empirical_rate = 0.0;
    double bound = 0.0;
    double kappa_value = 0.0;
    bool sampler_check_ok = true;   // q <= C*pi on singletons and pairs
    bool violation = false;         // rate exceeds bound + 3 standard errors
    std::string note;
};

inline TailBoundResult tail_bound_mc(const WeightSystem& ws, const ConfigMultiset& X,
                                     const std::vector<double>& q, double C,
                                     double gamma, int s, int trials,
                                     std::uint64_t seed) {
    if (trials < 100) throw ParameterError("tail_bound_mc: trials must be >= 100");
    if (q.size() != ws.ground_size())
        throw ParameterError("tail_bound_mc: sampler size mismatch");
    if (gamma <= 0 || s < 1) throw ParameterError("tail_bound_mc: gamma > 0, s >= 1");

    TailBoundResult res;
    const std::size_t m = ws.ground_size();
    for (std::size_t i = 0; i < m && res.sampler_check_ok; ++i) {
        if (q[i] > C * ws.pi(static_cast<int>(i)) + 1e-12) {
            res.sampler_check_ok = false;
            res.note = "singleton sampler bound fails at element " + std::to_string(i);
        }
        for (std::size_t j = i + 1; j < m && res.sampler_check_ok; ++j) {
            if (q[i] * q[j] >
                C * ws.pi(static_cast<int>(i)) * ws.pi(static_cast<int>(j)) + 1e-12) {
                res.sampler_check_ok = false;
                res.note = "pair sampler bound fails at (" + std::to_string(i) + "," +
                           std::to_string(j) + ")";
            }
        }
    }

    const int d = std::max(1, X.max_size());
    res.kappa_value = kappa(ws, X).value;
    const double ds = static_cast<double>(d) * s;
    res.bound = C * std::pow(ds, ds) / std::pow(gamma, s);

    SeedSequence seq(seed);
    auto rng = seq.stream("tailbound/mc");
    const double threshold = gamma * res.kappa_value;
    int exceed = 0;
    std::vector<char> in(m);
    for (int t = 0; t < trials; ++t) {
        for (std::size_t i = 0; i < m; ++i) in[i] = rng.bernoulli(q[i]) ? 1 : 0;
        std::int64_t count = 0;
        for (const auto& [cfg, mult] : X.configs) {
            bool all = true;
            for (int e : cfg) all = all && in[static_cast<std::size_t>(e)];
            if (all) count += mult;
        }
        // Exceedance needs a positive count, so kappa = 0 (empty family)
        // reports rate 0 rather than a vacuous 1.
        if (count > 0 && static_cast<double>(count) >= threshold) ++exceed;
    }
    res.empirical_rate = static_cast<double>(exceed) / trials;
    double se = std::sqrt(std::max(res.empirical_rate * (1 - res.empirical_rate),
                                   1.0 / trials) /
                          trials);
    res.violation = res.empirical_rate > res.bound + 3 * se;
    return res;
}

// ---------------------------------------------------------------------------
// Vortex context and the WS0-WS4 well-spreadness checker.

class VortexContext {
public:
    // level_sets[0] must be the full vertex set; each later one a subset.
    VortexContext(Vertex n_vertices, std::vector<std::vector<Vertex>> level_sets)
        : n_vertices_(n_vertices) {
        if (level_sets.empty()) level_sets.push_back({});
        if (level_sets[0].size() != n_vertices_) {
            // normalize: U_0 is always the full vertex set
            level_sets[0].clear();
            for (Vertex v = 0; v < n_vertices_; ++v) level_sets[0].push_back(v);
        }
        member_.assign(level_sets.size(), std::vector<char>(n_vertices_, 0));
        sizes_.resize(level_sets.size());
        for (std::size_t i = 0; i < level_sets.size(); ++i) {
            for (Vertex v : level_sets[i]) {
                if (v >= n_vertices_) throw ParameterError("vortex: vertex out of range");
                if (i > 0 && !member_[i - 1][v])
                    throw ParameterError("vortex: level sets must be descending");
                member_[i][v] = 1;
            }
            sizes_[i] = level_sets[i].size();
        }
    }

    static VortexContext trivial(Vertex n_vertices) {
        return VortexContext(n_vertices, {{}});
    }

    int k() const { return static_cast<int>(member_.size()) - 1; }
    std::size_t level_size(int i) const { return sizes_[static_cast<std::size_t>(i)]; }
    std::size_t n() const { return sizes_.back(); }

    // Largest i such that all three vertices are in U_i.
    int lev(const Triple& t) const {
        int i = 0;
        while (i + 1 <= k() && member_[static_cast<std::size_t>(i + 1)][t[0]] &&
               member_[static_cast<std::size_t>(i + 1)][t[1]] &&
               member_[static_cast<std::size_t>(i + 1)][t[2]])
            ++i;
        return i;
    }

private:
    Vertex n_vertices_;
    std::vector<std::vector<char>> member_;
    std::vector<std::size_t> sizes_;
};

// v^j(R): minimum vertex count of a nonempty subset of an Erdos j-config.
inline int v_j_of(int j, int r_size) {
    if (r_size == 1 || r_size == j - 2) return r_size + 2;
    return r_size + 3;
}

struct WellSpreadWitness {
    std::string condition;
    std::string what;            // the R / (T,T') / (T,e) in question
    std::vector<int> profile;    // t_0..t_{k-1}
    double observed = 0;
    double allowed_base = 0;     // bound without the y/z factor
    double ratio = 0;            // observed / allowed_base
};

struct WellSpreadReport {
    bool ws0_pass = true;
    bool ws1_pass = true, ws2_pass = true, ws3_pass = true, ws4_pass = true;
    bool pass = true;
    double min_z = 0.0; // max ratio over WS1-WS3
    double min_y = 0.0; // max ratio over WS4
    WellSpreadWitness worst_ws1, worst_ws2, worst_ws3, worst_ws4;
    std::string ws0_witness;
};

namespace detail {

inline std::string triples_to_string(const std::vector<Triple>& ts) {
    std::string s;
    for (const auto& t : ts) {
        if (!s.empty()) s += ";";
        s += std::to_string(t[0]) + " " + std::to_string(t[1]) + " " + std::to_string(t[2]);
    }
    return s;
}

inline double profile_allowance(const VortexContext& ctx, int exponent,
                                const std::vector<int>& profile) {
    double val = std::pow(static_cast<double>(ctx.n()), exponent);
    for (std::size_t i = 0; i < profile.size(); ++i)
        val *= std::pow(static_cast<double>(ctx.level_size(static_cast<int>(i))),
                        profile[i]);
    return val;
}

} // namespace detail

// Exhaustive well-spreadness check. WS2 counts ordered pairs (E, E').
inline WellSpreadReport check_well_spread(const std::vector<std::vector<Triple>>& fam,
                                          int j, const VortexContext& ctx, double y,
                                          double z) {
    if (j < 4) throw ParameterError("check_well_spread: j must be >= 4");
    WellSpreadReport rep;
    const int k = ctx.k();

    std::vector<std::vector<Triple>> configs;
    configs.reserve(fam.size());
    for (auto cfg : fam) {
        std::sort(cfg.begin(), cfg.end());
        if (static_cast<int>(cfg.size()) != j - 2)
            throw ParameterError("check_well_spread: configuration size must be j-2");
        configs.push_back(std::move(cfg));
    }

    // WS0: edge-disjointness.
    for (const auto& cfg : configs) {
        auto c = Configuration::of(cfg);
        if (!c.edge_disjoint) {
            rep.ws0_pass = false;
            rep.ws0_witness = detail::triples_to_string(cfg);
            break;
        }
    }

    auto profile_of = [&](const std::vector<Triple>& ts, const std::vector<Triple>& minus) {
        std::vector<int> prof(static_cast<std::size_t>(std::max(k, 0)), 0);
        for (const auto& t : ts) {
            if (std::binary_search(minus.begin(), minus.end(), t)) continue;
            int l = ctx.lev(t);
            if (l < k) ++prof[static_cast<std::size_t>(l)];
        }
        return prof;
    };

    struct Tally {
        std::int64_t count = 0;
    };

    // WS1 and WS4: counts per (R, profile).
    std::map<std::pair<std::vector<Triple>, std::vector<int>>, Tally> ws1;
    for (const auto& cfg : configs) {
        const int s = static_cast<int>(cfg.size());
        for (unsigned mask = 1; mask < (1u << s); ++mask) {
            std::vector<Triple> r;
            for (int i = 0; i < s; ++i)
                if (mask & (1u << i)) r.push_back(cfg[static_cast<std::size_t>(i)]);
            ++ws1[{r, profile_of(cfg, r)}].count;
        }
    }
    auto consider = [&](const std::string& cond, const std::string& what,
                        const std::vector<int>& prof, double observed, double base,
                        double factor, bool& pass_flag, WellSpreadWitness& worst,
                        double& min_param) {
        double ratio = base > 0 ? observed / base : (observed > 0 ? 1e300 : 0.0);
        if (ratio > min_param) min_param = ratio;
        if (ratio > worst.ratio) {
            worst = WellSpreadWitness{cond, what, prof, observed, base, ratio};
        }
        if (ratio > factor) pass_flag = false;
    };
    for (const auto& [key, tally] : ws1) {
        const auto& [r, prof] = key;
        int tsum = 0;
        for (int t : prof) tsum += t;
        double base = detail::profile_allowance(
            ctx, j - tsum - v_j_of(j, static_cast<int>(r.size())), prof);
        consider("WS1", detail::triples_to_string(r), prof,
                 static_cast<double>(tally.count), base, z, rep.ws1_pass, rep.worst_ws1,
                 rep.min_z);
        if (r.size() == 1) {
            double base4 = detail::profile_allowance(ctx, j - tsum - 3, prof);
            consider("WS4", detail::triples_to_string(r), prof,
                     static_cast<double>(tally.count), base4, y, rep.ws4_pass,
                     rep.worst_ws4, rep.min_y);
        }
    }

    // WS2: ordered pairs (E, E') with E \ {T} = E' \ {T'}.
    {
        std::map<std::vector<Triple>, std::vector<std::pair<Triple, int>>> cores;
        for (int ci = 0; ci < static_cast<int>(configs.size()); ++ci) {
            const auto& cfg = configs[static_cast<std::size_t>(ci)];
            for (const auto& t : cfg) {
                std::vector<Triple> core;
                for (const auto& u : cfg)
                    if (!(u == t)) core.push_back(u);
                cores[core].emplace_back(t, ci);
            }
        }
        std::map<std::pair<std::pair<Triple, Triple>, std::vector<int>>, Tally> ws2;
        for (const auto& [core, members] : cores) {
            if (members.size() < 2) continue;
            std::vector<int> prof(static_cast<std::size_t>(std::max(k, 0)), 0);
            for (const auto& t : core) {
                int l = ctx.lev(t);
                if (l < k) ++prof[static_cast<std::size_t>(l)];
            }
            for (const auto& [t1, c1] : members)
                for (const auto& [t2, c2] : members) {
                    if (c1 == c2) continue;
                    ++ws2[{{t1, t2}, prof}].count;
                }
        }
        for (const auto& [key, tally] : ws2) {
            const auto& [pair_tt, prof] = key;
            int tsum = 0;
            for (int t : prof) tsum += t;
            double base = detail::profile_allowance(ctx, j - tsum - 4, prof);
            consider("WS2",
                     detail::triples_to_string({pair_tt.first, pair_tt.second}), prof,
                     static_cast<double>(tally.count), base, z, rep.ws2_pass,
                     rep.worst_ws2, rep.min_z);
        }
    }

    // WS3: only for j = 4.
    if (j == 4) {
        std::map<std::pair<Triple, std::uint64_t>, Tally> ws3;
        for (const auto& cfg : configs) {
            for (int a = 0; a < 2; ++a) {
                const Triple& t = cfg[static_cast<std::size_t>(a)];
                const Triple& t2 = cfg[static_cast<std::size_t>(1 - a)];
                if (ctx.lev(t2) != k) continue;
                for (auto ek : edge_keys(t2)) {
                    Vertex u = static_cast<Vertex>(ek >> 32);
                    Vertex v = static_cast<Vertex>(ek & 0xffffffffu);
                    if (t.contains_edge(u, v)) continue;
                    ++ws3[{t, ek}].count;
                }
            }
        }
        for (const auto& [key, tally] : ws3) {
            const auto& [t, ek] = key;
            std::string what = detail::triples_to_string({t}) + " | e=" +
                               std::to_string(ek >> 32) + "-" +
                               std::to_string(ek & 0xffffffffu);
            consider("WS3", what, {}, static_cast<double>(tally.count), 1.0, z,
                     rep.ws3_pass, rep.worst_ws3, rep.min_z);
        }
    }

    rep.pass = rep.ws0_pass && rep.ws1_pass && rep.ws2_pass && rep.ws3_pass &&
               rep.ws4_pass;
    return rep;
}

} // namespace hgsts

#endif
