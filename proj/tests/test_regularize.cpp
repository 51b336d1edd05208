#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "hgsts/regularize.hpp"
#include "helpers.hpp"

using namespace hgsts;
using namespace hgsts::testing;

TEST_CASE("triangle family construction and extension counts") {
    auto fam = TriangleFamily::complete(8);
    CHECK(fam.triangles().size() == 56);
    CHECK(fam.edges().size() == 28);
    CHECK(fam.triangles_at(0, 1).size() == 6);
    CHECK(fam.extension_count({0, 1}) == 6);
    CHECK(fam.extension_count({0, 1, 2}) == 5);
    CHECK(fam.extension_count({0, 1, 2, 3}) == 4);
    int k5 = 0;
    fam.for_each_k5([&](const std::array<Vertex, 5>&) { ++k5; });
    CHECK(k5 == 56); // C(8,5)
}

TEST_CASE("delta identity: sum of psi_{e,J} over T(e') is the indicator of e") {
    // one K5 with all ten triangles; exact in integer units of 1/6
    auto fam = TriangleFamily::complete(5);
    std::array<Vertex, 5> J{0, 1, 2, 3, 4};
    for (const auto& [eu, ev] : fam.edges()) {
        for (const auto& [fu, fv] : fam.edges()) {
            int sum6 = 0;
            for (int ti : fam.triangles_at(fu, fv))
                sum6 += psi_case_sixths(fam.triangles()[static_cast<std::size_t>(ti)],
                                        eu, ev, J);
            CHECK(sum6 == ((eu == fu && ev == fv) ? 6 : 0));
        }
    }
}

TEST_CASE("regularize_triangles on a complete instance") {
    // K16, p = 1: c_e corrections are tiny and psi clusters at 1/4
    auto fam = TriangleFamily::complete(16);
    auto res = regularize_triangles(fam, 1.0, 1.2, 4242);
    const double p2n4 = 16.0 / 4.0;
    CHECK(res.worst_edge_sum_rel_dev < 1e-9);
    for (double x : res.psi) {
        CHECK(x >= 0.0);
        CHECK(x <= 1.0);
        CHECK(std::abs(x - 0.25) < 0.05);
    }
    CHECK(res.deg_mean == doctest::Approx(p2n4).epsilon(0.5));
}

TEST_CASE("regularize_triangles flags hypothesis violations") {
    // remove many triangles at one edge: |T(e)| falls far below p^2 n
    auto base = TriangleFamily::complete(12);
    std::vector<Triple> tris;
    for (const auto& t : base.triangles())
        if (!(t.contains_edge(0, 1) && t[2] >= 6)) tris.push_back(t);
    TriangleFamily fam(12, base.edges(), tris);
    auto res = regularize_triangles(fam, 1.0, 1.2, 7);
    CHECK(!res.hypothesis_ok);
    CHECK(!res.hypothesis_notes.empty());
}

TEST_CASE("regularize_triangles rejects an edge in no K5") {
    // a graph that is one triangle: no K5 at all
    EdgePairList es{{0, 1}, {0, 2}, {1, 2}};
    TriangleFamily fam(3, es, {Triple(0, 1, 2)});
    CHECK_THROWS_AS(regularize_triangles(fam, 1.0, 2.0, 1), ParameterError);
}

TEST_CASE("uniform hypergraph basics") {
    auto h = UniformHypergraph::of(6, 3, {{0, 1, 2}, {2, 3, 4}, {0, 1, 2}});
    CHECK(h.size() == 2); // dedup
    CHECK(h.degrees[2] == 2);
    CHECK(h.max_degree() == 2);
    CHECK(h.contains({0, 1, 2}));
    CHECK(!h.contains({0, 1, 3}));
    CHECK_THROWS_AS(UniformHypergraph::of(4, 3, {{0, 1, 5}}), ParameterError);
    CHECK_THROWS_AS(UniformHypergraph::of(4, 3, {{0, 1}}), ParameterError);
}

TEST_CASE("symmetric-function identity for k=3 matches the DP") {
    SeedSequence seeds(5);
    auto rng = seeds.stream("reg/symcheck");
    std::vector<double> w;
    for (int i = 0; i < 30; ++i) w.push_back(1.0 + static_cast<double>(rng.below(100)));
    double s1 = 0, s2 = 0;
    for (double x : w) {
        s1 += x;
        s2 += x * x;
    }
    double via_power_sums = (s1 * s1 - s2) / 2.0;
    auto e = hgsts::detail::elementary_sym(w, 2);
    CHECK(e[2] == doctest::Approx(via_power_sums).epsilon(1e-12));
}

TEST_CASE("regularize_hypergraph: already regular stops at zero rounds") {
    // 2-regular 3-uniform on 6 vertices
    auto g = UniformHypergraph::of(6, 3, {{0, 1, 2}, {3, 4, 5}, {0, 3, 4}, {1, 2, 5}});
    for (int d : g.degrees) CHECK(d == 2);
    auto rep = regularize_hypergraph(g, g, 11);
    CHECK(rep.success);
    CHECK(rep.rounds == 0);
    CHECK(rep.g_prime.size() == 0);
}

TEST_CASE("regularize_hypergraph: G must be inside H") {
    auto g = UniformHypergraph::of(6, 3, {{0, 1, 2}});
    auto h = UniformHypergraph::of(6, 3, {{1, 2, 3}});
    CHECK_THROWS_AS(regularize_hypergraph(g, h, 1), ParameterError);
    CHECK_THROWS_AS(regularize_hypergraph(g, UniformHypergraph::of(6, 4, {}), 1),
                    ParameterError);
}

TEST_CASE("regularize_hypergraph: spike run reports rounds and invariants") {
    // one high-degree vertex at n = 40
    SeedSequence seeds(99);
    auto rng = seeds.stream("reg/spike");
    std::set<std::vector<int>> es;
    while (es.size() < 40) {
        int a = 1 + static_cast<int>(rng.below(39));
        int b = 1 + static_cast<int>(rng.below(39));
        if (a == b) continue;
        es.insert({0, std::min(a, b), std::max(a, b)});
    }
    auto g = UniformHypergraph::of(40, 3, std::vector<std::vector<int>>(es.begin(), es.end()));
    CHECK(g.degrees[0] == 40);

    int successes = 0;
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
        auto rep = regularize_hypergraph(g, g, seed);
        const double log2n = std::pow(std::log(40.0), 2);
        // every round respects the sampling-probability cap (asserted inside),
        // and the trace reports the rounds taken
        for (const auto& r : rep.trace) {
            CHECK(r.max_set_probability <= r.probability_cap * (1 + 1e-9));
            CHECK(r.F_before > log2n);
        }
        if (rep.success) {
            ++successes;
            CHECK(static_cast<double>(rep.F_final) <= log2n);
            // additions avoid H entirely
            for (const auto& e : rep.g_prime.edges) CHECK(!g.contains(e));
            // 9 d_max cap (asserted inside as well)
            std::vector<int> deg(40, 0);
            for (const auto& e : g.edges)
                for (int v : e) ++deg[static_cast<std::size_t>(v)];
            for (const auto& e : rep.g_prime.edges)
                for (int v : e) ++deg[static_cast<std::size_t>(v)];
            int dmax = 0;
            for (int d : deg) dmax = std::max(dmax, d);
            CHECK(dmax <= 9 * g.max_degree());
        } else {
            CHECK((rep.give_up == "B" || rep.give_up == "C"));
            CHECK(!rep.trace.empty());
        }
    }
    // report-only: the desk-scale success rate is measured by the acceptance suite
    CHECK(successes >= 0);
}

TEST_CASE("regularize_hypergraph caps") {
    auto g = UniformHypergraph::of(6, 3, {{0, 1, 2}});
    CHECK_THROWS_AS(regularize_hypergraph(UniformHypergraph::of(201, 3, {}),
                                          UniformHypergraph::of(201, 3, {}), 1),
                    ParameterError);
    (void)g;
}
