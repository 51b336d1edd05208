#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <set>

#include "hgsts/gadgets.hpp"
#include "hgsts/rng.hpp"
#include "helpers.hpp"

using namespace hgsts;
using namespace hgsts::testing;

namespace {

std::map<Vertex, int> degrees(const EdgeList& es) {
    std::map<Vertex, int> d;
    for (const auto& [u, v] : es) {
        ++d[u];
        ++d[v];
    }
    return d;
}

// random even graph on X: random edge set, then fix parity along a path
EdgeList random_even_graph(const std::vector<Vertex>& X, double p, Rng& rng) {
    std::set<std::pair<Vertex, Vertex>> es;
    for (std::size_t i = 0; i < X.size(); ++i)
        for (std::size_t j = i + 1; j < X.size(); ++j)
            if (rng.bernoulli(p)) es.insert({X[i], X[j]});
    // repair odd degrees by toggling edges between consecutive odd vertices
    for (;;) {
        std::map<Vertex, int> deg;
        for (const auto& [u, v] : es) {
            ++deg[u];
            ++deg[v];
        }
        std::vector<Vertex> odd;
        for (Vertex x : X)
            if (deg[x] % 2) odd.push_back(x);
        if (odd.empty()) break;
        auto e = std::make_pair(std::min(odd[0], odd[1]), std::max(odd[0], odd[1]));
        if (es.count(e))
            es.erase(e);
        else
            es.insert(e);
    }
    return EdgeList(es.begin(), es.end());
}

} // namespace

TEST_CASE("path cover counts") {
    VertexAllocator alloc(2);
    auto pc = build_path_cover({0, 1}, alloc);
    CHECK(pc.per_pair() == 24);
    CHECK(pc.total_vertices() == 2 + 24);
    CHECK(pc.edge_count() == 48);
    CHECK(alloc.next == 2 + 24);

    VertexAllocator alloc3(3);
    auto pc3 = build_path_cover({0, 1, 2}, alloc3);
    CHECK(pc3.total_vertices() == 165); // 3 + 6*9*3
    auto deg = degrees(pc3.edges());
    for (Vertex x : {0u, 1u, 2u}) CHECK(deg[x] == 6 * 9 * (3 - 1));
    // every midpoint has degree exactly 2
    for (const auto& [v, d] : deg)
        if (v > 2) CHECK(d == 2);
    CHECK_THROWS_AS(build_path_cover({0}, alloc3), ParameterError);
}

TEST_CASE("short cycles: empty L pairs all paths into 4-cycles") {
    VertexAllocator alloc(3);
    auto pc = build_path_cover({0, 1, 2}, alloc);
    auto dec = decompose_short_cycles({}, pc);
    CHECK(dec.count_of_length(3) == 0);
    CHECK(dec.count_of_length(5) == 0);
    CHECK(dec.count_of_length(4) == pc.per_pair() / 2 * 3);
    CHECK(dec.total_edges() == pc.edge_count());
}

TEST_CASE("short cycles: single triangle") {
    VertexAllocator alloc(3);
    auto pc = build_path_cover({0, 1, 2}, alloc);
    EdgeList L{{0, 1}, {1, 2}, {0, 2}};
    auto dec = decompose_short_cycles(L, pc);
    CHECK(dec.total_edges() == pc.edge_count() + 3);
    CHECK(dec.count_of_length(4) > dec.count_of_length(5));
    // triangle-divisible L keeps the union divisible by 3
    CHECK(dec.total_edges() % 3 == 0);
}

TEST_CASE("short cycles: two disjoint even cycles") {
    std::vector<Vertex> X{0, 1, 2, 3, 4, 5, 6, 7};
    VertexAllocator alloc(8);
    auto pc = build_path_cover(X, alloc);
    EdgeList L{{0, 1}, {1, 2}, {2, 3}, {0, 3},   // 4-cycle
               {4, 5}, {5, 6}, {6, 7}, {4, 7}};  // 4-cycle
    auto dec = decompose_short_cycles(L, pc);
    CHECK(dec.total_edges() == pc.edge_count() + 8);
    CHECK(dec.count_of_length(4) > dec.count_of_length(5));
}

TEST_CASE("short cycles: odd degree is rejected with the vertex named") {
    VertexAllocator alloc(4);
    auto pc = build_path_cover({0, 1, 2, 3}, alloc);
    try {
        decompose_short_cycles({{0, 1}}, pc);
        FAIL_CHECK("expected ParameterError");
    } catch (const ParameterError& e) {
        CHECK(std::string(e.what()).find("odd degree") != std::string::npos);
        CHECK(std::string(e.what()).find("0") != std::string::npos);
    }
}

TEST_CASE("short cycles: random even graphs, exact cover, more 4s than 5s") {
    SeedSequence seeds(808);
    auto rng = seeds.stream("gadgets/random-even");
    for (int it = 0; it < 12; ++it) {
        std::size_t nx = 4 + rng.below(5); // up to 8
        std::vector<Vertex> X;
        for (Vertex i = 0; i < nx; ++i) X.push_back(i);
        VertexAllocator alloc(static_cast<Vertex>(nx));
        auto pc = build_path_cover(X, alloc);
        auto L = random_even_graph(X, 0.5, rng);
        auto dec = decompose_short_cycles(L, pc); // exact cover asserted inside
        CHECK(dec.total_edges() == pc.edge_count() + L.size());
        CHECK(dec.count_of_length(4) > dec.count_of_length(5));
    }
}

TEST_CASE("sphere: g=5 shape") {
    VertexAllocator alloc(3);
    auto s = build_sphere(Triple(0, 1, 2), 5, alloc);
    CHECK(alloc.next == 3 + 9); // b3..b10 and c
    CHECK(s.out_decomp.size() == 9);
    CHECK(s.in_decomp.size() == 10);
    CHECK(s.edges.size() == 6 * 5 - 3);
    CHECK(s.all_gadget_triangles().size() == 4 * 5 - 1);
    CHECK_THROWS_AS(build_sphere(Triple(0, 1, 2), 2, alloc), ParameterError);
}

TEST_CASE("sphere: edge identities for g in 3..7") {
    for (int g = 3; g <= 7; ++g) {
        VertexAllocator alloc(3);
        auto s = build_sphere(Triple(0, 1, 2), g, alloc);
        CHECK(s.edges.size() == static_cast<std::size_t>(6 * g - 3));
        CHECK(s.out_decomp.size() == static_cast<std::size_t>(2 * g - 1));
        CHECK(s.in_decomp.size() == static_cast<std::size_t>(2 * g));
        // anchor is not a gadget triangle (partition checks run in the builder)
        for (const auto& t : s.all_gadget_triangles()) CHECK(t != s.anchor());
    }
}

TEST_CASE("sphere minimality passes for g in 3..7") {
    for (int g = 3; g <= 7; ++g) {
        VertexAllocator alloc(3);
        auto s = build_sphere(Triple(0, 1, 2), g, alloc);
        auto rep = verify_sphere_minimality(s, g);
        CHECK(rep.pass);
    }
    VertexAllocator alloc(3);
    auto s = build_sphere(Triple(0, 1, 2), 3, alloc);
    CHECK_THROWS_AS(verify_sphere_minimality(s, 9), ParameterError);
}

TEST_CASE("sphere minimality: singleton {c b1 b2} has c in exactly one triangle") {
    VertexAllocator alloc(3);
    auto s = build_sphere(Triple(0, 1, 2), 4, alloc);
    // the in-decomposition starts with the apex triangle on b1 b2
    Triple first = s.in_decomp[0];
    CHECK(first.contains(s.apex));
    CHECK(first.contains(s.b[1]));
    CHECK(first.contains(s.b[2]));
}

TEST_CASE("sphere minimality: mutated gadget fails") {
    VertexAllocator alloc(3);
    auto s = build_sphere(Triple(0, 1, 2), 4, alloc);
    // replace one out-triangle with a triangle inside the anchor
    s.out_decomp[0] = Triple(s.a, s.b[1], s.b[2]);
    auto rep = verify_sphere_minimality(s, 4);
    CHECK(!rep.pass);
    CHECK(!rep.violating_subset.empty());
}

TEST_CASE("sphere cover: empty L on 5 vertices") {
    TripleSystem z(5, {});
    auto out = sphere_cover_decompose(z, 4);
    // 10 spheres, all out-decomposed: 10 * (2g-1) triangles
    CHECK(out.size() == 10 * 7);
    CHECK(out.n_vertices() == 5 + 10 * 7);
}

TEST_CASE("sphere cover: one triangle in-decomposed") {
    TripleSystem z(5, {Triple(0, 1, 2)});
    auto out = sphere_cover_decompose(z, 4);
    CHECK(out.size() == 9 * 7 + 8); // nine out, one in
}

TEST_CASE("sphere cover: matching of two triangles at g=6 has girth beyond 6") {
    TripleSystem z(6, {Triple(0, 1, 2), Triple(3, 4, 5)});
    auto out = sphere_cover_decompose(z, 6);
    auto cert = girth(out, 6);
    CHECK(!cert.girth.has_value()); // reports "> 6"
    CHECK(out.is_partial_steiner());
}

TEST_CASE("sphere cover rejects non-edge-disjoint input") {
    TripleSystem z(5, {Triple(0, 1, 2), Triple(0, 1, 3)});
    CHECK_THROWS_AS(sphere_cover_decompose(z, 4), ParameterError);
}

TEST_CASE("sphere construction is deterministic given the allocator state") {
    VertexAllocator a1(3), a2(3);
    auto s1 = build_sphere(Triple(0, 1, 2), 5, a1);
    auto s2 = build_sphere(Triple(0, 1, 2), 5, a2);
    CHECK(s1.edges == s2.edges);
    CHECK(s1.in_decomp == s2.in_decomp);
    CHECK(s1.out_decomp == s2.out_decomp);
}

TEST_CASE("exclusive absorber interface raises unimplemented-dependency") {
    try {
        exclusive_absorber_interface("any");
        FAIL_CHECK("expected UnimplementedDependency");
    } catch (const UnimplementedDependency& e) {
        std::string msg = e.what();
        CHECK(msg.find("cycle-cover") != std::string::npos);
        CHECK(msg.find("BGKLMO") != std::string::npos);
    }
}
