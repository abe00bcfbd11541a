#include "sdht/generators.hpp"
#include "sdht/social_graph.hpp"
#include "test_util.hpp"

#include <doctest.h>
#include <zlib.h>

#include <algorithm>

using namespace sdht;
using sdht::test::graph;
using sdht::test::TempDir;

TEST_SUITE("social_graph") {

// Users 1..4 of the small strength example; user 0 is an unused isolated id.
SocialGraph diamond_tail() { return graph(5, {{1, 2}, {1, 3}, {2, 3}, {1, 4}}); }

TEST_CASE("common-neighbor strength is normalized by the caller's degree") {
    const auto g = diamond_tail();
    const auto p = StrengthProvider::common_neighbors();
    CHECK(strength(g, 1, 2, p) == doctest::Approx(1.0 / 3.0));
    CHECK(strength(g, 2, 1, p) == doctest::Approx(0.5));
    CHECK(strength(g, 4, 1, p) == 0.0);
    CHECK(strength(g, 0, 1, p) == 0.0);
    CHECK_THROWS_AS(strength(g, 2, 2, p), std::invalid_argument);
    CHECK_THROWS_AS(strength(g, 2, 9, p), std::out_of_range);
}

TEST_CASE("isolated edge next to a triangle has zero strength") {
    const auto g = graph(5, {{0, 1}, {1, 2}, {0, 2}, {3, 4}});
    CHECK(strength(g, 3, 4, StrengthProvider::common_neighbors()) == 0.0);
}

TEST_CASE("id-distance strength is one minus the circular distance") {
    const auto g = graph(3, {{0, 1}, {1, 2}});
    const auto p = StrengthProvider::id_distance({0.2, 0.9, 0.75});
    CHECK(strength(g, 0, 1, p) == doctest::Approx(0.7));
    CHECK(strength(g, 1, 0, p) == doctest::Approx(0.7));
    CHECK(strength(g, 1, 2, p) == doctest::Approx(0.85));
    CHECK_THROWS(strength(g, 0, 1, StrengthProvider::id_distance({0.5})));
}

TEST_CASE("top-k strongest friends") {
    const auto g = diamond_tail();
    const auto p = StrengthProvider::common_neighbors();
    CHECK(top_k_strongest(g, 1, 2, p) == std::vector<UserId>{2, 3});
    CHECK(top_k_strongest(g, 4, 5, p) == std::vector<UserId>{1});
    CHECK(top_k_strongest(g, 0, 3, p).empty());
    CHECK(top_k_strongest(g, 2, 1, p) == std::vector<UserId>{1});
    CHECK_THROWS(top_k_strongest(g, 1, 0, p));

    const auto star = graph(6, {{3, 0}, {3, 5}, {3, 1}, {3, 4}, {3, 2}});
    CHECK(top_k_strongest(star, 3, 10, p) == std::vector<UserId>{0, 1, 2, 4, 5});
}

TEST_CASE("strength identity against an adjacency-matrix count") {
    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        const std::size_t n = 20 + 16 * seed;
        const auto g = random_graph(n, n * 3, seed);
        std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
        for (auto [u, v] : g.edges()) adj[u][v] = adj[v][u] = true;
        const auto p = StrengthProvider::common_neighbors();
        for (UserId i = 0; i < n; ++i) {
            for (UserId j = 0; j < n; ++j) {
                if (i == j) continue;
                std::size_t common = 0, deg_i = 0, deg_j = 0;
                for (std::size_t w = 0; w < n; ++w) {
                    common += adj[i][w] && adj[j][w];
                    deg_i += adj[i][w];
                    deg_j += adj[j][w];
                }
                REQUIRE(common_neighbor_count(g, i, j) == common);
                CHECK(strength(g, i, j, p) * static_cast<double>(deg_i) ==
                      doctest::Approx(static_cast<double>(common)));
                CHECK(strength(g, j, i, p) * static_cast<double>(deg_j) ==
                      doctest::Approx(static_cast<double>(common)));
                CHECK((strength(g, i, j, p) == 1.0) == (deg_i > 0 && common == deg_i));
            }
        }
    }
}

TEST_CASE("strength table: parallel equals serial, ranking equals top-k") {
    const auto g = generate_graph("planted:400:10:40:0.3:2:3");
    for (const auto& p : {StrengthProvider::common_neighbors(),
                          StrengthProvider::id_distance([&] {
                              std::vector<double> ids(g.node_count());
                              for (std::size_t i = 0; i < ids.size(); ++i)
                                  ids[i] = static_cast<double>(i + 1) / static_cast<double>(ids.size());
                              return ids;
                          }())}) {
        const auto parallel = build_strength_table(g, p);
        const auto reference = serial::build_strength_table(g, p);
        REQUIRE(parallel.values().size() == 2 * g.edge_count());
        CHECK(std::equal(parallel.values().begin(), parallel.values().end(), reference.values().begin()));
        for (UserId u = 0; u < g.node_count(); u += 7) {
            const auto nb = g.neighbors(u);
            for (std::size_t e = 0; e < nb.size(); ++e) CHECK(parallel.of(u)[e] == strength(g, u, nb[e], p));
            CHECK(rank_friends(g, parallel, u, 5) == top_k_strongest(g, u, 5, p));
        }
    }
}

TEST_CASE("loader symmetrizes, drops self-loops and duplicates") {
    TempDir dir;
    LoadStats stats;
    const auto g = load_edge_list(dir.write("a.txt", "0 1\n1 0\n1 1\n"), true, &stats);
    CHECK(g.node_count() == 2);
    CHECK(g.edge_count() == 1);
    CHECK(stats.arcs == 3);
    CHECK(stats.self_loops == 1);
    CHECK(stats.duplicates == 1);
}

TEST_CASE("loader skips comments and remaps ids by ascending value") {
    TempDir dir;
    const auto g = load_edge_list(dir.write("a.txt", "# header\n# Nodes: 3\n\n40 7\r\n7\t12 extra\n"), false);
    REQUIRE(g.node_count() == 3);
    CHECK(g.original_id(0) == 7);
    CHECK(g.original_id(1) == 12);
    CHECK(g.original_id(2) == 40);
    CHECK(g.has_edge(0, 2));
    CHECK(g.has_edge(0, 1));
    CHECK_FALSE(g.has_edge(1, 2));
}

TEST_CASE("loader errors") {
    TempDir dir;
    CHECK_THROWS_WITH(load_edge_list(dir.write("m.txt", "0 1\n# ok\n2 x\n"), false),
                      doctest::Contains("m.txt:3"));
    CHECK_THROWS_WITH(load_edge_list(dir.write("h.txt", "0 1\n5\n"), false), doctest::Contains("h.txt:2"));
    CHECK_THROWS_WITH(load_edge_list(dir.write("e.txt", "# nothing\n"), false), doctest::Contains("empty graph"));
    CHECK_THROWS_WITH(load_edge_list(dir.path() / "missing.txt", false), doctest::Contains("cannot open"));
}

TEST_CASE("loader reads gzip input") {
    TempDir dir;
    const auto path = dir.path() / "g.txt.gz";
    gzFile f = gzopen(path.c_str(), "wb");
    REQUIRE(f != nullptr);
    const std::string text = "# gz\n1 2\n2 3\n3 1\n";
    gzwrite(f, text.data(), static_cast<unsigned>(text.size()));
    gzclose(f);
    const auto g = load_edge_list(path, false);
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 3);
    CHECK(g == load_edge_list(dir.write("g.txt", text), false));
}

TEST_CASE("write then reload yields an identical graph") {
    TempDir dir;
    const auto original = load_edge_list(dir.write("a.txt", "10 20\n20 30\n30 10\n30 99\n5 10\n"), false);
    write_edge_list(original, dir.path() / "b.txt");
    const auto again = load_edge_list(dir.path() / "b.txt", false);
    CHECK(again == original);
    write_edge_list(again, dir.path() / "c.txt");
    CHECK(sdht::test::slurp(dir.path() / "b.txt") == sdht::test::slurp(dir.path() / "c.txt"));
}

TEST_CASE("induced subgraph keeps only internal edges") {
    const auto g = diamond_tail();
    const std::vector<UserId> users{3, 1, 2};
    const auto sub = g.induced_subgraph(users);
    CHECK(sub.node_count() == 3);
    CHECK(sub.edge_count() == 3);
    CHECK(sub.original_id(0) == g.original_id(3));
}

}
