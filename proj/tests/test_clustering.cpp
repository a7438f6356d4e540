#include <doctest.h>

#include <algorithm>
#include <functional>
#include <set>

#include <nlohmann/json.hpp>

#include "sapfocs/clustering.hpp"
#include "sapfocs/dataset.hpp"
#include "sapfocs/errors.hpp"
#include "sapfocs/rng.hpp"
#include "sapfocs/similarity.hpp"

using namespace sapfocs;

namespace {

LinkageTree tree_of(BuiltinId id) {
    return complete_linkage(distance_matrix(similarity_matrix(builtin_dataset(id))));
}

std::vector<std::vector<int>> one_based_families(const Partition& p) {
    std::vector<std::vector<int>> out;
    for (auto fam : p.families()) {
        for (auto& x : fam) ++x;
        out.push_back(fam);
    }
    return out;
}

// Reference agglomeration that recomputes every inter-cluster maximum from the
// original matrix at each step, sharing only the tie rule.
LinkageTree naive_complete_linkage(const SymmetricMatrix& dist) {
    const int p = dist.size();
    struct Cluster {
        std::vector<int> members;
        int node;
        int rep;
    };
    std::vector<Cluster> active;
    for (int i = 0; i < p; ++i) active.push_back({{i}, i + 1, i});
    LinkageTree tree;
    tree.leaf_count = p;
    for (int step = 0; step < p - 1; ++step) {
        double best = 2.0;
        std::size_t bi = 0, bj = 0;
        bool first = true;
        for (std::size_t a = 0; a < active.size(); ++a)
            for (std::size_t b = a + 1; b < active.size(); ++b) {
                double v = 0.0;
                for (int x : active[a].members)
                    for (int y : active[b].members) v = std::max(v, dist(x, y));
                bool better = first || v < best;
                if (!better && v == best) {
                    int tmax = std::max(active[a].rep, active[b].rep);
                    int tmin = std::min(active[a].rep, active[b].rep);
                    int cmax = std::max(active[bi].rep, active[bj].rep);
                    int cmin = std::min(active[bi].rep, active[bj].rep);
                    better = tmax > cmax || (tmax == cmax && tmin < cmin);
                }
                if (better) {
                    first = false;
                    best = v;
                    bi = a;
                    bj = b;
                }
            }
        Cluster merged;
        merged.members = active[bi].members;
        merged.members.insert(merged.members.end(), active[bj].members.begin(),
                              active[bj].members.end());
        merged.node = p + 1 + step;
        merged.rep = std::min(active[bi].rep, active[bj].rep);
        tree.merges.push_back({std::min(active[bi].node, active[bj].node),
                               std::max(active[bi].node, active[bj].node), best});
        if (bj > bi) std::swap(bi, bj);
        active.erase(active.begin() + bi);
        active.erase(active.begin() + bj);
        active.push_back(std::move(merged));
    }
    return tree;
}

SymmetricMatrix random_distance(Rng& rng, int p, bool quantized) {
    SymmetricMatrix d(p, MatrixKind::distance, 0.0);
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j) {
            double v = quantized ? rng.uniform_int(17) / 16.0 : rng.uniform01();
            d.set(i, j, v);
        }
    return d;
}

} // namespace

TEST_CASE("two parts merge at their distance") {
    SymmetricMatrix d(2, MatrixKind::distance, 0.0);
    d.set(0, 1, 0.25);
    auto tree = complete_linkage(d);
    REQUIRE(tree.merges.size() == 1);
    CHECK(tree.merges[0].node_a == 1);
    CHECK(tree.merges[0].node_b == 2);
    CHECK(tree.merges[0].height == 0.25);
}

TEST_CASE("first merge of the 10x9 problem is its closest pair") {
    auto tree = tree_of(BuiltinId::P2);
    CHECK(tree.merges[0].node_a == 1);  // parts 1 and 5
    CHECK(tree.merges[0].node_b == 5);
    CHECK(tree.merges[0].height == doctest::Approx(0.061728).epsilon(1e-5));
    CHECK(tree.merges[1].node_a == 7);  // parts 7 and 10 at the global minimum 0.08642
    CHECK(tree.merges[1].node_b == 10);
    CHECK(tree.merges[1].height == doctest::Approx(0.086420).epsilon(1e-5));
}

TEST_CASE("10x9 dendrogram groups {7,10} before {7,9,10}") {
    auto tree = tree_of(BuiltinId::P2);
    // parts 7 and 10 form node 12 (second merge); part 9 joins that node later
    int pair_node = 10 + 1 + 1;
    bool found = false;
    for (const auto& m : tree.merges)
        if ((m.node_a == 9 && m.node_b == pair_node) ||
            (m.node_a == pair_node && m.node_b == 9))
            found = true;
    CHECK(found);
}

TEST_CASE("three-family cut of the 10x9 problem") {
    auto part = cut_tree(tree_of(BuiltinId::P2), 3);
    auto fams = one_based_families(part);
    CHECK(fams == std::vector<std::vector<int>>{{1, 3, 4, 5}, {2, 6, 8}, {7, 9, 10}});
}

TEST_CASE("cut extremes") {
    auto tree = tree_of(BuiltinId::P1);
    auto singletons = cut_tree(tree, 5);
    CHECK(singletons.assignment == std::vector<int>{1, 2, 3, 4, 5});
    auto one = cut_tree(tree, 1);
    CHECK(one.assignment == std::vector<int>{1, 1, 1, 1, 1});
    CHECK_THROWS_AS(cut_tree(tree, 0), validation_error);
    CHECK_THROWS_AS(cut_tree(tree, 6), validation_error);
}

TEST_CASE("default family count") {
    CHECK(default_family_count(5) == 2);
    CHECK(default_family_count(10) == 3);
    CHECK(default_family_count(15) == 4);
    CHECK(default_family_count(20) == 5);
    CHECK(default_family_count(27) == 7);
    CHECK(default_family_count(4) == 1);
    CHECK(default_family_count(1) == 1);
    CHECK_THROWS_AS(default_family_count(0), validation_error);
}

TEST_CASE("merge heights never decrease on the bundled datasets") {
    for (auto id : {BuiltinId::P1, BuiltinId::P2, BuiltinId::P3, BuiltinId::P4, BuiltinId::P5}) {
        auto tree = tree_of(id);
        for (std::size_t k = 1; k < tree.merges.size(); ++k)
            CHECK(tree.merges[k].height >= tree.merges[k - 1].height);
    }
}

TEST_CASE("every cut yields exactly the requested number of nonempty families") {
    Rng rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        int p = 2 + rng.uniform_int(12);
        auto d = random_distance(rng, p, trial % 2 == 0);
        auto tree = complete_linkage(d);
        for (int n = 1; n <= p; ++n) {
            auto part = cut_tree(tree, n);
            auto fams = part.families();
            CHECK(static_cast<int>(fams.size()) == n);
            for (const auto& f : fams) CHECK(!f.empty());
        }
    }
}

TEST_CASE("finer cuts refine coarser cuts") {
    Rng rng(5);
    auto check_refines = [](const Partition& fine, const Partition& coarse) {
        // two parts together in the fine cut stay together in the coarse cut
        for (int i = 0; i < fine.size(); ++i)
            for (int j = i + 1; j < fine.size(); ++j)
                if (fine.assignment[i] == fine.assignment[j])
                    CHECK(coarse.assignment[i] == coarse.assignment[j]);
    };
    for (auto id : {BuiltinId::P2, BuiltinId::P3}) {
        auto tree = tree_of(id);
        for (int n = 2; n <= tree.leaf_count; ++n)
            check_refines(cut_tree(tree, n), cut_tree(tree, n - 1));
    }
    for (int trial = 0; trial < 10; ++trial) {
        int p = 3 + rng.uniform_int(9);
        auto tree = complete_linkage(random_distance(rng, p, true));
        for (int n = 2; n <= p; ++n) check_refines(cut_tree(tree, n), cut_tree(tree, n - 1));
    }
}

TEST_CASE("matches the from-scratch reference on random matrices") {
    Rng rng(17);
    for (int trial = 0; trial < 200; ++trial) {
        int p = 2 + rng.uniform_int(6);  // up to 7 leaves
        auto d = random_distance(rng, p, trial % 2 == 0);
        auto fast = complete_linkage(d);
        auto ref = naive_complete_linkage(d);
        REQUIRE(fast.merges.size() == ref.merges.size());
        for (std::size_t k = 0; k < fast.merges.size(); ++k) {
            CHECK(fast.merges[k].node_a == ref.merges[k].node_a);
            CHECK(fast.merges[k].node_b == ref.merges[k].node_b);
            CHECK(fast.merges[k].height == ref.merges[k].height);
        }
    }
}

TEST_CASE("newick export") {
    SymmetricMatrix d(2, MatrixKind::distance, 0.0);
    d.set(0, 1, 0.25);
    auto tree = complete_linkage(d);
    CHECK(export_dendrogram(tree, DendrogramFormat::newick) == "(1:0.25,2:0.25);");
    CHECK(export_dendrogram(tree, "newick") == "(1:0.25,2:0.25);");
}

TEST_CASE("newick branch lengths subtract child heights") {
    SymmetricMatrix d(3, MatrixKind::distance, 0.0);
    d.set(0, 1, 0.25);
    d.set(0, 2, 0.5);
    d.set(1, 2, 0.5);
    auto tree = complete_linkage(d);
    // children render in node-id order: the leaf 3 precedes the merged node 4
    CHECK(export_dendrogram(tree, DendrogramFormat::newick) ==
          "(3:0.5,(1:0.25,2:0.25):0.25);");
}

TEST_CASE("dendrogram format validation") {
    auto tree = tree_of(BuiltinId::P1);
    CHECK_THROWS_AS(export_dendrogram(tree, ""), validation_error);
    CHECK_THROWS_AS(export_dendrogram(tree, "svg"), validation_error);
}

TEST_CASE("json dendrogram is a full binary tree over the leaves") {
    auto tree = tree_of(BuiltinId::P2);
    auto j = nlohmann::json::parse(export_dendrogram(tree, DendrogramFormat::json));
    CHECK(j["node"] == 19);  // root of 10 leaves
    std::set<int> leaves;
    std::function<void(const nlohmann::json&)> walk = [&](const nlohmann::json& node) {
        if (node.contains("leaf")) {
            leaves.insert(node["leaf"].get<int>());
        } else {
            REQUIRE(node["children"].size() == 2);
            for (const auto& c : node["children"]) walk(c);
        }
    };
    walk(j);
    CHECK(leaves.size() == 10);
}

TEST_CASE("dot export names every node") {
    auto tree = tree_of(BuiltinId::P1);
    auto dot = export_dendrogram(tree, DendrogramFormat::dot);
    for (int node = 1; node <= 9; ++node)
        CHECK(dot.find("n" + std::to_string(node)) != std::string::npos);
}

TEST_CASE("linkage csv holds one line per merge") {
    auto tree = tree_of(BuiltinId::P1);
    auto csv = linkage_csv(tree);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);  // header + 4 merges
    CHECK(csv.find("node_a,node_b,height") == 0);
}
