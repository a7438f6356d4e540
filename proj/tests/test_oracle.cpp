#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <string>

#include "sapfocs/annealing.hpp"
#include "sapfocs/dataset.hpp"
#include "sapfocs/errors.hpp"
#include "sapfocs/oracle.hpp"
#include "sapfocs/rng.hpp"

using namespace sapfocs;

TEST_CASE("stirling numbers") {
    CHECK(stirling2(5, 2) == 15);
    CHECK(stirling2(10, 3) == 9330);
    CHECK(stirling2(3, 3) == 1);
    CHECK(stirling2(0, 0) == 1);
    CHECK(stirling2(4, 0) == 0);
    CHECK(stirling2(3, 5) == 0);
    CHECK(stirling2(27, 7) == 11647571772911241531ULL);
}

TEST_CASE("stirling recurrence holds up to p = 12") {
    for (int p = 1; p <= 12; ++p)
        for (int n = 1; n <= p; ++n)
            CHECK(stirling2(p, n) ==
                  static_cast<std::uint64_t>(n) * stirling2(p - 1, n) + stirling2(p - 1, n - 1));
}

TEST_CASE("enumeration counts match stirling numbers") {
    for (int p = 1; p <= 10; ++p) {
        for (int n = 1; n <= p; ++n) {
            PartitionEnumerator en(p, n);
            Partition part;
            std::set<std::vector<int>> seen;
            while (en.next(part)) {
                REQUIRE(part.size() == p);
                auto fams = part.families();
                REQUIRE(static_cast<int>(fams.size()) == n);
                for (const auto& f : fams) REQUIRE(!f.empty());
                REQUIRE(seen.insert(part.assignment).second);  // no duplicates
            }
            CHECK(en.count() == stirling2(p, n));
        }
    }
}

TEST_CASE("single partition cases") {
    PartitionEnumerator all_singletons(3, 3);
    Partition part;
    REQUIRE(all_singletons.next(part));
    CHECK(part.assignment == std::vector<int>{1, 2, 3});
    CHECK_FALSE(all_singletons.next(part));

    PartitionEnumerator one_family(4, 1);
    REQUIRE(one_family.next(part));
    CHECK(part.assignment == std::vector<int>{1, 1, 1, 1});
    CHECK_FALSE(one_family.next(part));
}

TEST_CASE("brute force optimum on the 5x9 problem") {
    auto res = brute_force_optimum(builtin_dataset(BuiltinId::P1), 2);
    CHECK(res.enumerated == 15);
    CHECK(res.objective == doctest::Approx(1.7559914261013896).epsilon(1e-12));
    // canonical labels: {1,5} is family 1, {2,3,4} family 2
    CHECK(res.best.assignment == std::vector<int>{1, 2, 2, 2, 1});
}

TEST_CASE("brute force optimum on the 10x9 problem") {
    auto res = brute_force_optimum(builtin_dataset(BuiltinId::P2), 3);
    CHECK(res.enumerated == 9330);
    CHECK(res.objective == doctest::Approx(2.6269).epsilon(1e-4));
    auto fams = res.best.families();
    REQUIRE(fams.size() == 3);
    CHECK(fams[0] == std::vector<int>{0, 4});                  // {1,5}
    CHECK(fams[1] == std::vector<int>{1, 2, 3, 5, 7, 8});      // {2,3,4,6,8,9}
    CHECK(fams[2] == std::vector<int>{6, 9});                  // {7,10}
}

TEST_CASE("two identical parts in one family") {
    PartCodeMatrix m;
    m.part_ids = {"x", "y"};
    m.attribute_names = {"a1", "a2"};
    m.codes = {{5, 5}, {5, 5}};
    auto res = brute_force_optimum(m, 1);
    CHECK(res.enumerated == 1);
    CHECK(res.objective == doctest::Approx(1.0 / 1.001).epsilon(1e-12));
}

TEST_CASE("cap errors carry the computed count") {
    try {
        brute_force_optimum(builtin_dataset(BuiltinId::P5), 7);
        FAIL("expected cap_error");
    } catch (const cap_error& e) {
        CHECK(std::string(e.what()).find("11647571772911241531") != std::string::npos);
    }
    // generous explicit cap still refuses
    CHECK_THROWS_AS(brute_force_optimum(builtin_dataset(BuiltinId::P5), 7, 1ull << 62),
                    cap_error);
    // tight cap refuses even the 10x9 problem
    CHECK_THROWS_AS(brute_force_optimum(builtin_dataset(BuiltinId::P2), 3, 100), cap_error);
}

TEST_CASE("argument validation") {
    CHECK_THROWS_AS(PartitionEnumerator(0, 1), validation_error);
    CHECK_THROWS_AS(PartitionEnumerator(3, 0), validation_error);
    CHECK_THROWS_AS(PartitionEnumerator(3, 4), validation_error);
}

namespace {

// Independent reference: enumerate all assignment vectors in [1..n]^p, keep the
// surjective ones, deduplicate by block structure, maximize.
std::pair<double, std::uint64_t> assignment_vector_optimum(const SymmetricMatrix& sim, int n) {
    const int p = sim.size();
    std::vector<int> a(p, 1);
    double best = -1.0;
    std::set<std::vector<int>> seen;
    while (true) {
        std::set<int> used(a.begin(), a.end());
        if (static_cast<int>(used.size()) == n) {
            // canonical block labels
            std::map<int, int> relabel;
            std::vector<int> canon(p);
            int next = 0;
            for (int i = 0; i < p; ++i) {
                if (!relabel.count(a[i])) relabel[a[i]] = ++next;
                canon[i] = relabel[a[i]];
            }
            if (seen.insert(canon).second) {
                Partition part{canon, n};
                best = std::max(best, objective(part, sim));
            }
        }
        int i = p - 1;
        while (i >= 0 && a[i] == n) a[i--] = 1;
        if (i < 0) break;
        ++a[i];
    }
    return {best, seen.size()};
}

} // namespace

TEST_CASE("second oracle agrees on random instances") {
    Rng rng(23);
    for (int trial = 0; trial < 12; ++trial) {
        int p = 4 + rng.uniform_int(5);  // up to 8 parts
        int n = 2 + rng.uniform_int(3);
        n = std::min(n, p);
        PartCodeMatrix m;
        for (int c = 0; c < 4; ++c) m.attribute_names.push_back("a" + std::to_string(c + 1));
        for (int r = 0; r < p; ++r) {
            m.part_ids.push_back("p" + std::to_string(r + 1));
            std::vector<int> row;
            for (int c = 0; c < 4; ++c) row.push_back(rng.uniform_int(10));
            m.codes.push_back(row);
        }
        auto sim = similarity_matrix(m);
        auto rgs = brute_force_optimum(sim, n);
        auto [ref_best, ref_count] = assignment_vector_optimum(sim, n);
        CHECK(rgs.enumerated == ref_count);
        CHECK(rgs.objective == doctest::Approx(ref_best).epsilon(1e-12));
    }
}

TEST_CASE("annealing never beats the exhaustive optimum") {
    for (auto [id, n] : {std::pair{BuiltinId::P1, 2}, std::pair{BuiltinId::P2, 3}}) {
        auto m = builtin_dataset(id);
        auto sim = similarity_matrix(m);
        auto opt = brute_force_optimum(sim, n);
        auto initial = cut_tree(complete_linkage(distance_matrix(sim)), n);
        std::vector<double> per_seed;
        anneal_seed_sweep(initial, sim, AnnealConfig{}, 5, &per_seed);
        for (double v : per_seed) CHECK(v <= opt.objective + 1e-9);
    }
}
