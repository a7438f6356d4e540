#include <doctest.h>

#include <nlohmann/json.hpp>

#include "sapfocs/dataset.hpp"
#include "sapfocs/errors.hpp"
#include "sapfocs/rng.hpp"

using namespace sapfocs;

TEST_CASE("builtin dataset shapes") {
    CHECK(builtin_dataset(BuiltinId::P1).rows() == 5);
    CHECK(builtin_dataset(BuiltinId::P2).rows() == 10);
    CHECK(builtin_dataset(BuiltinId::P3).rows() == 15);
    CHECK(builtin_dataset(BuiltinId::P4).rows() == 20);
    CHECK(builtin_dataset(BuiltinId::P5).rows() == 27);
    for (auto id : {BuiltinId::P1, BuiltinId::P2, BuiltinId::P3, BuiltinId::P4, BuiltinId::P5}) {
        auto m = builtin_dataset(id);
        CHECK(m.cols() == 9);
        CHECK_NOTHROW(validate(m));
    }
}

TEST_CASE("builtin dataset fixed rows") {
    auto p2 = builtin_dataset(BuiltinId::P2);
    CHECK(p2.codes[0] == std::vector<int>{0, 0, 1, 0, 0, 9, 1, 3, 6});
    CHECK(p2.part_ids[0] == "p1");
    auto p5 = builtin_dataset(BuiltinId::P5);
    CHECK(p5.codes[26] == std::vector<int>{6, 5, 4, 4, 3, 6, 0, 7, 0});
}

TEST_CASE("builtin datasets are nested prefixes") {
    auto p1 = builtin_dataset(BuiltinId::P1);
    auto p2 = builtin_dataset(BuiltinId::P2);
    auto p3 = builtin_dataset(BuiltinId::P3);
    auto p4 = builtin_dataset(BuiltinId::P4);
    auto p5 = builtin_dataset(BuiltinId::P5);
    for (int r = 0; r < 5; ++r) CHECK(p1.codes[r] == p2.codes[r]);
    for (int r = 0; r < 10; ++r) CHECK(p2.codes[r] == p3.codes[r]);
    for (int r = 0; r < 15; ++r) CHECK(p3.codes[r] == p5.codes[r]);
    for (int r = 0; r < 20; ++r) CHECK(p4.codes[r] == p5.codes[r]);
}

TEST_CASE("csv round trip on builtins") {
    for (auto id : {BuiltinId::P1, BuiltinId::P2, BuiltinId::P3, BuiltinId::P4, BuiltinId::P5}) {
        auto m = builtin_dataset(id);
        CHECK(parse_matrix(render_csv(m)) == m);
    }
}

TEST_CASE("csv round trip on random matrices") {
    Rng rng(42);
    for (int trial = 0; trial < 50; ++trial) {
        PartCodeMatrix m;
        int rows = 2 + rng.uniform_int(10);
        int cols = 1 + rng.uniform_int(12);
        for (int c = 0; c < cols; ++c) m.attribute_names.push_back("a" + std::to_string(c + 1));
        for (int r = 0; r < rows; ++r) {
            m.part_ids.push_back("part-" + std::to_string(r * 3 + 1));
            std::vector<int> row;
            for (int c = 0; c < cols; ++c) row.push_back(rng.uniform_int(10));
            m.codes.push_back(row);
        }
        CHECK(parse_matrix(render_csv(m)) == m);
    }
}

TEST_CASE("parse without header or labels") {
    auto m = parse_matrix("0,1,2\n3,4,5\n");
    CHECK(m.rows() == 2);
    CHECK(m.cols() == 3);
    CHECK(m.part_ids == std::vector<std::string>{"p1", "p2"});
    CHECK(m.attribute_names == std::vector<std::string>{"a1", "a2", "a3"});
    CHECK(m.codes[1] == std::vector<int>{3, 4, 5});
}

TEST_CASE("parse with alternative delimiter") {
    ParseOptions opt;
    opt.delimiter = ';';
    auto m = parse_matrix("part;a1;a2\nx;1;2\ny;3;4\n", opt);
    CHECK(m.part_ids == std::vector<std::string>{"x", "y"});
    CHECK(m.codes[0] == std::vector<int>{1, 2});
}

TEST_CASE("forced label column accepts numeric part ids") {
    ParseOptions opt;
    opt.part_column = ParseOptions::Flag::Yes;
    auto m = parse_matrix("1,0,1\n2,3,4\n", opt);
    CHECK(m.part_ids == std::vector<std::string>{"1", "2"});
    CHECK(m.codes[0] == std::vector<int>{0, 1});
    // sniffed parse treats the same text as three data columns
    auto sniffed = parse_matrix("1,0,1\n2,3,4\n");
    CHECK(sniffed.cols() == 3);
}

TEST_CASE("parse rejects a single data row") {
    CHECK_THROWS_AS(parse_matrix("0,0,0,0,0,0,0,0,0\n"), validation_error);
}

TEST_CASE("parse rejects out-of-range digits with position") {
    try {
        parse_matrix("1,2\n3,12\n");
        FAIL("expected validation_error");
    } catch (const validation_error& e) {
        CHECK(std::string(e.what()).find("(2,2)") != std::string::npos);
        CHECK(std::string(e.what()).find("out of range") != std::string::npos);
    }
}

TEST_CASE("parse rejects non-integer cells") {
    CHECK_THROWS_AS(parse_matrix("part,a1\nx,3\ny,b\n"), validation_error);
    // alphanumeric codes are rejected, the metric is arithmetic over digits
    CHECK_THROWS_AS(parse_matrix("1,2\n3,4a\n"), validation_error);
}

TEST_CASE("parse rejects ragged rows") {
    try {
        parse_matrix("1,2,3\n4,5\n");
        FAIL("expected validation_error");
    } catch (const validation_error& e) {
        CHECK(std::string(e.what()).find("ragged row 2") != std::string::npos);
    }
}

TEST_CASE("parse rejects duplicate part ids") {
    CHECK_THROWS_AS(parse_matrix("part,a1\nx,1\nx,2\n"), validation_error);
}

TEST_CASE("json export shape") {
    auto m = builtin_dataset(BuiltinId::P1);
    auto j = nlohmann::json::parse(render_json(m));
    REQUIRE(j["parts"].size() == 5);
    CHECK(j["parts"][0]["id"] == "p1");
    CHECK(j["parts"][0]["code"] == nlohmann::json::array({0, 0, 1, 0, 0, 9, 1, 3, 6}));
    CHECK(j["attributes"].size() == 9);
}

TEST_CASE("builtin id parsing") {
    CHECK(parse_builtin_id("p3") == BuiltinId::P3);
    CHECK(builtin_id_name(BuiltinId::P4) == "P4");
    CHECK_THROWS_AS(parse_builtin_id("P9"), validation_error);
}
