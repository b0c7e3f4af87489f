#include <catch2/catch_amalgamated.hpp>

#include "capmax/generate.hpp"
#include "capmax/io.hpp"

#include <cstdio>
#include <random>

using namespace capmax;

TEST_CASE("grid function json round trip") {
    std::mt19937_64 rng(1);
    for (int n = 1; n <= 3; ++n) {
        GridSpec spec(n, 2, {0.0, 0.25, 0.5}, 2.0);
        GridFunction f = random_weight(spec, rng());
        const json j = to_json(f);
        GridFunction g = grid_function_from_json(j);
        REQUIRE(g.spec().same_grid(f.spec()));
        for (std::uint64_t i = 0; i < f.size(); ++i) CHECK(g[i] == f[i]);
        // serialization is deterministic byte for byte
        CHECK(to_json(g).dump() == j.dump());
    }
}

TEST_CASE("row major order on disk") {
    // n=2, depth=1: cells (x,y); row-major puts axis 0 slowest
    GridSpec spec(2, 1);
    std::vector<double> v(4);
    v[cell_index(spec, {0, 0, 0})] = 1.0;
    v[cell_index(spec, {0, 1, 0})] = 2.0;
    v[cell_index(spec, {1, 0, 0})] = 3.0;
    v[cell_index(spec, {1, 1, 0})] = 4.0;
    const json j = to_json(GridFunction(spec, v));
    const auto row = j.at("values").get<std::vector<double>>();
    CHECK(row == std::vector<double>{1.0, 2.0, 3.0, 4.0});
}

TEST_CASE("cell set round trip") {
    GridSpec spec(2, 2);
    CellSet s = random_cell_set(spec, 9);
    CellSet t = cell_set_from_json(to_json(s));
    CHECK(t == s);
}

TEST_CASE("csv round trip") {
    GridSpec spec(1, 3);
    std::mt19937_64 rng(4);
    GridFunction f = random_weight(spec, rng());
    GridFunction g = grid_function_from_csv(grid_function_to_csv(f), spec);
    for (std::uint64_t i = 0; i < f.size(); ++i) CHECK(g[i] == f[i]);

    CHECK_THROWS(grid_function_from_csv("nope\n0,1\n", spec));
    CHECK_THROWS(grid_function_from_csv("index,value\n99,1\n", spec));
}

TEST_CASE("file round trip is byte identical") {
    GridSpec spec(1, 4);
    GridFunction f = random_weight(spec, 7);
    const std::string path1 = "/tmp/capmax_io_test_1.json";
    const std::string path2 = "/tmp/capmax_io_test_2.json";
    write_grid_function(path1, f);
    GridFunction g = read_grid_function(path1);
    write_grid_function(path2, g);
    CHECK(read_text(path1) == read_text(path2));
    std::remove(path1.c_str());
    std::remove(path2.c_str());
}

TEST_CASE("report json") {
    CheckReport rep;
    rep.id = "demo";
    rep.params = {{"p", 2.0}};
    rep.measured = {{"ratio", 1.5}};
    rep.bound = 2.0;
    rep.pass = true;
    rep.verdict = "ok";
    const json j = to_json(rep);
    CHECK(j.at("id") == "demo");
    CHECK(j.at("measured").at("ratio") == 1.5);
    CHECK(j.at("pass") == true);
    CHECK(j.contains("version"));

    const std::string csv = report_csv(rep);
    CHECK(csv.find("ratio,1.5") != std::string::npos);
}

TEST_CASE("decomposition json") {
    GridSpec spec(1, 2);
    Decomposition d{{DyadicCube{1, {0, 0, 0}}}, CellSet::empty_set(spec), {}};
    const json j = to_json(spec, d);
    CHECK(j.at("cubes").size() == 1);
    CHECK(j.at("cubes")[0].at("level") == 1);
}
