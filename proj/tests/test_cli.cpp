#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "padiclab/fixtures.hpp"
#include "padiclab/io.hpp"

using namespace padiclab;

namespace {

std::string binary_path() {
    if (const char* env = std::getenv("PADICLAB_BIN")) return env;
    return "./build/tools/padiclab";
}
const std::string g_binary = binary_path();

struct RunResult {
    int code;
    std::string out;
};

RunResult run(const std::string& args) {
    std::string cmd = g_binary + " " + args + " 2>/dev/null";
    std::array<char, 4096> buf;
    std::string out;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) out.append(buf.data(), n);
    int status = pclose(p);
    return RunResult{WEXITSTATUS(status), out};
}

} // namespace

TEST_CASE("ideal counts subcommand matches the worked example") {
    auto r = run("ideals --D -23 --n 2");
    REQUIRE(r.code == 0);
    Json j = Json::parse(r.out);
    CHECK(j.at("classes") == 3);
    CHECK(j.at("counts") == Json::array({0, 1, 1}));
}

TEST_CASE("reports are byte-identical across runs") {
    auto a = run("verify --family degree-relation --seed 99");
    auto b = run("verify --family degree-relation --seed 99");
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    auto c = run("ideals --D -4 --n 25");
    auto d = run("ideals --D -4 --n 25");
    CHECK(c.out == d.out);
}

TEST_CASE("exit codes") {
    CHECK(run("nonsense-subcommand").code == 64);
    CHECK(run("ideals --D 5 --n 2").code == 1);        // positive discriminant
    CHECK(run("ideals --D -4 --c 5 --n 10").code == 1); // gcd(n, c) > 1
    CHECK(run("verify --family degree-relation --corrupt").code == 1);

    // precision errors exit 2: a series that vanishes at precision
    auto R = make_ring(5, 0);
    TruncatedSeries1 zero(R, 8, 6);
    std::ofstream f("/tmp/padiclab_zero_series.json");
    f << series1_to_json(zero).dump() << "\n";
    f.close();
    CHECK(run("wprep --series /tmp/padiclab_zero_series.json").code == 2);
}

TEST_CASE("wprep subcommand on a planted series") {
    auto R = make_ring(5, 0);
    auto rng = child_rng(4, 4);
    auto plant = plant_series1(R, 24, 14, 3, 2, rng);
    std::ofstream f("/tmp/padiclab_wprep.json");
    f << series1_to_json(plant.g).dump() << "\n";
    f.close();
    auto r = run("wprep --series /tmp/padiclab_wprep.json");
    REQUIRE(r.code == 0);
    Json j = Json::parse(r.out);
    CHECK(j.at("mu") == plant.mu);
    CHECK(j.at("lambda") == plant.lambda);
}

TEST_CASE("degrees and basechange subcommands") {
    auto R = make_ring(5, 0);
    auto rng = child_rng(5, 5);
    auto a = random_distinguished_poly(R, 2, 14, rng);
    TruncatedSeries2 F = poly_axis_to_series2(R, a, 1, 40, 20, 14);
    F = F * random_unit_series2(R, 40, 20, 14, rng);
    std::ofstream f("/tmp/padiclab_series2.json");
    f << series2_to_json(F).dump() << "\n";
    f.close();

    auto r = run("degrees --series2 /tmp/padiclab_series2.json");
    REQUIRE(r.code == 0);
    Json j = Json::parse(r.out);
    CHECK(j.at("r1") == 2);
    CHECK(j.at("holds") == true);

    auto rb = run("basechange --series2 /tmp/padiclab_series2.json --nmax 1");
    REQUIRE(rb.code == 0);
    Json jb = Json::parse(rb.out);
    CHECK(jb.at("all_pass") == true);
    CHECK(jb.at("r1") == 2);
}

TEST_CASE("chars subcommand lists orbits") {
    auto r = run("chars --p 5 --D -4 --c 1 --q 25 --orbits");
    REQUIRE(r.code == 0);
    Json j = Json::parse(r.out);
    REQUIRE(j.contains("orbits"));
    // conductor-25 characters partition into orbits of size 4
    for (const auto& o : j.at("orbits")) CHECK(o.at("size") == 4);
    CHECK(j.at("cyclotomic").size() == 20);
}

TEST_CASE("verify runs every family green") {
    auto r = run("verify");
    REQUIRE(r.code == 0);
    Json j = Json::parse(r.out);
    CHECK(j.at("pass") == true);
    CHECK(j.at("rows").size() == 8);
}
