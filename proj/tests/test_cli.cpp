#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "tx/io.hpp"

namespace fs = std::filesystem;
using tx::io::json;

namespace {
struct Run {
    int status = -1;
    std::string out;
};

Run txbench(const std::string& args) {
    std::string cmd = std::string(TXBENCH_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p);
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    int st = pclose(p);
    r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

std::string data(const std::string& name) { return std::string(TX_SOURCE_DIR) + "/data/" + name; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    fs::path d = fs::temp_directory_path() / "txbench-cli-test";
    fs::create_directories(d);
    return d / name;
}
}  // namespace

TEST_CASE("trivext report: schema, inputs, verdicts") {
    auto r = txbench("trivext " + data("jordan3.json"));
    CHECK(r.status == 0);
    json j = json::parse(r.out);
    CHECK(j["schema"] == tx::io::kSchema);
    CHECK(j["command"] == "trivext");
    CHECK(j["pass"] == true);
    CHECK(j["errors"].empty());
    REQUIRE(j["inputs"].size() == 1);
    CHECK(j["inputs"][0]["digest"].get<std::string>().size() == 16);
    const json& res = j["results"][0];
    CHECK(res["table"]["T"] == json({{"-1", 1}, {"0", 2}, {"1", 1}}));
    CHECK(res["window"]["ok"] == true);
}

TEST_CASE("fixture documents round-trip through validate") {
    fs::path p = scratch("pagoda3.json");
    auto f = txbench("fixture PAGODA_CON3");
    REQUIRE(f.status == 0);
    {
        std::ofstream out(p, std::ios::binary);
        out << f.out;
    }
    CHECK(f.out == slurp(data("pagoda_con3.json")));
    auto v = txbench("validate " + p.string());
    CHECK(v.status == 0);
    CHECK(json::parse(v.out)["results"][1]["resolutions"][0]["n"] == 4);
}

TEST_CASE("byte-identical reruns") {
    auto a = txbench("positive " + data("jordan3.json"));
    auto b = txbench("positive " + data("jordan3.json"));
    CHECK(a.status == 0);
    CHECK(a.out == b.out);
    auto s1 = txbench("search --vertices 2 --arrows 2 --max-hits -1");
    auto s2 = txbench("search --vertices 2 --arrows 2 --max-hits -1 --threads 2");
    CHECK(s1.status == 0);
    CHECK(s1.out == s2.out);
}

TEST_CASE("--out sends the report to a file and the summary to stdout") {
    fs::path p = scratch("report.json");
    fs::remove(p);
    auto r = txbench("--out " + p.string() + " yoneda " + data("jordan3.json") + " --rescale 3");
    CHECK(r.status == 0);
    CHECK(r.out.find("Scalar(1/3)") != std::string::npos);
    json j = json::parse(slurp(p));
    CHECK(j["results"][0]["comparison"]["verdict"] == "Scalar(1/3)");
}

TEST_CASE("malformed input: ParseError with a position, nonzero exit") {
    fs::path p = scratch("broken.json");
    {
        std::ofstream out(p);
        out << "{\n  \"kind\": \"periodic\",\n  \"n\": 2,,\n}\n";
    }
    auto r = txbench("trivext " + p.string());
    CHECK(r.status == 1);
    json j = json::parse(r.out);
    CHECK(j["pass"] == false);
    REQUIRE(j["errors"].size() == 1);
    CHECK(j["errors"][0]["kind"] == "ParseError");
    CHECK(j["errors"][0]["detail"].get<std::string>().find(":3:") != std::string::npos);
}

TEST_CASE("window below the minimum is refused") {
    auto r = txbench("trivext --periods 1 " + data("jordan3.json"));
    CHECK(r.status == 1);
    CHECK(json::parse(r.out)["errors"][0]["kind"] == "WindowTooSmall");
}

TEST_CASE("prime field option") {
    auto r = txbench("--field fp:7 trivext " + data("pagoda_con2.json"));
    CHECK(r.status == 0);
    CHECK(json::parse(r.out)["options"]["field"] == "F_7");
    CHECK(txbench("--field z trivext " + data("jordan3.json")).status == 1);
}

TEST_CASE("search with tiny bounds is empty and passes") {
    auto r = txbench("search --vertices 1 --arrows 0");
    CHECK(r.status == 0);
    json j = json::parse(r.out);
    CHECK(j["results"][0]["hits"].empty());
}

TEST_CASE("reconstruct on the shipped setups") {
    auto r = txbench("--arity 4 reconstruct " + data("setup_pagoda_con3.json") + " " + data("setup_nakayama2.json") + " " +
                     data("setup_finite_2cycle.json"));
    CHECK(r.status == 0);
    json j = json::parse(r.out);
    REQUIRE(j["results"].size() == 3);
    CHECK(j["results"][0]["N"]["0->0"] == json({{"0", 1}, {"1", 1}, {"2", 1}, {"3", 1}}));
    CHECK(j["results"][1]["N"]["0->1"] == json({{"1", 1}}));
    CHECK(j["results"][2]["phi"]["checked"] == true);
}

TEST_CASE("transfer and positive reports") {
    auto t = txbench("--arity 4 transfer " + data("dual_numbers.json"));
    CHECK(t.status == 0);
    json j = json::parse(t.out);
    CHECK(j["results"][0]["checks"]["stasheff"]["ok"] == true);
    CHECK(j["results"][0]["model"]["K"] == 4);
    auto p = txbench("positive " + data("nakayama2.json"));
    CHECK(p.status == 0);
    CHECK(json::parse(p.out)["results"][0]["N_checks"]["stasheff"]["ok"] == true);
}
