#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "finsheaf/corpus.hpp"
#include "finsheaf/io.hpp"

using namespace finsheaf;
namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

fs::path data_dir() {
    const char* env = std::getenv("FINSHEAF_DATA");
    REQUIRE(env != nullptr);
    return fs::path(env);
}

std::string cli_path() {
    const char* env = std::getenv("FINSHEAF_CLI");
    REQUIRE(env != nullptr);
    return env;
}

struct RunResult {
    int status = -1;
    std::string out;
};

RunResult run_cli(const std::string& args) {
    RunResult r;
    std::string cmd = cli_path() + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    int rc = pclose(pipe);
    r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
    return r;
}

// Reports carry a wall-clock field; drop it before comparing runs.
std::string strip_timing(const std::string& s) {
    std::istringstream in(s);
    std::ostringstream out;
    std::string line;
    while (std::getline(in, line))
        if (line.find("timing_ms") == std::string::npos) out << line << "\n";
    return out.str();
}

fs::path write_temp(const std::string& name, const std::string& text) {
    fs::path p = fs::temp_directory_path() / name;
    std::ofstream(p, std::ios::binary) << text;
    return p;
}

} // namespace

TEST_CASE("canonical serialization round-trips every bundled file") {
    std::size_t seen = 0;
    for (const auto& entry : fs::directory_iterator(data_dir())) {
        if (entry.path().extension() != ".json") continue;
        ++seen;
        std::string text = read_file(entry.path());
        WorkspaceFile w = load_workspace_text(text, entry.path().string());
        CHECK_MESSAGE(serialize(w) == text, entry.path().filename().string());
    }
    CHECK(seen >= 10);
}

TEST_CASE("serializer is canonical independent of construction order") {
    SpacePtr circ = corpus::pseudocircle();
    std::string a = serialize_sheaf(constant_sheaf(circ, FpGroup::free(1)));
    WorkspaceFile w = load_workspace_text(a, "<mem>");
    REQUIRE(w.sheaf.has_value());
    CHECK(serialize_sheaf(*w.sheaf) == a);
    CHECK(digest_hex(a) == digest_hex(a));
    CHECK(digest_hex(a) != digest_hex(a + " "));
}

TEST_CASE("schema validation failures carry the offending path") {
    // wrong-shape restriction matrix
    std::string bad = R"({
  "format_version": 1,
  "kind": "sheaf",
  "space": "sierpinski",
  "stalks": {"a": {"gens": 1, "rels": []}, "b": {"gens": 1, "rels": []}},
  "restrictions": {"b:a": [[1, 0]]}
})";
    CHECK_THROWS_WITH_AS(load_workspace_text(bad, "<mem>"), doctest::Contains("SchemaError"),
                         Error);

    CHECK_THROWS_WITH_AS(load_workspace_text("{not json", "<mem>"),
                         doctest::Contains("ParseError"), Error);
    CHECK_THROWS_WITH_AS(load_workspace_text(R"({"format_version": 1, "kind": "mystery"})", "<mem>"),
                         doctest::Contains("SchemaError"), Error);
}

TEST_CASE("cli: reports are deterministic") {
    std::string args = "cohomology --space pseudocircle --sheaf constZ --max-degree 2 --format json";
    RunResult a = run_cli(args);
    RunResult b = run_cli(args);
    CHECK(a.status == 0);
    CHECK(strip_timing(a.out) == strip_timing(b.out));
    CHECK(a.out.find("\"groups\"") != std::string::npos);

    std::string sd = (data_dir() / "sample_double.json").string();
    std::string ssargs = "ss --complex " + sd + " --axis q --pages 4 --format json";
    RunResult ss = run_cli(ssargs);
    CHECK(ss.status == 0);
    CHECK(strip_timing(ss.out) == strip_timing(run_cli(ssargs).out));
}

TEST_CASE("cli: text and json formats both render") {
    RunResult t = run_cli("flasque --space pseudocircle --sheaf sky:c");
    CHECK(t.status == 0);
    CHECK(t.out.find("true") != std::string::npos);
    RunResult j = run_cli("flasque --space pseudocircle --sheaf sky:c --format json");
    CHECK(j.status == 0);
    CHECK(j.out.find("\"is_flasque\": true") != std::string::npos);
}

TEST_CASE("cli: input errors exit 2") {
    fs::path bad = write_temp("finsheaf_bad.json", "{not json");
    RunResult r = run_cli("check --sheaf " + bad.string() + " --format json");
    CHECK(r.status == 2);
    CHECK(r.out.find("ParseError") != std::string::npos);

    fs::path shape = write_temp("finsheaf_shape.json", R"({
  "format_version": 1,
  "kind": "sheaf",
  "space": "sierpinski",
  "stalks": {"a": {"gens": 1, "rels": []}, "b": {"gens": 1, "rels": []}},
  "restrictions": {"b:a": [[1, 0]]}
})");
    RunResult r2 = run_cli("check --sheaf " + shape.string() + " --format json");
    CHECK(r2.status == 2);
    CHECK(r2.out.find("SchemaError") != std::string::npos);

    RunResult r3 = run_cli("cohomology --space no-such-space --sheaf constZ --format json");
    CHECK(r3.status == 2);
}

TEST_CASE("cli: cap violations exit 3") {
    // 13-point antichain exceeds the default point cap
    std::ostringstream space;
    space << R"({"format_version": 1, "kind": "space", "points": [)";
    for (int i = 0; i < 13; ++i) space << (i ? ", " : "") << "\"p" << i << "\"";
    space << R"(], "leq": []})";
    fs::path big = write_temp("finsheaf_big.json", space.str());
    RunResult r = run_cli("cohomology --space " + big.string() + " --sheaf constZ --format json");
    CHECK(r.status == 3);
    CHECK(r.out.find("CapViolation") != std::string::npos);

    // raising the point cap trips the open-set cap instead (2^13 opens)
    RunResult r2 = run_cli("cohomology --space " + big.string() +
                           " --sheaf constZ --max-points 16 --max-opens 100 --format json");
    CHECK(r2.status == 3);
    CHECK(r2.out.find("TooManyOpens") != std::string::npos);

    RunResult r3 = run_cli("cohomology --space point --sheaf constZ --max-degree 9 --format json");
    CHECK(r3.status == 3);
    RunResult r4 = run_cli("ss --complex " + (data_dir() / "sample_double.json").string() +
                           " --pages 13 --format json");
    CHECK(r4.status == 3);
}

TEST_CASE("cli: corpus listing and bundled inputs") {
    RunResult r = run_cli("corpus list --format json");
    CHECK(r.status == 0);
    CHECK(r.out.find("pseudocircle") != std::string::npos);
    CHECK(r.out.find("sphere6") != std::string::npos);

    RunResult h = run_cli("hyper --complex single_constZ --space pseudocircle --max-degree 2 --format json");
    CHECK(h.status == 0);
    CHECK(h.out.find("\"converged_by_p\": true") != std::string::npos);
    CHECK(h.out.find("\"converged_by_q\": true") != std::string::npos);

    RunResult a = run_cli("acyclic-check --resolution pseudocircle_skyscrapers --max-degree 1 --format json");
    CHECK(a.status == 0);
    CHECK(a.out.find("\"verdict\": true") != std::string::npos);
}

TEST_CASE("cli: double complex with non-commuting squares is rejected") {
    // square with identity verticals, identity bottom and x2 top: d delta != delta d
    std::string dc = R"({
  "format_version": 1,
  "kind": "double_complex",
  "pmax": 1,
  "qmax": 1,
  "cells": {
    "0,0": {"gens": 1, "rels": []}, "0,1": {"gens": 1, "rels": []},
    "1,0": {"gens": 1, "rels": []}, "1,1": {"gens": 1, "rels": []}
  },
  "horizontal": {"0,0": [[1]], "0,1": [[2]]},
  "vertical": {"0,0": [[1]], "1,0": [[1]]}
})";
    fs::path p = write_temp("finsheaf_dc.json", dc);
    RunResult r = run_cli("ss --complex " + p.string() + " --format json");
    CHECK(r.status == 2);
    CHECK(r.out.find("SignViolation") != std::string::npos);
}
