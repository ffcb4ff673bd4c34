#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>

#include "tailwalk/config.hpp"
#include "tailwalk/report.hpp"

using namespace tailwalk;

namespace {

const char* kFull = R"(# experiment
seed = 42
output = "runs/a"

[kernel]
family = "LatticeTable"   # explicit jumps
dimension = 1
alpha = 3.0
table_sites = [1, -1, 3, -3]
table_weights = [0.3, 0.3, 0.2, 0.2]

[solver]
method = "series_lattice"
tolerance = 1e-10
max_spacing = 0.125
radius = 40
paths = 1_000

[sweep]
times = [0.5, 2, 1e1]
x = [-3.5, 0, 7]
lambdas = [1]
directions = [1.0]
delta = 0.5
green_tolerance = 1e-13

[branching]
beta = 0.5
mu = 0.25
runs = 200
cap = 5000
times = [1, 2.5]
cell_width = 0.5
half_cells = 30
)";

int error_line(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.line();
    }
    return -1;
}

}  // namespace

TEST_CASE("full configuration parses") {
    const auto c = parse_config(kFull);
    CHECK(c.seed == 42u);
    CHECK(c.output == "runs/a");
    CHECK(c.kernel.family == Family::LatticeTable);
    REQUIRE(c.kernel.table.size() == 4);
    CHECK(c.kernel.table[2].site == std::vector<long>{3});
    CHECK(c.kernel.table[2].weight == 0.2);
    CHECK(c.solver.tolerance == 1e-10);
    CHECK(c.solver.radius == 40.0);
    CHECK(c.solver.paths == 1000);
    CHECK(c.sweep.times == std::vector<double>{0.5, 2.0, 10.0});
    CHECK(c.sweep.x == std::vector<double>{-3.5, 0.0, 7.0});
    CHECK(c.branching.times == std::vector<double>{1.0, 2.5});
    CHECK(c.branching.half_cells == 30);
}

TEST_CASE("defaults apply to an empty file") {
    const auto c = parse_config("");
    CHECK_FALSE(c.seed.has_value());
    CHECK(c.kernel.family == Family::Cauchy2_1D);
    CHECK(c == ExperimentConfig{});
    CHECK_THROWS_AS(c.require_seed("branch"), ConfigError);
}

TEST_CASE("parse, serialize, parse is the identity") {
    for (const std::string text : {std::string(kFull), std::string(""), std::string("[sweep]\nx = [0.1, 1e-300, -2.5e17]\n")}) {
        const auto a = parse_config(text);
        const auto s = serialize_config(a);
        const auto b = parse_config(s);
        CHECK(a == b);
        CHECK(serialize_config(b) == s);
        CHECK(config_hash(a) == config_hash(b));
    }
    ExperimentConfig odd;
    odd.output = "a \"quoted\" \\ path";
    odd.sweep.x = {0.1 + 0.2, std::numeric_limits<double>::denorm_min(), 1.0 / 3.0};
    odd.seed = 18446744073709551ull;
    CHECK(parse_config(serialize_config(odd)) == odd);
}

TEST_CASE("family names are case-insensitive") {
    CHECK(parse_config("[kernel]\nfamily = \"latticezipf\"\n").kernel.family == Family::LatticeZipf);
    CHECK(parse_config("[kernel]\nfamily = \"GENCAUCHY\"\ndimension = 2\n").kernel.dimension == 2);
}

TEST_CASE("diagnostics carry the offending line") {
    CHECK(error_line("seed = 1\n[kernel]\nfamily = \"Levy\"\n") == 3);
    CHECK(error_line("\n\nthis is not toml\n") == 3);
    CHECK(error_line("[kernel]\nalpha = \"three\"\n") == 2);
    CHECK(error_line("[solver]\ntolerance = 1e-9\ntolerance = 1e-8\n") == 3);
    CHECK(error_line("[sweep]\ntimes = [1, 2\n") == 2);
    CHECK(error_line("[sweep]\ntimes = [1, \"a\"]\n") == 2);
    CHECK(error_line("[sweep]\ntimes = [[1]]\n") == 2);
    CHECK(error_line("[sweep]\nspeed = 3\n") == 2);
    CHECK(error_line("[extras]\n") == 1);
    CHECK(error_line("seed = -4\n") == 1);
    CHECK(error_line("seed = 1.5\n") == 1);
    CHECK(error_line("output = \"open\n") == 1);
    CHECK(error_line("[branching]\ncap = 10\n") == 2);
    CHECK(error_line("[branching]\ntimes = [2, 1]\n") == 2);
    CHECK(error_line("[sweep]\nlambdas = [0]\n") == 2);
    CHECK(error_line("x = 1 2\n") == 1);
    CHECK(error_line("[solver]\nmethod = \"magic\"\n") == 2);
    try {
        parse_config("\n[kernel]\ndimension = 0\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).rfind("line 3: ", 0) == 0);
    }
}

TEST_CASE("config hash is stable and sensitive") {
    const auto a = parse_config(kFull);
    auto b = a;
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
    b.branching.runs += 1;
    CHECK(config_hash(a) != config_hash(b));
    // Comments and spacing do not matter.
    CHECK(config_hash(parse_config("seed=42\n")) == config_hash(parse_config("# c\nseed = 42   # x\n")));
}

TEST_CASE("FNV-1a reference value") {
    // FNV-1a 64 of the canonical text of an all-default config, frozen.
    const std::string text = serialize_config(ExperimentConfig{});
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    CHECK(config_hash(ExperimentConfig{}) == buf);
}

TEST_CASE("CSV cells use 17 significant digits and carry the header") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(1.0) == "1");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
    CsvTable t({"density", "0123456789abcdef"}, {"x", "p", "note"});
    t.add(0.5).add(1e-300).add(std::string("a,b")).end_row();
    t.add(-1.0).add(2L).add(std::string("plain")).end_row();
    CHECK(t.rows() == 2);
    const std::string s = t.str();
    CHECK(s.rfind("# tool_version: " + tool_version() + "\n# config_hash: 0123456789abcdef\n# command: density\n", 0) == 0);
    CHECK(s.find("x,p,note\n0.5,1e-300,\"a,b\"\n-1,2,plain\n") != std::string::npos);
    t.add(1.0);
    CHECK_THROWS(t.end_row());
}

TEST_CASE("JSON reports lead with the provenance keys") {
    nlohmann::ordered_json body;
    body["value"] = 0.1;
    const auto s = render_json({"verify", "abc"}, body);
    const auto j = nlohmann::ordered_json::parse(s);
    CHECK(j.begin().key() == "tool_version");
    CHECK(j["config_hash"] == "abc");
    CHECK(j["command"] == "verify");
    CHECK(j["value"].get<double>() == 0.1);
    CHECK(render_json({"verify", "abc"}, body) == s);
}
