#include "hyperlab/errors.hpp"
#include "hyperlab/runner.hpp"

#include <doctest.h>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace hyperlab;
namespace fs = std::filesystem;

namespace {

struct Invocation {
    int code = 0;
    std::string out;
    std::string err;
};

Invocation invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "hyperlab");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    Invocation r;
    r.code = run_command(static_cast<int>(argv.size()), argv.data(), out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

fs::path scratch_dir() {
    const auto dir = fs::temp_directory_path() / "hyperlab_runner_test";
    fs::create_directories(dir);
    return dir;
}

fs::path write_file(const std::string& name, const std::string& text) {
    const auto path = scratch_dir() / name;
    std::ofstream(path, std::ios::binary) << text;
    return path;
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string first_line(const std::string& text) { return text.substr(0, text.find('\n')); }

std::string value_of(const RunConfig& cfg, const std::string& key) {
    for (const auto& [k, v] : cfg.resolved())
        if (k == key) return v;
    return "<missing>";
}

const char* kSmallRun = "geometry = hyperbolic3\nr_max = 20\nn = 512\ndt = 0.01\nt_end = 0.1\nrecord_stride = 5\n";

}  // namespace

TEST_CASE("config parsing") {
    SUBCASE("defaults are filled in") {
        const auto cfg = parse_config("geometry = hyperbolic3\nn = 4096");
        CHECK(cfg.sim.r_max == 40.0);
        CHECK(cfg.sim.n == 4096);
        CHECK(cfg.sim.geometry == Geometry::hyperbolic());
        CHECK(cfg.warnings.empty());
        CHECK(value_of(cfg, "r_max") == "40");
    }
    SUBCASE("comments, blank lines and whitespace") {
        const auto cfg = parse_config("# header\n\n  dt   =  0.002   # trailing\ndatum = band\nN = 6\nwidth = 0.5\nseed = 99\n");
        CHECK(cfg.sim.dt == 0.002);
        CHECK(cfg.sim.datum.family == DatumSpec::Family::SpectralBand);
        CHECK(cfg.sim.datum.N == 6.0);
        CHECK(cfg.seed == 99);
    }
    SUBCASE("duplicate key: last wins with a warning") {
        const auto cfg = parse_config("n = 1024\nn = 2048\n");
        CHECK(cfg.sim.n == 2048);
        REQUIRE(cfg.warnings.size() == 1);
        CHECK(cfg.warnings[0].find("'n'") != std::string::npos);
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(parse_config("dt = -1"), InvalidArgument);
        CHECK_THROWS_AS(parse_config("colour = red"), UnknownKey);
        try {
            parse_config("n = 1024\nthis line has no equals\n");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.line() == 2);
        }
        CHECK_THROWS_AS(parse_config("n = many"), ParseError);
        CHECK_THROWS_AS(parse_config("dt = 0.1x"), ParseError);
        CHECK_THROWS_AS(parse_config("= 3"), ParseError);
        CHECK_THROWS_AS(parse_config("geometry = spherical3"), InvalidArgument);
    }
    SUBCASE("resolved keys in a fixed order") {
        const auto keys = parse_config("").resolved();
        REQUIRE(keys.size() == 15);
        CHECK(keys.front().first == "geometry");
        CHECK(keys.back().first == "seed");
    }
}

TEST_CASE("number format") {
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(format_number(2.0) == "2");
    CHECK(format_number(-0.25) == "-0.25");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("admissible subcommand") {
    auto r = invoke({"admissible", "--q", "2", "--r", "4"});
    CHECK(r.code == 0);
    CHECK(r.out == "euclidean3=false hyperbolic3=true\n");
    r = invoke({"admissible", "--q", "inf", "--r", "2"});
    CHECK(r.out == "euclidean3=true hyperbolic3=true\n");
    r = invoke({"admissible", "--q", "1", "--r", "4"});
    CHECK(r.code == 2);
}

TEST_CASE("simulate writes the trajectory CSV and a JSON summary") {
    const auto cfg = write_file("small.cfg", kSmallRun);
    const auto csv = scratch_dir() / "traj.csv";
    const auto r = invoke({"simulate", "--config", cfg.string(), "--out", csv.string()});
    REQUIRE(r.code == 0);
    const auto text = read_file(csv);
    CHECK(first_line(text) == "t,mass,energy,z_density");
    CHECK(std::count(text.begin(), text.end(), '\n') == 12);
    const auto summary = nlohmann::json::parse(r.out);
    CHECK(summary["manifest"]["command"] == "simulate");
    CHECK(summary["manifest"]["version"] == kVersion);
    CHECK(summary["results"]["steps"] == 10);

    SUBCASE("byte-identical reruns") {
        const auto again = scratch_dir() / "traj2.csv";
        REQUIRE(invoke({"simulate", "--config", cfg.string(), "--out", again.string()}).code == 0);
        CHECK(read_file(again) == text);
    }
    SUBCASE("duplicate-key warnings reach the manifest") {
        const auto dup = write_file("dup.cfg", std::string(kSmallRun) + "dt = 0.01\n");
        const auto d = invoke({"simulate", "--config", dup.string(), "--out", csv.string()});
        REQUIRE(d.code == 0);
        CHECK(nlohmann::json::parse(d.out)["manifest"]["warnings"].size() == 1);
        CHECK(d.err.find("duplicate") != std::string::npos);
    }
}

TEST_CASE("exit codes") {
    CHECK(invoke({"simulate", "--config", write_file("neg.cfg", "dt = -1\n").string()}).code == 2);
    CHECK(invoke({"simulate", "--config", write_file("unknown.cfg", "colour = red\n").string()}).code == 2);
    CHECK(invoke({"simulate", "--config", write_file("bad.cfg", "n 4096\n").string()}).code == 2);
    CHECK(invoke({"simulate", "--config", (scratch_dir() / "missing.cfg").string()}).code == 2);
    CHECK(invoke({"bilinear", "--q", "2", "--N", "8", "--L", "8"}).code == 2);
    CHECK(invoke({"frobnicate"}).code == 2);
    CHECK(invoke({}).code == 2);
    const auto wall = write_file("wall.cfg", "r_max = 10\nn = 1024\ndatum = gaussian\na = 6\n");
    const auto r = invoke({"simulate", "--config", wall.string()});
    CHECK(r.code == 3);
    CHECK_FALSE(r.err.empty());
}

TEST_CASE("CSV headers of the experiment subcommands") {
    const auto out = scratch_dir() / "table.csv";
    auto header_of = [&](std::vector<std::string> args) {
        args.push_back("--out");
        args.push_back(out.string());
        const auto r = invoke(args);
        CAPTURE(r.err);
        REQUIRE(r.code == 0);
        return first_line(read_file(out));
    };
    CHECK(header_of({"lp-check", "--n", "1024", "--r-max", "20"}) == "check,relative_error");
    CHECK(header_of({"dispersive", "--n", "4096"}) == "t,norm,ratio");
    CHECK(header_of({"bilinear", "--q", "2", "--N", "2", "--L", "8", "--r-max", "20", "--n", "1024"}) ==
          "N,L,q,measured,predicted_C,ratio");
    CHECK(header_of({"improved", "--q", "1.5", "--r-max", "20", "--n", "1024"}) == "q,lhs,sup_term,rhs,ratio,argmax_N");
    CHECK(header_of({"morawetz", "--count", "1", "--t-end", "0.1", "--dt", "0.01", "--n", "512", "--r-max", "20", "--stride",
                     "5"}) == "index,a,mass,ratio");
    CHECK(header_of({"smoothing", "--window", "1", "--n", "2048"}) == "epsilon,window,ratio");
    const auto cfg = write_file("small2.cfg", kSmallRun);
    CHECK(header_of({"lts", "--config", cfg.string(), "--N", "2,4"}) == "N,T,r,ratio");
    CHECK(header_of({"scatter", "--config", cfg.string()}) == "t,cauchy");
    CHECK(header_of({"profiles", "--scales", "4", "--max-atoms", "1"}) == "N,t_offset,mass_captured,defect");
}

TEST_CASE("summary goes to stderr when the CSV uses stdout") {
    const auto r = invoke({"lp-check", "--n", "1024", "--r-max", "20"});
    REQUIRE(r.code == 0);
    CHECK(first_line(r.out) == "check,relative_error");
    const auto summary = nlohmann::json::parse(r.err.substr(r.err.find('{')));
    CHECK(summary["manifest"]["command"] == "lp-check");
}
