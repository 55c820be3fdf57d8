#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "pilotlim/io.hpp"

namespace fs = std::filesystem;
using pilotlim::Json;

namespace {

const fs::path kWork = fs::temp_directory_path() / "pilotlim-test-cli";

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path write_config(const std::string& name, const Json& j) {
    fs::create_directories(kWork);
    const fs::path p = kWork / (name + ".json");
    std::ofstream(p) << j.dump(2);
    return p;
}

// Runs the CLI; stdout and stderr go to files under kWork.
int run(const std::string& args) {
    const std::string cmd = std::string("\"") + PILOTLIM_CLI_PATH + "\" " + args + " > \"" +
                            (kWork / "stdout.txt").string() + "\" 2> \"" + (kWork / "stderr.txt").string() + "\"";
    const int status = std::system(cmd.c_str());
#ifdef WEXITSTATUS
    return WEXITSTATUS(status);
#else
    return status;
#endif
}

Json tiny(const std::string& potential = R"({"kind": "free"})") {
    Json j = Json::parse(R"({
        "schema": 1,
        "name": "tiny",
        "grid": {"x_min": -10, "x_max": 10, "n": 128},
        "initial_state": {"kind": "gaussian", "sigma0": 1.0, "k0": 0.5},
        "times": {"t_final": 0.5, "dt": 0.005, "dt_store": 0.05},
        "ensemble": {"n": 50, "seed": 4},
        "trajectory_starts": [0.0, 0.5],
        "probe_times": [0.1, 0.25]
    })");
    j["potential"] = Json::parse(potential);
    return j;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("validate reports success and violations") {
    const auto good = write_config("good", tiny());
    CHECK(run("validate --config \"" + good.string() + "\"") == 0);
    CHECK(Json::parse(slurp(kWork / "stdout.txt"))["valid"] == true);
    auto j = tiny();
    j["grid"]["n"] = 2;
    const auto bad = write_config("bad", j);
    CHECK(run("validate --config \"" + bad.string() + "\"") == 2);
    CHECK(Json::parse(slurp(kWork / "stdout.txt"))["violations"][0]["path"] == "grid.n");
}

TEST_CASE("exit codes and error reports") {
    auto j = tiny();
    j["eps_list"] = {0.5, 0.7};
    const auto bad = write_config("bad_run", j);
    CHECK(run("evolve --config \"" + bad.string() + "\" --out \"" + (kWork / "o").string() + "\"") == 2);
    const auto err = Json::parse(slurp(kWork / "stderr.txt"));
    CHECK(err["error"]["kind"] == "validation");
    CHECK(err["error"]["violations"].size() == 1);
    CHECK(run("evolve --config \"" + (kWork / "nope.json").string() + "\"") == 1);
    CHECK(Json::parse(slurp(kWork / "stderr.txt"))["error"]["kind"] == "io");
    CHECK(run("frobnicate") == 2);
    CHECK(run("evolve") == 2);
}

TEST_CASE("potential-info for a harmonic well") {
    auto j = tiny(R"({"kind": "harmonic", "params": {"coefficient": 0.5}})");
    j["probe_points"] = {0.0, 1.0};
    const auto cfg = write_config("harm", j);
    const auto out = kWork / "harm_out";
    REQUIRE(run("potential-info --config \"" + cfg.string() + "\" --out \"" + out.string() + "\"") == 0);
    const auto info = Json::parse(slurp(out / "potential_info.json"));
    CHECK(info["points"][1]["L"] == "+inf");
    CHECK(info["points"][1]["eps"] == 0.0);
    CHECK(info["points"][1]["V"] == doctest::Approx(0.5));
    CHECK(fs::exists(out / "run_report.json"));
}

TEST_CASE("potential-info for a Yukawa tail") {
    auto j = tiny(R"({"kind": "yukawa", "params": {"coupling": 1.0, "screening": 0.5}})");
    j["grid"] = Json::parse(R"({"x_min": 1, "x_max": 201, "n": 1024})");
    j["initial_state"]["center"] = 20.0;
    j["probe_points"] = {100.0};
    j.erase("trajectory_starts");
    const auto cfg = write_config("yuk", j);
    const auto out = kWork / "yuk_out";
    REQUIRE(run("potential-info --config \"" + cfg.string() + "\" --out \"" + out.string() + "\"") == 0);
    const auto info = Json::parse(slurp(out / "potential_info.json"));
    CHECK(info["points"][0]["L"].get<double>() == doctest::Approx(2.0).epsilon(0.05));
}

TEST_CASE("trajectory runs are reproducible byte for byte") {
    const auto cfg = write_config("traj", tiny());
    for (const char* dir : {"a", "b"})
        REQUIRE(run("trajectories --quiet --config \"" + cfg.string() + "\" --out \"" + (kWork / dir).string() +
                    "\"") == 0);
    for (const char* f : {"trajectories.csv", "ensemble_final.csv", "equivariance.csv"}) {
        CAPTURE(f);
        CHECK(slurp(kWork / "a" / f) == slurp(kWork / "b" / f));
        CHECK_FALSE(slurp(kWork / "a" / f).empty());
    }
    const auto rep = Json::parse(slurp(kWork / "a" / "run_report.json"));
    CHECK(rep["subcommand"] == "trajectories");
    CHECK(rep["truncated_trajectories"] == 0);
    REQUIRE(run("trajectories --quiet --seed 99 --config \"" + cfg.string() + "\" --out \"" + (kWork / "c").string() +
                "\"") == 0);
    CHECK(slurp(kWork / "a" / "ensemble_final.csv") != slurp(kWork / "c" / "ensemble_final.csv"));
}

TEST_CASE("evolve and diagnose write their summaries") {
    const auto cfg = write_config("evo", tiny());
    const auto out = kWork / "evo_out";
    REQUIRE(run("evolve --quiet --config \"" + cfg.string() + "\" --out \"" + out.string() + "\"") == 0);
    CHECK(fs::exists(out / "moments.csv"));
    const auto rep = Json::parse(slurp(out / "run_report.json"));
    CHECK(rep["max_norm_drift"].get<double>() < 1e-10);
    REQUIRE(run("diagnose --quiet --config \"" + cfg.string() + "\" --out \"" + out.string() + "\"") == 0);
    CHECK(fs::exists(out / "lpw_000.csv"));
    CHECK(Json::parse(slurp(out / "diagnose_summary.json"))["lpw"].size() == 2);
}

TEST_CASE("a small epsilon sweep") {
    auto j = tiny(R"({"kind": "harmonic", "params": {"coefficient": 0.5}})");
    j["eps_list"] = {0.5, 0.25};
    j["grid"] = Json::parse(R"({"x_min": -4, "x_max": 4, "n": 256})");
    j["sweep"] = Json::parse(R"({"semiclassical": false})");
    j.erase("trajectory_starts");
    const auto cfg = write_config("sweep", j);
    const auto out = kWork / "sweep_out";
    REQUIRE(run("sweep-epsilon --quiet --config \"" + cfg.string() + "\" --out \"" + out.string() + "\"") == 0);
    const std::string csv = slurp(out / "convergence.csv");
    CHECK(csv.rfind("eps,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    CHECK(fs::exists(out / "convergence.json"));
}

}  // TEST_SUITE
