#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "rlw/diagnostics.hpp"
#include "rlw/errors.hpp"
#include "rlw/experiments.hpp"
#include "rlw/field_io.hpp"
#include "rlw/problems.hpp"

using namespace rlw;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("rlw_exp_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
    std::ifstream in(p);
    REQUIRE(in.good());
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        if (!line.empty() && line.back() == ',') cells.push_back("");
        rows.push_back(cells);
    }
    return rows;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("converge1d writes an error table with rates") {
    const fs::path out = fresh_dir("c1d");
    KeyValues kv;
    kv["scheme"] = "lmp-pc4";
    kv["taus"] = "0.1,0.05";
    kv["T"] = "0.5";
    kv["out"] = out.string();
    run_experiment("converge1d", kv);

    auto rows = read_csv(out / "converge1d.csv");
    REQUIRE(rows.size() == 3);
    CHECK(rows[0][0] == "scheme");
    CHECK(rows[1][0] == "lmp-pc4");
    CHECK(rows[1][3] == "");  // first ladder point has no rate
    CHECK(rows[1][6] == "ok");
    const double order = std::stod(rows[2][3]);
    CHECK(order > 3.0);
    CHECK(order < 5.0);
    const double e2_coarse = std::stod(rows[1][2]);
    const double e2_fine = std::stod(rows[2][2]);
    CHECK(e2_fine < e2_coarse);
    fs::remove_all(out);
}

TEST_CASE("identical configurations produce byte-identical tables") {
    const fs::path out1 = fresh_dir("det1");
    const fs::path out2 = fresh_dir("det2");
    KeyValues kv;
    kv["scheme"] = "lep-pc4,lmps4";
    kv["taus"] = "0.1,0.05";
    kv["T"] = "0.3";
    kv["n"] = "512";
    kv["out"] = out1.string();
    run_experiment("converge1d", kv);
    kv["out"] = out2.string();
    run_experiment("converge1d", kv);

    CHECK(slurp(out1 / "converge1d.csv") == slurp(out2 / "converge1d.csv"));
    CHECK(!slurp(out1 / "converge1d.csv").empty());
    fs::remove_all(out1);
    fs::remove_all(out2);
}

TEST_CASE("two-soliton with T=0 emits only the initial records") {
    const fs::path out = fresh_dir("ts0");
    KeyValues kv;
    kv["scheme"] = "lep-pc6";
    kv["tau"] = "0.1";
    kv["T"] = "0";
    kv["n"] = "256";
    kv["out"] = out.string();
    run_experiment("two-soliton", kv);

    auto rows = read_csv(out / "two-soliton" / "lep-pc6" / "invariants.csv");
    REQUIRE(rows.size() == 2);  // header + t=0
    CHECK(std::stod(rows[1][0]) == 0.0);
    CHECK(std::stod(rows[1][5]) == 0.0);  // drift columns are zero at t=0

    // the t=0 snapshot is the untouched initial state
    auto g = make_grid({-60.0, 300.0}, 256);
    RlwParams p;
    Field ic = two_soliton_ic(g, p, {1.0, -20.0}, {0.5, 15.0});
    LoadedField snap = read_field((out / "two-soliton" / "lep-pc6" / "snap_000000.txt").string());
    REQUIRE(snap.u.values.size() == ic.values.size());
    for (std::size_t i = 0; i < ic.values.size(); ++i) {
        CHECK(snap.u.values[i] == ic.values[i]);
    }

    auto summary = read_csv(out / "two-soliton" / "summary.csv");
    REQUIRE(summary.size() == 2);
    CHECK(summary[1][1] == "ok");
    fs::remove_all(out);
}

TEST_CASE("two-soliton records per-step invariants and drifts") {
    const fs::path out = fresh_dir("ts");
    KeyValues kv;
    kv["scheme"] = "lmp-pc4";
    kv["tau"] = "0.1";
    kv["T"] = "0.5";
    kv["n"] = "256";
    kv["out"] = out.string();
    run_experiment("two-soliton", kv);

    auto rows = read_csv(out / "two-soliton" / "lmp-pc4" / "invariants.csv");
    REQUIRE(rows.size() == 7);  // header + t=0..0.5
    CHECK(rows[0][6] == "momentum_drift");
    for (std::size_t r = 1; r < rows.size(); ++r) {
        CHECK(std::abs(std::stod(rows[r][6])) < 1e-10);  // momentum conserved
        CHECK(rows[r][4] == "");                          // no quadratic state
    }
    fs::remove_all(out);
}

TEST_CASE("converge2d builds its own reference and tabulates") {
    const fs::path out = fresh_dir("c2d");
    KeyValues kv;
    kv["scheme"] = "lep-pc4";
    kv["n"] = "16";
    kv["T"] = "0.2";
    kv["taus"] = "0.1,0.05";
    kv["ref_tau"] = "0.01";
    kv["out"] = out.string();
    run_experiment("converge2d", kv);

    auto rows = read_csv(out / "converge2d.csv");
    REQUIRE(rows.size() == 3);
    CHECK(rows[1][6] == "ok");
    CHECK(rows[2][6] == "ok");
    CHECK(std::stod(rows[2][2]) < std::stod(rows[1][2]));
    fs::remove_all(out);

    KeyValues empty_schemes = kv;
    empty_schemes["scheme"] = "";
    CHECK_THROWS_AS(run_experiment("converge2d", empty_schemes), ConfigError);
}

TEST_CASE("bore demo snapshots start bit-for-bit at the initial profile") {
    const fs::path out = fresh_dir("bore");
    KeyValues kv;
    kv["n"] = "32";
    kv["tau"] = "0.1";
    kv["T"] = "0.2";
    kv["snap_times"] = "0.1,0.2";
    kv["out"] = out.string();
    run_experiment("bore2d", kv);

    const fs::path dir = out / "bore2d" / "lmp-pc6";
    auto g = make_grid({-60.0, 300.0}, {-60.0, 300.0}, 32, 32);
    Field ic = undular_bore_ic(g, 0.0, 0.0, 2.0);
    LoadedField snap0 = read_field((dir / "snap_000000.txt").string());
    for (std::size_t i = 0; i < ic.values.size(); ++i) {
        CHECK(snap0.u.values[i] == ic.values[i]);
    }
    CHECK(fs::exists(dir / "snap_000001.txt"));
    CHECK(fs::exists(dir / "snap_000002.txt"));
    LoadedField snap2 = read_field((dir / "snap_000002.txt").string());
    CHECK(snap2.t == doctest::Approx(0.2).epsilon(1e-15));

    auto rows = read_csv(dir / "invariants.csv");
    REQUIRE(rows.size() == 4);  // header + t=0,0.1,0.2
    fs::remove_all(out);
}

TEST_CASE("maxwellian demo keeps the quadratic energy flat") {
    const fs::path out = fresh_dir("maxw");
    KeyValues kv;
    kv["n"] = "32";
    kv["tau"] = "0.1";
    kv["T"] = "0.3";
    kv["snap_times"] = "0.3";
    kv["out"] = out.string();
    run_experiment("maxwellian2d", kv);

    auto rows = read_csv(out / "maxwellian2d" / "lep-pc6" / "invariants.csv");
    REQUIRE(rows.size() == 5);
    const double e0 = std::stod(rows[1][4]);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        CHECK(std::abs(std::stod(rows[r][8])) < 1e-11 * std::abs(e0));
        CHECK(std::abs(std::stod(rows[r][5])) < 1e-11);  // mass drift
    }
    fs::remove_all(out);
}

TEST_CASE("custom runs from a saved field") {
    const fs::path out = fresh_dir("custom");
    auto g = make_grid({0.0, 2.0 * std::numbers::pi}, 64);
    Field ic = sample(g, [](double x) { return 0.4 + 0.2 * std::sin(x); });
    const fs::path icp = out / "ic.txt";
    write_field(icp.string(), ic, 0.0);

    KeyValues kv;
    kv["in"] = icp.string();
    kv["scheme"] = "lep-pc4";
    kv["tau"] = "0.05";
    kv["T"] = "0.25";
    kv["out"] = out.string();
    run_experiment("custom", kv);

    LoadedField fin = read_field((out / "custom" / "final.txt").string());
    CHECK(fin.t == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(std::abs(mass(fin.u) - mass(ic)) < 1e-11);

    auto rows = read_csv(out / "custom" / "invariants.csv");
    REQUIRE(rows.size() == 7);

    KeyValues missing = kv;
    missing.erase("in");
    CHECK_THROWS_AS(run_experiment("custom", missing), ConfigError);
    KeyValues bad_file = kv;
    bad_file["in"] = (out / "nope.txt").string();
    CHECK_THROWS_AS(run_experiment("custom", bad_file), ParseError);
    fs::remove_all(out);
}

TEST_CASE("configuration mistakes are rejected") {
    KeyValues kv;
    kv["taus"] = "0.1";
    kv["typo_key"] = "1";
    CHECK_THROWS_AS(run_experiment("converge1d", kv), ConfigError);

    CHECK_THROWS_AS(run_experiment("no-such-command", KeyValues{}), ConfigError);

    KeyValues badscheme;
    badscheme["scheme"] = "rk4";
    CHECK_THROWS_AS(run_experiment("converge1d", badscheme), ConfigError);
}

TEST_CASE("RLW_OUT environment variable overrides the output directory") {
    const fs::path out_cfg = fresh_dir("envA");
    const fs::path out_env = fresh_dir("envB");
    setenv("RLW_OUT", out_env.string().c_str(), 1);
    KeyValues kv;
    kv["scheme"] = "lmp-pc4";
    kv["taus"] = "0.1";
    kv["T"] = "0.2";
    kv["n"] = "256";
    kv["out"] = out_cfg.string();
    run_experiment("converge1d", kv);
    unsetenv("RLW_OUT");

    CHECK(fs::exists(out_env / "converge1d.csv"));
    CHECK(!fs::exists(out_cfg / "converge1d.csv"));
    fs::remove_all(out_cfg);
    fs::remove_all(out_env);
}

TEST_CASE("efficiency table records wall-clock seconds") {
    const fs::path out = fresh_dir("eff");
    KeyValues kv;
    kv["scheme"] = "lmp-pc4";
    kv["taus"] = "0.1";
    kv["T"] = "0.2";
    kv["n"] = "256";
    kv["out"] = out.string();
    run_experiment("efficiency", kv);

    auto rows = read_csv(out / "efficiency.csv");
    REQUIRE(rows.size() == 2);
    CHECK(rows[0][3] == "seconds");
    CHECK(std::stod(rows[1][3]) > 0.0);
    CHECK(rows[1][4] == "ok");
    fs::remove_all(out);
}
