#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "rlw/errors.hpp"
#include "rlw/run_config.hpp"

using namespace rlw;
namespace fs = std::filesystem;

namespace {

fs::path write_cfg(const std::string& name, const std::string& text) {
    const fs::path p = fs::temp_directory_path() / ("rlw_cfg_" + name);
    std::ofstream out(p);
    out << text;
    return p;
}

}  // namespace

TEST_CASE("config files parse comments, blanks, and overrides") {
    const fs::path p = write_cfg("basic.txt",
                                 "# header comment\n"
                                 "tau = 0.1\n"
                                 "\n"
                                 "scheme=lmp-pc4,lep-pc6  # trailing comment\n"
                                 "n=1024\n"
                                 "tau=0.05\n");  // later assignment wins
    KeyValues kv = parse_config_file(p.string());
    CHECK(kv.size() == 3);
    CHECK(kv["tau"] == "0.05");
    CHECK(kv["scheme"] == "lmp-pc4,lep-pc6");
    CHECK(kv["n"] == "1024");

    apply_override(kv, "n=2048");
    apply_override(kv, "T = 1.5");
    CHECK(kv["n"] == "2048");
    CHECK(kv["T"] == "1.5");
    CHECK_THROWS_AS(apply_override(kv, "justakey"), ConfigError);
    CHECK_THROWS_AS(apply_override(kv, "=value"), ConfigError);
    fs::remove(p);

    const fs::path bad = write_cfg("bad.txt", "tau=0.1\nnot a pair\n");
    try {
        (void)parse_config_file(bad.string());
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }
    fs::remove(bad);

    CHECK_THROWS_AS((void)parse_config_file("/nonexistent/cfg.txt"), ParseError);
}

TEST_CASE("typed getters parse numbers, fractions, lists, and booleans") {
    KeyValues kv;
    kv["tau"] = "1/800";
    kv["n"] = "2048";
    kv["taus"] = "1/10, 1/20,1/40";
    kv["scheme"] = "lmps4,lep-pc6";
    kv["dealias"] = "true";
    kv["bad"] = "abc";
    kv["frac"] = "3/0";

    ConfigView cv(kv);
    CHECK(cv.get_double("tau", 0.0) == 1.0 / 800.0);
    CHECK(cv.get_int("n", 0) == 2048);
    CHECK(cv.get_double("missing", 7.5) == 7.5);
    CHECK(cv.get_bool("dealias", false));
    CHECK(cv.get_bool("missing2", true));

    auto taus = cv.get_double_list("taus", {});
    REQUIRE(taus.size() == 3);
    CHECK(taus[0] == 0.1);
    CHECK(taus[2] == 1.0 / 40.0);

    auto schemes = cv.get_string_list("scheme", {});
    REQUIRE(schemes.size() == 2);
    CHECK(schemes[0] == "lmps4");
    CHECK(schemes[1] == "lep-pc6");

    CHECK_THROWS_AS((void)cv.get_double("bad", 0.0), ConfigError);
    CHECK_THROWS_AS((void)cv.get_double("frac", 0.0), ConfigError);

    KeyValues kv2;
    kv2["n"] = "10.5";
    ConfigView cv2(kv2);
    CHECK_THROWS_AS((void)cv2.get_int("n", 0), ConfigError);

    KeyValues kv3;
    kv3["flag"] = "maybe";
    ConfigView cv3(kv3);
    CHECK_THROWS_AS((void)cv3.get_bool("flag", false), ConfigError);
}

TEST_CASE("unconsumed keys are reported as typos") {
    KeyValues kv;
    kv["tau"] = "0.1";
    kv["tua"] = "0.2";  // typo
    ConfigView cv(kv);
    (void)cv.get_double("tau", 0.0);
    try {
        cv.reject_unknown();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("tua") != std::string::npos);
    }

    ConfigView clean(KeyValues{});
    CHECK_NOTHROW(clean.reject_unknown());
}
