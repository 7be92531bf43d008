#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>

#include "doctest.h"
#include "rlw/errors.hpp"
#include "rlw/field_io.hpp"
#include "test_support.hpp"

using namespace rlw;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    return fs::temp_directory_path() / ("rlw_io_" + name);
}

void write_text(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    out << text;
}

}  // namespace

TEST_CASE("field files round-trip bitwise") {
    auto g = make_grid({-3.5, 11.25}, 32);
    Field u = test::random_band_limited(g, 10, 7101);
    u.values[5] = 1.0 / 3.0;
    u.values[6] = -0.0;
    const fs::path p = temp_file("rt1d.txt");
    write_field(p.string(), u, 0.7 + 1e-16);

    LoadedField back = read_field(p.string());
    REQUIRE(back.u.values.size() == u.values.size());
    CHECK(back.t == 0.7 + 1e-16);
    CHECK(back.u.grid->dim() == 1);
    CHECK(back.u.grid->axis(0).a == -3.5);
    CHECK(back.u.grid->axis(0).b == 11.25);
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        CHECK(back.u.values[i] == u.values[i]);
    }
    fs::remove(p);
}

TEST_CASE("2D field files round-trip bitwise") {
    auto g = make_grid({0.0, 2.0 * std::numbers::pi}, {-1.0, 1.0}, 16, 8);
    Field u = test::random_band_limited(g, 3, 7102);
    const fs::path p = temp_file("rt2d.txt");
    write_field(p.string(), u, -2.25);

    LoadedField back = read_field(p.string());
    CHECK(back.u.grid->dim() == 2);
    CHECK(back.u.grid->nx() == 16);
    CHECK(back.u.grid->ny() == 8);
    CHECK(back.t == -2.25);
    for (std::size_t i = 0; i < u.values.size(); ++i) {
        CHECK(back.u.values[i] == u.values[i]);
    }
    fs::remove(p);
}

TEST_CASE("malformed field files fail with line numbers") {
    const fs::path p = temp_file("bad.txt");

    write_text(p, "NOTAFIELD\n1 8 0 1 0\n");
    CHECK_THROWS_WITH_AS((void)read_field(p.string()), doctest::Contains("line 1"), ParseError);

    write_text(p, "RLWFIELD v1\n3 8 8 8 0 1 0 1 0\n");
    try {
        (void)read_field(p.string());
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
        CHECK(std::string(e.what()).find("dimension") != std::string::npos);
    }

    write_text(p, "RLWFIELD v1\n1 8 0 1 0\n1\n2\n3\n");  // 3 of 8 values
    try {
        (void)read_field(p.string());
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("8") != std::string::npos);
        CHECK(std::string(e.what()).find("3") != std::string::npos);
    }

    write_text(p, "RLWFIELD v1\n1 8 0 1 0\n1\n2\nnan\n4\n5\n6\n7\n8\n");
    try {
        (void)read_field(p.string());
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 5);
    }

    write_text(p, "RLWFIELD v1\n1 8 0 1 0\n1\n2\nbogus\n4\n5\n6\n7\n8\n");
    CHECK_THROWS_AS((void)read_field(p.string()), ParseError);

    std::string nine = "RLWFIELD v1\n1 8 0 1 0\n";
    for (int i = 0; i < 9; ++i) nine += "1\n";
    write_text(p, nine);
    CHECK_THROWS_WITH_AS((void)read_field(p.string()), doctest::Contains("trailing"),
                         ParseError);

    write_text(p, "RLWFIELD v1\n1 7 0 1 0\n");  // odd n rejected by the grid
    try {
        (void)read_field(p.string());
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(e.line == 2);
    }

    CHECK_THROWS_AS((void)read_field("/nonexistent/file.txt"), ParseError);
    fs::remove(p);
}
