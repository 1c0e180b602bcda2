#include <filesystem>

#include "doctest.h"

#include "rlab/config.hpp"
#include "rlab/errors.hpp"
#include "rlab/io.hpp"

using namespace rlab;
namespace fs = std::filesystem;

TEST_CASE("bundled configs round trip") {
    for (const char* name : {"3f222", "integer"}) {
        SurfaceConfig c = bundled_config(name);
        std::string text = emit_surface_config(c);
        CHECK(parse_surface_config(text) == c);
        CHECK(emit_surface_config(parse_surface_config(text)) == text);
        CHECK(validate(build_surface(c)).ok);
    }
    SchottkySurface s = build_surface(bundled_config("integer"));
    REQUIRE(s.integer_generators.has_value());
    CHECK((*s.integer_generators)[1].b == -34);
}

TEST_CASE("config errors") {
    CHECK_THROWS(bundled_config("nope"));
    CHECK_THROWS(parse_surface_config("[surface]\nname = x\nkind = wormhole\n"));
    // determinant 2
    CHECK_THROWS(
                 build_surface(parse_surface_config("[surface]\nname = x\nkind = integer_schottky\n"
                                                    "[generators]\ng1 = 2 0 0 1\ng2 = 1 0 0 1\n")));
}

TEST_CASE("atomic writes and sidecars") {
    fs::path dir = fs::temp_directory_path() / ("rlab_io_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    fs::path f = dir / "out.csv";
    write_atomic(f, "a\n");
    write_atomic(f, "b\n");
    CHECK(read_file(f) == "b\n");
    int entries = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir)) ++entries;
    CHECK(entries == 1);

    ResonanceSet rs;
    rs.box = Box::parse("-1:0.5:-3:3");
    rs.search_box = Box::parse("-1:0.5:0:3");
    rs.tolerance = 1e-10;
    rs.euler_characteristic = -1;
    rs.resonances = {{Complex(0.3336233744615078, 0), 1, 1e-14}, {Complex(-0.25, 1.125), 2, 1e-12}, {Complex(-0.25, -1.125), 2, 1e-12}};
    write_with_sidecar(f, resonance_csv(rs), resonance_sidecar(rs));
    CHECK(fs::exists(dir / "out.csv.json"));
    ResonanceSet back = read_resonances(read_file(f), nlohmann::json::parse(read_file(dir / "out.csv.json")));
    REQUIRE(back.resonances.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(back.resonances[i].s == rs.resonances[i].s);
        CHECK(back.resonances[i].multiplicity == rs.resonances[i].multiplicity);
    }
    CHECK(back.box.str() == rs.box.str());
    CHECK(back.tolerance == rs.tolerance);
    CHECK(back.count() == 5);
    fs::remove_all(dir);
}

TEST_CASE("box parsing") {
    Box b = Box::parse("-1:0.5:0:10");
    CHECK(b.re_min == -1);
    CHECK(b.im_max == 10);
    CHECK(b.contains(Complex(0, 5)));
    CHECK(!b.contains(Complex(0.6, 5)));
    CHECK_THROWS(Box::parse("1:0:0:10"));
    CHECK_THROWS(Box::parse("-1:0.5:0"));
}
