#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "rlab/counting.hpp"
#include "rlab/errors.hpp"
#include "rlab/io.hpp"

using namespace rlab;

namespace {

ResonanceSet synthetic(unsigned seed) {
    ResonanceSet rs;
    rs.box = Box{-3, 1, -20, 20};
    rs.search_box = Box{-3, 1, 0, 20};
    rs.tolerance = 1e-10;
    rs.resonances.push_back({Complex(0.42, 0), 1, 0});
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> re(-3, 0.42), im(0.01, 20);
    std::uniform_int_distribution<int> mult(1, 3);
    for (int i = 0; i < 300; ++i) {
        Complex s(re(rng), im(rng));
        int m = mult(rng);
        rs.resonances.push_back({s, m, 0});
        rs.resonances.push_back({std::conj(s), m, 0});
    }
    return rs;
}

}  // namespace

TEST_CASE("counts agree with filtering the exported table") {
    ResonanceSet rs = synthetic(3);
    auto rows = oracle::parse_csv(resonance_csv(rs));
    CHECK(rows.size() == rs.resonances.size());
    for (double sigma : {-3.0, -1.0, -0.25, 0.0, 0.3})
        for (double T : {0.5, 2.0, 7.5, 19.0}) CHECK(count_strip(rs, sigma, T) == oracle::filter_strip(rows, sigma, T));
    for (double r : {0.3, 1.0, 2.0, 2.9}) CHECK(count_ball(rs, r) == oracle::filter_ball(rows, r));
    CHECK(count_strip(rs, 0.6, 5) == 0);
    CHECK(count_strip(rs, -1, 0) == 0);
}

TEST_CASE("coverage") {
    ResonanceSet rs = synthetic(4);
    CHECK(covered_radius(rs) == doctest::Approx(3));
    CHECK(covered_strip_height(rs, -1) == doctest::Approx(20));
    CHECK_THROWS_AS(count_ball(rs, 3.5), CoverageError);
    CHECK_THROWS_AS(count_strip(rs, -4, 1), CoverageError);
    CHECK_THROWS_AS(count_strip(rs, -1, 25), CoverageError);
}

TEST_CASE("crude inclusion and monotonicity") {
    ResonanceSet rs = synthetic(5);
    std::vector<std::pair<double, double>> pts{{-0.5, 1}, {-1, 2}, {-2, 0.5}, {0, 2.5}};
    for (const auto& c : crude_inclusion(rs, pts)) {
        CHECK(c.holds);
        CHECK(c.strip <= c.ball);
    }
    int prev = 0;
    for (double r = 0.5; r <= 3; r += 0.25) {
        int n = count_ball(rs, r);
        CHECK(n >= prev);
        prev = n;
    }
}

TEST_CASE("counting profile and Weyl bracket") {
    ResonanceSet rs = synthetic(6);
    CountingProfile p = counting_profile(rs, "synthetic", 2 * M_PI);
    REQUIRE(!p.radii.empty());
    for (std::size_t i = 0; i < p.radii.size(); ++i) CHECK(p.ball_counts[i] == count_ball(rs, p.radii[i]));
    double c = measured_weyl_constant(rs, 2 * M_PI);
    CHECK(c > 0);
    for (double r : p.radii)
        if (r >= 1) CHECK(count_ball(rs, r) <= c * 2 * M_PI * r * r * (1 + 1e-12));
    WeylReport w = weyl_diagnostics({p});
    CHECK(w.c_lo <= w.c_hi);
    CHECK(w.pass == (w.c_hi / w.c_lo <= 100));
    for (const auto& row : w.rows)
        if (row.N > 0) CHECK((row.ratio >= w.c_lo && row.ratio <= w.c_hi));
    // csv has a header and one row per radius
    std::string csv = counting_csv(p);
    CHECK(csv.rfind("r,N\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == static_cast<long>(p.radii.size() + 1));
    CHECK(strip_csv(p).rfind("sigma,T,N\n", 0) == 0);
}
