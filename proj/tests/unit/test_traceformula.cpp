#include <limits>

#include "doctest.h"
#include "oracles.hpp"

#include "rlab/errors.hpp"
#include "rlab/traceformula.hpp"

using namespace rlab;

namespace {

std::shared_ptr<const SincProductProfile> profile() {
    static auto p = std::make_shared<const SincProductProfile>(build_profile(0.5, 512));
    return p;
}

double volume_oracle(double vol0, const TestFunction& tf, FormulaVersion v) {
    auto f = [&](double t) {
        double w = v == FormulaVersion::v2 ? std::exp(t / 2) : 1.0;
        return std::cosh(t / 2) / std::pow(std::sinh(t / 2), 2) * w * tf(t);
    };
    return -vol0 / (4 * M_PI) * oracle::simpson(f, tf.support_lo(), tf.support_hi(), 20000);
}

ResonanceSet single(Complex s0, int mult) {
    ResonanceSet rs;
    rs.box = Box{-1, 1, -5, 5};
    rs.search_box = Box{-1, 1, 0, 5};
    rs.tolerance = 1e-12;
    rs.resonances.push_back({s0, mult, 0});
    if (s0.imag() != 0) rs.resonances.push_back({std::conj(s0), mult, 0});
    return rs;
}

}  // namespace

TEST_CASE("volume term") {
    TestFunction tf = make_test_function(profile(), 2.5, 0.5);
    for (FormulaVersion v : {FormulaVersion::v1, FormulaVersion::v2}) {
        TermValue a = volume_term(2 * M_PI, tf, v);
        CHECK(a.value < 0);
        CHECK(a.value == doctest::Approx(volume_oracle(2 * M_PI, tf, v)).epsilon(1e-9));
        CHECK(volume_term(6 * M_PI, tf, v).value == doctest::Approx(3 * a.value).epsilon(1e-12));
        TestFunction t2 = tf;
        t2.amplitude = -2;
        CHECK(volume_term(2 * M_PI, t2, v).value == doctest::Approx(-2 * a.value).epsilon(1e-12));
    }
    // the e^{t/2} weight only raises the magnitude
    CHECK(std::fabs(volume_term(2 * M_PI, tf, FormulaVersion::v2).value) >
          std::fabs(volume_term(2 * M_PI, tf, FormulaVersion::v1).value));
    CHECK(volume_term(three_funnel(2, 2, 2), tf, FormulaVersion::v1).value ==
          doctest::Approx(volume_term(2 * M_PI, tf, FormulaVersion::v1).value));
}

TEST_CASE("geodesic term from a hand spectrum") {
    SchottkySurface s = three_funnel(2, 2, 2);
    LengthSpectrum sp = length_spectrum(s, 2.1);
    REQUIRE(sp.entries.size() == 1);
    TestFunction tf = make_test_function(profile(), 2, 0.04);
    double phi2 = tf(2.0);
    CHECK(geodesic_term(sp, tf, FormulaVersion::v1).value ==
          doctest::Approx(6 * 2 * phi2 / (2 * std::sinh(1.0))).epsilon(1e-13));
    CHECK(geodesic_term(sp, tf, FormulaVersion::v2).value ==
          doctest::Approx(6 * 2 * phi2 / (1 - std::exp(-2.0))).epsilon(1e-13));
    // v1 and v2 are the same identity under phi -> phi e^{-t/2}
    TestFunction tilted = tf;
    tilted.tilt = -0.5;
    CHECK(geodesic_term(sp, tf, FormulaVersion::v1).value ==
          doctest::Approx(geodesic_term(sp, tilted, FormulaVersion::v2).value).epsilon(1e-13));
    CHECK(volume_term(2 * M_PI, tf, FormulaVersion::v1).value ==
          doctest::Approx(volume_term(2 * M_PI, tilted, FormulaVersion::v2).value).epsilon(1e-9));

    TestFunction wide = make_test_function(profile(), 2, 0.5);
    CHECK_THROWS_AS(geodesic_term(sp, wide, FormulaVersion::v1), IncompleteSpectrum);
}

TEST_CASE("a single resonance contributes its transform") {
    TestFunction tf = make_test_function(profile(), 2.5, 0.5);
    Complex s0(-0.3, 1.7);
    // the tail needs the leading real resonance
    ResonanceSet rs = single(s0, 2);
    rs.resonances.push_back({Complex(0.3, 0), 1, 0});
    ResonanceSum r2 = resonance_sum(rs, tf, FormulaVersion::v2, {2 * M_PI, 0.5, -1});
    double want2 = 2 * 2 * scaled_hat(tf, s0).real() + scaled_hat(tf, 0.3).real();
    CHECK(r2.value == doctest::Approx(want2).epsilon(1e-12));
    CHECK(r2.imag_residual < 1e-12 * std::fabs(r2.value));
    ResonanceSum r1 = resonance_sum(rs, tf, FormulaVersion::v1, {2 * M_PI, 0.5, -1});
    double want1 = 2 * 2 * scaled_hat(tf, s0 - 0.5).real() + scaled_hat(tf, -0.2).real();
    CHECK(r1.value == doctest::Approx(want1).epsilon(1e-12));
    CHECK(r2.location_error >= 0);
    CHECK(r2.tail > 0);
}

TEST_CASE("tail bound shrinks as the box grows and throws over budget") {
    TestFunction tf = make_test_function(profile(), 2.5, 0.5);
    ResonanceSet a = single(Complex(0.3, 0), 1), b = a;
    b.box = Box{-1.5, 1, -10, 10};
    b.search_box = Box{-1.5, 1, 0, 10};
    TailOptions opt{2 * M_PI, 0.5, -1};
    double ta = resonance_tail(a, tf, FormulaVersion::v2, opt), tb = resonance_tail(b, tf, FormulaVersion::v2, opt);
    CHECK(ta > 0);
    CHECK(tb < ta);
    opt.budget = ta / 1e3;
    bool thrown = false;
    try {
        resonance_sum(a, tf, FormulaVersion::v2, opt);
    } catch (const InsufficientBox& e) {
        thrown = true;
        CHECK(e.required_im_max > a.box.im_max);
    }
    CHECK(thrown);
}

TEST_CASE("negativity applies only below the systole") {
    TestFunction tf = make_test_function(profile(), 2.5, 0.5);
    ResonanceSet rs = single(Complex(0.3, 0), 1);
    CHECK_THROWS_AS(negativity_check(rs, tf, 3.0, 2 * M_PI, 0.5), NotApplicable);
    TestFunction small = make_test_function(profile(), 1.5, 0.5);
    NegativityReport r = negativity_check(rs, small, 3.0, 2 * M_PI, 0.5);
    CHECK(r.leading_term > 0);
}

TEST_CASE("f_beta exercise") {
    for (double x : {50.0, 200.0, 1000.0}) {
        double c = 1, beta = 2;
        auto dg = [&](double u) { return c / std::pow(std::log(u), beta) - c * beta / std::pow(std::log(u), beta + 1); };
        double fx = f_beta(x, c, beta);
        double I = oracle::simpson(
            [&](double u) { return u * u * f_beta(u, c, beta) * dg(u) / fx; }, x, x + 40 * std::pow(std::log(x), 2) / c * 10, 200000);
        CHECK(f_beta_exercise_ratio(x, c, beta) == doctest::Approx(I / (x * x * x)).epsilon(1e-7));
    }
    CHECK(f_beta(10, 1, 2) == doctest::Approx(std::exp(-10 / std::pow(std::log(10.0), 2))));
    CHECK_THROWS_AS(f_beta_exercise_ratio(1, 1, 2), DomainError);
}

TEST_CASE("regions partition the plane") {
    double sigma = -0.3, K = 4;
    CHECK(region_of(Complex(0.7, 100), sigma, K) == 1);
    CHECK(region_of(Complex(0.5, 0), sigma, K) == 2);
    CHECK(region_of(Complex(-0.3, 4), sigma, K) == 2);
    CHECK(region_of(Complex(0, -4.5), sigma, K) == 3);
    CHECK(region_of(Complex(-0.31, 0), sigma, K) == 4);
}

TEST_CASE("experiment rejects violated conditions") {
    TestFunction tf = make_test_function(profile(), 2.5, 0.5);
    CoverData small_delta{"x", 1, 2 * M_PI, 10, 0.4, 0.5, nullptr};
    CHECK_THROWS_AS(lower_bound_experiment({small_delta}, tf, {}), DomainError);
    CHECK_THROWS_AS(lower_bound_experiment({}, tf, {}), DomainError);
    ExperimentParams bad;
    bad.alpha = 0.5;
    CoverData ok{"y", 1, 2 * M_PI, 10, 0.57, 0.5, nullptr};
    CHECK_THROWS_AS(lower_bound_experiment({ok}, tf, bad), DomainError);
}
