#pragma once

#include <string>
#include <vector>

#include "rlab/zeros.hpp"

namespace rlab {

// sigma <= Re(s) <= 1/2 and |Im(s)| < T, with multiplicity
int count_strip(const ResonanceSet& rs, double sigma, double T);
// |s| <= r, with multiplicity
int count_ball(const ResonanceSet& rs, double r);

// largest ball radius the set covers
double covered_radius(const ResonanceSet& rs);
// largest T for which count_strip(sigma, T) is covered
double covered_strip_height(const ResonanceSet& rs, double sigma);

struct StripCount {
    double sigma;
    double T;
    int N;
};

struct CountingProfile {
    std::string name;
    double vol0 = 0;
    std::vector<double> radii;
    std::vector<int> ball_counts;
    std::vector<StripCount> strip_counts;
    double weyl_constant = 0;  // max N(r)/(vol0 r^2) over radii >= 1
};

CountingProfile counting_profile(const ResonanceSet& rs, const std::string& name, double vol0,
                                 std::vector<double> radii = {}, std::vector<double> sigmas = {},
                                 std::vector<double> heights = {});

// max N(r)/(vol0 r^2) for r on a grid in [r_min, covered_radius]
double measured_weyl_constant(const ResonanceSet& rs, double vol0, double r_min = 1.0);

// count_strip(sigma, t) <= count_ball(sqrt(t^2 + max(|sigma|, 1/2)^2)), when both are covered
struct CrudeCheck {
    double sigma;
    double t;
    int strip;
    int ball;
    bool holds;
};
std::vector<CrudeCheck> crude_inclusion(const ResonanceSet& rs, const std::vector<std::pair<double, double>>& points);

struct WeylRow {
    std::string name;
    double vol0;
    double r;
    int N;
    double ratio;
};

struct WeylReport {
    std::vector<WeylRow> rows;
    double c_lo = 0;
    double c_hi = 0;
    double limit = 0;
    double slope = 0;  // least-squares slope of log N against log r
    bool pass = false;
};

// one constant pair [c_lo, c_hi] with c_hi / c_lo <= limit brackets every ratio
WeylReport weyl_diagnostics(const std::vector<CountingProfile>& profiles, double limit = 100);

std::string counting_csv(const CountingProfile& p);
std::string strip_csv(const CountingProfile& p);

}  // namespace rlab
