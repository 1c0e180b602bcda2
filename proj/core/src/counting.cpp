#include "rlab/counting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace rlab {

namespace {

// no resonance lies right of the leading one, so a box reaching it is closed on the right
double right_reach(const ResonanceSet& rs) {
    if (rs.resonances.empty()) return rs.box.re_max;
    return rs.box.re_max >= rs.leading_real() ? std::numeric_limits<double>::infinity() : rs.box.re_max;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

double covered_radius(const ResonanceSet& rs) {
    return std::min({-rs.box.re_min, rs.box.im_max, right_reach(rs)});
}

double covered_strip_height(const ResonanceSet& rs, double sigma) {
    if (sigma > 0.5) return std::numeric_limits<double>::infinity();
    if (sigma < rs.box.re_min || right_reach(rs) < 0.5) return 0;
    return rs.box.im_max;
}

int count_strip(const ResonanceSet& rs, double sigma, double T) {
    if (sigma > 0.5 || T <= 0) return 0;
    if (T > covered_strip_height(rs, sigma))
        throw CoverageError("strip sigma = " + fmt(sigma) + ", T = " + fmt(T) + " leaves the box " + rs.box.str());
    int n = 0;
    for (const auto& z : rs.resonances)
        if (z.s.real() >= sigma && z.s.real() <= 0.5 && std::fabs(z.s.imag()) < T) n += z.multiplicity;
    return n;
}

int count_ball(const ResonanceSet& rs, double r) {
    if (r < 0) return 0;
    if (r > covered_radius(rs))
        throw CoverageError("ball of radius " + fmt(r) + " leaves the box " + rs.box.str());
    int n = 0;
    for (const auto& z : rs.resonances)
        if (std::abs(z.s) <= r) n += z.multiplicity;
    return n;
}

double measured_weyl_constant(const ResonanceSet& rs, double vol0, double r_min) {
    double rc = covered_radius(rs);
    if (rc < r_min) throw CoverageError("box covers no ball of radius >= " + fmt(r_min));
    double c = 0;
    // N(r)/r^2 peaks just after a jump, so test every resonance modulus too
    std::vector<double> radii;
    for (int i = 0; i <= 200; ++i) radii.push_back(r_min + (rc - r_min) * i / 200.0);
    for (const auto& z : rs.resonances)
        if (std::abs(z.s) >= r_min && std::abs(z.s) <= rc) radii.push_back(std::abs(z.s));
    for (double r : radii) c = std::max(c, count_ball(rs, r) / (vol0 * r * r));
    return c;
}

CountingProfile counting_profile(const ResonanceSet& rs, const std::string& name, double vol0,
                                 std::vector<double> radii, std::vector<double> sigmas,
                                 std::vector<double> heights) {
    CountingProfile p;
    p.name = name;
    p.vol0 = vol0;
    double rc = covered_radius(rs);
    if (radii.empty())
        for (double r = 0.25; r <= rc + 1e-12; r += 0.25) radii.push_back(r);
    for (double r : radii) {
        p.radii.push_back(r);
        p.ball_counts.push_back(count_ball(rs, r));
    }
    if (sigmas.empty()) sigmas = {rs.box.re_min, -0.5, 0.0, 0.25};
    if (heights.empty())
        for (double t = 1; t <= rs.box.im_max + 1e-12; t += 1) heights.push_back(t);
    for (double sg : sigmas)
        for (double t : heights)
            if (t <= covered_strip_height(rs, sg)) p.strip_counts.push_back({sg, t, count_strip(rs, sg, t)});
    p.weyl_constant = rc >= 1 ? measured_weyl_constant(rs, vol0) : 0;
    return p;
}

std::vector<CrudeCheck> crude_inclusion(const ResonanceSet& rs, const std::vector<std::pair<double, double>>& points) {
    std::vector<CrudeCheck> out;
    for (auto [sigma, t] : points) {
        double r = std::sqrt(t * t + std::pow(std::max(std::fabs(sigma), 0.5), 2));
        if (t > covered_strip_height(rs, sigma) || r > covered_radius(rs)) continue;
        CrudeCheck c{sigma, t, count_strip(rs, sigma, t), count_ball(rs, r), false};
        c.holds = c.strip <= c.ball;
        out.push_back(c);
    }
    return out;
}

WeylReport weyl_diagnostics(const std::vector<CountingProfile>& profiles, double limit) {
    WeylReport rep;
    rep.limit = limit;
    rep.c_lo = std::numeric_limits<double>::infinity();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (const auto& p : profiles) {
        for (std::size_t i = 0; i < p.radii.size(); ++i) {
            double r = p.radii[i];
            if (r < 1) continue;
            WeylRow row{p.name, p.vol0, r, p.ball_counts[i], p.ball_counts[i] / (p.vol0 * r * r)};
            rep.rows.push_back(row);
            rep.c_lo = std::min(rep.c_lo, row.ratio);
            rep.c_hi = std::max(rep.c_hi, row.ratio);
            if (row.N > 0) {
                double x = std::log(r), y = std::log(row.N / p.vol0);
                sx += x;
                sy += y;
                sxx += x * x;
                sxy += x * y;
                ++m;
            }
        }
    }
    if (m >= 2 && m * sxx - sx * sx > 0) rep.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    rep.pass = !rep.rows.empty() && rep.c_lo > 0 && rep.c_hi / rep.c_lo <= limit;
    return rep;
}

std::string counting_csv(const CountingProfile& p) {
    std::ostringstream os;
    os << "r,N\n";
    for (std::size_t i = 0; i < p.radii.size(); ++i) os << fmt(p.radii[i]) << ',' << p.ball_counts[i] << '\n';
    return os.str();
}

std::string strip_csv(const CountingProfile& p) {
    std::ostringstream os;
    os << "sigma,T,N\n";
    for (const auto& c : p.strip_counts) os << fmt(c.sigma) << ',' << fmt(c.T) << ',' << c.N << '\n';
    return os.str();
}

}  // namespace rlab
