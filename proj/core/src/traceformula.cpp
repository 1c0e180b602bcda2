#include "rlab/traceformula.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rlab/counting.hpp"
#include "rlab/errors.hpp"

namespace rlab {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double shift_of(FormulaVersion v) { return v == FormulaVersion::v1 ? 0.5 : 0.0; }

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// |phi_hat(i(s - shift))| for one resonance
Complex contribution(const TestFunction& tf, Complex s, double shift) {
    LogComplex l = scaled_hat_log(tf, s - shift);
    return std::polar(std::exp(l.log_abs), l.phase);
}

double total_mass(const TestFunction& tf, double re) {
    // ∫ |phi(t)| e^{re t} dt, which bounds |phi_hat(is)| for Re(s) = re
    LogComplex l = scaled_hat_log(tf, Complex(re, 0));
    return std::fabs(std::exp(l.log_abs));
}

struct TailGeometry {
    double re_min, re_max, im_max, re_cap;

    bool outside(double re, double im) const {
        if (re > re_cap) return false;
        return re < re_min || re > re_max || std::fabs(im) > im_max;
    }
};

// sup of the envelope over the circle |s| = r, restricted to Re <= re_cap and,
// when `only_outside`, to points outside the box
double circle_sup(const TailGeometry& g, const TestFunction& tf, double shift, double r, bool only_outside) {
    constexpr int kAngles = 720;
    double best = 0;
    for (int i = 0; i <= kAngles; ++i) {
        double th = kPi * i / kAngles;
        double re = r * std::cos(th), im = r * std::sin(th);
        if (re > g.re_cap) continue;
        if (only_outside && !g.outside(re, im)) continue;
        best = std::max(best, scaled_hat_envelope(tf, re - shift, im));
    }
    // the point where the circle meets Re = re_cap
    if (r >= std::fabs(g.re_cap)) {
        double im = std::sqrt(std::max(0.0, r * r - g.re_cap * g.re_cap));
        if (!only_outside || g.outside(g.re_cap, im))
            best = std::max(best, scaled_hat_envelope(tf, g.re_cap - shift, im));
    }
    return best;
}

double tail_for(const TailGeometry& g, const ResonanceSet* rs, const TestFunction& tf, double shift,
                const TailOptions& opt) {
    double cv = opt.weyl_constant * opt.vol0;
    double r0 = 0;
    if (0 >= g.re_min && 0 <= g.re_max) r0 = std::min({-g.re_min, g.im_max, g.re_cap > g.re_max ? g.re_max : kInf});
    std::vector<double> mods;
    if (rs)
        for (const auto& z : rs->resonances)
            for (int m = 0; m < z.multiplicity; ++m) mods.push_back(std::abs(z.s));
    std::sort(mods.begin(), mods.end());
    auto n_out = [&](double r) {
        double inside = static_cast<double>(std::upper_bound(mods.begin(), mods.end(), r) - mods.begin());
        return std::max(0.0, cv * r * r - inside);
    };

    std::vector<double> radii{r0};
    std::vector<double> sup{circle_sup(g, tf, shift, r0, true)};
    double full = circle_sup(g, tf, shift, r0, false);
    double running = 0;
    for (int k = 0; k < 200000; ++k) {
        double r = radii.back();
        double step = std::max(0.05, 0.01 * r);
        double rn = r + step;
        radii.push_back(rn);
        sup.push_back(circle_sup(g, tf, shift, rn, true));
        full = circle_sup(g, tf, shift, rn, false);
        running += n_out(rn) * sup.back();
        if (rn > 4 * (std::fabs(g.re_cap) + 1) && n_out(rn) * full * rn < 1e-18 * std::max(running, 1e-300)) break;
        if (rn > 1e6) return kInf;
    }
    // m_k = sup over the outside region with |s| >= r_k
    std::size_t K = radii.size() - 1;
    std::vector<double> m(K + 1);
    m[K] = full;
    for (std::size_t k = K; k-- > 0;) m[k] = std::max({m[k + 1], sup[k], sup[k + 1]});
    double tail = n_out(radii[K]) * m[K];
    for (std::size_t k = 0; k < K; ++k) tail += n_out(radii[k + 1]) * (m[k] - m[k + 1]);
    return tail;
}

}  // namespace

TermValue volume_term(double vol0, const TestFunction& tf, FormulaVersion v, double rel_tol) {
    double lo = tf.support_lo(), hi = tf.support_hi();
    if (!(lo > 0)) throw DomainError("test function support touches 0");
    auto f = [&](double t) {
        double sh = std::sinh(t / 2);
        double w = v == FormulaVersion::v2 ? std::exp(t / 2) : 1.0;
        return std::cosh(t / 2) / (sh * sh) * w * tf(t);
    };
    double err = 0;
    double I = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, lo, hi, 20, rel_tol, &err);
    double scale = -vol0 / (4 * kPi);
    // psi evaluation error enters through the clipped series tail
    double wmax = std::cosh(lo / 2) / std::pow(std::sinh(lo / 2), 2) * (v == FormulaVersion::v2 ? std::exp(hi / 2) : 1.0) *
                  std::max(std::exp(tf.tilt * lo), std::exp(tf.tilt * hi));
    double series = std::fabs(tf.amplitude) * tf.profile->series_tail_bound() * wmax * (hi - lo);
    return {scale * I, std::fabs(scale) * (err + series + 1e-15 * std::fabs(I))};
}

TermValue volume_term(const SchottkySurface& s, const TestFunction& tf, FormulaVersion v, double rel_tol) {
    return volume_term(s.vol0(), tf, v, rel_tol);
}

TermValue geodesic_term(const LengthSpectrum& spectrum, const TestFunction& tf, FormulaVersion v) {
    double lo = tf.support_lo(), hi = tf.support_hi();
    if (!spectrum.certificate.complete || spectrum.certificate.cutoff < hi)
        throw IncompleteSpectrum("length spectrum is certified only to " + fmt(spectrum.certificate.cutoff) +
                                 ", the test function reaches " + fmt(hi));
    double sum = 0, abs_sum = 0, series = 0;
    for (const auto& e : spectrum.entries) {
        for (int k = 1; k * e.length < hi; ++k) {
            double t = k * e.length;
            if (t <= lo) continue;
            double w = v == FormulaVersion::v1 ? 1 / (2 * std::sinh(t / 2)) : 1 / (-std::expm1(-t));
            double term = e.multiplicity * e.length * w;
            sum += term * tf(t);
            abs_sum += std::fabs(term * tf(t));
            series += term * std::fabs(tf.amplitude) * tf.profile->series_tail_bound() * std::exp(tf.tilt * t);
        }
    }
    return {sum, series + 4 * std::numeric_limits<double>::epsilon() * abs_sum};
}

double resonance_tail(const ResonanceSet& rs, const TestFunction& tf, FormulaVersion v, const TailOptions& opt) {
    if (!(opt.weyl_constant > 0) || !(opt.vol0 > 0)) throw DomainError("tail bound needs C > 0 and vol0 > 0");
    double cap = rs.resonances.empty() ? rs.box.re_max : rs.leading_real();
    TailGeometry g{rs.box.re_min, rs.box.re_max, rs.box.im_max, cap};
    return tail_for(g, &rs, tf, shift_of(v), opt);
}

ResonanceSum resonance_sum(const ResonanceSet& rs, const TestFunction& tf, FormulaVersion v, const TailOptions& opt) {
    ResonanceSum out;
    double shift = shift_of(v);
    Complex acc = 0;
    double hi = tf.support_hi();
    for (const auto& z : rs.resonances) {
        acc += static_cast<double>(z.multiplicity) * contribution(tf, z.s, shift);
        double err = std::max(z.error, rs.tolerance);
        out.location_error += z.multiplicity * hi * total_mass(tf, z.s.real() - shift) * err;
    }
    out.value = acc.real();
    out.imag_residual = std::fabs(acc.imag());
    out.weyl_constant = opt.weyl_constant;
    out.tail = resonance_tail(rs, tf, v, opt);
    out.required_im_max = rs.box.im_max;
    if (opt.budget >= 0 && out.tail > opt.budget) {
        double cap = rs.resonances.empty() ? rs.box.re_max : rs.leading_real();
        double need = kInf;
        for (double T = 2 * rs.box.im_max; T < 1e6; T *= 2) {
            TailGeometry g{rs.box.re_min, rs.box.re_max, T, cap};
            if (tail_for(g, nullptr, tf, shift, opt) <= opt.budget) {
                need = T;
                break;
            }
        }
        out.required_im_max = need;
        throw InsufficientBox("resonance tail " + fmt(out.tail) + " exceeds the budget " + fmt(opt.budget) +
                                  "; required im_max = " + (std::isfinite(need) ? fmt(need) : "none (the left edge " + fmt(rs.box.re_min) + " dominates)"),
                              need);
    }
    return out;
}

BalanceReport verify_balance(const SchottkySurface& s, const LengthSpectrum& spectrum, const ResonanceSet& rs,
                             const TestFunction& tf, FormulaVersion v, double weyl_constant, double vol0,
                             double rel_tol) {
    BalanceReport r;
    r.surface = s.name;
    r.version = v;
    r.L = tf.L;
    r.eta = tf.eta;
    r.amplitude = tf.amplitude;
    r.tilt = tf.tilt;
    r.kappa = tf.profile->kappa();
    r.box = rs.box;
    r.rel_tol = rel_tol;
    if (vol0 <= 0) vol0 = s.vol0() * rs.degree;
    r.lhs = resonance_sum(rs, tf, v, {vol0, weyl_constant, -1});
    r.volume = volume_term(vol0, tf, v);
    r.geodesic = geodesic_term(spectrum, tf, v);
    r.discrepancy = std::fabs(r.lhs.value - (r.volume.value + r.geodesic.value));
    r.budget.resonance_tail = r.lhs.tail;
    r.budget.resonance_location = r.lhs.location_error;
    r.budget.volume_quadrature = r.volume.error;
    r.budget.geodesic_rounding = r.geodesic.error;
    r.tolerance = rel_tol * std::max(std::fabs(r.volume.value), std::fabs(r.lhs.value));
    r.within_budget = r.discrepancy <= r.budget.total();
    r.pass = r.discrepancy <= r.tolerance;
    return r;
}

NegativityReport negativity_check(const ResonanceSet& rs, const TestFunction& tf, double ell0, double vol0,
                                  double weyl_constant) {
    if (!(tf.support_hi() < ell0))
        throw NotApplicable("(1 + eta) L = " + fmt(tf.support_hi()) + " is not below ell0 = " + fmt(ell0));
    if (tf.tilt != 0 || tf.amplitude < 0) throw DomainError("negativity needs an untilted nonnegative test function");
    NegativityReport r;
    r.L = tf.L;
    r.eta = tf.eta;
    r.ell0 = ell0;
    auto sum = resonance_sum(rs, tf, FormulaVersion::v2, {vol0, weyl_constant, -1});
    r.value = sum.value;
    r.tail = sum.tail + sum.location_error;
    if (!rs.resonances.empty()) r.leading_term = contribution(tf, Complex(rs.leading_real(), 0), 0).real();
    r.pass = r.value <= r.tail;
    return r;
}

double f_beta(double x, double c, double beta) { return std::exp(-c * x / std::pow(std::log(x), beta)); }

double f_beta_exercise_ratio(double x, double c, double beta) {
    if (!(x >= 2)) throw DomainError("f_beta is defined on [2, inf)");
    auto g = [&](double u) { return c * u / std::pow(std::log(u), beta); };
    double gx = g(x);
    // -∫ u^2 f' = x^2 f(x) + 2 ∫ u f(u) du, divided through by f(x)
    boost::math::quadrature::exp_sinh<double> es;
    double I = es.integrate([&](double v) { return (x + v) * std::exp(gx - g(x + v)); });
    return (x * x + 2 * I) / (x * x * x);
}

int region_of(Complex s, double sigma, double K) {
    double re = s.real();
    if (re > 0.5) return 1;
    if (re < sigma) return 4;
    return std::fabs(s.imag()) <= K ? 2 : 3;
}

ExperimentReport lower_bound_experiment(const std::vector<CoverData>& family, const TestFunction& base_tf,
                                        ExperimentParams params) {
    ExperimentReport rep;
    rep.params = params;
    const auto& prof = *base_tf.profile;
    rep.beta = prof.beta();
    rep.c2 = prof.c2;
    if (family.empty()) throw DomainError("experiment needs at least one cover");
    if (!(params.alpha > 1)) throw DomainError("parameter condition violated: alpha > 1");
    if (!(params.nu > 0)) throw DomainError("parameter condition violated: nu > 0");
    if (!(params.alpha > rep.beta + params.nu))
        throw DomainError("parameter condition violated: alpha > beta + nu (alpha = " + fmt(params.alpha) +
                          ", beta = " + fmt(rep.beta) + ", nu = " + fmt(params.nu) + ")");
    if (!(params.eps > 0 && params.eps_prime > 0)) throw DomainError("parameter condition violated: eps, eps' > 0");
    if (!(rep.c2 > 0)) throw DomainError("profile has no fitted decay constant c2; run decay_check first");

    struct Pre {
        double eta, K, L, logv;
    };
    std::vector<Pre> pre;
    for (const auto& c : family) {
        if (!(c.delta > 0.5))
            throw DomainError("cover " + c.id + ": delta = " + fmt(c.delta) + " is not above 1/2");
        if (!(c.vol0 > std::exp(std::numbers::e)))
            throw DomainError("cover " + c.id + ": 0 < eta < 1 needs vol0 > e^e, got " + fmt(c.vol0));
        double llv = std::log(std::log(c.vol0));
        Pre p;
        p.eta = std::pow(llv, -params.nu);
        p.K = std::pow(llv, params.alpha);
        p.L = (c.ell0 - params.margin) / (1 + p.eta);
        p.logv = std::log(c.vol0);
        if (!(p.L > 0)) throw DomainError("cover " + c.id + ": ell0 is below the margin");
        pre.push_back(p);
    }
    double A = params.A;
    if (A <= 0) {
        A = 0;
        for (const auto& p : pre) A = std::max(A, p.L / p.logv);
    }
    rep.A = A;

    bool all = true;
    for (std::size_t i = 0; i < family.size(); ++i) {
        const auto& c = family[i];
        const auto& p = pre[i];
        CoverExperiment e;
        e.id = c.id;
        e.degree = c.degree;
        e.vol0 = c.vol0;
        e.ell0 = c.ell0;
        e.delta = c.delta;
        e.eta = p.eta;
        e.K = p.K;
        e.L = p.L;
        e.w = A - p.L / p.logv;
        if (e.w < 0)
            throw DomainError("cover " + c.id + ": parameter condition violated: w(n) >= 0 (w = " + fmt(e.w) + ")");
        if (!((1 + e.eta) * e.L < e.ell0))
            throw DomainError("cover " + c.id + ": parameter condition violated: (1 + eta) L < ell0");
        if (!(e.eta * e.L * e.K >= 2))
            throw DomainError("cover " + c.id + ": parameter condition violated: eta L K >= 2 (got " +
                              fmt(e.eta * e.L * e.K) + ")");
        e.sigma = c.delta - 1 / A - params.eps_prime;
        if (!c.resonances) throw DomainError("cover " + c.id + " has no resonance set");
        const auto& rs = *c.resonances;
        if (rs.box.re_min > e.sigma || rs.box.im_max < e.K || rs.box.re_max < c.delta)
            throw CoverageError("cover " + c.id + ": box " + rs.box.str() + " does not contain the region R2");

        TestFunction tf = make_test_function(base_tf.profile, e.L, e.eta);
        Complex S[4] = {0, 0, 0, 0};
        for (const auto& z : rs.resonances) {
            int reg = region_of(z.s, e.sigma, e.K) - 1;
            S[reg] += static_cast<double>(z.multiplicity) * contribution(tf, z.s, 0);
            e.sums.counts[reg] += z.multiplicity;
        }
        for (int j = 0; j < 4; ++j) e.sums.S[j] = S[j].real();
        e.sums.tail = resonance_tail(rs, tf, FormulaVersion::v2, {c.vol0, c.weyl_constant, -1});

        double eL = e.eta * e.L;
        e.measured_count = count_strip(rs, e.sigma, e.K);
        e.S1_bound = 2 * kPi * eL * std::exp(c.delta * e.L * (1 - e.eta));
        e.S2_bound = 2 * kPi * eL * std::exp(0.5 * e.L * (1 + e.eta)) * e.measured_count;
        double fb = f_beta(eL * e.K, rep.c2, rep.beta);
        double poly = e.K * e.K + eL * std::pow(e.K, 3);
        e.S3_bound = c.vol0 * eL * std::exp(0.5 * e.L * (1 + e.eta * std::max(2 * std::fabs(e.sigma), 1.0))) * poly * fb;
        e.S3_bound_alt = c.vol0 * eL * std::exp(0.5 * e.L * (1 + e.eta)) * poly * fb;
        double sg = e.sigma > 0 ? 1 : (e.sigma < 0 ? -1 : 0);
        e.S4_bound = c.vol0 * eL * std::exp(e.sigma * e.L * (1 + sg * e.eta));
        e.theoretical_floor = std::pow(c.vol0, A * (c.delta - 0.5) - params.eps);
        e.chain_holds = e.sums.S[0] > 0 &&
                        e.sums.S[0] <= std::fabs(e.sums.S[1]) + std::fabs(e.sums.S[2]) + std::fabs(e.sums.S[3]) + e.sums.tail;
        all = all && e.chain_holds;
        rep.covers.push_back(e);
    }
    rep.implied_constants = {
        "S1 bound uses the exact constant 2π = ∫psi, since psi_hat(i xi) >= 2π e^{-xi} for xi >= 0",
        "S2, S3 and S4 bounds and the floor use implied constant 1",
        "S3 uses c = c2 from the decay fit inside f_beta"};
    rep.asymptotic_note =
        "out of desk-scale reach: the lower bound N(sigma, K) >> v^{A(delta - 1/2) - eps} is asymptotic as vol0 -> inf; "
        "the measured counts are compared with the floor for information only";
    rep.pass = all;
    return rep;
}

namespace {

nlohmann::json box_json(const Box& b) {
    return {{"re_min", b.re_min}, {"re_max", b.re_max}, {"im_min", b.im_min}, {"im_max", b.im_max}};
}

}  // namespace

nlohmann::json to_json(const BalanceReport& r) {
    nlohmann::json j;
    j["surface"] = r.surface;
    j["version"] = static_cast<int>(r.version);
    j["test_function"] = {{"L", r.L}, {"eta", r.eta}, {"amplitude", r.amplitude}, {"tilt", r.tilt}, {"kappa", r.kappa}};
    j["box"] = box_json(r.box);
    j["resonance_sum"] = {{"value", r.lhs.value},
                          {"imag_residual", r.lhs.imag_residual},
                          {"tail_bound", r.lhs.tail},
                          {"location_error", r.lhs.location_error},
                          {"weyl_constant", r.lhs.weyl_constant}};
    j["volume_term"] = {{"value", r.volume.value}, {"error", r.volume.error}};
    j["geodesic_term"] = {{"value", r.geodesic.value}, {"error", r.geodesic.error}};
    j["discrepancy"] = r.discrepancy;
    j["budget"] = {{"resonance_tail", r.budget.resonance_tail},
                   {"resonance_location", r.budget.resonance_location},
                   {"volume_quadrature", r.budget.volume_quadrature},
                   {"geodesic_rounding", r.budget.geodesic_rounding},
                   {"total", r.budget.total()}};
    j["rel_tol"] = r.rel_tol;
    j["tolerance"] = r.tolerance;
    j["within_budget"] = r.within_budget;
    j["verdict"] = r.pass ? "pass" : "fail";
    return j;
}

nlohmann::json to_json(const NegativityReport& r) {
    return {{"L", r.L},
            {"eta", r.eta},
            {"ell0", r.ell0},
            {"value", r.value},
            {"tail_budget", r.tail},
            {"leading_term", r.leading_term},
            {"verdict", r.pass ? "pass" : "fail"}};
}

nlohmann::json to_json(const ExperimentReport& r) {
    nlohmann::json j;
    j["params"] = {{"alpha", r.params.alpha}, {"nu", r.params.nu},         {"eps", r.params.eps},
                   {"eps_prime", r.params.eps_prime}, {"margin", r.params.margin}, {"A", r.A},
                   {"beta", r.beta}, {"c2", r.c2}};
    for (const auto& c : r.covers) {
        nlohmann::json e;
        e["id"] = c.id;
        e["degree"] = c.degree;
        e["vol0"] = c.vol0;
        e["ell0"] = c.ell0;
        e["delta"] = c.delta;
        e["eta"] = c.eta;
        e["K"] = c.K;
        e["L"] = c.L;
        e["w"] = c.w;
        e["sigma"] = c.sigma;
        e["S"] = {c.sums.S[0], c.sums.S[1], c.sums.S[2], c.sums.S[3]};
        e["region_counts"] = {c.sums.counts[0], c.sums.counts[1], c.sums.counts[2], c.sums.counts[3]};
        e["tail_budget"] = c.sums.tail;
        e["bounds"] = {{"S1_lower", c.S1_bound},
                       {"S2_upper", c.S2_bound},
                       {"S3_upper", c.S3_bound},
                       {"S3_upper_alt_exponent", c.S3_bound_alt},
                       {"S4_upper", c.S4_bound}};
        e["measured_count"] = c.measured_count;
        e["theoretical_floor"] = c.theoretical_floor;
        e["chain_holds"] = c.chain_holds;
        j["covers"].push_back(e);
    }
    j["implied_constants"] = r.implied_constants;
    j["asymptotic_claim"] = r.asymptotic_note;
    j["verdict"] = r.pass ? "pass" : "fail";
    return j;
}

std::string experiment_csv(const ExperimentReport& r) {
    std::ostringstream os;
    os << "cover,n,vol0,ell0,delta,sigma,K,measured_count,theoretical_floor\n";
    for (const auto& c : r.covers)
        os << c.id << ',' << c.degree << ',' << fmt(c.vol0) << ',' << fmt(c.ell0) << ',' << fmt(c.delta) << ','
           << fmt(c.sigma) << ',' << fmt(c.K) << ',' << c.measured_count << ',' << fmt(c.theoretical_floor) << '\n';
    return os.str();
}

}  // namespace rlab
