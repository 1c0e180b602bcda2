#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "oracles.hpp"

#include "rlab/congruence.hpp"
#include "rlab/counting.hpp"
#include "rlab/io.hpp"
#include "rlab/pipeline.hpp"
#include "rlab/testfn.hpp"
#include "rlab/traceformula.hpp"

using namespace rlab;
using json = nlohmann::json;

namespace {

double now() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

struct Outcome {
    bool pass = false;
    std::string summary;
    json detail = json::object();
};

void note(const char* fmt_str, auto... args) {
    std::printf("    ");
    std::printf(fmt_str, args...);
    std::printf("\n");
    std::fflush(stdout);
}

// data shared between criteria, computed on first use
struct Shared {
    std::shared_ptr<SincProductProfile> profile;
    std::optional<SchottkySurface> fat;
    std::optional<LengthSpectrum> fat_spectrum;
    std::optional<ResonanceSet> fat_set;
    double fat_set_seconds = 0;
    double fat_weyl = 0;

    std::optional<SchottkySurface> integer;
    std::optional<ResonanceSet> integer_set;
    std::optional<CongruenceContext> ctx2;
    std::optional<ResonanceSet> cover_set;

    std::vector<ResonanceSet> emitted;  // every set, for the counting oracles
    std::vector<std::string> emitted_names;

    const SincProductProfile& prof() {
        if (!profile) {
            profile = std::make_shared<SincProductProfile>(build_profile(0.5, 512));
            decay_check(*profile, log_grid(100, 1e4, 64));
        }
        return *profile;
    }

    SchottkySurface& surface() {
        if (!fat) {
            fat = three_funnel(2, 2, 2);
            delta_estimate(*fat, 48);
            fat_spectrum = length_spectrum(*fat, 8.0);
        }
        return *fat;
    }

    const ResonanceSet& fat_resonances() {
        if (!fat_set) {
            SchottkySurface& s = surface();
            double t0 = now();
            fat_set = compute_resonances(s, Box{-1, 0.6, 0, 10}, 1e-10, nullptr, 48);
            fat_set_seconds = now() - t0;
            fat_weyl = measured_weyl_constant(*fat_set, s.vol0());
            note("three_funnel(2,2,2) on %s: %d resonances, %.1f s, Weyl constant %.5f", fat_set->box.str().c_str(),
                 fat_set->count(), fat_set_seconds, fat_weyl);
            keep("3f222", *fat_set);
        }
        return *fat_set;
    }

    const ResonanceSet& integer_resonances() {
        if (!integer_set) {
            integer = bundled_integer_surface();
            delta_estimate(*integer, 32);
            double t0 = now();
            integer_set = compute_resonances(*integer, Box{-1, 0.5, 0, 5}, 1e-10, nullptr, 16);
            note("integer surface on %s: %d resonances, %.1f s", integer_set->box.str().c_str(), integer_set->count(),
                 now() - t0);
            keep("integer", *integer_set);
        }
        return *integer_set;
    }

    const ResonanceSet& cover_resonances_n2() {
        if (!cover_set) {
            integer_resonances();
            ctx2 = make_congruence_context(*integer, 2);
            double t0 = now();
            cover_set = cover_resonances(*ctx2, Box{-1, 0.5, 0, 1.5}, 1e-10);
            note("n = 2 cover on %s: %d resonances, %zu evaluations, %.1f s", cover_set->box.str().c_str(),
                 cover_set->count(), cover_set->evaluations, now() - t0);
            for (const auto& t : cover_set->topological)
                note("  s = -%d: expected %d, found %d %s", t.k, t.expected, t.found, t.note.c_str());
            keep("integer_cover2", *cover_set);
        }
        return *cover_set;
    }

    std::vector<ResonanceSet> family_sets;
    std::vector<CoverData> family_data;

    const std::vector<CoverData>& family() {
        if (family_data.empty()) {
            SchottkySurface& base = surface();
            auto members = bundled_family();
            family_sets.reserve(members.size());
            for (const auto& m : members) {
                double t0 = now();
                family_sets.push_back(factored_resonances(base, m.factors, Box{-1, 0.6, 0, 2}, 1e-10));
                double v = base.vol0() * m.rho.degree();
                family_data.push_back({m.id, m.rho.degree(), v, cover_ell0(base, m.rho), *base.delta,
                                       measured_weyl_constant(family_sets.back(), v), &family_sets.back()});
                note("%s: degree %d, ell0 %.4f, %d resonances, %.1f s", m.id.c_str(), m.rho.degree(),
                     family_data.back().ell0, family_sets.back().count(), now() - t0);
                keep(m.id, family_sets.back());
            }
        }
        return family_data;
    }

    void keep(const std::string& name, const ResonanceSet& rs) {
        emitted.push_back(rs);
        emitted_names.push_back(name);
    }
};

Outcome balance(Shared& sh, double L, double eta, bool need_geodesic) {
    SchottkySurface& s = sh.surface();
    double t0 = now();
    const ResonanceSet& rs = sh.fat_resonances();
    sh.prof();
    auto tf = make_test_function(sh.profile, L, eta);
    BalanceReport r = verify_balance(s, *sh.fat_spectrum, rs, tf, FormulaVersion::v1, sh.fat_weyl);
    double seconds = now() - t0;
    double rel = r.discrepancy / std::fabs(r.volume.value);
    note("L = %.4f, eta = %.2f, support [%.4f, %.4f], ell0 = %.4f", L, eta, tf.support_lo(), tf.support_hi(),
         sh.fat_spectrum->ell0());
    note("resonance sum %.8g, volume %.8g, geodesic %.8g", r.lhs.value, r.volume.value, r.geodesic.value);
    note("budget: tail %.3g, location %.3g, volume quadrature %.3g, geodesic rounding %.3g, total %.3g",
         r.budget.resonance_tail, r.budget.resonance_location, r.budget.volume_quadrature, r.budget.geodesic_rounding,
         r.budget.total());
    note("discrepancy %.4g (relative %.4g), %.1f s", r.discrepancy, rel, seconds);
    Outcome o;
    o.detail = to_json(r);
    o.detail["seconds"] = seconds;
    char buf[200];
    if (need_geodesic) {
        bool nonzero = r.lhs.value != 0 && r.volume.value != 0 && r.geodesic.value != 0;
        o.pass = nonzero && r.within_budget && rel <= 2e-2;
        std::snprintf(buf, sizeof buf, "relative discrepancy %.3g (target 2e-2), budget %.3g, terms nonzero: %s", rel,
                      r.budget.total(), nonzero ? "yes" : "no");
    } else {
        o.pass = r.geodesic.value == 0 && rel <= 1e-2 && seconds <= 600;
        std::snprintf(buf, sizeof buf, "relative discrepancy %.3g (limit 1e-2), budget %.3g, %.0f s", rel,
                      r.budget.total(), seconds);
    }
    o.summary = buf;
    return o;
}

Outcome criterion1(Shared& sh) {
    sh.surface();
    return balance(sh, auto_below_ell0(sh.fat_spectrum->ell0(), 0.5), 0.5, false);
}

Outcome criterion2(Shared& sh) { return balance(sh, 2.0, 0.3, true); }

Outcome criterion3(Shared& sh) {
    SchottkySurface& s = sh.surface();
    const ResonanceSet& rs = sh.fat_resonances();
    sh.prof();
    double ell0 = sh.fat_spectrum->ell0();
    const std::pair<double, double> pairs[] = {{1.30, 0.45}, {1.20, 0.60}, {1.00, 0.90}, {1.50, 0.25}, {0.90, 0.50}};
    Outcome o{true, "", json::array()};
    int ok = 0;
    for (auto [L, eta] : pairs) {
        NegativityReport r = negativity_check(rs, make_test_function(sh.profile, L, eta), ell0, s.vol0(), sh.fat_weyl);
        note("L = %.2f, eta = %.2f: sum %.6g, tail %.3g, leading term %.6g -> %s", L, eta, r.value, r.tail,
             r.leading_term, r.pass ? "pass" : "fail");
        o.detail.push_back(to_json(r));
        ok += r.pass;
        o.pass &= r.pass;
    }
    o.summary = std::to_string(ok) + "/5 pairs at or below the tail budget";
    return o;
}

Outcome criterion4(Shared& sh) {
    sh.prof();
    SincProductProfile& p = *sh.profile;
    double tb = p.series_tail_bound();
    double min_psi = 0, sup_out = 0;
    for (int i = 0; i <= 20000; ++i) {
        double x = -M_PI + 2 * M_PI * i / 20000;
        min_psi = std::min(min_psi, psi_eval(p, x));
        if (std::fabs(x) >= 1.001) sup_out = std::max(sup_out, std::fabs(psi_eval(p, x)));
    }
    DecayReport d = decay_check(p, log_grid(100, 1e4, 64));
    double conv_err = 0;
    oracle::Piecewise f = oracle::box(p.mu(1));
    for (int n = 1; n <= 4; ++n) {
        if (n > 1) f = oracle::convolve_box(f, p.mu(n));
        for (long k = 0; k <= 40; ++k)
            conv_err = std::max(conv_err, std::fabs(oracle::cosine_moment(f, double(k)) - p.partial_coefficient(n, k)));
    }
    note("K_c = %d, series tail bound %.3g", p.kc(), tb);
    note("min psi %.3g, sup |psi| off [-1.001, 1.001] %.3g", min_psi, sup_out);
    note("decay fit c1 = %.4g, c2 = %.4g on [1e2, 1e4]", d.c1, d.c2);
    note("n <= 4 convolution identity error %.3g", conv_err);
    Outcome o;
    o.pass = p.kc() >= 512 && min_psi >= 0 && sup_out <= 1e-10 && d.pass && d.c2 > 0 && conv_err <= 1e-10;
    char buf[200];
    std::snprintf(buf, sizeof buf, "min psi %.2g, sup outside %.2g, c2 %.4g, convolution error %.2g", min_psi,
                  sup_out, d.c2, conv_err);
    o.summary = buf;
    o.detail = {{"min_psi", min_psi}, {"sup_outside", sup_out}, {"c1", d.c1}, {"c2", d.c2},
                {"convolution_error", conv_err}, {"series_tail_bound", tb}};
    return o;
}

Outcome criterion5(Shared& sh) {
    SchottkySurface& s = sh.surface();
    double delta = *s.delta;
    ZetaEvaluator cyc(s, ZetaMode::cycle, 12);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> re(delta + 0.5, delta + 1.5), im(-10, 10);
    int agree = 0;
    double worst = 0;
    for (int i = 0; i < 20; ++i) {
        Complex z(re(rng), im(rng));
        ZetaValue e = zeta_euler(s, z, 10), c = cyc.evaluate(z);
        double gap = std::abs(e.value - c.value), bound = e.error + c.error;
        worst = std::max(worst, gap / bound);
        agree += gap <= bound;
    }
    note("euler(depth 10) vs cycle(depth 12): %d/20 within summed bounds, worst gap/bound %.3g", agree, worst);

    double d48 = delta_estimate(ZetaEvaluator(s, ZetaMode::fredholm, 48)).delta;
    double d64 = delta_estimate(ZetaEvaluator(s, ZetaMode::fredholm, 64)).delta;
    note("delta %.15f (48 nodes), %.15f (64 nodes), gap %.3g", d48, d64, std::fabs(d48 - d64));

    ZetaEvaluator z(s, ZetaMode::fredholm, 48);
    ZeroSearchOptions opt;
    double t0 = now();
    ResonanceSet rs = zeros_in_box(z, Box{-1, delta, 0, 10}, opt);
    int wind = winding_oracle(z, rs.search_box, opt.spacing / 2);
    note("box %s searched as %s: %d zeros, oracle %d, %.1f s", rs.box.str().c_str(), rs.search_box.str().c_str(),
         rs.search_count, wind, now() - t0);
    sh.keep("3f222_delta_box", rs);

    Outcome o;
    o.pass = agree == 20 && std::fabs(d48 - d64) <= 1e-8 && rs.search_count == wind;
    char buf[200];
    std::snprintf(buf, sizeof buf, "cross-mode %d/20, delta gap %.2g, zero count %d vs oracle %d", agree,
                  std::fabs(d48 - d64), rs.search_count, wind);
    o.summary = buf;
    o.detail = {{"cross_mode_agree", agree}, {"delta_48", d48}, {"delta_64", d64}, {"zero_count", rs.search_count},
                {"winding_oracle", wind}};
    return o;
}

Outcome criterion6(Shared&) {
    double t0 = now();
    int order_ok = 0;
    for (std::uint32_t n = 1; n <= 12; ++n) order_ok += group_order(n) == oracle::sl2_order(n);
    SchottkySurface s = bundled_integer_surface();
    std::uint64_t violations = 0, words = 0;
    json reports = json::array();
    for (std::uint32_t n = 2; n <= 5; ++n) {
        CongruenceReport r = trace_congruence_check(make_congruence_context(s, n), 10);
        note("n = %u: |SL2| %llu, %llu words, %llu kernel members, %llu violations, shortest kernel length %.4f "
             "(bound %.4f)",
             n, (unsigned long long)r.group_order, (unsigned long long)r.words_checked,
             (unsigned long long)r.members, (unsigned long long)r.violations,
             r.measured_ell0 ? *r.measured_ell0 : 0.0, r.ell0_bound);
        violations += r.violations;
        words += r.words_checked;
        reports.push_back({{"n", n}, {"words", r.words_checked}, {"violations", r.violations}});
    }
    double seconds = now() - t0;
    Outcome o;
    o.pass = order_ok == 12 && violations == 0 && seconds <= 60;
    char buf[200];
    std::snprintf(buf, sizeof buf, "group orders %d/12, %llu violations over %llu words, %.1f s", order_ok,
                  (unsigned long long)violations, (unsigned long long)words, seconds);
    o.summary = buf;
    o.detail = {{"group_orders_matching", order_ok}, {"reports", reports}, {"seconds", seconds}};
    return o;
}

Outcome criterion7(Shared& sh) {
    const ResonanceSet& base = sh.integer_resonances();
    const ResonanceSet& cover = sh.cover_resonances_n2();
    std::uint64_t dim = sh.ctx2->regular_action().degree();
    int matched = 0, total = 0;
    double worst = 0;
    for (const auto& r : base.in_box(cover.box)) {
        double best = 1e300;
        for (const auto& c : cover.resonances) best = std::min(best, std::abs(c.s - r.s));
        ++total;
        matched += best <= 1e-5;
        worst = std::max(worst, best);
        if (best > 1e-5) note("base resonance %.10f%+.10fi unmatched (nearest %.3g)", r.s.real(), r.s.imag(), best);
    }
    Outcome o;
    o.pass = dim == oracle::sl2_order(2) && total > 0 && matched == total;
    char buf[200];
    std::snprintf(buf, sizeof buf, "degree %llu, %d/%d base resonances matched, worst distance %.2g",
                  (unsigned long long)dim, matched, total, worst);
    o.summary = buf;
    o.detail = {{"degree", dim}, {"matched", matched}, {"total", total}, {"worst_distance", worst}};
    return o;
}

Outcome criterion8(Shared& sh) {
    sh.fat_resonances();
    sh.integer_resonances();
    sh.cover_resonances_n2();
    sh.family();
    int checks = 0, mismatches = 0, crude = 0, crude_bad = 0;
    for (std::size_t i = 0; i < sh.emitted.size(); ++i) {
        const ResonanceSet& rs = sh.emitted[i];
        auto rows = oracle::parse_csv(resonance_csv(rs));
        std::vector<std::pair<double, double>> pts;
        for (int a = 0; a <= 8; ++a) {
            double sigma = rs.box.re_min + (0.5 - rs.box.re_min) * a / 8;
            double h = covered_strip_height(rs, sigma);
            for (int b = 1; b <= 6; ++b) {
                double T = h * b / 6;
                if (T <= 0) continue;
                ++checks;
                mismatches += count_strip(rs, sigma, T) != oracle::filter_strip(rows, sigma, T);
                pts.push_back({sigma, T});
            }
        }
        double rc = covered_radius(rs);
        for (int b = 1; b <= 10; ++b) {
            ++checks;
            mismatches += count_ball(rs, rc * b / 10) != oracle::filter_ball(rows, rc * b / 10);
        }
        for (const auto& c : crude_inclusion(rs, pts)) {
            ++crude;
            crude_bad += !c.holds;
        }
        note("%s: %zu rows, covered radius %.3f", sh.emitted_names[i].c_str(), rows.size(), rc);
    }
    std::vector<double> radii{0.5, 0.75, 1.0};
    CountingProfile pb = counting_profile(*sh.integer_set, "integer", sh.integer->vol0(), radii);
    CountingProfile pc = counting_profile(*sh.cover_set, "integer_cover2", sh.integer->vol0() * 6, radii);
    WeylReport w = weyl_diagnostics({pb, pc}, 100);
    for (const auto& r : w.rows) note("Weyl %s r = %.2f: N = %d, ratio %.4g", r.name.c_str(), r.r, r.N, r.ratio);
    Outcome o;
    o.pass = mismatches == 0 && crude_bad == 0 && w.pass;
    char buf[240];
    std::snprintf(buf, sizeof buf, "%d/%d counts match the CSV filter, crude bound %d/%d, Weyl bracket [%.4g, %.4g]",
                  checks - mismatches, checks, crude - crude_bad, crude, w.c_lo, w.c_hi);
    o.summary = buf;
    o.detail = {{"sets", sh.emitted_names}, {"count_checks", checks}, {"mismatches", mismatches},
                {"crude_checks", crude}, {"crude_failures", crude_bad}, {"weyl_c_lo", w.c_lo},
                {"weyl_c_hi", w.c_hi}};
    return o;
}

Outcome criterion9(Shared& sh) {
    sh.prof();
    const std::vector<CoverData>& family = sh.family();
    ExperimentReport r = lower_bound_experiment(family, make_test_function(sh.profile, 1, 0.5), {});
    bool chain = true, counted = true;
    for (const auto& c : r.covers) {
        note("%s: S1 %.4g <= |S2| %.4g + |S3| %.4g + |S4| %.4g + tail %.3g : %s; N = %d, floor %.4g", c.id.c_str(),
             c.sums.S[0], std::fabs(c.sums.S[1]), std::fabs(c.sums.S[2]), std::fabs(c.sums.S[3]), c.sums.tail,
             c.chain_holds ? "holds" : "fails", c.measured_count, c.theoretical_floor);
        chain &= c.chain_holds;
        counted &= c.theoretical_floor > 0;
    }
    note("%s", r.asymptotic_note.c_str());
    Outcome o;
    o.pass = r.pass && chain && counted && !r.covers.empty() && !r.asymptotic_note.empty();
    o.summary = std::to_string(r.covers.size()) + " covers, chain " + (chain ? "holds" : "fails") + ", A = " +
                std::to_string(r.A);
    o.detail = to_json(r);
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"acceptance run"};
    bool strict = false;
    std::string report_path;
    std::vector<int> only;
    app.add_flag("--strict", strict, "exit nonzero when any criterion fails");
    app.add_option("--report", report_path, "write a JSON report");
    app.add_option("--only", only, "criteria to run")->check(CLI::Range(1, 9));
    CLI11_PARSE(app, argc, argv);

    const std::vector<std::pair<std::string, std::function<Outcome(Shared&)>>> criteria{
        {"trace balance, vanishing geodesic term", criterion1},
        {"trace balance, full identity", criterion2},
        {"negativity inequality", criterion3},
        {"test function certification", criterion4},
        {"zeta cross-mode oracle", criterion5},
        {"congruence arithmetic", criterion6},
        {"covering inclusion", criterion7},
        {"counting oracles", criterion8},
        {"pipeline integrity", criterion9},
    };
    Shared sh;
    json report = json::array();
    int failed = 0;
    double start = now();
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        int id = static_cast<int>(i) + 1;
        if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
        std::printf("criterion %d: %s\n", id, criteria[i].first.c_str());
        std::fflush(stdout);
        Outcome o;
        double t0 = now();
        try {
            o = criteria[i].second(sh);
        } catch (const std::exception& e) {
            o.pass = false;
            o.summary = std::string("error: ") + e.what();
        }
        std::printf("%s %d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                    o.summary.c_str(), now() - t0);
        std::fflush(stdout);
        failed += !o.pass;
        report.push_back({{"criterion", id}, {"name", criteria[i].first}, {"pass", o.pass}, {"summary", o.summary},
                          {"detail", o.detail}});
    }
    std::printf("%d failed, %.1f s total\n", failed, now() - start);
    if (!report_path.empty()) write_atomic(report_path, report.dump(2) + "\n");
    return strict && failed ? 1 : 0;
}
