#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rlab/config.hpp"
#include "rlab/congruence.hpp"
#include "rlab/counting.hpp"
#include "rlab/errors.hpp"
#include "rlab/io.hpp"
#include "rlab/parallel.hpp"
#include "rlab/pipeline.hpp"
#include "rlab/testfn.hpp"
#include "rlab/traceformula.hpp"

using namespace rlab;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr int kPass = 0, kFail = 1, kUsage = 2, kPrecision = 3;

const char* kSchema = R"(spectrum CSV      length,multiplicity,representative_word
resonance CSV     re,im,multiplicity  (sidecar <file>.json: box, search_box, tolerance, chi, degree,
                  search_count, evaluations, zeta{mode,depth}, count, location_errors, topological)
counting CSV      r,N
strip CSV         sigma,T,N
experiment CSV    cover,n,vol0,ell0,delta,sigma,K,measured_count,theoretical_floor
testfn JSON       kappa, beta, c_norm, K_c, series_tail_bound, c1, c2, coefficients[] (decimal strings)
BalanceReport     surface, version, test_function{L,eta,amplitude,tilt,kappa}, box, resonance_sum{value,
                  imag_residual,tail_bound,location_error,weyl_constant}, volume_term{value,error},
                  geodesic_term{value,error}, discrepancy, budget{...,total}, rel_tol, tolerance,
                  within_budget, verdict
NegativityReport  L, eta, ell0, value, tail_budget, leading_term, verdict
ExperimentReport  params, covers[], implied_constants[], asymptotic_note, verdict
surface config    INI: [surface] name kind precision_bits; [funnel] l1 l2 l3;
                  [generators] g1 = "a b c d"; [disks] g1_target g1_source = "center radius"
)";

SchottkySurface load_surface(const std::string& spec) {
    if (spec == "3f222" || spec == "integer") return build_surface(bundled_config(spec));
    return build_surface(load_surface_config(spec));
}

struct Emitter {
    std::string out;

    void text(const std::string& content, const json& sidecar) const {
        if (out.empty() || out == "-") {
            std::cout << content;
            return;
        }
        write_with_sidecar(out, content, sidecar);
    }
    void report(const json& j) const {
        if (out.empty() || out == "-") std::cout << dump(j);
        else write_atomic(out, dump(j));
    }
};

std::vector<std::uint32_t> parse_list(const std::string& s) {
    std::vector<std::uint32_t> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(static_cast<std::uint32_t>(std::stoul(item)));
    if (v.empty()) throw ConfigError("empty list '" + s + "'");
    return v;
}

// "kappa=0.5,kc=512"
std::pair<double, int> parse_testfn(const std::string& s) {
    double kappa = 0.5;
    int kc = 512;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw ConfigError("test function option '" + item + "' is not key=value");
        std::string k = item.substr(0, eq), v = item.substr(eq + 1);
        if (k == "kappa") kappa = std::stod(v);
        else if (k == "kc") kc = std::stoi(v);
        else throw ConfigError("unknown test function key '" + k + "'");
    }
    return {kappa, kc};
}

std::shared_ptr<SincProductProfile> make_profile(const std::string& spec) {
    auto [kappa, kc] = parse_testfn(spec);
    auto p = std::make_shared<SincProductProfile>(build_profile(kappa, kc));
    decay_check(*p, log_grid(100, 1e4, 64));
    return p;
}

json run_info(const std::string& command) { return {{"command", command}, {"threads", thread_count()}}; }

std::string spectrum_csv(const LengthSpectrum& sp) {
    std::string s = "length,multiplicity,representative_word\n";
    char buf[64];
    for (const auto& e : sp.entries) {
        std::snprintf(buf, sizeof buf, "%.17g,%d,", e.length, e.multiplicity);
        s += buf + word_to_string(e.representative) + "\n";
    }
    return s;
}

ResonanceSet obtain_resonances(const SchottkySurface& s, const std::string& file, const std::string& box, double tol,
                               int nodes, const PermutationAction* rho = nullptr) {
    if (!file.empty()) return read_resonances(read_file(file), json::parse(read_file(file + ".json")));
    return compute_resonances(s, Box::parse(box), tol, rho, nodes);
}

double surface_ell0(const SchottkySurface& s) { return cover_ell0(s, PermutationAction::trivial(s.rank())); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rlab: resonances, length spectra and trace formulas of Schottky surfaces"};
    app.require_subcommand(1);
    bool schema = false;
    app.add_flag("--schema", schema, "print CSV and JSON schemas and exit");
    app.set_help_all_flag("--help-all", "expand every subcommand");

    std::string surface = "3f222", out, box, resonances_file, testfn = "kappa=0.5", L_opt = "auto-below-ell0";
    double tol = 1e-10, cutoff = 8, eta = 0.5, margin = 0.05, rel_tol = 1e-2;
    int nodes = 0, version = 2, depth = 10;
    std::string n_list = "2";

    auto add_surface = [&](CLI::App* c) {
        c->add_option("--surface", surface, "config file, or a bundled name (3f222, integer)")->capture_default_str();
    };
    auto add_out = [&](CLI::App* c) { c->add_option("--out", out, "output file; '-' or absent writes to stdout"); };
    auto add_box = [&](CLI::App* c, const std::string& def) {
        box = def;
        c->add_option("--box", box, "re_min:re_max:im_min:im_max")->capture_default_str();
        c->add_option("--tol", tol, "zero location tolerance")->capture_default_str();
        c->add_option("--nodes", nodes, "Fredholm nodes per disk (0 chooses)")->capture_default_str();
    };

    auto* surf = app.add_subcommand("surface", "surface operations");
    surf->require_subcommand(1);
    auto* surf_validate = surf->add_subcommand("validate", "ping-pong and disk checks");
    add_surface(surf_validate);

    auto* spectrum = app.add_subcommand("spectrum", "primitive length spectrum up to a cutoff");
    add_surface(spectrum);
    add_out(spectrum);
    spectrum->add_option("--cutoff", cutoff, "length cutoff")->capture_default_str();

    auto* delta = app.add_subcommand("delta", "critical exponent");
    add_surface(delta);
    delta->add_option("--nodes", nodes, "Fredholm nodes per disk (0: 64)");

    auto* res = app.add_subcommand("resonances", "resonances in a box");
    add_surface(res);
    add_out(res);
    add_box(res, "-1:0.9:0:10");

    auto* tfn = app.add_subcommand("testfn", "test function profile");
    tfn->require_subcommand(1);
    auto* tf_build = tfn->add_subcommand("build", "build the profile and its coefficient table");
    auto* tf_check = tfn->add_subcommand("check", "positivity, support, decay and convolution checks");
    for (auto* c : {tf_build, tf_check}) {
        c->add_option("--testfn", testfn, "kappa=<k>,kc=<K_c>")->capture_default_str();
        add_out(c);
    }

    auto* trace = app.add_subcommand("trace", "trace formula");
    trace->require_subcommand(1);
    auto* tr_verify = trace->add_subcommand("verify", "balance of the trace formula");
    auto* tr_neg = trace->add_subcommand("negativity", "sign of the resonance sum below the systole");
    for (auto* c : {tr_verify, tr_neg}) {
        add_surface(c);
        add_out(c);
        add_box(c, "-1:0.6:0:10");
        c->add_option("--resonances", resonances_file, "reuse a resonance CSV (with its sidecar)");
        c->add_option("--testfn", testfn, "kappa=<k>,kc=<K_c>")->capture_default_str();
        c->add_option("--L", L_opt, "centre of the test function, or auto-below-ell0")->capture_default_str();
        c->add_option("--eta", eta, "relative half width")->capture_default_str();
        c->add_option("--margin", margin, "gap below ell0 for auto-below-ell0")->capture_default_str();
    }
    tr_verify->add_option("--version", version, "1 or 2")->capture_default_str();
    tr_verify->add_option("--rel-tol", rel_tol, "verdict tolerance relative to max(|volume|, |lhs|)")->capture_default_str();

    auto* cong = app.add_subcommand("congruence", "congruence covers");
    cong->require_subcommand(1);
    auto* cg_check = cong->add_subcommand("check", "trace congruence over all reduced words");
    cg_check->add_option("--n", n_list, "comma separated levels")->capture_default_str();
    cg_check->add_option("--depth", depth, "maximal word length")->capture_default_str();
    add_out(cg_check);
    auto* cg_cover = cong->add_subcommand("cover", "resonances of the cover X(n)");
    cg_cover->add_option("--n", n_list, "level")->capture_default_str();
    add_out(cg_cover);
    add_box(cg_cover, "-0.5:0.5:0:2");
    for (auto* c : {cg_check, cg_cover}) {
        surface = "integer";
        c->add_option("--surface", surface, "integer surface config or 'integer'")->capture_default_str();
    }

    auto* exp = app.add_subcommand("experiment", "experiments");
    exp->require_subcommand(1);
    auto* lower = exp->add_subcommand("lower-bound", "lower bound pipeline on the bundled cover family");
    ExperimentParams ep;
    lower->add_option("--alpha", ep.alpha)->capture_default_str();
    lower->add_option("--nu", ep.nu)->capture_default_str();
    lower->add_option("--eps", ep.eps)->capture_default_str();
    lower->add_option("--eps-prime", ep.eps_prime)->capture_default_str();
    lower->add_option("--A", ep.A, "0 picks the smallest admissible value")->capture_default_str();
    lower->add_option("--testfn", testfn, "kappa=<k>,kc=<K_c>")->capture_default_str();
    std::string csv_out;
    lower->add_option("--csv", csv_out, "also write the per-cover table");
    add_out(lower);

    auto* count = app.add_subcommand("count", "resonance counting functions");
    std::string count_name = "surface";
    double vol0 = 0;
    count->add_option("--resonances", resonances_file, "resonance CSV with sidecar")->required();
    count->add_option("--vol0", vol0, "0-volume of the surface")->required();
    count->add_option("--name", count_name)->capture_default_str();
    std::string strip_out;
    count->add_option("--strip-out", strip_out, "strip count CSV");
    add_out(count);

    app.footer(std::string("Environment: RLAB_THREADS overrides the thread count.\n"
                           "Exit status: 0 pass, 1 verdict fail, 2 usage error, 3 precision or resource error."));

    // --schema works without a subcommand
    for (int i = 1; i < argc; ++i)
        if (std::string(argv[i]) == "--schema") {
            std::cout << kSchema;
            return kPass;
        }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kPass : kUsage;
    }

    Emitter em{out};
    try {
        if (*surf_validate) {
            SchottkySurface s = load_surface(surface);
            ValidationReport r = validate(s);
            em.report({{"surface", s.name}, {"ok", r.ok}, {"min_gap", r.min_gap}, {"failures", r.failures},
                       {"verdict", r.ok ? "pass" : "fail"}});
            return r.ok ? kPass : kFail;
        }
        if (*spectrum) {
            SchottkySurface s = load_surface(surface);
            LengthSpectrum sp = length_spectrum(s, cutoff);
            json side = run_info("spectrum");
            side["surface"] = s.name;
            side["cutoff"] = cutoff;
            side["certificate"] = {{"complete", sp.certificate.complete},
                                   {"word_length_constant", sp.certificate.word_length_constant},
                                   {"nodes_visited", sp.certificate.nodes_visited},
                                   {"max_word_length", sp.certificate.max_word_length}};
            side["orientation"] = "oriented classes; a geodesic and its reverse count separately";
            side["columns"] = {"length", "multiplicity", "representative_word"};
            em.text(spectrum_csv(sp), side);
            return kPass;
        }
        if (*delta) {
            SchottkySurface s = load_surface(surface);
            int m = nodes > 0 ? nodes : 64;
            ZetaEvaluator z(s, ZetaMode::fredholm, m);
            DeltaEstimate d = delta_estimate(z);
            DeltaEstimate d2 = delta_estimate(ZetaEvaluator(s, ZetaMode::fredholm, m + m / 2));
            em.report({{"surface", s.name}, {"delta", d.delta}, {"bracket", d.bracket}, {"nodes", m},
                       {"stability", std::fabs(d.delta - d2.delta)}});
            return kPass;
        }
        if (*res) {
            SchottkySurface s = load_surface(surface);
            ResonanceSet rs = compute_resonances(s, Box::parse(box), tol, nullptr, nodes);
            json side = resonance_sidecar(rs);
            side["surface"] = s.name;
            side["run"] = run_info("resonances");
            em.text(resonance_csv(rs), side);
            return kPass;
        }
        if (*tf_build) {
            auto p = make_profile(testfn);
            em.report(profile_to_json(*p));
            return kPass;
        }
        if (*tf_check) {
            auto p = make_profile(testfn);
            double tb = p->series_tail_bound(), min_raw = 1e300, sup_out = 0;
            for (int i = -5000; i <= 5000; ++i) {
                double x = i * 3.141592653589793 / 5000;
                double v = psi_eval_raw(*p, x);
                min_raw = std::min(min_raw, v);
                if (std::fabs(x) >= 1.001) sup_out = std::max(sup_out, std::fabs(v));
            }
            DecayReport d = decay_check(*p, log_grid(100, 1e4, 64));
            bool ok = min_raw >= -tb && sup_out <= 1e-10 && d.pass;
            em.report({{"kappa", p->kappa()},
                       {"K_c", p->kc()},
                       {"series_tail_bound", tb},
                       {"min_raw", min_raw},
                       {"sup_outside_support", sup_out},
                       {"decay", {{"c1", d.c1}, {"c2", d.c2}, {"pass", d.pass}}},
                       {"verdict", ok ? "pass" : "fail"}});
            return ok ? kPass : kFail;
        }
        if (*tr_verify || *tr_neg) {
            SchottkySurface s = load_surface(surface);
            auto prof = make_profile(testfn);
            double ell0 = surface_ell0(s);
            double L = L_opt == "auto-below-ell0" ? auto_below_ell0(ell0, eta, margin) : std::stod(L_opt);
            TestFunction tf = make_test_function(prof, L, eta);
            ResonanceSet rs = obtain_resonances(s, resonances_file, box, tol, nodes);
            double C = measured_weyl_constant(rs, s.vol0());
            if (*tr_verify) {
                LengthSpectrum sp = length_spectrum(s, std::max(tf.support_hi() + 0.5, ell0 + 0.5));
                BalanceReport r = verify_balance(s, sp, rs, tf, static_cast<FormulaVersion>(version), C, 0, rel_tol);
                json j = to_json(r);
                j["ell0"] = ell0;
                em.report(j);
                return r.pass ? kPass : kFail;
            }
            NegativityReport r = negativity_check(rs, tf, ell0, s.vol0(), C);
            em.report(to_json(r));
            return r.pass ? kPass : kFail;
        }
        if (*cg_check) {
            SchottkySurface s = load_surface(surface);
            json arr = json::array();
            bool ok = true;
            for (auto n : parse_list(n_list)) {
                CongruenceContext ctx = make_congruence_context(s, n);
                CongruenceReport r = trace_congruence_check(ctx, depth);
                ok = ok && r.violations == 0;
                arr.push_back({{"n", n},
                               {"group_order", r.group_order},
                               {"surjective", r.surjective},
                               {"words_checked", r.words_checked},
                               {"members", r.members},
                               {"violations", r.violations},
                               {"ell0_bound", r.ell0_bound},
                               {"measured_ell0", r.measured_ell0 ? json(*r.measured_ell0) : json(nullptr)}});
            }
            em.report({{"surface", s.name}, {"depth", depth}, {"levels", arr}, {"verdict", ok ? "pass" : "fail"}});
            return ok ? kPass : kFail;
        }
        if (*cg_cover) {
            SchottkySurface s = load_surface(surface);
            auto levels = parse_list(n_list);
            if (levels.size() != 1) throw ConfigError("congruence cover takes a single level");
            CongruenceContext ctx = make_congruence_context(s, levels[0]);
            ResonanceSet rs = cover_resonances(ctx, Box::parse(box), tol);
            json side = resonance_sidecar(rs);
            side["surface"] = s.name;
            side["n"] = levels[0];
            side["run"] = run_info("congruence cover");
            em.text(resonance_csv(rs), side);
            return kPass;
        }
        if (*lower) {
            auto prof = make_profile(testfn);
            SchottkySurface base = three_funnel(2, 2, 2);
            delta_estimate(base, 48);
            TestFunction tf = make_test_function(prof, 1, 0.5);
            std::vector<ResonanceSet> sets;
            std::vector<CoverData> family;
            auto members = bundled_family();
            sets.reserve(members.size());
            for (const auto& m : members) {
                double l0 = cover_ell0(base, m.rho);
                // re_min -1 so the Weyl fit sees a unit ball
                sets.push_back(factored_resonances(base, m.factors, Box{-1, 0.6, 0, 2}, 1e-10));
                double v = base.vol0() * m.rho.degree();
                family.push_back({m.id, m.rho.degree(), v, l0, *base.delta, measured_weyl_constant(sets.back(), v),
                                  &sets.back()});
            }
            ExperimentReport r = lower_bound_experiment(family, tf, ep);
            if (!csv_out.empty()) write_atomic(csv_out, experiment_csv(r));
            em.report(to_json(r));
            return r.pass ? kPass : kFail;
        }
        if (*count) {
            ResonanceSet rs = read_resonances(read_file(resonances_file), json::parse(read_file(resonances_file + ".json")));
            CountingProfile p = counting_profile(rs, count_name, vol0);
            if (!strip_out.empty()) write_atomic(strip_out, strip_csv(p));
            json side = {{"name", count_name}, {"vol0", vol0}, {"weyl_constant", p.weyl_constant},
                         {"source", resonances_file}, {"columns", {"r", "N"}}};
            em.text(counting_csv(p), side);
            return kPass;
        }
    } catch (const ConfigError& e) {
        std::cerr << "rlab: " << e.what() << "\n";
        return kUsage;
    } catch (const ValidationError& e) {
        std::cerr << "rlab: " << e.what() << "\n";
        return kUsage;
    } catch (const PrecisionError& e) {
        std::cerr << "rlab: " << e.what() << "\n";
        return kPrecision;
    } catch (const ResourceError& e) {
        std::cerr << "rlab: " << e.what() << "\n";
        return kPrecision;
    } catch (const IncompleteSpectrum& e) {
        std::cerr << "rlab: " << e.what() << "\n";
        return kPrecision;
    } catch (const DomainError& e) {
        std::cerr << "rlab: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "rlab: " << e.what() << "\n";
        return kPrecision;
    }
    return kUsage;
}
