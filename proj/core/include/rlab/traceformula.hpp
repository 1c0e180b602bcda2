#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rlab/schottky.hpp"
#include "rlab/testfn.hpp"
#include "rlab/words.hpp"
#include "rlab/zeros.hpp"

namespace rlab {

// version 1 pairs resonances with phi_hat(i(s - 1/2)), version 2 with phi_hat(is)
enum class FormulaVersion { v1 = 1, v2 = 2 };

struct TermValue {
    double value = 0;
    double error = 0;
};

// -(vol0 / 4π) ∫ cosh(t/2)/sinh(t/2)^2 w(t) phi(t) dt, w = 1 (v1) or e^{t/2} (v2)
TermValue volume_term(double vol0, const TestFunction& tf, FormulaVersion v, double rel_tol = 1e-10);
TermValue volume_term(const SchottkySurface& s, const TestFunction& tf, FormulaVersion v, double rel_tol = 1e-10);

// sum over primitive lengths l and k >= 1 of l phi(kl)/(2 sinh(kl/2)) (v1) or l phi(kl)/(1 - e^{-kl}) (v2)
TermValue geodesic_term(const LengthSpectrum& spectrum, const TestFunction& tf, FormulaVersion v);

struct TailOptions {
    double vol0 = 0;
    double weyl_constant = 0;  // N(r) <= C vol0 r^2
    double budget = -1;        // negative: never throw
};

struct ResonanceSum {
    double value = 0;
    double imag_residual = 0;
    double tail = 0;             // bound on resonances outside the box
    double location_error = 0;   // from the resonance tolerances
    double weyl_constant = 0;
    double required_im_max = 0;  // smallest box height meeting the budget, inf if none does
};

// bound on |sum| over resonances outside rs.box
double resonance_tail(const ResonanceSet& rs, const TestFunction& tf, FormulaVersion v, const TailOptions& opt);

ResonanceSum resonance_sum(const ResonanceSet& rs, const TestFunction& tf, FormulaVersion v, const TailOptions& opt);

struct BudgetBreakdown {
    double resonance_tail = 0;
    double resonance_location = 0;
    double volume_quadrature = 0;
    double geodesic_rounding = 0;
    double total() const { return resonance_tail + resonance_location + volume_quadrature + geodesic_rounding; }
};

struct BalanceReport {
    std::string surface;
    FormulaVersion version = FormulaVersion::v2;
    double L = 0, eta = 0, amplitude = 1, tilt = 0, kappa = 0;
    Box box;
    ResonanceSum lhs;
    TermValue volume;
    TermValue geodesic;
    double discrepancy = 0;
    BudgetBreakdown budget;
    double rel_tol = 1e-2;
    double tolerance = 0;      // rel_tol max(|volume|, |lhs|)
    bool within_budget = false;
    bool pass = false;          // discrepancy <= tolerance
};

BalanceReport verify_balance(const SchottkySurface& s, const LengthSpectrum& spectrum, const ResonanceSet& rs,
                             const TestFunction& tf, FormulaVersion v, double weyl_constant,
                             double vol0 = 0, double rel_tol = 1e-2);

struct NegativityReport {
    double L = 0, eta = 0, ell0 = 0;
    double value = 0;
    double tail = 0;
    double leading_term = 0;  // contribution of the largest real resonance
    bool pass = false;        // value <= tail
};

// requires (1 + eta) L < ell0; NotApplicable otherwise
NegativityReport negativity_check(const ResonanceSet& rs, const TestFunction& tf, double ell0, double vol0,
                                  double weyl_constant);

// f_beta(x) = exp(-c x / log(x)^beta)
double f_beta(double x, double c, double beta);
// (-∫_x^∞ u^2 f_beta'(u) du) / (x^3 f_beta(x))
double f_beta_exercise_ratio(double x, double c, double beta);

struct ExperimentParams {
    double alpha = 2.5;
    double nu = 0.25;
    double eps = 0.05;
    double eps_prime = 0.05;
    double A = 0;       // <= 0: smallest value with w(n) >= 0 for every cover
    double margin = 0.05;  // (1 + eta) L = ell0 - margin
};

struct CoverData {
    std::string id;
    int degree = 1;
    double vol0 = 0;
    double ell0 = 0;
    double delta = 0;
    double weyl_constant = 0;
    const ResonanceSet* resonances = nullptr;
};

struct RegionSums {
    double S[4] = {0, 0, 0, 0};
    int counts[4] = {0, 0, 0, 0};
    double tail = 0;  // resonances outside the computed box
};

// R1: Re > 1/2; R2: sigma <= Re <= 1/2, |Im| <= K; R3: same with |Im| > K; R4: Re < sigma
int region_of(Complex s, double sigma, double K);

struct CoverExperiment {
    std::string id;
    int degree = 1;
    double vol0 = 0, ell0 = 0, delta = 0;
    double eta = 0, K = 0, L = 0, w = 0, sigma = 0;
    RegionSums sums;
    double S1_bound = 0;            // 2π eta L e^{delta L (1 - eta)}, lower bound
    double S2_bound = 0;
    double S3_bound = 0;            // exponent as displayed: L(1 + eta max(2|sigma|, 1))/2
    double S3_bound_alt = 0;        // exponent L(1 + eta)/2 from the pointwise estimate
    double S4_bound = 0;
    int measured_count = 0;         // N(sigma, K)
    double theoretical_floor = 0;   // v^{A(delta - 1/2) - eps}
    bool chain_holds = false;       // S1 <= |S2| + |S3| + |S4| + tail
};

struct ExperimentReport {
    ExperimentParams params;
    double A = 0;
    double beta = 0;
    double c2 = 0;
    std::vector<CoverExperiment> covers;
    std::vector<std::string> implied_constants;
    std::string asymptotic_note;
    bool pass = false;
};

ExperimentReport lower_bound_experiment(const std::vector<CoverData>& family, const TestFunction& base_tf,
                                        ExperimentParams params);

nlohmann::json to_json(const BalanceReport& r);
nlohmann::json to_json(const NegativityReport& r);
nlohmann::json to_json(const ExperimentReport& r);
std::string experiment_csv(const ExperimentReport& r);

}  // namespace rlab
