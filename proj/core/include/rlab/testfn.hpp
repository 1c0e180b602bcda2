#pragma once

#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rlab/mobius.hpp"

namespace rlab {

// psi = 2π times the density of sum_j U_j with U_j uniform on [-mu_j, mu_j]:
// supported in [-1, 1], Fourier coefficients phi(k) = prod_j sinc(mu_j k) and
// transform psi_hat(z) = 2π prod_j sinc(mu_j z).
class SincProductProfile {
public:
    double kappa() const { return kappa_; }
    double beta() const { return 1 + 2 * kappa_; }
    double c_norm() const { return c_; }
    int kc() const { return kc_; }
    double mu(std::size_t j) const;  // j >= 1
    const std::vector<double>& coefficients() const { return phi_; }
    double coefficient(long k) const;
    // bound on 2 sum_{k > K_c} |phi(k)| plus summation rounding
    double series_tail_bound() const { return tail_bound_; }
    double normalization_error() const { return norm_err_; }
    // sum_j log sinc(mu_j z), tail beyond the explicit table from power sums
    Complex log_product(Complex z) const;
    // bound on the neglected part of log_product at |z|
    double log_product_error(double abs_z) const;

    // partial product over the first n factors
    double partial_coefficient(int n, long k) const;

    // decay fit results, filled by decay_check
    double c1 = 0;
    double c2 = 0;

    friend SincProductProfile build_profile(double kappa, int kc);

private:
    double kappa_ = 0.5;
    double c_ = 0;
    int kc_ = 0;
    double tail_bound_ = 0;
    double norm_err_ = 0;
    std::vector<double> mu_;                         // mu_[j - 1], j <= J
    std::vector<std::vector<double>> suffix_;        // suffix_[p][j] = sum_{i > j} mu_i^{2p+2}
    std::vector<double> phi_;

    double tail_power_sum(int power, double J) const;
    double mu_formula(double j) const;
};

SincProductProfile build_profile(double kappa = 0.5, int kc = 512);

nlohmann::json profile_to_json(const SincProductProfile& p);
// rebuilds from kappa and K_c, then checks the stored table digit for digit
SincProductProfile profile_from_json(const nlohmann::json& j);

// cosine series, clipped to 0 inside the tail bound; |x| <= π
double psi_eval(const SincProductProfile& p, double x);
double psi_eval_raw(const SincProductProfile& p, double x);

// adaptive quadrature of ∫_{-1}^{1} psi(x) e^{-izx} dx
Complex psi_hat(const SincProductProfile& p, Complex z, double rel_tol = 1e-10);
// closed form 2π prod_j sinc(mu_j z)
Complex psi_hat_product(const SincProductProfile& p, Complex z);
// termwise transform of the truncated cosine series
Complex psi_hat_series(const SincProductProfile& p, Complex z);

struct DecayPoint {
    double x;
    double abs_hat;
    double D;
};

struct DecayReport {
    std::vector<DecayPoint> points;
    double c1 = 0;
    double c2 = 0;
    bool pass = false;
};

// D(x) = -log|psi_hat(x)| (log x)^beta / x on the grid, c2 = inf D
DecayReport decay_check(SincProductProfile& p, const std::vector<double>& grid);
std::vector<double> log_grid(double lo, double hi, int n);

struct LogComplex {
    double log_abs;
    double phase;
};

// phi_{L,eta}(t) = amplitude psi((t - L)/(eta L)) e^{tilt t}
struct TestFunction {
    std::shared_ptr<const SincProductProfile> profile;
    double L = 1;
    double eta = 0.5;
    double amplitude = 1;
    double tilt = 0;

    double support_lo() const { return (1 - eta) * L; }
    double support_hi() const { return (1 + eta) * L; }
    double operator()(double t) const;
};

TestFunction make_test_function(std::shared_ptr<const SincProductProfile> p, double L, double eta);

// ∫ phi(t) e^{st} dt = amplitude eta L e^{(s+tilt)L} psi_hat(i eta L (s+tilt))
Complex scaled_hat(const TestFunction& tf, Complex s);
LogComplex scaled_hat_log(const TestFunction& tf, Complex s);
// upper bound for |scaled_hat| from |sinc(w)| <= e^{|Im w|} min(1, 1/|Re w|)
double scaled_hat_envelope(const TestFunction& tf, double re_s, double abs_im_s);

}  // namespace rlab
