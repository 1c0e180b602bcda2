#include "rlab/testfn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "rlab/errors.hpp"

namespace rlab {

namespace {

constexpr double kPi = std::numbers::pi;
// explicit table size for mu_j
constexpr std::size_t kTable = 1u << 17;
// |mu_j z| below this goes to the power-sum tail
constexpr double kSeriesCut = 1e-2;

Complex log1m_small(Complex x) {
    if (std::abs(x) < 1e-4) return -x - x * x / 2.0 - x * x * x / 3.0;
    return std::log(1.0 - x);
}

// log(sin(w)/w) without overflow for large |Im w|
Complex log_sinc(Complex w) {
    if (std::abs(w) < 1e-4) {
        Complex w2 = w * w;
        return -w2 / 6.0 - w2 * w2 / 180.0;
    }
    const Complex I(0, 1);
    Complex ls;
    if (w.imag() > 20) {
        ls = -I * w + log1m_small(std::exp(2.0 * I * w)) + std::log(I / 2.0);
    } else if (w.imag() < -20) {
        ls = I * w + log1m_small(std::exp(-2.0 * I * w)) - std::log(2.0 * I);
    } else {
        ls = std::log(std::sin(w));
    }
    return ls - std::log(w);
}

}  // namespace

double SincProductProfile::mu_formula(double j) const {
    if (j < 1.5) return c_;
    return c_ / (j * std::pow(std::log(j), 1 + kappa_));
}

double SincProductProfile::mu(std::size_t j) const {
    if (j >= 1 && j <= mu_.size()) return mu_[j - 1];
    return mu_formula(static_cast<double>(j));
}

// sum_{j > J} mu_j^power by Euler-Maclaurin against the integral
double SincProductProfile::tail_power_sum(int power, double J) const {
    double k1 = 1 + kappa_;
    double U = std::log(J);
    double integral;
    if (power == 1) {
        integral = std::pow(U, -kappa_) / kappa_;
    } else {
        // t = e^u: ∫_U^∞ e^{(1-p)u} u^{-p(1+κ)} du
        boost::math::quadrature::exp_sinh<double> es;
        integral = es.integrate([&](double v) {
            double u = U + v;
            return std::exp((1 - power) * v - power * k1 * std::log(u / U)) ;
        }) * std::exp((1 - power) * U) * std::pow(U, -power * k1);
    }
    auto f = [&](double t) { return std::pow(t * std::pow(std::log(t), k1), -power); };
    double h = 1e-3 * J;
    double fp = (f(J + h) - f(J - h)) / (2 * h);
    double s = integral - f(J) / 2 - fp / 12;
    return s * std::pow(c_, power);
}

SincProductProfile build_profile(double kappa, int kc) {
    if (!(kappa > 0)) throw DomainError("kappa must be positive");
    if (kc < 64) throw DomainError("coefficient cutoff K_c must be at least 64");
    SincProductProfile p;
    p.kappa_ = kappa;
    p.kc_ = kc;

    // normalisation: 1 + sum_{j=2}^{J} 1/(j log^{1+κ} j) + analytic tail
    long double s = 1;
    long double comp = 0;
    for (std::size_t j = 2; j <= kTable; ++j) {
        long double t = 1.0L / (j * std::pow(std::log(static_cast<long double>(j)), 1 + static_cast<long double>(kappa)));
        long double y = t - comp;
        long double z = s + y;
        comp = (z - s) - y;
        s = z;
    }
    p.c_ = 1;
    double tail = p.tail_power_sum(1, static_cast<double>(kTable));
    double total = static_cast<double>(s) + tail;
    p.c_ = 1 / total;
    // Euler-Maclaurin remainder is below f'''(J)/720 ~ 1/J^4; the κ-dependence enters via the tail size
    p.norm_err_ = 6.0 / std::pow(static_cast<double>(kTable), 4) + 1e-16 * tail;
    if (!(p.norm_err_ < 1e-12) || !std::isfinite(total))
        throw PrecisionError("normalisation tail bound fails for kappa = " + std::to_string(kappa));

    p.mu_.resize(kTable);
    for (std::size_t j = 1; j <= kTable; ++j) p.mu_[j - 1] = p.mu_formula(static_cast<double>(j));
    // suffix sums of mu^2, mu^4, mu^6, mu^8
    p.suffix_.assign(4, std::vector<double>(kTable + 1, 0.0));
    for (int q = 0; q < 4; ++q) {
        int power = 2 * q + 2;
        long double acc = p.tail_power_sum(power, static_cast<double>(kTable));
        p.suffix_[q][kTable] = static_cast<double>(acc);
        for (std::size_t j = kTable; j >= 1; --j) {
            acc += std::pow(static_cast<long double>(p.mu_[j - 1]), power);
            p.suffix_[q][j - 1] = static_cast<double>(acc);
        }
    }

    p.phi_.resize(kc + 1);
    for (int k = 0; k <= kc; ++k) p.phi_[k] = std::exp(p.log_product(Complex(k, 0))).real();
    p.phi_[0] = 1;

    // 2 sum_{k > K_c} env(k), env(k) = prod_j min(1, 1/(mu_j k)), decreasing in k
    auto log_env = [&](double k, int& m) {
        double le = 0;
        m = 0;
        for (std::size_t j = 1; j <= kTable && p.mu_[j - 1] * k > 1; ++j) {
            le -= std::log(p.mu_[j - 1] * k);
            ++m;
        }
        return le;
    };
    double sum = 0;
    int m = 0;
    long k1 = 16L * kc;
    for (long k = kc + 1; k <= k1; ++k) sum += std::exp(log_env(static_cast<double>(k), m));
    double last = std::exp(log_env(static_cast<double>(k1), m));
    // beyond k1: env(k) <= env(k1) (k1/k)^m
    double rest = m >= 2 ? last * k1 / (m - 1) : 1e300;
    double abs_sum = 0;
    for (double v : p.phi_) abs_sum += std::fabs(v);
    p.tail_bound_ = 2 * (sum + rest) + 8 * std::numeric_limits<double>::epsilon() * 2 * abs_sum;
    return p;
}

Complex SincProductProfile::log_product(Complex z) const {
    double a = std::abs(z);
    if (a == 0) return 0;
    Complex acc = 0;
    std::size_t j = 1;
    // explicit factors while |mu_j z| >= kSeriesCut
    for (; j <= mu_.size() && mu_[j - 1] * a >= kSeriesCut; ++j) acc += log_sinc(mu_[j - 1] * z);
    double s2, s4, s6, s8;
    if (j <= mu_.size()) {
        s2 = suffix_[0][j - 1];
        s4 = suffix_[1][j - 1];
        s6 = suffix_[2][j - 1];
        s8 = suffix_[3][j - 1];
    } else {
        for (; mu_formula(static_cast<double>(j)) * a >= kSeriesCut; ++j)
            acc += log_sinc(mu_formula(static_cast<double>(j)) * z);
        double J = static_cast<double>(j - 1);
        s2 = tail_power_sum(2, J);
        s4 = tail_power_sum(4, J);
        s6 = tail_power_sum(6, J);
        s8 = tail_power_sum(8, J);
    }
    Complex z2 = z * z;
    Complex z4 = z2 * z2;
    // log sinc(y) = -y^2/6 - y^4/180 - y^6/2835 - y^8/37800 - ...
    acc += -z2 * s2 / 6.0 - z4 * s4 / 180.0 - z4 * z2 * s6 / 2835.0 - z4 * z4 * s8 / 37800.0;
    return acc;
}

double SincProductProfile::log_product_error(double abs_z) const {
    // next series term with |y| <= kSeriesCut, and the power-sum quadrature
    return std::pow(kSeriesCut, 8) * abs_z * abs_z * 1e-6 + 1e-15;
}

double SincProductProfile::partial_coefficient(int n, long k) const {
    double v = 1;
    for (int j = 1; j <= n; ++j) {
        double y = mu(j) * static_cast<double>(k);
        v *= (y == 0) ? 1.0 : std::sin(y) / y;
    }
    return v;
}

double SincProductProfile::coefficient(long k) const {
    k = std::labs(k);
    if (k <= kc_) return phi_[k];
    return std::exp(log_product(Complex(static_cast<double>(k), 0))).real();
}

nlohmann::json profile_to_json(const SincProductProfile& p) {
    nlohmann::json j;
    auto dec = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    j["kappa"] = dec(p.kappa());
    j["beta"] = dec(p.beta());
    j["c_norm"] = dec(p.c_norm());
    j["K_c"] = p.kc();
    j["series_tail_bound"] = dec(p.series_tail_bound());
    j["c1"] = dec(p.c1);
    j["c2"] = dec(p.c2);
    std::vector<std::string> tab;
    for (double v : p.coefficients()) tab.push_back(dec(v));
    j["coefficients"] = tab;
    return j;
}

SincProductProfile profile_from_json(const nlohmann::json& j) {
    double kappa = std::stod(j.at("kappa").get<std::string>());
    int kc = j.at("K_c").get<int>();
    SincProductProfile p = build_profile(kappa, kc);
    const auto& tab = j.at("coefficients");
    if (static_cast<int>(tab.size()) != kc + 1) throw ConfigError("coefficient table has the wrong length");
    for (int k = 0; k <= kc; ++k)
        if (std::stod(tab[k].get<std::string>()) != p.coefficients()[k])
            throw ConfigError("stored coefficient " + std::to_string(k) + " does not reproduce");
    p.c1 = std::stod(j.value("c1", std::string("0")));
    p.c2 = std::stod(j.value("c2", std::string("0")));
    return p;
}

double psi_eval_raw(const SincProductProfile& p, double x) {
    const auto& phi = p.coefficients();
    double s = 0;
    for (int k = p.kc(); k >= 1; --k) s += phi[k] * std::cos(k * x);
    return phi[0] + 2 * s;
}

double psi_eval(const SincProductProfile& p, double x) {
    if (std::fabs(x) > kPi + 1e-12) throw DomainError("psi_eval needs |x| <= pi");
    double v = psi_eval_raw(p, x);
    if (v < 0 && v >= -p.series_tail_bound()) return 0;
    return v;
}

Complex psi_hat(const SincProductProfile& p, Complex z, double rel_tol) {
    using boost::math::quadrature::gauss_kronrod;
    double scale = 2 * kPi * std::exp(std::fabs(z.imag()));
    double err_re = 0, err_im = 0;
    auto re = [&](double x) { return psi_eval(p, x) * std::real(std::exp(Complex(0, -1) * z * x)); };
    auto im = [&](double x) { return psi_eval(p, x) * std::imag(std::exp(Complex(0, -1) * z * x)); };
    double target = rel_tol * scale;
    double r = gauss_kronrod<double, 61>::integrate(re, -1.0, 1.0, 15, rel_tol, &err_re);
    double i = gauss_kronrod<double, 61>::integrate(im, -1.0, 1.0, 15, rel_tol, &err_im);
    Complex v(r, i);
    double floor = 64 * std::numeric_limits<double>::epsilon() * scale + 2 * p.series_tail_bound() * std::exp(std::fabs(z.imag()));
    double err = std::hypot(err_re, err_im) + floor;
    if (err > target && err > rel_tol * std::abs(v))
        throw PrecisionError("psi_hat quadrature reached only " + std::to_string(err / std::max(std::abs(v), 1e-300)) +
                             " relative accuracy");
    return v;
}

Complex psi_hat_product(const SincProductProfile& p, Complex z) { return 2 * kPi * std::exp(p.log_product(z)); }

Complex psi_hat_series(const SincProductProfile& p, Complex z) {
    auto sinc = [](Complex w) { return std::abs(w) < 1e-8 ? Complex(1.0) - w * w / 6.0 : std::sin(w) / w; };
    Complex s = 2.0 * p.coefficients()[0] * sinc(-z);
    for (int k = 1; k <= p.kc(); ++k)
        s += 2.0 * p.coefficients()[k] * (sinc(double(k) - z) + sinc(double(-k) - z));
    return s;
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i) g[i] = lo * std::pow(hi / lo, n == 1 ? 0.0 : double(i) / (n - 1));
    return g;
}

DecayReport decay_check(SincProductProfile& p, const std::vector<double>& grid) {
    DecayReport rep;
    double beta = p.beta();
    double inf_d = 1e300;
    for (double x : grid) {
        if (!(x >= 100 && x <= 1e4)) throw DomainError("decay grid must lie in [1e2, 1e4]");
        double la = (std::log(2 * kPi) + p.log_product(Complex(x, 0))).real();
        double d = -la * std::pow(std::log(x), beta) / x;
        rep.points.push_back({x, std::exp(la), d});
        inf_d = std::min(inf_d, d);
    }
    rep.c2 = inf_d;
    // calibrate c1 on a 4x refined grid: |psi_hat(x)| <= c1 exp(-c2 x / log^beta x)
    double c1 = 0;
    if (!grid.empty()) {
        auto fine = log_grid(grid.front(), grid.back(), 4 * static_cast<int>(grid.size()));
        for (double x : fine) {
            double la = (std::log(2 * kPi) + p.log_product(Complex(x, 0))).real();
            c1 = std::max(c1, std::exp(la + rep.c2 * x / std::pow(std::log(x), beta)));
        }
    }
    rep.c1 = c1;
    rep.pass = std::isfinite(rep.c2) && rep.c2 > 0;
    p.c1 = rep.c1;
    p.c2 = rep.c2;
    return rep;
}

double TestFunction::operator()(double t) const {
    double u = (t - L) / (eta * L);
    if (std::fabs(u) >= 1) return 0;
    return amplitude * psi_eval(*profile, u) * (tilt == 0 ? 1.0 : std::exp(tilt * t));
}

TestFunction make_test_function(std::shared_ptr<const SincProductProfile> p, double L, double eta) {
    if (!p) throw DomainError("test function needs a profile");
    if (!(L > 0)) throw DomainError("L must be positive");
    if (!(eta > 0 && eta < 1)) throw DomainError("eta must lie in (0, 1)");
    TestFunction tf;
    tf.profile = std::move(p);
    tf.L = L;
    tf.eta = eta;
    return tf;
}

LogComplex scaled_hat_log(const TestFunction& tf, Complex s) {
    Complex w = s + tf.tilt;
    double eL = tf.eta * tf.L;
    Complex lg = std::log(tf.amplitude * eL * 2 * kPi) + w * tf.L + tf.profile->log_product(Complex(0, 1) * eL * w);
    return {lg.real(), std::remainder(lg.imag(), 2 * kPi)};
}

Complex scaled_hat(const TestFunction& tf, Complex s) {
    Complex w = s + tf.tilt;
    if (std::fabs(w.real()) * tf.L * (1 + tf.eta) > 700)
        throw DomainError("scaled transform would overflow; use the log form");
    LogComplex l = scaled_hat_log(tf, s);
    return std::polar(std::exp(l.log_abs), l.phase);
}

double scaled_hat_envelope(const TestFunction& tf, double re_s, double abs_im_s) {
    double re = re_s + tf.tilt;
    double eL = tf.eta * tf.L;
    double le = std::log(std::fabs(tf.amplitude) * eL * 2 * kPi) + re * tf.L + eL * std::fabs(re);
    double x = eL * abs_im_s;
    for (std::size_t j = 1; j <= (1u << 17); ++j) {
        double m = tf.profile->mu(j) * x;
        if (m <= 1) break;
        le -= std::log(m);
    }
    return std::exp(le);
}

}  // namespace rlab
