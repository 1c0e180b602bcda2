#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the library's numerics.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

namespace oracle {

inline long double length_from_trace(long double t) { return 2 * std::log(t / 2 + std::sqrt(t * t / 4 - 1)); }

// count of det = 1 matrices over Z/n by brute force
inline std::uint64_t sl2_order(std::uint32_t n) {
    std::uint64_t count = 0;
    for (std::uint32_t a = 0; a < n; ++a)
        for (std::uint32_t b = 0; b < n; ++b)
            for (std::uint32_t c = 0; c < n; ++c)
                for (std::uint32_t d = 0; d < n; ++d)
                    if ((static_cast<std::uint64_t>(a) * d + n * n - (static_cast<std::uint64_t>(b) * c) % n) % n == 1 % n)
                        ++count;
    return count;
}

// Piecewise polynomial on [x_0, x_m]; piece i lives on [x_i, x_{i+1}] with
// coefficients in powers of (x - x_i).
struct Piecewise {
    std::vector<double> knots;
    std::vector<std::vector<double>> coef;

    double integral() const {
        double s = 0;
        for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
            double h = knots[i + 1] - knots[i];
            for (std::size_t p = 0; p < coef[i].size(); ++p) s += coef[i][p] * std::pow(h, p + 1) / (p + 1);
        }
        return s;
    }

    double eval(double x) const {
        for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
            if (x >= knots[i] && x <= knots[i + 1]) {
                double u = x - knots[i], v = 0;
                for (std::size_t p = coef[i].size(); p-- > 0;) v = v * u + coef[i][p];
                return v;
            }
        }
        return 0;
    }
};

inline Piecewise box(double mu) { return {{-mu, mu}, {{1 / (2 * mu)}}}; }

// (f * box_mu)(x) = (F(x + mu) - F(x - mu)) / (2 mu), built exactly on the merged knots
inline Piecewise convolve_box(const Piecewise& f, double mu) {
    std::vector<double> knots;
    for (double k : f.knots) {
        knots.push_back(k - mu);
        knots.push_back(k + mu);
    }
    std::sort(knots.begin(), knots.end());
    knots.erase(std::unique(knots.begin(), knots.end(), [](double a, double b) { return std::fabs(a - b) < 1e-15; }),
                knots.end());
    // antiderivative of f at a point, exactly
    auto F = [&](double x) {
        double s = 0;
        for (std::size_t i = 0; i + 1 < f.knots.size(); ++i) {
            double a = f.knots[i], b = std::min(f.knots[i + 1], x);
            if (b <= a) break;
            double h = b - a;
            for (std::size_t p = 0; p < f.coef[i].size(); ++p) s += f.coef[i][p] * std::pow(h, p + 1) / (p + 1);
        }
        return s;
    };
    // on each piece the result is a polynomial of degree deg(f) + 1: fit it
    // exactly through deg + 2 points
    std::size_t deg = f.coef[0].size();
    Piecewise g;
    g.knots = knots;
    for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
        double a = knots[i], h = knots[i + 1] - a;
        std::size_t m = deg + 1;
        std::vector<std::vector<double>> A(m, std::vector<double>(m + 1));
        for (std::size_t r = 0; r < m; ++r) {
            double u = h * (r + 0.5) / m;
            for (std::size_t p = 0; p < m; ++p) A[r][p] = std::pow(u, p);
            A[r][m] = (F(a + u + mu) - F(a + u - mu)) / (2 * mu);
        }
        for (std::size_t c = 0; c < m; ++c) {
            std::size_t piv = c;
            for (std::size_t r = c + 1; r < m; ++r)
                if (std::fabs(A[r][c]) > std::fabs(A[piv][c])) piv = r;
            std::swap(A[c], A[piv]);
            for (std::size_t r = 0; r < m; ++r) {
                if (r == c) continue;
                double t = A[r][c] / A[c][c];
                for (std::size_t q = c; q <= m; ++q) A[r][q] -= t * A[c][q];
            }
        }
        std::vector<double> cf(m);
        for (std::size_t p = 0; p < m; ++p) cf[p] = A[p][m] / A[p][p];
        g.coef.push_back(cf);
    }
    return g;
}

// ∫ f(x) cos(kx) dx by 24-point Gauss-Legendre on every piece
inline double cosine_moment(const Piecewise& f, double k) {
    static const double x[12] = {0.0640568928626056, 0.1911188674736163, 0.3150426796961634, 0.4337935076260451,
                                 0.5454214713888396, 0.6480936519369755, 0.7401241915785544, 0.8200019859739029,
                                 0.8864155270044011, 0.9382745520027328, 0.9747285559713095, 0.9951872199970213};
    static const double w[12] = {0.1279381953467522, 0.1258374563468283, 0.1216704729278034, 0.1155056680537256,
                                 0.1074442701159656, 0.0976186521041139, 0.0861901615319533, 0.0733464814110803,
                                 0.0592985849154368, 0.0442774388174198, 0.0285313886289337, 0.0123412297999872};
    double s = 0;
    for (std::size_t i = 0; i + 1 < f.knots.size(); ++i) {
        double a = f.knots[i], b = f.knots[i + 1];
        // split long pieces so the cosine is resolved
        int sub = std::max(1, static_cast<int>(std::ceil((b - a) * std::fabs(k) / 4)));
        for (int j = 0; j < sub; ++j) {
            double lo = a + (b - a) * j / sub, hi = a + (b - a) * (j + 1) / sub;
            double c = (lo + hi) / 2, h = (hi - lo) / 2;
            for (int q = 0; q < 12; ++q)
                for (int sg : {-1, 1}) {
                    double t = c + sg * h * x[q];
                    s += h * w[q] * f.eval(t) * std::cos(k * t);
                }
        }
    }
    return s;
}

struct CsvRow {
    double re, im;
    int m;
};

inline std::vector<CsvRow> parse_csv(const std::string& text) {
    std::vector<CsvRow> rows;
    std::istringstream is(text);
    std::string line;
    std::getline(is, line);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string a, b, c;
        std::getline(ls, a, ',');
        std::getline(ls, b, ',');
        std::getline(ls, c, ',');
        rows.push_back({std::stod(a), std::stod(b), std::stoi(c)});
    }
    return rows;
}

inline int filter_strip(const std::vector<CsvRow>& rows, double sigma, double T) {
    int n = 0;
    for (const auto& r : rows)
        if (sigma <= r.re && r.re <= 0.5 && std::fabs(r.im) < T) n += r.m;
    return n;
}

inline int filter_ball(const std::vector<CsvRow>& rows, double radius) {
    int n = 0;
    for (const auto& r : rows)
        if (std::hypot(r.re, r.im) <= radius) n += r.m;
    return n;
}

// composite Simpson rule with n (even) panels
template <class F>
double simpson(F f, double a, double b, int n) {
    double h = (b - a) / n, s = f(a) + f(b);
    for (int i = 1; i < n; ++i) s += (i % 2 ? 4 : 2) * f(a + i * h);
    return s * h / 3;
}

}  // namespace oracle
