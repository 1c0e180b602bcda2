#include "rlab/zeta.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <boost/math/tools/roots.hpp>

#include "rlab/errors.hpp"
#include "rlab/words.hpp"

namespace rlab {

std::string to_string(ZetaMode m) {
    switch (m) {
    case ZetaMode::euler: return "euler";
    case ZetaMode::cycle: return "cycle";
    case ZetaMode::fredholm: return "fredholm";
    }
    return "?";
}

ZetaMode zeta_mode_from_string(const std::string& s) {
    if (s == "euler") return ZetaMode::euler;
    if (s == "cycle") return ZetaMode::cycle;
    if (s == "fredholm") return ZetaMode::fredholm;
    throw DomainError("unknown zeta mode '" + s + "'");
}

namespace {

// log(1 - x), accurate for small |x|
Complex log1m(Complex x) {
    if (std::abs(x) < 1e-4) {
        Complex x2 = x * x;
        return -x - x2 / 2.0 - x2 * x / 3.0 - x2 * x2 / 4.0;
    }
    return std::log(1.0 - x);
}

PermutationAction action_or_trivial(const SchottkySurface& s, const PermutationAction* rho) {
    if (!rho) return PermutationAction::trivial(s.rank());
    if (rho->rank() != s.rank()) throw DomainError("permutation action rank differs from the surface rank");
    return *rho;
}

}  // namespace

std::vector<Disk> collocation_intervals(const SchottkySurface& s, double margin) {
    // hull of the limit set inside each disk: iterate I_b = hull of b(I_a), a != b^-1
    int L = s.letters();
    std::vector<Disk> iv = s.disks;
    for (int it = 0; it < 200; ++it) {
        std::vector<Disk> next(L);
        Real change = 0;
        for (int b = 0; b < L; ++b) {
            RealMatrix g = s.letter_matrix(static_cast<Letter>(b));
            Real lo = 1e300L, hi = -1e300L;
            for (int a = 0; a < L; ++a) {
                if (a == (b ^ 1)) continue;
                Real p = apply(g, iv[a].left()), q = apply(g, iv[a].right());
                lo = std::min({lo, p, q});
                hi = std::max({hi, p, q});
            }
            next[b] = Disk{(lo + hi) / 2, (hi - lo) / 2};
            change = std::max(change, std::fabs(next[b].radius - iv[b].radius) / s.disks[b].radius);
        }
        iv = next;
        if (change < 1e-15L) break;
    }
    // widen by a fraction of the gap to the Schottky disk boundary
    for (int b = 0; b < L; ++b) {
        const Disk& d = s.disks[b];
        Real lo = iv[b].left() - margin * (iv[b].left() - d.left());
        Real hi = iv[b].right() + margin * (d.right() - iv[b].right());
        iv[b] = Disk{(lo + hi) / 2, (hi - lo) / 2};
    }
    return iv;
}

struct ZetaEvaluator::Classes {
    struct Entry {
        double length;
        int word_length;
        std::vector<int> cycles;
    };
    std::vector<Entry> entries;
    int max_len = 0;

    Classes(const SchottkySurface& s, const PermutationAction& rho, int depth) : max_len(depth) {
        walk_reduced_words(s, depth, [&](const Word& w, const RealMatrix& m) {
            if (is_cyclically_reduced(w) && is_lyndon(w)) {
                Entry e;
                e.length = static_cast<double>(length_from_trace(std::fabs(m.trace())));
                e.word_length = static_cast<int>(w.size());
                e.cycles = rho.cycle_lengths(w);
                entries.push_back(std::move(e));
            }
            return true;
        });
    }
};

// sup-derivative data for the rigorous Euler tail
struct ZetaEvaluator::Tail {
    int block = 0;
    int letters = 0;
    double cx = 0;
    // sups[r - 1][u * letters + a] = sup over D_a of |g_u'|, 0 if a is not admissible
    std::vector<std::vector<double>> sups;

    Tail(const SchottkySurface& s, int block_len) : block(block_len), letters(s.letters()) {
        cx = static_cast<double>(word_length_constant(s));
        sups.resize(block);
        walk_reduced_words(s, block, [&](const Word& w, const RealMatrix& m) {
            auto& v = sups[w.size() - 1];
            for (int a = 0; a < letters; ++a)
                v.push_back(a == (w.back() ^ 1) ? 0.0 : static_cast<double>(sup_derivative(m, s.disks[a])));
            return true;
        });
    }

    // theta: max_a sum_u sup^sigma; theta_bar: sum_u max_a sup^sigma
    void thetas(double sigma, int r, double& theta, double& theta_bar) const {
        const auto& v = sups[r - 1];
        std::vector<double> col(letters, 0.0);
        theta_bar = 0;
        for (std::size_t u = 0; u < v.size() / letters; ++u) {
            double mx = 0;
            for (int a = 0; a < letters; ++a) {
                double x = v[u * letters + a];
                if (x == 0) continue;
                double p = std::pow(x, sigma);
                col[a] += p;
                mx = std::max(mx, p);
            }
            theta_bar += mx;
        }
        theta = *std::max_element(col.begin(), col.end());
    }

    // bound on |log Z - log Z_N|
    double log_tail(double sigma, int N, int degree) const {
        if (!(sigma > 0)) throw DomainError("euler tail bound needs Re(s) > 0");
        std::vector<double> tb(block + 1), th(block + 1);
        for (int r = 1; r <= block; ++r) thetas(sigma, r, th[r], tb[r]);
        double theta = th[block];
        if (!(theta < 1))
            throw DomainError("euler product tail is not controlled at Re(s) = " + std::to_string(sigma) +
                              " (block sum " + std::to_string(theta) + " >= 1)");
        auto term = [&](int n) {
            int q1 = (n - 1) / block;
            int r = n - q1 * block;
            return degree / static_cast<double>(n) / (1 - std::exp(-n * cx)) * std::pow(theta, q1) * tb[r];
        };
        double sum = 0, last_period = 0;
        int n = N + 1;
        for (; n <= N + 40 * block; ++n) {
            double t = term(n);
            sum += t;
            if (n > N + 39 * block) last_period += t;
        }
        return sum + last_period * theta / (1 - theta);
    }
};

struct ZetaEvaluator::Fredholm {
    int M = 0;
    int L = 0;
    int m = 1;
    struct Block {
        int a, b;
        std::vector<double> logw;
        Eigen::MatrixXd lag;
        std::vector<double> rep;  // m x m image of the inverse letter
    };
    std::vector<Block> blocks;

    Fredholm(const SchottkySurface& s, const OrthogonalAction& rho, int nodes) : M(nodes), L(s.letters()) {
        if (M < 2) throw DomainError("fredholm mode needs at least 2 nodes per disk");
        if (rho.rank() != s.rank()) throw DomainError("representation rank differs from the surface rank");
        m = rho.dim();
        std::vector<double> t(M), bw(M);
        for (int q = 0; q < M; ++q) {
            double th = std::numbers::pi * (2 * q + 1) / (2.0 * M);
            t[q] = std::cos(th);
            bw[q] = ((q % 2) ? -1.0 : 1.0) * std::sin(th);
        }
        std::vector<Disk> iv = collocation_intervals(s);
        for (int a = 0; a < L; ++a) {
            const Disk& da = iv[a];
            for (int b = 0; b < L; ++b) {
                if (b == (a ^ 1)) continue;
                RealMatrix g = s.letter_matrix(static_cast<Letter>(b));
                const Disk& db = iv[b];
                Block blk{a, b, std::vector<double>(M), Eigen::MatrixXd::Zero(M, M), rho.letter(static_cast<Letter>(b ^ 1))};
                for (int p = 0; p < M; ++p) {
                    Real x = da.center + da.radius * t[p];
                    Real den = g.c * x + g.d;
                    blk.logw[p] = static_cast<double>(-2 * std::log(std::fabs(den)));
                    double u = static_cast<double>((apply(g, x) - db.center) / db.radius);
                    int hit = -1;
                    double denom = 0;
                    for (int q = 0; q < M; ++q) {
                        if (u == t[q]) {
                            hit = q;
                            break;
                        }
                        denom += bw[q] / (u - t[q]);
                    }
                    for (int q = 0; q < M; ++q)
                        blk.lag(p, q) = hit >= 0 ? (q == hit ? 1.0 : 0.0) : bw[q] / (u - t[q]) / denom;
                }
                blocks.push_back(std::move(blk));
            }
        }
    }

    Complex det(Complex s) const {
        const int n = L * M * m;
        Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(n, n);
        for (const auto& blk : blocks) {
            for (int p = 0; p < M; ++p) {
                Complex f = std::exp(s * blk.logw[p]);
                for (int q = 0; q < M; ++q) {
                    Complex v = f * blk.lag(p, q);
                    if (m == 1) {
                        A(blk.a * M + p, blk.b * M + q) -= v * blk.rep[0];
                    } else {
                        for (int i = 0; i < m; ++i)
                            for (int j = 0; j < m; ++j) {
                                double r = blk.rep[i * m + j];
                                if (r != 0) A((blk.a * M + p) * m + i, (blk.b * M + q) * m + j) -= v * r;
                            }
                    }
                }
            }
        }
        Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
        return lu.determinant();
    }
};

ZetaEvaluator::ZetaEvaluator(const SchottkySurface& s, ZetaMode mode, int depth, const PermutationAction* rho)
    : surface_(s), mode_(mode), depth_(depth) {
    if (depth < 1) throw DomainError("zeta depth must be positive");
    PermutationAction act = action_or_trivial(s, rho);
    degree_ = act.degree();
    switch (mode) {
    case ZetaMode::cycle:
        if (reduced_word_count(s.rank(), depth) > 60'000'000ULL)
            throw ResourceError("cycle expansion depth too large");
        classes_ = std::make_unique<Classes>(s, act, depth);
        break;
    case ZetaMode::euler:
        if (reduced_word_count(s.rank(), depth) > 60'000'000ULL)
            throw ResourceError("euler product depth too large");
        classes_ = std::make_unique<Classes>(s, act, depth);
        {
            int block = 1;
            while (block < 10 && reduced_word_count(s.rank(), block + 1) <= 60000) ++block;
            tail_ = std::make_unique<Tail>(s, block);
        }
        break;
    case ZetaMode::fredholm: {
        OrthogonalAction rep = OrthogonalAction::from_permutation(act);
        fred_ = std::make_unique<Fredholm>(s, rep, depth);
        fred_coarse_ = std::make_unique<Fredholm>(s, rep, std::max(2, (3 * depth + 3) / 4));
        break;
    }
    }
}

ZetaEvaluator::ZetaEvaluator(const SchottkySurface& s, int nodes, const OrthogonalAction& rho)
    : surface_(s), mode_(ZetaMode::fredholm), depth_(nodes), degree_(rho.dim()) {
    if (nodes < 1) throw DomainError("zeta depth must be positive");
    fred_ = std::make_unique<Fredholm>(s, rho, nodes);
    fred_coarse_ = std::make_unique<Fredholm>(s, rho, std::max(2, (3 * nodes + 3) / 4));
}

ZetaEvaluator::~ZetaEvaluator() = default;
ZetaEvaluator::ZetaEvaluator(ZetaEvaluator&&) noexcept = default;
ZetaEvaluator& ZetaEvaluator::operator=(ZetaEvaluator&&) noexcept = default;

int ZetaEvaluator::topological_multiplicity(int k) const {
    if (k < 0) return 0;
    return (2 * k + 1) * degree_ * std::abs(surface_.euler_characteristic());
}

Complex ZetaEvaluator::operator()(Complex s) const {
    switch (mode_) {
    case ZetaMode::fredholm: return fred_->det(s);
    case ZetaMode::cycle: return eval_cycle(s).value;
    case ZetaMode::euler: {
        // value only; skip the tail bound
        Complex logz = 0;
        for (const auto& e : classes_->entries)
            for (int o : e.cycles) {
                double ol = o * e.length;
                for (int k = 0;; ++k) {
                    Complex x = std::exp(-(s + double(k)) * ol);
                    logz += log1m(x);
                    if (std::abs(x) < 1e-18) break;
                }
            }
        return std::exp(logz);
    }
    }
    return 0;
}

ZetaValue ZetaEvaluator::eval_cycle(Complex s) const {
    int N = depth_;
    std::vector<Complex> tau(N + 1, 0.0);
    for (const auto& e : classes_->entries) {
        for (int mlt = 1; mlt * e.word_length <= N; ++mlt) {
            int chi = 0;
            for (int o : e.cycles)
                if (mlt % o == 0) chi += o;
            if (!chi) continue;
            double l = mlt * e.length;
            tau[mlt * e.word_length] += double(e.word_length * chi) * std::exp(-s * l) / (1 - std::exp(-l));
        }
    }
    std::vector<Complex> d(N + 1, 0.0);
    d[0] = 1;
    Complex z = 1;
    for (int n = 1; n <= N; ++n) {
        Complex acc = 0;
        for (int k = 1; k <= n; ++k) acc += tau[k] * d[n - k];
        d[n] = -acc / double(n);
        z += d[n];
    }
    return {z, std::abs(d[N]), ZetaMode::cycle, N};
}

ZetaValue ZetaEvaluator::eval_euler(Complex s) const {
    Complex logz = 0;
    double kbound = 0;
    for (const auto& e : classes_->entries)
        for (int o : e.cycles) {
            double ol = o * e.length;
            for (int k = 0;; ++k) {
                Complex x = std::exp(-(s + double(k)) * ol);
                logz += log1m(x);
                if (std::abs(x) < 1e-18) {
                    // remaining k-factors: sum |log(1 - x e^{-j ol})| <= 2|x| / (1 - e^{-ol})
                    kbound += 2 * std::abs(x) * std::exp(-ol) / (1 - std::exp(-ol));
                    break;
                }
            }
        }
    double t = tail_->log_tail(s.real(), depth_, degree_) + kbound;
    Complex z = std::exp(logz);
    return {z, std::abs(z) * std::expm1(t), ZetaMode::euler, depth_};
}

ZetaValue ZetaEvaluator::evaluate(Complex s) const {
    switch (mode_) {
    case ZetaMode::cycle: return eval_cycle(s);
    case ZetaMode::euler: return eval_euler(s);
    case ZetaMode::fredholm: {
        Complex fine = fred_->det(s);
        Complex coarse = fred_coarse_->det(s);
        return {fine, std::abs(fine - coarse), ZetaMode::fredholm, depth_};
    }
    }
    return {};
}

ZetaValue zeta_euler(const SchottkySurface& s, Complex z, int depth, const PermutationAction* rho) {
    return ZetaEvaluator(s, ZetaMode::euler, depth, rho).evaluate(z);
}

ZetaValue zeta_cycle(const SchottkySurface& s, Complex z, int depth, const PermutationAction* rho) {
    return ZetaEvaluator(s, ZetaMode::cycle, depth, rho).evaluate(z);
}

ZetaValue zeta_fredholm(const SchottkySurface& s, Complex z, int nodes, const PermutationAction* rho) {
    return ZetaEvaluator(s, ZetaMode::fredholm, nodes, rho).evaluate(z);
}

int choose_fredholm_nodes(const SchottkySurface& s, const std::vector<Complex>& probes, double rel_tol,
                          const PermutationAction* rho, int max_nodes) {
    static const int ladder[] = {8, 12, 16, 24, 32, 40, 48, 64, 80, 96, 128, 160, 192, 256};
    std::vector<Complex> prev;
    int prev_m = 0;
    for (int m : ladder) {
        if (m > max_nodes) break;
        ZetaEvaluator z(s, ZetaMode::fredholm, m, rho);
        std::vector<Complex> cur;
        for (Complex p : probes) cur.push_back(z(p));
        if (!prev.empty()) {
            bool ok = true;
            for (std::size_t i = 0; i < cur.size(); ++i) {
                double scale = std::max(std::abs(cur[i]), std::abs(prev[i]));
                if (std::abs(cur[i] - prev[i]) > rel_tol * scale) ok = false;
            }
            if (ok) return prev_m;
        }
        prev = std::move(cur);
        prev_m = m;
    }
    throw PrecisionError("fredholm determinant did not settle below " + std::to_string(max_nodes) + " nodes");
}

DeltaEstimate delta_estimate(const ZetaEvaluator& z, double tol) {
    auto f = [&](double x) { return z(Complex(x, 0)).real(); };
    double hi = 1.0;
    double fhi = f(hi);
    const double step = 0.01;
    for (double lo = hi - step; lo > 1e-6; lo -= step) {
        double flo = f(lo);
        if ((flo < 0) != (fhi < 0)) {
            boost::uintmax_t iters = 200;
            auto r = boost::math::tools::toms748_solve(
                f, lo, hi, flo, fhi, [tol](double a, double b) { return std::fabs(b - a) <= tol; }, iters);
            return {(r.first + r.second) / 2, r.second - r.first};
        }
        hi = lo;
        fhi = flo;
    }
    throw DomainError("no real zero found in (0, 1)");
}

double delta_estimate(SchottkySurface& s, int nodes, double tol) {
    ZetaEvaluator z(s, ZetaMode::fredholm, nodes);
    double d = delta_estimate(z, tol).delta;
    s.delta = d;
    return d;
}

}  // namespace rlab
