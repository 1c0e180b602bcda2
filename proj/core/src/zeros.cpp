#include "rlab/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include "rlab/errors.hpp"

namespace rlab {

Box Box::parse(const std::string& text) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ':')) {
        try {
            std::size_t used = 0;
            v.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw DomainError("bad box component '" + item + "'");
        }
    }
    if (v.size() != 4) throw DomainError("box needs re_min:re_max:im_min:im_max");
    Box b{v[0], v[1], v[2], v[3]};
    if (!(b.re_min < b.re_max && b.im_min < b.im_max)) throw DomainError("box is empty");
    return b;
}

std::string Box::str() const {
    std::ostringstream os;
    os.precision(17);
    os << re_min << ":" << re_max << ":" << im_min << ":" << im_max;
    return os.str();
}

bool Box::contains(Complex z, double pad) const {
    return z.real() >= re_min - pad && z.real() <= re_max + pad && z.imag() >= im_min - pad &&
           z.imag() <= im_max + pad;
}

Complex CachedFn::operator()(Complex z) {
    auto key = std::make_pair(z.real(), z.imag());
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    ++evals_;
    Complex v = f_(z);
    cache_.emplace(key, v);
    return v;
}

namespace {

struct EdgeWalker {
    CachedFn& f;
    double max_step;
    double min_len;
    int edge;

    double segment(Complex za, Complex fa, Complex zb, Complex fb) {
        if (fb == 0.0 || fa == 0.0) throw NearEdge("zero on the contour", edge);
        double d = std::arg(fb / fa);
        // relative change bounded so the phase cannot wrap between samples
        if (std::fabs(d) <= max_step && std::abs(fb - fa) <= 0.5 * std::min(std::abs(fa), std::abs(fb))) return d;
        if (std::abs(zb - za) < min_len) throw NearEdge("contour passes too close to a zero", edge);
        Complex zm = (za + zb) / 2.0;
        Complex fm = f(zm);
        return segment(za, fa, zm, fm) + segment(zm, fm, zb, fb);
    }
};

// lattice samples of [a, b] with spacing h, endpoints included, in walking order
std::vector<double> lattice(double a, double b, double h) {
    std::vector<double> v{a};
    double lo = std::min(a, b), hi = std::max(a, b);
    long k0 = static_cast<long>(std::floor(lo / h)) + 1, k1 = static_cast<long>(std::ceil(hi / h)) - 1;
    for (long k = k0; k <= k1; ++k) {
        double x = k * h;
        if (x > lo && x < hi) v.push_back(x);
    }
    if (a > b) std::sort(v.begin() + 1, v.end(), std::greater<double>());
    else std::sort(v.begin() + 1, v.end());
    v.push_back(b);
    return v;
}

}  // namespace

int winding_number(CachedFn& f, const Box& b, double spacing, double max_phase_step) {
    double scale = std::max({b.width(), b.height(), 1.0});
    double total = 0;
    for (int e = 0; e < 4; ++e) {
        EdgeWalker walk{f, max_phase_step, 1e-8 * scale, e};
        std::vector<Complex> pts;
        switch (e) {
        case 0:
            for (double x : lattice(b.re_min, b.re_max, spacing)) pts.emplace_back(x, b.im_min);
            break;
        case 1:
            for (double y : lattice(b.im_min, b.im_max, spacing)) pts.emplace_back(b.re_max, y);
            break;
        case 2:
            for (double x : lattice(b.re_max, b.re_min, spacing)) pts.emplace_back(x, b.im_max);
            break;
        case 3:
            for (double y : lattice(b.im_max, b.im_min, spacing)) pts.emplace_back(b.re_min, y);
            break;
        }
        Complex zp = pts[0], fp = f(zp);
        for (std::size_t i = 1; i < pts.size(); ++i) {
            Complex fz = f(pts[i]);
            total += walk.segment(zp, fp, pts[i], fz);
            zp = pts[i];
            fp = fz;
        }
    }
    double w = total / (2 * std::numbers::pi);
    long r = std::lround(w);
    if (std::fabs(w - r) > 0.05) throw PrecisionError("winding number is not close to an integer");
    return static_cast<int>(r);
}

namespace {

struct Search {
    CachedFn& f;
    const ZeroSearchOptions& opt;
    std::vector<Zero> out;

    double spacing_for(const Box& b) const {
        double s = opt.spacing;
        while (s > std::min(b.width(), b.height()) / 4) s /= 2;
        return s;
    }

    // level > 0 refines the edge lattice by 5^level
    int wind(const Box& b, int level = 0) {
        return winding_number(f, b, spacing_for(b) / std::pow(5.0, level), opt.max_phase_step);
    }

    bool newton(Complex z0, const Box& b, Complex& root, double& err, int mult = 1) {
        Complex z = z0;
        double pad = 0.25 * std::max(b.width(), b.height());
        double last = 1e300;
        for (int it = 0; it < 60; ++it) {
            double h = 1e-6 * (1 + std::abs(z));
            Complex fz = f(z);
            if (fz == 0.0) {
                last = 0;
                break;
            }
            Complex d = (f(z + h) - f(z - h)) / (2 * h);
            if (d == 0.0) return false;
            Complex step = double(mult) * fz / d;
            z -= step;
            if (!b.contains(z, pad)) return false;
            double a = std::abs(step);
            // converged, or stalled at the noise floor of f
            if (a < opt.tol || (a < 1e3 * opt.tol && a >= 0.5 * last)) {
                last = a;
                break;
            }
            last = a;
            if (it == 59) return false;
        }
        root = z;
        err = std::max(last, opt.tol);
        return b.contains(z, 1e-12 * (1 + std::abs(z)));
    }

    bool try_hint(const Box& b, int w) {
        std::vector<std::pair<Complex, int>> inside;
        for (const auto& h : opt.hints)
            if (b.contains(h.first)) inside.push_back(h);
        if (inside.size() != 1 || inside[0].second != w) return false;
        Complex c = inside[0].first;
        double r = std::min({c.real() - b.re_min, b.re_max - c.real(), c.imag() - b.im_min, b.im_max - c.imag()});
        if (r <= 0) return false;
        r = std::min(r / 2, 1e-3);
        Box small{c.real() - r, c.real() + r, c.imag() - r, c.imag() + r};
        int ws;
        try {
            ws = winding_number(f, small, r / 4, opt.max_phase_step);
        } catch (const NearEdge&) {
            return false;
        }
        if (ws != w) return false;
        out.push_back({c, w, 0.0});
        return true;
    }

    // w zeros at one point: Newton for a zero of multiplicity w, confirmed by
    // the winding number of a small box around the limit
    bool try_cluster(const Box& b, int w) {
        Complex root;
        double err;
        Complex c((b.re_min + b.re_max) / 2, (b.im_min + b.im_max) / 2);
        if (!newton(c, b, root, err, w)) return false;
        double r = std::max(1e3 * err, 1e-7 * (1 + std::abs(root)));
        Box small{root.real() - r, root.real() + r, root.imag() - r, root.imag() + r};
        if (!(b.contains({small.re_min, small.im_min}) && b.contains({small.re_max, small.im_max}))) return false;
        try {
            if (winding_number(f, small, r / 2, opt.max_phase_step) != w) return false;
        } catch (const PrecisionError&) {
            return false;
        }
        out.push_back({root, w, r});
        return true;
    }

    void solve(const Box& b, int w, int depth, int level = 0) {
        if (w == 0) return;
        if (w < 0) throw PrecisionError("negative winding number");
        if (try_hint(b, w)) return;
        if (w == 1) {
            Complex root;
            double err;
            Complex c((b.re_min + b.re_max) / 2, (b.im_min + b.im_max) / 2);
            if (newton(c, b, root, err)) {
                out.push_back({root, 1, err});
                return;
            }
        }
        double size = std::max(b.width(), b.height());
        if (w >= 2 && size < 0.05 && try_cluster(b, w)) return;
        if (size < opt.cluster_size || depth > 60) {
            Complex c((b.re_min + b.re_max) / 2, (b.im_min + b.im_max) / 2);
            out.push_back({c, w, std::hypot(b.width(), b.height()) / 2});
            return;
        }
        static const double fractions[] = {0.5, 0.46, 0.54, 0.41, 0.59, 0.35, 0.65, 0.3, 0.7};
        bool horizontal = b.width() >= b.height();
        for (double t : fractions) {
            Box b1 = b, b2 = b;
            if (horizontal) {
                double x = b.re_min + t * b.width();
                b1.re_max = x;
                b2.re_min = x;
            } else {
                double y = b.im_min + t * b.height();
                b1.im_max = y;
                b2.im_min = y;
            }
            // a close zero pair straddling an edge can hide between lattice
            // points; disagreement triggers a recount on finer lattices
            for (int lv = level; lv <= level + 2; ++lv) {
                int wp = w, w1, w2;
                try {
                    if (lv > level) wp = wind(b, lv);
                    w1 = wind(b1, lv);
                    w2 = wind(b2, lv);
                } catch (const PrecisionError&) {
                    break;
                }
                if (w1 + w2 != wp) continue;
                if (wp == 0) return;
                solve(b1, w1, depth + 1, lv);
                solve(b2, w2, depth + 1, lv);
                return;
            }
        }
        throw UnresolvedCluster("could not split box " + b.str() + " consistently");
    }
};

}  // namespace

std::vector<Zero> find_zeros(CachedFn& f, const Box& b, const ZeroSearchOptions& opt) {
    Search s{f, opt, {}};
    int w = s.wind(b);
    s.solve(b, w, 0);
    std::sort(s.out.begin(), s.out.end(), [](const Zero& x, const Zero& y) {
        return x.s.imag() != y.s.imag() ? x.s.imag() < y.s.imag() : x.s.real() < y.s.real();
    });
    return s.out;
}

int ResonanceSet::count() const {
    int n = 0;
    for (const auto& z : resonances) n += z.multiplicity;
    return n;
}

std::vector<Zero> ResonanceSet::in_box(const Box& b, double pad) const {
    std::vector<Zero> v;
    for (const auto& z : resonances)
        if (b.contains(z.s, pad)) v.push_back(z);
    return v;
}

double ResonanceSet::leading_real() const {
    double best = -1e300;
    for (const auto& z : resonances)
        if (z.s.imag() == 0) best = std::max(best, z.s.real());
    if (best == -1e300) throw DomainError("no real resonance in the set");
    return best;
}

namespace {

Box search_region(const Box& box, double pad) {
    double top = std::max(std::fabs(box.im_min), std::fabs(box.im_max));
    return {box.re_min, box.re_max, -pad, top};
}

// widen the edge that meets a zero until the winding is well defined
Box settle_box(CachedFn& f, Box b, double spacing, double max_step, double pad, int& w) {
    for (int attempt = 0; attempt < 12; ++attempt) {
        try {
            w = winding_number(f, b, spacing, max_step);
            return b;
        } catch (const NearEdge& e) {
            double d = pad * std::pow(2.0, attempt);
            switch (e.edge) {
            case 0: b.im_min -= d; break;
            case 1: b.re_max += d; break;
            case 2: b.im_max += d; break;
            case 3: b.re_min -= d; break;
            }
        }
    }
    throw PrecisionError("could not place the box boundary away from zeros");
}

}  // namespace

ResonanceSet zeros_in_box(const ZetaEvaluator& z, const Box& box, ZeroSearchOptions opt) {
    ResonanceSet rs;
    rs.box = {box.re_min, box.re_max, -std::max(std::fabs(box.im_min), std::fabs(box.im_max)),
              std::max(std::fabs(box.im_min), std::fabs(box.im_max))};
    rs.tolerance = opt.tol;
    rs.euler_characteristic = z.surface().euler_characteristic();
    rs.degree = z.degree();
    rs.zeta_mode = to_string(z.mode());
    rs.zeta_depth = z.depth();

    CachedFn f([&z](Complex s) { return z(s); });
    Box u = search_region(box, opt.edge_pad);
    int w = 0;
    u = settle_box(f, u, opt.spacing, opt.max_phase_step, opt.edge_pad, w);
    rs.search_box = u;

    for (int k = 0; -k >= u.re_min; ++k)
        if (-k <= u.re_max) opt.hints.emplace_back(Complex(-k, 0), z.topological_multiplicity(k));

    Search s{f, opt, {}};
    s.solve(u, w, 0);
    rs.search_count = 0;
    for (const auto& zz : s.out) rs.search_count += zz.multiplicity;

    // real axis snapping and conjugate completion
    double snap = std::max(1e3 * opt.tol, 1e-8);
    std::vector<Zero> all;
    for (auto zz : s.out) {
        // a cluster can sit on the axis to within its own error only
        if (std::fabs(zz.s.imag()) <= std::max(snap, zz.error)) {
            zz.s = Complex(zz.s.real(), 0);
            all.push_back(zz);
        } else if (zz.s.imag() > 0) {
            all.push_back(zz);
            all.push_back({std::conj(zz.s), zz.multiplicity, zz.error});
        }
    }
    // topological zeros
    for (int k = 0; -k >= u.re_min; ++k) {
        if (-k > u.re_max) continue;
        TopologicalEntry te;
        te.k = k;
        te.expected = z.topological_multiplicity(k);
        auto at_k = [k](const Zero& zz) {
            return zz.s.imag() == 0 && std::fabs(zz.s.real() + k) <= std::max(1e-6, zz.error);
        };
        for (auto& zz : all)
            if (at_k(zz)) te.found += zz.multiplicity;
        int left = te.found - te.expected;
        if (left < 0) te.note = "fewer zeros than the topological multiplicity";
        if (left > 0) te.note = "resonance coincides with the topological zero";
        // strip the expected multiplicity, keep any excess as resonances
        int strip = std::min(te.found, te.expected);
        for (auto& zz : all) {
            if (strip == 0) break;
            if (at_k(zz)) {
                int t = std::min(strip, zz.multiplicity);
                zz.multiplicity -= t;
                strip -= t;
            }
        }
        rs.topological.push_back(te);
    }
    for (auto& zz : all)
        if (zz.multiplicity > 0) rs.resonances.push_back(zz);
    std::sort(rs.resonances.begin(), rs.resonances.end(), [](const Zero& x, const Zero& y) {
        return x.s.imag() != y.s.imag() ? x.s.imag() < y.s.imag() : x.s.real() < y.s.real();
    });
    rs.evaluations = f.evaluations();
    return rs;
}

int winding_oracle(const ZetaEvaluator& z, const Box& search_box, double spacing) {
    CachedFn f([&z](Complex s) { return z(s); });
    return winding_number(f, search_box, spacing, 0.35);
}

}  // namespace rlab
