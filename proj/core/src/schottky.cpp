#include "rlab/schottky.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "rlab/errors.hpp"

namespace rlab {

Word inverse_word(const Word& w) {
    Word r(w.rbegin(), w.rend());
    for (auto& x : r) x = inverse_letter(x);
    return r;
}

std::string word_to_string(const Word& w) {
    std::string s;
    for (Letter x : w) {
        char base = (x & 1) ? 'A' : 'a';
        s.push_back(static_cast<char>(base + x / 2));
    }
    return s;
}

Word word_from_string(const std::string& s, int rank) {
    Word w;
    for (char ch : s) {
        int i;
        bool inv;
        if (ch >= 'a' && ch <= 'z') {
            i = ch - 'a';
            inv = false;
        } else if (ch >= 'A' && ch <= 'Z') {
            i = ch - 'A';
            inv = true;
        } else {
            throw DomainError(std::string("bad letter '") + ch + "' in word");
        }
        if (i >= rank) throw DomainError("word uses generator beyond the rank");
        w.push_back(static_cast<Letter>(2 * i + (inv ? 1 : 0)));
    }
    return w;
}

double SchottkySurface::vol0() const { return 2 * std::numbers::pi * std::abs(euler_characteristic()); }

RealMatrix SchottkySurface::letter_matrix(Letter x) const {
    const RealMatrix& g = generators.at(x / 2);
    return (x & 1) ? inverse(g) : g;
}

RealMatrix SchottkySurface::word_matrix(const Word& w) const {
    RealMatrix m;
    for (Letter x : w) m = m * letter_matrix(x);
    return m;
}

std::optional<IntMatrix> SchottkySurface::int_word_matrix(const Word& w) const {
    if (!integer_generators) return std::nullopt;
    IntMatrix m;
    for (Letter x : w) {
        const IntMatrix& g = (*integer_generators)[x / 2];
        m = m * ((x & 1) ? inverse(g) : g);
    }
    return m;
}

ValidationReport validate(const SchottkySurface& s) {
    ValidationReport rep;
    auto fail = [&](std::string msg) {
        rep.ok = false;
        rep.failures.push_back(std::move(msg));
    };
    int r = s.rank();
    if (r < 1) fail("surface has no generators");
    if (static_cast<int>(s.disks.size()) != 2 * r) {
        fail("expected " + std::to_string(2 * r) + " disks, got " + std::to_string(s.disks.size()));
        return rep;
    }
    if (s.precision_bits < 64) fail("precision below 64 bits");
    for (int i = 0; i < r; ++i) {
        const RealMatrix& g = s.generators[i];
        std::string tag = "generator " + std::to_string(i + 1);
        Real scale = std::max({std::fabs(g.a), std::fabs(g.b), std::fabs(g.c), std::fabs(g.d), Real(1)});
        if (std::fabs(g.det() - 1) > 1e-15L * scale * scale) fail(tag + ": determinant is not 1");
        if (classify(g) != ElementClass::hyperbolic) fail(tag + ": not hyperbolic");
    }
    if (s.integer_generators) {
        for (int i = 0; i < static_cast<int>(s.integer_generators->size()); ++i)
            if ((*s.integer_generators)[i].det() != 1)
                fail("integer generator " + std::to_string(i + 1) + ": determinant is not 1");
    }
    for (int x = 0; x < 2 * r; ++x)
        if (!(s.disks[x].radius > 0)) fail("disk " + std::to_string(x) + " has non-positive radius");
    if (!rep.ok) return rep;

    std::vector<int> order(2 * r);
    for (int x = 0; x < 2 * r; ++x) order[x] = x;
    std::sort(order.begin(), order.end(), [&](int p, int q) { return s.disks[p].left() < s.disks[q].left(); });
    rep.min_gap = 1e300;
    for (int k = 0; k + 1 < 2 * r; ++k) {
        Real gap = s.disks[order[k + 1]].left() - s.disks[order[k]].right();
        rep.min_gap = std::min(rep.min_gap, static_cast<double>(gap));
        if (!(gap > 0)) fail("disks " + std::to_string(order[k]) + " and " + std::to_string(order[k + 1]) + " overlap");
    }

    for (int i = 0; i < r; ++i) {
        const RealMatrix& g = s.generators[i];
        const Disk& src = s.disks[2 * i + 1];
        const Disk& dst = s.disks[2 * i];
        std::string tag = "generator " + std::to_string(i + 1);
        if (g.c == 0) {
            fail(tag + ": fixes infinity, cannot map an exterior into a bounded disk");
            continue;
        }
        Real tol = 1e-12L * (1 + std::fabs(dst.center) + dst.radius);
        Real p = apply(g, src.left()), q = apply(g, src.right());
        if (p > q) std::swap(p, q);
        if (std::fabs(p - dst.left()) > tol || std::fabs(q - dst.right()) > tol)
            fail(tag + ": boundary circle is not mapped onto its partner");
        if (!dst.contains(g.a / g.c)) fail(tag + ": exterior is not mapped into the partner disk");
    }
    return rep;
}

void require_valid(const SchottkySurface& s) {
    ValidationReport rep = validate(s);
    if (rep.ok) return;
    std::ostringstream os;
    os << "invalid Schottky data";
    for (const auto& f : rep.failures) os << "; " << f;
    throw ValidationError(os.str());
}

SchottkySurface three_funnel(Real l1, Real l2, Real l3) {
    if (!(l1 > 0 && l2 > 0 && l3 > 0)) throw DomainError("funnel lengths must be positive");
    Real c1 = std::cosh(l1 / 2), s1 = std::sinh(l1 / 2);
    Real c2 = std::cosh(l2 / 2), s2 = std::sinh(l2 / 2);
    Real c3 = std::cosh(l3 / 2);
    // a + 1/a = k makes tr(g1 g2) = -2 cosh(l3/2)
    Real k = 2 * (c1 * c2 + c3) / (s1 * s2);
    Real a = (k + std::sqrt(k * k - 4)) / 2;
    if (!(a * std::tanh(l2 / 4) > 1 / std::tanh(l1 / 4)))
        throw ConstructionError("funnel lengths give overlapping disks in the symmetric normalisation");

    SchottkySurface s;
    std::ostringstream name;
    name << "three_funnel(" << static_cast<double>(l1) << "," << static_cast<double>(l2) << ","
         << static_cast<double>(l3) << ")";
    s.name = name.str();
    s.generators = {RealMatrix{c1, s1, s1, c1}, RealMatrix{c2, -a * s2, -s2 / a, c2}};
    s.disks = {Disk{c1 / s1, 1 / s1}, Disk{-c1 / s1, 1 / s1},
               Disk{-a * c2 / s2, a / s2}, Disk{a * c2 / s2, a / s2}};
    require_valid(s);
    return s;
}

SchottkySurface integer_schottky(std::string name, std::vector<IntMatrix> gens) {
    SchottkySurface s;
    s.name = std::move(name);
    for (const auto& g : gens) {
        if (g.det() != 1) throw ValidationError("integer generator does not have determinant 1");
        if (g.c == 0) throw ValidationError("integer generator fixes infinity");
        RealMatrix m = to_real(g);
        s.generators.push_back(m);
        Real rad = 1 / std::fabs(m.c);
        s.disks.push_back(Disk{m.a / m.c, rad});
        s.disks.push_back(Disk{-m.d / m.c, rad});
    }
    s.integer_generators = std::move(gens);
    require_valid(s);
    return s;
}

SchottkySurface bundled_integer_surface() {
    return integer_schottky("integer(6,-1,1,0;11,-34,1,-3)",
                            {make_int_matrix(6, -1, 1, 0), make_int_matrix(11, -34, 1, -3)});
}

Real sup_derivative(const RealMatrix& g, const Disk& a) {
    if (g.c == 0) return 1 / (g.d * g.d);
    Real dist = a.distance_to(-g.d / g.c);
    if (!(dist > 0)) throw DomainError("pole inside the disk");
    Real w = std::fabs(g.c) * dist;
    return 1 / (w * w);
}

Real word_length_constant(const SchottkySurface& s) {
    Real best = 1e300L;
    for (int b = 0; b < s.letters(); ++b) {
        RealMatrix g = s.letter_matrix(static_cast<Letter>(b));
        for (int a = 0; a < s.letters(); ++a) {
            if (a == (b ^ 1)) continue;
            best = std::min(best, -std::log(sup_derivative(g, s.disks[a])));
        }
    }
    return best;
}

}  // namespace rlab
