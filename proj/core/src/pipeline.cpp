#include "rlab/pipeline.hpp"

#include <algorithm>

#include "rlab/errors.hpp"

namespace rlab {

std::vector<Complex> box_probes(const Box& b) {
    // the lower corners sit off the real axis, away from topological zeros
    double rm = (b.re_min + b.re_max) / 2, im = (b.im_min + b.im_max) / 2, lo = b.im_min + 0.3 * b.height();
    return {{b.re_min, lo}, {b.re_min, b.im_max}, {b.re_max, lo}, {b.re_max, b.im_max}, {rm, b.im_max}, {b.re_min, im}};
}

int nodes_for_box(const SchottkySurface& s, const Box& box, double rel_tol, const PermutationAction* rho,
                  int max_nodes) {
    return choose_fredholm_nodes(s, box_probes(box), rel_tol, rho, max_nodes);
}

ResonanceSet compute_resonances(const SchottkySurface& s, const Box& box, double tol, const PermutationAction* rho,
                                int nodes) {
    if (nodes <= 0) nodes = nodes_for_box(s, box, 1e-10, rho);
    ZetaEvaluator z(s, ZetaMode::fredholm, nodes, rho);
    ZeroSearchOptions opt;
    opt.tol = tol;
    return zeros_in_box(z, box, opt);
}

namespace {

int nodes_for_factor(const SchottkySurface& s, const OrthogonalAction& rho, const Box& box, double rel_tol) {
    static const int ladder[] = {8, 12, 16, 24, 32, 40, 48, 64, 80, 96, 128, 160, 192};
    std::vector<Complex> probes = box_probes(box), prev;
    int prev_m = 0;
    for (int m : ladder) {
        ZetaEvaluator z(s, m, rho);
        std::vector<Complex> cur;
        for (Complex p : probes) cur.push_back(z(p));
        if (!prev.empty()) {
            bool ok = true;
            for (std::size_t i = 0; i < cur.size(); ++i)
                if (std::abs(cur[i] - prev[i]) > rel_tol * std::max(std::abs(cur[i]), std::abs(prev[i]))) ok = false;
            if (ok) return prev_m;
        }
        prev = std::move(cur);
        prev_m = m;
    }
    throw PrecisionError("twisted fredholm determinant did not settle below 192 nodes");
}

}  // namespace

ResonanceSet factored_resonances(const SchottkySurface& s, const std::vector<OrthogonalAction>& factors, const Box& box,
                                 double tol) {
    if (factors.empty()) throw DomainError("no factors given");
    ResonanceSet out;
    bool first = true;
    for (const auto& rho : factors) {
        ZetaEvaluator z(s, nodes_for_factor(s, rho, box, 1e-10), rho);
        ZeroSearchOptions opt;
        opt.tol = tol;
        ResonanceSet part = zeros_in_box(z, box, opt);
        if (first) {
            out = part;
            first = false;
            continue;
        }
        out.degree += part.degree;
        out.search_count += part.search_count;
        out.evaluations += part.evaluations;
        out.zeta_depth = std::max(out.zeta_depth, part.zeta_depth);
        out.search_box.re_min = std::max(out.search_box.re_min, part.search_box.re_min);
        out.search_box.re_max = std::min(out.search_box.re_max, part.search_box.re_max);
        out.search_box.im_max = std::min(out.search_box.im_max, part.search_box.im_max);
        for (const auto& t : part.topological) {
            auto it = std::find_if(out.topological.begin(), out.topological.end(),
                                   [&](const TopologicalEntry& e) { return e.k == t.k; });
            if (it == out.topological.end()) {
                out.topological.push_back(t);
                continue;
            }
            it->expected += t.expected;
            it->found += t.found;
            if (it->note.empty()) it->note = t.note;
        }
        for (const auto& zz : part.resonances) {
            auto it = std::find_if(out.resonances.begin(), out.resonances.end(), [&](const Zero& e) {
                return std::abs(e.s - zz.s) <= std::max({10 * tol, e.error, zz.error});
            });
            if (it == out.resonances.end()) {
                out.resonances.push_back(zz);
            } else {
                it->multiplicity += zz.multiplicity;
                it->error = std::max(it->error, zz.error);
            }
        }
    }
    std::sort(out.resonances.begin(), out.resonances.end(), [](const Zero& x, const Zero& y) {
        return x.s.imag() != y.s.imag() ? x.s.imag() < y.s.imag() : x.s.real() < y.s.real();
    });
    return out;
}

ResonanceSet cover_resonances(const CongruenceContext& ctx, const Box& box, double tol, int max_degree) {
    if (!ctx.surjective) throw DomainError("cover resonances need a surjective reduction");
    if (ctx.elements.size() > static_cast<std::size_t>(max_degree))
        throw ResourceError("cover of degree " + std::to_string(ctx.elements.size()) + " exceeds the limit " +
                            std::to_string(max_degree));
    PermutationAction rho = ctx.regular_action();
    return compute_resonances(ctx.base, box, tol, &rho);
}

double auto_below_ell0(double ell0, double eta, double margin) {
    if (!(eta > 0 && eta < 1)) throw DomainError("eta must lie in (0, 1)");
    double L = (ell0 - margin) / (1 + eta);
    if (!(L > 0)) throw DomainError("ell0 is below the margin");
    return L;
}

std::vector<FamilyMember> bundled_family() {
    // cyclic covers with both generators acting as the same d-cycle
    std::vector<FamilyMember> out;
    for (int d : {3, 4, 5}) {
        std::vector<std::uint32_t> c(d);
        for (int i = 0; i < d; ++i) c[i] = static_cast<std::uint32_t>((i + 1) % d);
        out.push_back({"cyclic" + std::to_string(d), PermutationAction(d, {c, c}), cyclic_cover_factors(2, d)});
    }
    return out;
}

}  // namespace rlab
