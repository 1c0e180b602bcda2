#include "rlab/congruence.hpp"

#include <cmath>
#include <deque>

#include "rlab/errors.hpp"

namespace rlab {

namespace {

std::uint32_t mod_of(const BigInt& x, std::uint32_t n) {
    BigInt r = x % n;
    if (r < 0) r += n;
    return r.convert_to<std::uint32_t>();
}

}  // namespace

std::uint64_t ModMatrix::code() const {
    std::uint64_t m = n;
    return ((static_cast<std::uint64_t>(a) * m + b) * m + c) * m + d;
}

ModMatrix operator*(const ModMatrix& x, const ModMatrix& y) {
    std::uint64_t n = x.n;
    auto f = [n](std::uint64_t p, std::uint64_t q, std::uint64_t r, std::uint64_t s) {
        return static_cast<std::uint32_t>((p * q + r * s) % n);
    };
    return {f(x.a, y.a, x.b, y.c), f(x.a, y.b, x.b, y.d), f(x.c, y.a, x.d, y.c), f(x.c, y.b, x.d, y.d), x.n};
}

ModMatrix reduce_mod(const IntMatrix& m, std::uint32_t n) {
    if (n < 2) throw DomainError("modulus must be at least 2");
    return {mod_of(m.a, n), mod_of(m.b, n), mod_of(m.c, n), mod_of(m.d, n), n};
}

std::uint64_t group_order(std::uint32_t n) {
    if (n < 1) throw DomainError("modulus must be positive");
    std::uint64_t num = static_cast<std::uint64_t>(n) * n * n;
    std::uint32_t m = n;
    auto strip = [&](std::uint64_t p) {
        while (m % p == 0) m /= p;
        num = num / (p * p) * (p * p - 1);
    };
    for (std::uint32_t p = 2; p * p <= m; ++p)
        if (m % p == 0) strip(p);
    if (m > 1) strip(m);
    return num;
}

ModMatrix CongruenceContext::letter_image(Letter x) const {
    const IntMatrix& g = base.integer_generators->at(x / 2);
    return reduce_mod((x & 1) ? inverse(g) : g, n);
}

ModMatrix CongruenceContext::word_image(const Word& w) const {
    ModMatrix m = ModMatrix::identity(n);
    for (Letter x : w) m = m * letter_image(x);
    return m;
}

std::uint32_t CongruenceContext::element_order(const Word& w) const {
    ModMatrix g = word_image(w);
    ModMatrix p = g;
    std::uint32_t o = 1;
    while (!p.is_identity()) {
        p = p * g;
        if (++o > elements.size()) throw DomainError("element order exceeds the group size");
    }
    return o;
}

PermutationAction CongruenceContext::regular_action() const {
    std::vector<std::vector<std::uint32_t>> gens;
    std::uint32_t m = static_cast<std::uint32_t>(elements.size());
    for (int i = 0; i < base.rank(); ++i) {
        ModMatrix g = letter_image(static_cast<Letter>(2 * i));
        std::vector<std::uint32_t> p(m);
        for (std::uint32_t k = 0; k < m; ++k) p[k] = index.at((g * elements[k]).code());
        gens.push_back(std::move(p));
    }
    return PermutationAction(static_cast<int>(m), std::move(gens));
}

CongruenceContext make_congruence_context(const SchottkySurface& base, std::uint32_t n, std::size_t max_elements) {
    if (!base.integer_generators) throw DomainError("congruence covers need integer generators");
    if (n < 2) throw DomainError("modulus must be at least 2");
    CongruenceContext ctx;
    ctx.base = base;
    ctx.n = n;
    ctx.group_order = group_order(n);
    if (ctx.group_order > max_elements)
        throw ResourceError("SL2(Z/" + std::to_string(n) + ") has " + std::to_string(ctx.group_order) +
                            " elements, above the limit");
    std::vector<ModMatrix> gens;
    for (int x = 0; x < base.letters(); ++x) gens.push_back(ctx.letter_image(static_cast<Letter>(x)));
    ModMatrix e = ModMatrix::identity(n);
    ctx.elements.push_back(e);
    ctx.index.emplace(e.code(), 0);
    std::deque<std::uint32_t> todo{0};
    while (!todo.empty()) {
        std::uint32_t k = todo.front();
        todo.pop_front();
        for (const auto& g : gens) {
            ModMatrix h = g * ctx.elements[k];
            auto [it, fresh] = ctx.index.emplace(h.code(), static_cast<std::uint32_t>(ctx.elements.size()));
            if (fresh) {
                ctx.elements.push_back(h);
                todo.push_back(it->second);
            }
        }
    }
    ctx.surjective = ctx.elements.size() == ctx.group_order;
    return ctx;
}

double ell0_lower_bound(std::uint32_t n) {
    double t = std::max(static_cast<double>(n) * n - 2, 3.0);
    return 2 * std::acosh(t / 2);
}

CongruenceReport trace_congruence_check(const CongruenceContext& ctx, int max_len) {
    if (max_len < 1) throw DomainError("word length must be positive");
    CongruenceReport rep;
    rep.n = ctx.n;
    rep.group_order = ctx.group_order;
    rep.surjective = ctx.surjective;
    rep.ell0_bound = ell0_lower_bound(ctx.n);
    rep.max_word_length = max_len;
    const auto& ig = *ctx.base.integer_generators;
    std::vector<IntMatrix> letters;
    std::vector<ModMatrix> mods;
    for (int x = 0; x < ctx.base.letters(); ++x) {
        letters.push_back((x & 1) ? inverse(ig[x / 2]) : ig[x / 2]);
        mods.push_back(ctx.letter_image(static_cast<Letter>(x)));
    }
    BigInt n2 = BigInt(ctx.n) * ctx.n;
    std::vector<IntMatrix> stack{IntMatrix{}};
    std::vector<ModMatrix> mstack{ModMatrix::identity(ctx.n)};
    std::vector<int> last{-1};
    // iterative DFS over reduced words
    std::vector<int> next{0};
    int L = ctx.base.letters();
    while (!next.empty()) {
        int depth = static_cast<int>(next.size()) - 1;
        int& x = next.back();
        if (x >= L || depth >= max_len) {
            next.pop_back();
            stack.pop_back();
            mstack.pop_back();
            last.pop_back();
            continue;
        }
        int letter = x++;
        if (last.back() >= 0 && letter == (last.back() ^ 1)) continue;
        IntMatrix m = stack.back() * letters[letter];
        ModMatrix mm = mstack.back() * mods[letter];
        ++rep.words_checked;
        if (mm.is_identity()) {
            ++rep.members;
            BigInt t = m.trace() - 2;
            BigInt r = t % n2;
            if (r != 0) ++rep.violations;
            Real len = displacement_length(m);
            if (!rep.measured_ell0 || len < *rep.measured_ell0) rep.measured_ell0 = static_cast<double>(len);
        }
        stack.push_back(std::move(m));
        mstack.push_back(mm);
        last.push_back(letter);
        next.push_back(0);
    }
    return rep;
}

}  // namespace rlab
