#include <cmath>

#include "doctest.h"

#include "rlab/errors.hpp"
#include "rlab/pipeline.hpp"

using namespace rlab;

namespace {

PermutationAction cyclic(int rank, int d) {
    std::vector<std::uint32_t> shift(d);
    for (int i = 0; i < d; ++i) shift[i] = (i + 1) % d;
    return PermutationAction(d, std::vector<std::vector<std::uint32_t>>(rank, shift));
}

}  // namespace

TEST_CASE("orthogonal actions") {
    CHECK_THROWS_AS(OrthogonalAction(2, {{1, 1, 0, 1}}), DomainError);
    OrthogonalAction a = OrthogonalAction::from_permutation(cyclic(2, 3));
    CHECK(a.dim() == 3);
    CHECK(a.rank() == 2);
    // inverse letter is the transpose
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) CHECK(a.letter(1)[i * 3 + j] == a.letter(0)[j * 3 + i]);
    for (int d = 2; d <= 6; ++d) {
        int dim = 0;
        for (const auto& f : cyclic_cover_factors(2, d)) dim += f.dim();
        CHECK(dim == d);
    }
}

TEST_CASE("cyclic cover zeta is the product of its factors") {
    SchottkySurface s = bundled_integer_surface();
    for (int d : {3, 4}) {
        PermutationAction rho = cyclic(2, d);
        ZetaEvaluator cover(s, ZetaMode::fredholm, 16, &rho);
        std::vector<ZetaEvaluator> parts;
        for (const auto& f : cyclic_cover_factors(2, d)) parts.emplace_back(s, 16, f);
        for (Complex z : {Complex(0.7, 0.4), Complex(-0.3, 1.7), Complex(0.1, 0)}) {
            Complex prod = 1;
            for (const auto& p : parts) prod *= p(z);
            CHECK(std::abs(prod - cover(z)) <= 1e-10 * std::max(1.0, std::abs(cover(z))));
        }
    }
}

TEST_CASE("factored search matches the permutation cover") {
    SchottkySurface s = bundled_integer_surface();
    PermutationAction rho = cyclic(2, 3);
    Box box{-0.5, 0.5, 0, 1.5};
    ResonanceSet whole = compute_resonances(s, box, 1e-10, &rho, 16);
    ResonanceSet split = factored_resonances(s, cyclic_cover_factors(2, 3), box, 1e-10);
    CHECK(split.degree == 3);
    CHECK(split.count() == whole.count());
    for (const auto& r : whole.resonances) {
        int m = 0;
        for (const auto& q : split.resonances)
            if (std::abs(q.s - r.s) < 1e-6) m += q.multiplicity;
        CHECK(m == r.multiplicity);
    }
}

TEST_CASE("auto L and the bundled family") {
    CHECK(auto_below_ell0(2, 0.5) == doctest::Approx(1.3));
    CHECK((1 + 0.3) * auto_below_ell0(4, 0.3, 0.1) == doctest::Approx(3.9));
    CHECK_THROWS_AS(auto_below_ell0(2, 1.0), DomainError);
    CHECK_THROWS_AS(auto_below_ell0(0.01, 0.5), DomainError);
    auto fam = bundled_family();
    REQUIRE(fam.size() == 3);
    for (const auto& m : fam) {
        CHECK(m.rho.transitive());
        int dim = 0;
        for (const auto& f : m.factors) dim += f.dim();
        CHECK(dim == m.rho.degree());
    }
    CHECK(box_probes(Box{-1, 1, 0, 2}).size() >= 4);
}
