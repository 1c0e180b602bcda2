#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "rlab/cover.hpp"
#include "rlab/schottky.hpp"

namespace rlab {

struct ModMatrix {
    std::uint32_t a = 1, b = 0, c = 0, d = 1;
    std::uint32_t n = 1;

    static ModMatrix identity(std::uint32_t n) { return {1 % n, 0, 0, 1 % n, n}; }
    std::uint64_t code() const;
    bool is_identity() const { return *this == identity(n); }
    friend ModMatrix operator*(const ModMatrix& x, const ModMatrix& y);
    friend bool operator==(const ModMatrix& x, const ModMatrix& y) {
        return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d && x.n == y.n;
    }
};

ModMatrix reduce_mod(const IntMatrix& m, std::uint32_t n);

// |SL2(Z/n)| = n^3 prod_{p | n} (1 - p^-2)
std::uint64_t group_order(std::uint32_t n);

struct CongruenceContext {
    SchottkySurface base;
    std::uint32_t n = 2;
    std::vector<ModMatrix> elements;  // image of the reduction, closure order
    std::unordered_map<std::uint64_t, std::uint32_t> index;
    std::uint64_t group_order = 0;
    bool surjective = false;

    ModMatrix letter_image(Letter x) const;
    ModMatrix word_image(const Word& w) const;
    std::uint32_t element_order(const Word& w) const;
    // left multiplication on the image: the regular cover X(n)
    PermutationAction regular_action() const;
};

CongruenceContext make_congruence_context(const SchottkySurface& base, std::uint32_t n,
                                          std::size_t max_elements = 4'000'000);

struct CongruenceReport {
    std::uint32_t n = 0;
    std::uint64_t group_order = 0;
    bool surjective = false;
    std::uint64_t words_checked = 0;
    std::uint64_t members = 0;  // words reducing to the identity
    std::uint64_t violations = 0;
    int max_word_length = 0;
    double ell0_bound = 0;
    std::optional<double> measured_ell0;  // shortest kernel word found
};

// every enumerated word in the kernel must have trace = 2 mod n^2 (exact arithmetic)
CongruenceReport trace_congruence_check(const CongruenceContext& ctx, int max_len);

// 2 acosh(max(n^2 - 2, 3) / 2)
double ell0_lower_bound(std::uint32_t n);

}  // namespace rlab
