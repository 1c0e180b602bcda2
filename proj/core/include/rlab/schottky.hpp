#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rlab/mobius.hpp"

namespace rlab {

// Disk in C centered on the real axis; it stands for the half-plane its
// boundary circle cuts out of H.
struct Disk {
    Real center = 0;
    Real radius = 1;

    Real left() const { return center - radius; }
    Real right() const { return center + radius; }
    bool contains(Real x) const { return std::fabs(x - center) < radius; }
    Real distance_to(Real x) const { return std::fabs(x - center) - radius; }
};

// Letters of the free group on r generators: 2i is g_{i+1}, 2i+1 its inverse.
using Letter = std::uint8_t;
using Word = std::vector<Letter>;

inline Letter inverse_letter(Letter x) { return x ^ 1; }
Word inverse_word(const Word& w);
std::string word_to_string(const Word& w);
Word word_from_string(const std::string& s, int rank);

struct SchottkySurface {
    std::string name;
    std::vector<RealMatrix> generators;
    // disks[x] is the disk letter x maps the exterior of disks[x ^ 1] into;
    // for generator g_i that is D_i' = disks[2i] and D_i = disks[2i + 1]
    std::vector<Disk> disks;
    std::optional<std::vector<IntMatrix>> integer_generators;
    int precision_bits = 64;

    std::optional<double> delta;
    std::optional<double> ell0;

    int rank() const { return static_cast<int>(generators.size()); }
    int letters() const { return 2 * rank(); }
    int euler_characteristic() const { return 1 - rank(); }
    // 2π|χ|
    double vol0() const;
    RealMatrix letter_matrix(Letter x) const;
    RealMatrix word_matrix(const Word& w) const;
    std::optional<IntMatrix> int_word_matrix(const Word& w) const;
};

struct ValidationReport {
    bool ok = true;
    std::vector<std::string> failures;
    double min_gap = 0;
};

ValidationReport validate(const SchottkySurface& s);
// throws ValidationError carrying the failed conditions
void require_valid(const SchottkySurface& s);

// three-funnel surface with boundary lengths l1, l2, l3; throws ConstructionError
// if no disjoint disk configuration exists for this normalisation
SchottkySurface three_funnel(Real l1, Real l2, Real l3);

// disks are isometric circles; every generator needs c != 0
SchottkySurface integer_schottky(std::string name, std::vector<IntMatrix> gens);

// bundled arithmetic example surjecting onto SL2(Z/n) for n = 2..7
SchottkySurface bundled_integer_surface();

// min over letters b and admissible disks a of 2 log(|c_b| dist(pole_b, D_a)),
// a lower bound for the length added per letter
Real word_length_constant(const SchottkySurface& s);

// sup over D_a of |g'| for a Möbius map whose pole lies outside D_a
Real sup_derivative(const RealMatrix& g, const Disk& a);

}  // namespace rlab
