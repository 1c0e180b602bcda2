#pragma once

#include <cstdint>
#include <vector>

#include "rlab/schottky.hpp"
#include "rlab/words.hpp"

namespace rlab {

// Finite permutation action of the free group, i.e. a finite cover of the
// surface. The trivial action of degree 1 is the surface itself.
class PermutationAction {
public:
    PermutationAction() = default;
    // one permutation per generator; inverses are derived
    PermutationAction(int degree, std::vector<std::vector<std::uint32_t>> generator_images);

    static PermutationAction trivial(int rank);

    int degree() const { return degree_; }
    int rank() const { return static_cast<int>(letters_.size() / 2); }
    const std::vector<std::uint32_t>& letter(Letter x) const { return letters_[x]; }

    // rho(w) = rho(w_1) o ... o rho(w_n)
    std::vector<std::uint32_t> word_image(const Word& w) const;
    int fixed_points(const Word& w) const;
    std::vector<int> cycle_lengths(const Word& w) const;
    bool transitive() const;

private:
    int degree_ = 1;
    std::vector<std::vector<std::uint32_t>> letters_;
};

std::vector<int> cycle_lengths(const std::vector<std::uint32_t>& perm);

// Real orthogonal representation of the free group: one dim x dim matrix per
// generator, row-major; inverse letters act by the transpose.
class OrthogonalAction {
public:
    OrthogonalAction(int dim, std::vector<std::vector<double>> generator_matrices);

    static OrthogonalAction from_permutation(const PermutationAction& rho);

    int dim() const { return dim_; }
    int rank() const { return static_cast<int>(letters_.size() / 2); }
    const std::vector<double>& letter(Letter x) const { return letters_[x]; }

private:
    int dim_ = 1;
    std::vector<std::vector<double>> letters_;
};

// Irreducible real summands of the permutation action in which every
// generator acts as the same d-cycle: trivial, sign (d even) and the
// rotations by 2πj/d, 0 < j < d/2. The zeta function of the cyclic cover is
// the product of their twisted zeta functions.
std::vector<OrthogonalAction> cyclic_cover_factors(int rank, int d);

// A primitive class of length l lifts to one primitive class of length o l for
// each cycle of length o of rho(class).
LengthSpectrum cover_length_spectrum(const SchottkySurface& base, const PermutationAction& rho, double cutoff);

// shortest lifted length, enlarging the base cutoff until it is certified
double cover_ell0(const SchottkySurface& base, const PermutationAction& rho, double max_cutoff = 60);

}  // namespace rlab
