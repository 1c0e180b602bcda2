#pragma once

#include <string>
#include <vector>

#include "rlab/congruence.hpp"
#include "rlab/cover.hpp"
#include "rlab/zeros.hpp"

namespace rlab {

// corners and mid-edges of the box, for node selection
std::vector<Complex> box_probes(const Box& box);

// Fredholm node count settling to rel_tol at the box probes
int nodes_for_box(const SchottkySurface& s, const Box& box, double rel_tol, const PermutationAction* rho = nullptr,
                  int max_nodes = 192);

// nodes <= 0 picks them with nodes_for_box at 1e-10
ResonanceSet compute_resonances(const SchottkySurface& s, const Box& box, double tol,
                                const PermutationAction* rho = nullptr, int nodes = 0);

// resonances of a cover whose zeta function is the product of the twisted
// zeta functions of `factors`; each factor is searched on its own and the
// zero sets are merged
ResonanceSet factored_resonances(const SchottkySurface& s, const std::vector<OrthogonalAction>& factors, const Box& box,
                                 double tol);

// resonances of the congruence cover X(n); refuses covers larger than max_degree
ResonanceSet cover_resonances(const CongruenceContext& ctx, const Box& box, double tol, int max_degree = 120);

// L with (1 + eta) L = ell0 - margin
double auto_below_ell0(double ell0, double eta, double margin = 0.05);

struct FamilyMember {
    std::string id;
    PermutationAction rho;
    std::vector<OrthogonalAction> factors;
};

// covers of three_funnel(2,2,2) used by the lower bound experiment
std::vector<FamilyMember> bundled_family();

}  // namespace rlab
