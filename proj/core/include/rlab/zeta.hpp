#pragma once

#include <memory>
#include <string>
#include <vector>

#include "rlab/cover.hpp"
#include "rlab/schottky.hpp"

namespace rlab {

enum class ZetaMode { euler, cycle, fredholm };

std::string to_string(ZetaMode m);
ZetaMode zeta_mode_from_string(const std::string& s);

struct ZetaValue {
    Complex value;
    double error = 0;  // euler: rigorous bound; cycle: |d_N|; fredholm: difference to 3/4 of the nodes
    ZetaMode mode = ZetaMode::fredholm;
    int depth = 0;
};

// Selberg zeta function of a Schottky surface, optionally twisted by a finite
// permutation action (the zeta function of the corresponding cover).
//   euler    : truncated product over primitive classes of word length <= depth
//   cycle    : det(1 - L_s) expanded in traces of closed words of length <= depth
//   fredholm : det(1 - L_s) with L_s collocated on `depth` Chebyshev nodes per disk
class ZetaEvaluator {
public:
    ZetaEvaluator(const SchottkySurface& s, ZetaMode mode, int depth,
                  const PermutationAction* rho = nullptr);
    // twist by an orthogonal representation; Fredholm mode only
    ZetaEvaluator(const SchottkySurface& s, int nodes, const OrthogonalAction& rho);
    ~ZetaEvaluator();
    ZetaEvaluator(ZetaEvaluator&&) noexcept;
    ZetaEvaluator& operator=(ZetaEvaluator&&) noexcept;

    Complex operator()(Complex s) const;
    ZetaValue evaluate(Complex s) const;

    ZetaMode mode() const { return mode_; }
    int depth() const { return depth_; }
    int degree() const { return degree_; }
    const SchottkySurface& surface() const { return surface_; }
    // multiplicity of the zero at s = -k forced by the topology of the cover
    int topological_multiplicity(int k) const;

private:
    struct Classes;
    struct Fredholm;
    struct Tail;

    SchottkySurface surface_;
    ZetaMode mode_;
    int depth_;
    int degree_ = 1;
    std::unique_ptr<Classes> classes_;
    std::unique_ptr<Fredholm> fred_;
    std::unique_ptr<Fredholm> fred_coarse_;
    std::unique_ptr<Tail> tail_;

    ZetaValue eval_cycle(Complex s) const;
    ZetaValue eval_euler(Complex s) const;
};

// real intervals carrying the collocation nodes: the limit set hull in each
// disk widened by `margin` of the remaining gap to the disk boundary
std::vector<Disk> collocation_intervals(const SchottkySurface& s, double margin = 0.25);

ZetaValue zeta_euler(const SchottkySurface& s, Complex z, int depth, const PermutationAction* rho = nullptr);
ZetaValue zeta_cycle(const SchottkySurface& s, Complex z, int depth, const PermutationAction* rho = nullptr);
ZetaValue zeta_fredholm(const SchottkySurface& s, Complex z, int nodes, const PermutationAction* rho = nullptr);

// smallest node count from a fixed ladder whose value at the probe points
// agrees with the next coarser rung to rel_tol
int choose_fredholm_nodes(const SchottkySurface& s, const std::vector<Complex>& probes, double rel_tol,
                          const PermutationAction* rho = nullptr, int max_nodes = 192);

struct DeltaEstimate {
    double delta = 0;
    double bracket = 0;  // width of the final sign-change bracket
};

// largest real zero of the zeta function, scanning down from s = 1
DeltaEstimate delta_estimate(const ZetaEvaluator& z, double tol = 1e-13);
// same, recording the result on the surface
double delta_estimate(SchottkySurface& s, int nodes = 64, double tol = 1e-13);

}  // namespace rlab
