#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "rlab/errors.hpp"
#include "rlab/zeta.hpp"

namespace rlab {

using ComplexFn = std::function<Complex(Complex)>;

struct Box {
    double re_min = 0, re_max = 0, im_min = 0, im_max = 0;

    // "re_min:re_max:im_min:im_max"
    static Box parse(const std::string& text);
    std::string str() const;
    bool contains(Complex z, double pad = 0) const;
    double width() const { return re_max - re_min; }
    double height() const { return im_max - im_min; }
};

struct Zero {
    Complex s;
    int multiplicity = 1;
    double error = 0;
};

struct ZeroSearchOptions {
    double tol = 1e-10;            // Newton step size at convergence
    double spacing = 0.05;         // initial sample spacing along box edges
    double max_phase_step = 0.7;   // radians between accepted neighbouring samples
    double cluster_size = 1e-4;    // boxes below this size are reported as clusters
    double edge_pad = 1e-3;        // outward shift applied to an edge that meets a zero
    std::vector<std::pair<Complex, int>> hints;  // known zeros with multiplicity
};

// Function wrapper that memoises evaluations and counts them.
class CachedFn {
public:
    explicit CachedFn(ComplexFn f) : f_(std::move(f)) {}
    Complex operator()(Complex z);
    std::size_t evaluations() const { return evals_; }

private:
    ComplexFn f_;
    std::map<std::pair<double, double>, Complex> cache_;
    std::size_t evals_ = 0;
};

// thrown when an edge passes too close to a zero for the winding to be reliable
class NearEdge : public PrecisionError {
public:
    NearEdge(const std::string& what, int edge) : PrecisionError(what), edge(edge) {}
    int edge;  // 0 bottom, 1 right, 2 top, 3 left
};

// argument principle on the boundary; `density` scales the sample count
int winding_number(CachedFn& f, const Box& b, double spacing, double max_phase_step = 0.7);

// all zeros of f in the box, with multiplicity
std::vector<Zero> find_zeros(CachedFn& f, const Box& b, const ZeroSearchOptions& opt);

struct TopologicalEntry {
    int k = 0;          // zero at s = -k
    int expected = 0;   // (2k + 1) |chi| deg
    int found = 0;
    std::string note;
};

struct ResonanceSet {
    std::vector<Zero> resonances;  // conjugation-closed, topological zeros removed
    Box box;                       // requested box, symmetrised in Im
    Box search_box;                // upper region actually searched, after edge shifts
    double tolerance = 0;
    int euler_characteristic = 0;
    int degree = 1;
    int search_count = 0;          // zeros found in search_box counted with multiplicity
    std::vector<TopologicalEntry> topological;
    std::size_t evaluations = 0;
    std::string zeta_mode;
    int zeta_depth = 0;

    int count() const;  // with multiplicity
    std::vector<Zero> in_box(const Box& b, double pad = 0) const;
    double leading_real() const;
};

ResonanceSet zeros_in_box(const ZetaEvaluator& z, const Box& box, ZeroSearchOptions opt = {});

// winding count of the zeta function around the searched region of a set
int winding_oracle(const ZetaEvaluator& z, const Box& search_box, double spacing);

}  // namespace rlab
