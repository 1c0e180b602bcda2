#include "rlab/cover.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rlab/errors.hpp"

namespace rlab {

PermutationAction::PermutationAction(int degree, std::vector<std::vector<std::uint32_t>> gens) : degree_(degree) {
    if (degree < 1) throw DomainError("permutation degree must be positive");
    for (auto& g : gens) {
        if (static_cast<int>(g.size()) != degree) throw DomainError("permutation has the wrong degree");
        std::vector<std::uint32_t> inv(degree, degree);
        for (int i = 0; i < degree; ++i) {
            if (g[i] >= static_cast<std::uint32_t>(degree) || inv[g[i]] != static_cast<std::uint32_t>(degree))
                throw DomainError("generator image is not a permutation");
            inv[g[i]] = i;
        }
        letters_.push_back(std::move(g));
        letters_.push_back(std::move(inv));
    }
}

PermutationAction PermutationAction::trivial(int rank) {
    return PermutationAction(1, std::vector<std::vector<std::uint32_t>>(rank, std::vector<std::uint32_t>{0}));
}

std::vector<std::uint32_t> PermutationAction::word_image(const Word& w) const {
    std::vector<std::uint32_t> p(degree_);
    for (int i = 0; i < degree_; ++i) {
        std::uint32_t x = i;
        for (auto it = w.rbegin(); it != w.rend(); ++it) x = letters_[*it][x];
        p[i] = x;
    }
    return p;
}

int PermutationAction::fixed_points(const Word& w) const {
    int n = 0;
    for (int i = 0; i < degree_; ++i) {
        std::uint32_t x = i;
        for (auto it = w.rbegin(); it != w.rend(); ++it) x = letters_[*it][x];
        n += (x == static_cast<std::uint32_t>(i));
    }
    return n;
}

std::vector<int> cycle_lengths(const std::vector<std::uint32_t>& perm) {
    std::vector<int> out;
    std::vector<char> seen(perm.size(), 0);
    for (std::size_t i = 0; i < perm.size(); ++i) {
        if (seen[i]) continue;
        int len = 0;
        for (std::size_t j = i; !seen[j]; j = perm[j]) {
            seen[j] = 1;
            ++len;
        }
        out.push_back(len);
    }
    return out;
}

OrthogonalAction::OrthogonalAction(int dim, std::vector<std::vector<double>> gens) : dim_(dim) {
    if (dim < 1) throw DomainError("representation dimension must be positive");
    for (auto& g : gens) {
        if (static_cast<int>(g.size()) != dim * dim) throw DomainError("generator matrix has the wrong size");
        std::vector<double> t(g.size());
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) t[j * dim + i] = g[i * dim + j];
        // g g^T = 1
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) {
                double acc = 0;
                for (int k = 0; k < dim; ++k) acc += g[i * dim + k] * g[j * dim + k];
                if (std::fabs(acc - (i == j ? 1.0 : 0.0)) > 1e-12) throw DomainError("generator matrix is not orthogonal");
            }
        letters_.push_back(std::move(g));
        letters_.push_back(std::move(t));
    }
}

OrthogonalAction OrthogonalAction::from_permutation(const PermutationAction& rho) {
    int m = rho.degree();
    std::vector<std::vector<double>> gens;
    for (int g = 0; g < rho.rank(); ++g) {
        std::vector<double> mat(static_cast<std::size_t>(m) * m, 0.0);
        const auto& p = rho.letter(static_cast<Letter>(2 * g));
        for (int i = 0; i < m; ++i) mat[i * m + p[i]] = 1;
        gens.push_back(std::move(mat));
    }
    return OrthogonalAction(m, std::move(gens));
}

std::vector<OrthogonalAction> cyclic_cover_factors(int rank, int d) {
    if (d < 1) throw DomainError("cover degree must be positive");
    std::vector<OrthogonalAction> out;
    out.emplace_back(1, std::vector<std::vector<double>>(rank, {1.0}));
    if (d % 2 == 0) out.emplace_back(1, std::vector<std::vector<double>>(rank, {-1.0}));
    for (int j = 1; 2 * j < d; ++j) {
        double th = 2 * std::numbers::pi * j / d, c = std::cos(th), s = std::sin(th);
        out.emplace_back(2, std::vector<std::vector<double>>(rank, {c, -s, s, c}));
    }
    return out;
}

std::vector<int> PermutationAction::cycle_lengths(const Word& w) const { return rlab::cycle_lengths(word_image(w)); }

bool PermutationAction::transitive() const {
    std::vector<char> seen(degree_, 0);
    std::vector<std::uint32_t> todo{0};
    seen[0] = 1;
    int count = 1;
    while (!todo.empty()) {
        std::uint32_t x = todo.back();
        todo.pop_back();
        for (const auto& p : letters_)
            if (!seen[p[x]]) {
                seen[p[x]] = 1;
                ++count;
                todo.push_back(p[x]);
            }
    }
    return count == degree_;
}

LengthSpectrum cover_length_spectrum(const SchottkySurface& base, const PermutationAction& rho, double cutoff) {
    if (rho.rank() != base.rank()) throw DomainError("permutation action rank differs from the surface rank");
    ClassList cl = enumerate_classes(base, cutoff);
    std::vector<std::pair<double, Word>> raw;
    for (const auto& [len, w] : cl.classes) {
        for (int o : rho.cycle_lengths(w)) {
            double lifted = o * len;
            if (lifted > cutoff) continue;
            Word rep;
            for (int k = 0; k < o; ++k) rep.insert(rep.end(), w.begin(), w.end());
            raw.emplace_back(lifted, std::move(rep));
        }
    }
    LengthSpectrum out;
    out.certificate = cl.certificate;
    out.entries = group_lengths(std::move(raw));
    return out;
}

double cover_ell0(const SchottkySurface& base, const PermutationAction& rho, double max_cutoff) {
    double cutoff = 2;
    while (cutoff <= max_cutoff) {
        LengthSpectrum s = cover_length_spectrum(base, rho, cutoff);
        if (!s.entries.empty()) return s.entries.front().length;
        cutoff *= 1.5;
    }
    throw IncompleteSpectrum("no lifted class below the maximal cutoff");
}

}  // namespace rlab
