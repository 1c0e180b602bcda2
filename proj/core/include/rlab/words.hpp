#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "rlab/schottky.hpp"

namespace rlab {

// number of reduced words of length n in the free group of rank r
std::uint64_t reduced_word_count(int rank, int n);

bool is_cyclically_reduced(const Word& w);
// strictly smaller than each proper rotation: canonical and primitive
bool is_lyndon(const Word& w);
Word minimal_rotation(const Word& w);

// Shortlex stream of reduced words of length 1..max_len.
class WordStream {
public:
    WordStream(int rank, int max_len);
    bool next(Word& out);

private:
    int rank_;
    int max_len_;
    Word cur_;
    bool started_ = false;
    bool advance(int pos);
};

// Depth-first walk over reduced words with their matrices; returning false
// from the visitor prunes the subtree below that word.
void walk_reduced_words(const SchottkySurface& s, int max_len,
                        const std::function<bool(const Word&, const RealMatrix&)>& visit);

// canonical representatives (Lyndon, cyclically reduced) of primitive classes
// with word length <= max_len
std::vector<Word> primitive_classes(int rank, int max_len);

struct SpectrumEntry {
    double length = 0;
    int multiplicity = 0;
    Word representative;
};

struct SpectrumCertificate {
    double cutoff = 0;
    double word_length_constant = 0;
    std::uint64_t nodes_visited = 0;
    int max_word_length = 0;
    bool complete = false;
};

struct LengthSpectrum {
    std::vector<SpectrumEntry> entries;
    SpectrumCertificate certificate;

    double ell0() const;
    std::size_t class_count() const;
};

struct ClassList {
    std::vector<std::pair<double, Word>> classes;  // (length, Lyndon word)
    SpectrumCertificate certificate;
};

// every oriented primitive class with length <= cutoff, one entry per class
ClassList enumerate_classes(const SchottkySurface& s, double cutoff,
                            std::uint64_t node_limit = 200'000'000);

// all oriented primitive classes with length <= cutoff; records ell0 on the
// surface when the spectrum is non-empty
LengthSpectrum length_spectrum(SchottkySurface& s, double cutoff,
                               std::uint64_t node_limit = 200'000'000);
LengthSpectrum length_spectrum(const SchottkySurface& s, double cutoff,
                               std::uint64_t node_limit = 200'000'000);

// merge raw (length, word) pairs into entries; lengths within rel_tol coincide
std::vector<SpectrumEntry> group_lengths(std::vector<std::pair<double, Word>> raw, double rel_tol = 1e-11);

}  // namespace rlab
