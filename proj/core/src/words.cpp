#include "rlab/words.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rlab/errors.hpp"

namespace rlab {

std::uint64_t reduced_word_count(int rank, int n) {
    if (n <= 0) return n == 0 ? 1 : 0;
    std::uint64_t k = 2 * rank;
    for (int i = 1; i < n; ++i) k *= (2 * rank - 1);
    return k;
}

bool is_cyclically_reduced(const Word& w) {
    if (w.empty()) return false;
    for (std::size_t i = 0; i + 1 < w.size(); ++i)
        if (w[i + 1] == inverse_letter(w[i])) return false;
    return w.size() == 1 || w.front() != inverse_letter(w.back());
}

bool is_lyndon(const Word& w) {
    std::size_t n = w.size();
    if (n == 0) return false;
    for (std::size_t r = 1; r < n; ++r) {
        // compare w with its rotation by r
        for (std::size_t i = 0; i < n; ++i) {
            Letter x = w[i], y = w[(i + r) % n];
            if (x < y) break;
            if (x > y) return false;
            if (i + 1 == n) return false;  // equal: periodic
        }
    }
    return true;
}

Word minimal_rotation(const Word& w) {
    Word best = w;
    Word rot = w;
    for (std::size_t r = 1; r < w.size(); ++r) {
        std::rotate(rot.begin(), rot.begin() + 1, rot.end());
        if (rot < best) best = rot;
    }
    return best;
}

WordStream::WordStream(int rank, int max_len) : rank_(rank), max_len_(max_len) {
    if (rank < 1 || max_len < 0) throw DomainError("word stream needs rank >= 1 and max_len >= 0");
}

bool WordStream::advance(int pos) {
    int L = 2 * rank_;
    auto smallest_after = [](Letter prev) -> Letter { return prev == 1 ? 1 : 0; };
    while (pos >= 0) {
        int x = cur_[pos] + 1;
        if (pos > 0 && x == (cur_[pos - 1] ^ 1)) ++x;
        if (x < L) {
            cur_[pos] = static_cast<Letter>(x);
            for (std::size_t i = pos + 1; i < cur_.size(); ++i) cur_[i] = smallest_after(cur_[i - 1]);
            return true;
        }
        --pos;
    }
    return false;
}

bool WordStream::next(Word& out) {
    if (!started_) {
        started_ = true;
        if (max_len_ == 0) return false;
        cur_.assign(1, 0);
        out = cur_;
        return true;
    }
    if (cur_.empty()) return false;
    if (!advance(static_cast<int>(cur_.size()) - 1)) {
        if (static_cast<int>(cur_.size()) == max_len_) {
            cur_.clear();
            return false;
        }
        cur_.assign(cur_.size() + 1, 0);
    }
    out = cur_;
    return true;
}

void walk_reduced_words(const SchottkySurface& s, int max_len,
                        const std::function<bool(const Word&, const RealMatrix&)>& visit) {
    int L = s.letters();
    std::vector<RealMatrix> letters;
    for (int x = 0; x < L; ++x) letters.push_back(s.letter_matrix(static_cast<Letter>(x)));
    Word w;
    std::vector<RealMatrix> stack{RealMatrix{}};
    std::function<void()> rec = [&]() {
        if (static_cast<int>(w.size()) == max_len) return;
        for (int x = 0; x < L; ++x) {
            if (!w.empty() && x == (w.back() ^ 1)) continue;
            w.push_back(static_cast<Letter>(x));
            stack.push_back(stack.back() * letters[x]);
            if (visit(w, stack.back())) rec();
            stack.pop_back();
            w.pop_back();
        }
    };
    rec();
}

std::vector<Word> primitive_classes(int rank, int max_len) {
    // Duval's generation of Lyndon words, filtered to cyclically reduced ones
    std::vector<Word> out;
    int k = 2 * rank;
    if (max_len <= 0) return out;
    std::vector<int> w{-1};
    while (!w.empty()) {
        ++w.back();
        Word word(w.begin(), w.end());
        if (is_cyclically_reduced(word)) out.push_back(word);
        std::size_t m = w.size();
        while (static_cast<int>(w.size()) < max_len) w.push_back(w[w.size() - m]);
        while (!w.empty() && w.back() == k - 1) w.pop_back();
    }
    std::sort(out.begin(), out.end(), [](const Word& a, const Word& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return out;
}

double LengthSpectrum::ell0() const {
    if (entries.empty()) throw IncompleteSpectrum("length spectrum is empty below the cutoff");
    return entries.front().length;
}

std::size_t LengthSpectrum::class_count() const {
    std::size_t n = 0;
    for (const auto& e : entries) n += e.multiplicity;
    return n;
}

std::vector<SpectrumEntry> group_lengths(std::vector<std::pair<double, Word>> raw, double rel_tol) {
    std::sort(raw.begin(), raw.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second.size() != b.second.size() ? a.second.size() < b.second.size() : a.second < b.second;
    });
    std::vector<SpectrumEntry> out;
    for (auto& [len, word] : raw) {
        if (!out.empty() && std::fabs(len - out.back().length) <= rel_tol * std::max(1.0, len)) {
            ++out.back().multiplicity;
            const Word& rep = out.back().representative;
            if (word.size() < rep.size() || (word.size() == rep.size() && word < rep))
                out.back().representative = word;
        } else {
            out.push_back({len, 1, word});
        }
    }
    return out;
}

ClassList enumerate_classes(const SchottkySurface& s, double cutoff, std::uint64_t node_limit) {
    if (!(cutoff > 0)) throw DomainError("spectrum cutoff must be positive");
    Real cx = word_length_constant(s);
    if (!(cx > 0)) throw DomainError("surface has no positive word length constant; pruning is not certified");
    int L = s.letters();
    ClassList out;
    out.certificate.cutoff = cutoff;
    out.certificate.word_length_constant = static_cast<double>(cx);
    // every letter adds at least cx
    int max_len = static_cast<int>(std::floor(cutoff / cx)) + 1;
    std::uint64_t nodes = 0;
    walk_reduced_words(s, max_len, [&](const Word& w, const RealMatrix& m) {
        if (++nodes > node_limit)
            throw ResourceError("length spectrum enumeration exceeded the node limit");
        // any cyclically reduced extension has length >= -log sup |g_w'| over admissible disks
        Real sup = 0;
        Letter last = w.back();
        for (int a = 0; a < L; ++a) {
            if (a == (last ^ 1)) continue;
            sup = std::max(sup, sup_derivative(m, s.disks[a]));
        }
        if (-std::log(sup) > cutoff) return false;
        out.certificate.max_word_length = std::max<int>(out.certificate.max_word_length, w.size());
        if (is_cyclically_reduced(w) && is_lyndon(w)) {
            Real len = length_from_trace(std::fabs(m.trace()));
            if (len <= cutoff) out.classes.emplace_back(static_cast<double>(len), w);
        }
        return true;
    });
    out.certificate.nodes_visited = nodes;
    out.certificate.complete = true;
    return out;
}

LengthSpectrum length_spectrum(const SchottkySurface& s, double cutoff, std::uint64_t node_limit) {
    ClassList cl = enumerate_classes(s, cutoff, node_limit);
    LengthSpectrum spec;
    spec.certificate = cl.certificate;
    spec.entries = group_lengths(std::move(cl.classes));
    return spec;
}

LengthSpectrum length_spectrum(SchottkySurface& s, double cutoff, std::uint64_t node_limit) {
    LengthSpectrum spec = length_spectrum(static_cast<const SchottkySurface&>(s), cutoff, node_limit);
    if (!spec.entries.empty()) s.ell0 = spec.entries.front().length;
    return spec;
}

}  // namespace rlab
