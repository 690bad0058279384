// Sparse series over word pairs (left leg plain, right leg opposite-algebra),
// edge-indexed matrices of them, and the # composition used by the matrix
// calculus: (a(x)b) # (c(x)d) = (ac) (x) (db).

#ifndef LOOPALG_TENSOR_HPP
#define LOOPALG_TENSOR_HPP

#include <functional>
#include <map>
#include <utility>

#include "loopalg/word.hpp"

namespace loopalg {

struct TensorSeries {
    std::map<std::pair<Word, Word>, cx> terms;

    bool empty() const { return terms.empty(); }

    void add(const Word& l, const Word& r, cx c) {
        auto key = std::make_pair(l, r);
        auto [it, inserted] = terms.try_emplace(key, c);
        if (!inserted) it->second += c;
        if (std::abs(it->second) < kPruneThreshold) terms.erase(it);
    }

    TensorSeries& operator+=(const TensorSeries& o) {
        for (const auto& [k, c] : o.terms) add(k.first, k.second, c);
        return *this;
    }
    TensorSeries& operator*=(cx s) {
        if (std::abs(s) < kPruneThreshold) {
            terms.clear();
            return *this;
        }
        for (auto& [k, c] : terms) c *= s;
        return *this;
    }
};

inline TensorSeries operator*(cx s, TensorSeries t) { return t *= s; }

struct TensorCaps {
    int left_cap = -1;   // drop terms whose left degree exceeds this (< 0: none)
    int total_cap = -1;  // drop terms whose left+right degree exceeds this
    double dropped_mass = 0.0;  // accumulated |c|*wt(l)*wt(r) of total_cap drops
};

// Elementwise product with the opposite multiplication on the right leg.
inline TensorSeries tensor_compose(const GraphData& gd, const TensorSeries& a,
                                   const TensorSeries& b, TensorCaps* caps = nullptr,
                                   double R = 1.0) {
    TensorSeries out;
    for (const auto& [ka, ca] : a.terms)
        for (const auto& [kb, cb] : b.terms) {
            Word l = concat_words(ka.first, kb.first);
            if (caps && caps->left_cap >= 0 && l.degree() > caps->left_cap) continue;
            Word r = concat_words(kb.second, ka.second);
            if (caps && caps->total_cap >= 0 && l.degree() + r.degree() > caps->total_cap) {
                caps->dropped_mass +=
                    std::abs(ca * cb) * word_weight(gd, l, R) * word_weight(gd, r, R);
                continue;
            }
            out.add(l, r, ca * cb);
        }
    return out;
}

// Bimodule actions used by the Leibniz rule (right leg appends on the right).
inline TensorSeries tensor_right_mul(const TensorSeries& t, const WordSeries& y) {
    TensorSeries out;
    for (const auto& [k, c] : t.terms)
        for (const auto& [w, cw] : y.terms) out.add(k.first, concat_words(k.second, w), c * cw);
    return out;
}

inline TensorSeries tensor_left_mul(const WordSeries& x, const TensorSeries& t) {
    TensorSeries out;
    for (const auto& [k, c] : t.terms)
        for (const auto& [w, cw] : x.terms) out.add(concat_words(w, k.first), k.second, c * cw);
    return out;
}

inline double tensor_norm_R(const GraphData& gd, const TensorSeries& t, double R) {
    double s = 0.0;
    for (const auto& [k, c] : t.terms)
        s += std::abs(c) * word_weight(gd, k.first, R) * word_weight(gd, k.second, R);
    return s;
}

// Operator-norm bound for the generator labelled by one letter: the right
// legs of a contraction only ever enter through the state, and |phi(b)| is
// bounded by the product of these letter factors.
inline double letter_op_bound(const GraphData& gd, int e) {
    return 1.0 / std::sqrt(gd.sigma(e)) + 1.0 / std::sqrt(gd.sigma(gd.opposite(e)));
}

// Mixed pricing: left legs at radius R (they survive into the output), right
// legs at the operator bound (they are contracted by the state). Still
// multiplicative under #, so row sums of it control the tail geometrically.
inline double tensor_contraction_norm(const GraphData& gd, const TensorSeries& t, double R) {
    double s = 0.0;
    for (const auto& [k, c] : t.terms) {
        double rw = 1.0;
        for (int e : k.second.letters) rw *= letter_op_bound(gd, e);
        s += std::abs(c) * word_weight(gd, k.first, R) * rw;
    }
    return s;
}

// Sparse square matrix over edge indices.
struct SeriesMatrix {
    std::map<std::pair<int, int>, TensorSeries> entries;

    const TensorSeries* find(int e, int f) const {
        auto it = entries.find({e, f});
        return it == entries.end() ? nullptr : &it->second;
    }
    void add(int e, int f, const TensorSeries& t) {
        if (t.empty()) return;
        entries[{e, f}] += t;
    }
};

inline SeriesMatrix hash_compose(const GraphData& gd, const SeriesMatrix& A, const SeriesMatrix& B,
                                 TensorCaps* caps = nullptr, double R = 1.0) {
    SeriesMatrix out;
    for (const auto& [ij, ta] : A.entries) {
        for (const auto& [jk, tb] : B.entries) {
            if (ij.second != jk.first) continue;
            TensorSeries prod = tensor_compose(gd, ta, tb, caps, R);
            if (!prod.empty()) out.add(ij.first, jk.second, prod);
        }
    }
    return out;
}

inline TensorSeries trace_matrix(const SeriesMatrix& M) {
    TensorSeries out;
    for (const auto& [ij, t] : M.entries)
        if (ij.first == ij.second) out += t;
    return out;
}

using StateFn = std::function<cx(const Word&)>;

// (1 (x) phi): a (x) b -> phi(b) . a
inline WordSeries contract_left(const TensorSeries& t, const StateFn& state) {
    WordSeries out;
    for (const auto& [k, c] : t.terms) {
        cx v = state(k.second);
        if (std::abs(v) >= kPruneThreshold) out.add(k.first, c * v);
    }
    return out;
}

// (phi (x) 1): a (x) b -> phi(a) . b
inline WordSeries contract_right(const TensorSeries& t, const StateFn& state) {
    WordSeries out;
    for (const auto& [k, c] : t.terms) {
        cx v = state(k.first);
        if (std::abs(v) >= kPruneThreshold) out.add(k.second, c * v);
    }
    return out;
}

inline std::map<std::pair<int, int>, WordSeries> contract_left_matrix(const SeriesMatrix& M,
                                                                      const StateFn& state) {
    std::map<std::pair<int, int>, WordSeries> out;
    for (const auto& [ij, t] : M.entries) {
        WordSeries s = contract_left(t, state);
        if (!s.empty()) out.emplace(ij, std::move(s));
    }
    return out;
}

inline std::map<std::pair<int, int>, WordSeries> contract_right_matrix(const SeriesMatrix& M,
                                                                       const StateFn& state) {
    std::map<std::pair<int, int>, WordSeries> out;
    for (const auto& [ij, t] : M.entries) {
        WordSeries s = contract_right(t, state);
        if (!s.empty()) out.emplace(ij, std::move(s));
    }
    return out;
}

// Max row sum of entry norms.
inline double matrix_norm_R(const GraphData& gd, const SeriesMatrix& M, double R) {
    std::map<int, double> row;
    for (const auto& [ij, t] : M.entries) row[ij.first] += tensor_norm_R(gd, t, R);
    double mx = 0.0;
    for (const auto& [e, s] : row) mx = std::max(mx, s);
    return mx;
}

// Max row sum of mixed-priced entry norms; the contraction-tail proxy.
inline double matrix_contraction_norm(const GraphData& gd, const SeriesMatrix& M, double R) {
    std::map<int, double> row;
    for (const auto& [ij, t] : M.entries) row[ij.first] += tensor_contraction_norm(gd, t, R);
    double mx = 0.0;
    for (const auto& [e, s] : row) mx = std::max(mx, s);
    return mx;
}

}  // namespace loopalg

#endif
