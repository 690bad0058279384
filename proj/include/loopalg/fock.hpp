// Exact sparse simulation of the creation/annihilation operators on the two
// Fock spaces (plain, with a vacuum; and the vertex-bimodule variant), the
// vacuum and vertex states, the grading-k operator images, and the inclusion
// maps between consecutive gradings. This module is the ground-truth oracle
// for every moment in the system.

#ifndef LOOPALG_FOCK_HPP
#define LOOPALG_FOCK_HPP

#include <map>
#include <vector>

#include "loopalg/word.hpp"

namespace loopalg {

struct FockLabel {
    enum Kind : int { Vacuum = 0, Vertex = 1, Tensor = 2 };
    Kind kind = Vacuum;
    int vertex = -1;           // for Vertex labels
    std::vector<int> factors;  // for Tensor labels, edge indices front-first

    static FockLabel vacuum() { return FockLabel{}; }
    static FockLabel at_vertex(int v) { return FockLabel{Vertex, v, {}}; }
    static FockLabel tensor(std::vector<int> fs) { return FockLabel{Tensor, -1, std::move(fs)}; }

    friend bool operator<(const FockLabel& a, const FockLabel& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        if (a.vertex != b.vertex) return a.vertex < b.vertex;
        return a.factors < b.factors;
    }
};

// Plain vectors are grounded in the vacuum; bimodule vectors in vertex
// functions, and their tensors must stay composable paths.
enum class FockSpace { Plain, Bimodule };

struct FockVector {
    FockSpace space = FockSpace::Plain;
    std::map<FockLabel, cx> terms;

    static FockVector vacuum(cx c = 1.0) {
        FockVector v;
        v.terms.emplace(FockLabel::vacuum(), c);
        return v;
    }
    static FockVector at_vertex(int vertex, cx c = 1.0) {
        FockVector v;
        v.space = FockSpace::Bimodule;
        v.terms.emplace(FockLabel::at_vertex(vertex), c);
        return v;
    }

    void add(const FockLabel& l, cx c) {
        auto [it, inserted] = terms.try_emplace(l, c);
        if (!inserted) it->second += c;
        if (std::abs(it->second) < kPruneThreshold) terms.erase(it);
    }

    cx coeff(const FockLabel& l) const {
        auto it = terms.find(l);
        return it == terms.end() ? cx{} : it->second;
    }

    FockVector& operator+=(const FockVector& o) {
        for (const auto& [l, c] : o.terms) add(l, c);
        return *this;
    }

    int max_depth() const {
        int d = 0;
        for (const auto& [l, c] : terms) {
            (void)c;
            d = std::max(d, static_cast<int>(l.factors.size()));
        }
        return d;
    }
};

struct FockError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Default hard cap on operator-word length; the exploration is exact but its
// cost grows with depth, so longer words must opt in explicitly.
constexpr int kDefaultMaxWordLen = 16;

// squared Hilbert norm of a single edge vector
inline double edge_norm_sq(const GraphData& gd, int e) { return 1.0 / gd.sigma(e); }

// Creation by e.
inline FockVector apply_l(const GraphData& gd, int e, const FockVector& x) {
    FockVector out;
    out.space = x.space;
    for (const auto& [l, c] : x.terms) {
        switch (l.kind) {
            case FockLabel::Vacuum: {
                if (x.space != FockSpace::Plain)
                    throw FockError("apply_l: vacuum label in a bimodule vector");
                out.add(FockLabel::tensor({e}), c);
                break;
            }
            case FockLabel::Vertex: {
                if (gd.target(e) == l.vertex) out.add(FockLabel::tensor({e}), c);
                break;
            }
            case FockLabel::Tensor: {
                if (x.space == FockSpace::Bimodule && gd.target(e) != gd.source(l.factors.front()))
                    break;  // non-composable tensors vanish in the bimodule
                std::vector<int> fs;
                fs.reserve(l.factors.size() + 1);
                fs.push_back(e);
                fs.insert(fs.end(), l.factors.begin(), l.factors.end());
                out.add(FockLabel::tensor(std::move(fs)), c);
                break;
            }
        }
    }
    return out;
}

// Annihilation: strips a leading e with weight |e|^2; on the bimodule the
// length-1 case lands on the vertex function at t(e).
inline FockVector apply_l_star(const GraphData& gd, int e, const FockVector& x) {
    FockVector out;
    out.space = x.space;
    const double w = edge_norm_sq(gd, e);
    for (const auto& [l, c] : x.terms) {
        if (l.kind != FockLabel::Tensor) continue;  // kills vacuum and vertex labels
        if (l.factors.front() != e) continue;
        if (l.factors.size() == 1) {
            if (x.space == FockSpace::Plain)
                out.add(FockLabel::vacuum(), w * c);
            else
                out.add(FockLabel::at_vertex(gd.target(e)), w * c);
        } else {
            out.add(FockLabel::tensor({l.factors.begin() + 1, l.factors.end()}), w * c);
        }
    }
    return out;
}

// The generalized circular generator for edge e.
inline FockVector apply_c(const GraphData& gd, int e, const FockVector& x) {
    FockVector out = apply_l(gd, e, x);
    out += apply_l_star(gd, gd.opposite(e), x);
    return out;
}

// Right-to-left application of the operator word.
inline FockVector apply_c_word(const GraphData& gd, const std::vector<int>& letters,
                               FockVector x, int max_len = kDefaultMaxWordLen) {
    if (static_cast<int>(letters.size()) > max_len)
        throw FockError("apply_c_word: word of length " + std::to_string(letters.size()) +
                        " exceeds the configured limit " + std::to_string(max_len));
    for (auto it = letters.rbegin(); it != letters.rend(); ++it) x = apply_c(gd, *it, x);
    return x;
}

// <vacuum, c(e_1)...c(e_m) vacuum> computed exactly.
inline cx vacuum_moment(const GraphData& gd, const std::vector<int>& letters,
                        int max_len = kDefaultMaxWordLen) {
    FockVector v = apply_c_word(gd, letters, FockVector::vacuum(), max_len);
    return v.coeff(FockLabel::vacuum());
}

inline cx vacuum_moment(const GraphData& gd, const Word& w, int max_len = kDefaultMaxWordLen) {
    return vacuum_moment(gd, w.letters, max_len);
}

// Linear extension over a truncated series (exact per term).
inline cx state(const GraphData& gd, const WordSeries& x, int max_len = kDefaultMaxWordLen) {
    cx acc = 0.0;
    for (const auto& [w, c] : x.terms) acc += c * vacuum_moment(gd, w, max_len);
    return acc;
}

// Vertex state of the bimodule construction: apply the word to the vertex
// function and read its coefficient back.
inline cx phi_v(const GraphData& gd, const std::vector<int>& letters, int v,
                int max_len = kDefaultMaxWordLen) {
    if (static_cast<int>(letters.size()) > max_len)
        throw FockError("phi_v: word exceeds the configured length limit");
    FockVector x = FockVector::at_vertex(v);
    for (auto it = letters.rbegin(); it != letters.rend(); ++it) x = apply_c(gd, *it, x);
    return x.coeff(FockLabel::at_vertex(v));
}

inline cx phi_v(const GraphData& gd, const Word& w, int v, int max_len = kDefaultMaxWordLen) {
    return phi_v(gd, w.letters, v, max_len);
}

// ---------------------------------------------------------------------------
// Grading-k operators
// ---------------------------------------------------------------------------

// Image of one grading-k word u.f_k°..f_1°.e_1..e_k applied to a vector:
// annihilate f_1..f_k, run the word u, create e_k..e_1.
inline FockVector c_k_apply_word(const GraphData& gd, const Word& w, int k, FockVector vec,
                                 int max_len = kDefaultMaxWordLen) {
    GrkParts p = grk_parts(gd, w, k);
    for (int i = 0; i < k; ++i) vec = apply_l_star(gd, p.f[i], vec);
    if (static_cast<int>(p.u.letters.size()) > max_len)
        throw FockError("c_k_apply: middle word exceeds the configured length limit");
    for (auto it = p.u.letters.rbegin(); it != p.u.letters.rend(); ++it)
        vec = apply_c(gd, *it, vec);
    for (int i = k; i-- > 0;) vec = apply_l(gd, p.e[i], vec);
    return vec;
}

inline FockVector c_k_apply(const GraphData& gd, const WordSeries& x, const FockVector& vec,
                            int max_len = kDefaultMaxWordLen) {
    FockVector out;
    out.space = vec.space;
    for (const auto& [w, c] : x.terms) {
        FockVector part = c_k_apply_word(gd, w, x.k, vec, max_len);
        for (auto& [l, pc] : part.terms) out.add(l, c * pc);
    }
    return out;
}

// The grading-k state: weighted diagonal sum over length-k path tensors,
// the weight of a path being prod_i sigma(f_i)^-1.
inline cx phi_k(const GraphData& gd, const WordSeries& x, int max_len = kDefaultMaxWordLen) {
    const int k = x.k;
    if (k == 0) return state(gd, x, max_len);
    cx acc = 0.0;
    const double dk = std::pow(gd.delta(), -static_cast<double>(k));
    for (const Word& f : enumerate_paths(gd, k)) {
        double weight = dk;
        double normsq = 1.0;
        for (int e : f.letters) {
            weight /= gd.sigma(e);
            normsq *= edge_norm_sq(gd, e);
        }
        FockVector base;
        base.space = FockSpace::Plain;
        base.add(FockLabel::tensor(f.letters), 1.0);
        FockVector img = c_k_apply(gd, x, base, max_len);
        acc += weight * normsq * img.coeff(FockLabel::tensor(f.letters));
    }
    return acc;
}

// Series-level inclusion from grading k-1 into grading k: conjugate by every
// edge arriving at the side-string anchor, with weight sigma(e). That weight
// is the one making the inclusion multiplicative: the middle contraction of
// i(x)i(y) produces sigma(e)^-1 per matched string, which must cancel one of
// the two conjugation weights.
inline WordSeries include_up(const GraphData& gd, const WordSeries& x) {
    const int k = x.k + 1;
    WordSeries out(k);
    out.trunc = x.trunc ? std::optional<int>(*x.trunc + 2) : std::nullopt;
    for (const auto& [w, c] : x.terms) {
        if (!grk_word_valid(gd, w, x.k))
            throw std::invalid_argument("include_up: invalid grading-" + std::to_string(x.k) +
                                        " word");
        const int d = w.degree();
        const int anchor = (x.k == 0) ? w.base : gd.source(w.letters[d - x.k]);
        for (int e = 0; e < gd.graph.num_edges(); ++e) {
            if (gd.target(e) != anchor) continue;
            Word nw;
            nw.base = w.base;
            nw.letters.reserve(d + 2);
            nw.letters.insert(nw.letters.end(), w.letters.begin(), w.letters.end() - x.k);
            nw.letters.push_back(gd.opposite(e));
            nw.letters.push_back(e);
            nw.letters.insert(nw.letters.end(), w.letters.end() - x.k, w.letters.end());
            if (nw.base < 0) nw.base = gd.source(nw.letters.front());
            out.add(nw, c * gd.sigma(e));
        }
    }
    return out;
}

}  // namespace loopalg

#endif
