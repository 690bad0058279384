// Edge words and sparse complex series over them: the graded algebra of
// loop functions, its rotations, norms, and substitution calculus.

#ifndef LOOPALG_WORD_HPP
#define LOOPALG_WORD_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "loopalg/graph.hpp"

namespace loopalg {

using cx = std::complex<double>;

constexpr double kPruneThreshold = 1e-300;

// A directed edge path. `base` is the source of the first letter; for the
// empty word it is the supporting vertex.
struct Word {
    int base = -1;
    std::vector<int> letters;

    Word() = default;
    explicit Word(int base_vertex) : base(base_vertex) {}
    Word(int base_vertex, std::vector<int> ls) : base(base_vertex), letters(std::move(ls)) {}

    int degree() const { return static_cast<int>(letters.size()); }
    bool empty() const { return letters.empty(); }

    friend bool operator<(const Word& a, const Word& b) {
        if (a.letters.size() != b.letters.size()) return a.letters.size() < b.letters.size();
        if (a.letters != b.letters) return a.letters < b.letters;
        return a.base < b.base;
    }
    friend bool operator==(const Word& a, const Word& b) {
        return a.base == b.base && a.letters == b.letters;
    }
};

inline Word make_word(const GraphData& gd, const std::vector<int>& letters) {
    if (letters.empty()) throw std::invalid_argument("make_word: empty word needs a base vertex");
    Word w(gd.source(letters.front()), letters);
    for (size_t i = 0; i + 1 < letters.size(); ++i)
        if (gd.target(letters[i]) != gd.source(letters[i + 1]))
            throw std::invalid_argument("make_word: letters " + std::to_string(i) + "," +
                                        std::to_string(i + 1) + " do not compose");
    return w;
}

inline int word_end(const GraphData& gd, const Word& w) {
    return w.empty() ? w.base : gd.target(w.letters.back());
}

inline bool is_path(const GraphData& gd, const Word& w) {
    if (w.empty()) return w.base >= 0;
    if (w.base != gd.source(w.letters.front())) return false;
    for (size_t i = 0; i + 1 < w.letters.size(); ++i)
        if (gd.target(w.letters[i]) != gd.source(w.letters[i + 1])) return false;
    return true;
}

inline bool is_loop(const GraphData& gd, const Word& w) {
    return is_path(gd, w) && word_end(gd, w) == w.base;
}

// Sparse series over words. `k` is the grading tag (element of the k-graded
// algebra; 0 by default); `trunc` the optional retained-degree cap.
struct WordSeries {
    int k = 0;
    std::optional<int> trunc;
    std::map<Word, cx> terms;

    WordSeries() = default;
    explicit WordSeries(int grading) : k(grading) {}

    bool empty() const { return terms.empty(); }
    int min_degree() const { return terms.empty() ? 0 : terms.begin()->first.degree(); }
    int max_degree() const { return terms.empty() ? 0 : terms.rbegin()->first.degree(); }

    void add(const Word& w, cx c) {
        if (trunc && w.degree() > *trunc) return;
        auto [it, inserted] = terms.try_emplace(w, c);
        if (!inserted) it->second += c;
        if (std::abs(it->second) < kPruneThreshold) terms.erase(it);
    }

    cx coeff(const Word& w) const {
        auto it = terms.find(w);
        return it == terms.end() ? cx{} : it->second;
    }

    WordSeries& operator+=(const WordSeries& o) {
        for (const auto& [w, c] : o.terms) add(w, c);
        return *this;
    }
    WordSeries& operator-=(const WordSeries& o) {
        for (const auto& [w, c] : o.terms) add(w, -c);
        return *this;
    }
    WordSeries& operator*=(cx s) {
        if (std::abs(s) < kPruneThreshold) {
            terms.clear();
            return *this;
        }
        for (auto& [w, c] : terms) c *= s;
        return *this;
    }
};

inline WordSeries operator+(WordSeries a, const WordSeries& b) { return a += b; }
inline WordSeries operator-(WordSeries a, const WordSeries& b) { return a -= b; }
inline WordSeries operator*(cx s, WordSeries a) { return a *= s; }

inline WordSeries single_word(const Word& w, cx c = 1.0, int k = 0) {
    WordSeries s(k);
    s.add(w, c);
    return s;
}

inline WordSeries truncated(const WordSeries& x, int degree_cap) {
    WordSeries out(x.k);
    out.trunc = degree_cap;
    for (const auto& [w, c] : x.terms) out.add(w, c);
    return out;
}

inline WordSeries pi_n(const WordSeries& x, int n) {
    WordSeries out(x.k);
    out.trunc = x.trunc;
    for (const auto& [w, c] : x.terms)
        if (w.degree() == n) out.add(w, c);
    return out;
}

// Removes the degree-0 component (the projection written Pi in the solver).
inline WordSeries remove_constants(const WordSeries& x) {
    WordSeries out(x.k);
    out.trunc = x.trunc;
    for (const auto& [w, c] : x.terms)
        if (w.degree() > 0) out.add(w, c);
    return out;
}

inline double coeff_distance(const WordSeries& a, const WordSeries& b) {
    double d = 0.0;
    for (const auto& [w, c] : a.terms) d = std::max(d, std::abs(c - b.coeff(w)));
    for (const auto& [w, c] : b.terms) d = std::max(d, std::abs(c - a.coeff(w)));
    return d;
}

// ---------------------------------------------------------------------------
// Products
// ---------------------------------------------------------------------------

// Gr_0 product: loops concatenate when they share a base vertex, vanish
// otherwise. Empty words act as the unit of their own vertex only.
inline WordSeries multiply(const WordSeries& x, const WordSeries& y) {
    if (x.k != 0 || y.k != 0)
        throw std::invalid_argument("multiply: both factors must have grading 0");
    WordSeries out(0);
    out.trunc = x.trunc ? x.trunc : y.trunc;
    for (const auto& [u, cu] : x.terms)
        for (const auto& [w, cw] : y.terms) {
            if (u.base != w.base) continue;
            Word p = u;
            p.letters.insert(p.letters.end(), w.letters.begin(), w.letters.end());
            out.add(p, cu * cw);
        }
    return out;
}

// Operator-level product (the product of the operator images): unconditional
// concatenation, with degree-0 words acting as the unit regardless of their
// supporting vertex, which the operator picture forgets.
inline Word concat_words(const Word& u, const Word& w) {
    if (u.empty()) return w;
    if (w.empty()) return u;
    Word p = u;
    p.letters.insert(p.letters.end(), w.letters.begin(), w.letters.end());
    return p;
}

inline WordSeries concat_mul(const WordSeries& x, const WordSeries& y,
                             std::optional<int> trunc = std::nullopt) {
    WordSeries out(0);
    out.trunc = trunc ? trunc : (x.trunc ? x.trunc : y.trunc);
    for (const auto& [u, cu] : x.terms)
        for (const auto& [w, cw] : y.terms) out.add(concat_words(u, w), cu * cw);
    return out;
}

// ---------------------------------------------------------------------------
// Grading-k structure
// ---------------------------------------------------------------------------

// A grading-k word u.f_k°...f_1°.e_1...e_k: the last k letters are e_1..e_k,
// the k before them hold f_k°...f_1°, the head is u.
struct GrkParts {
    Word u;
    std::vector<int> f;  // f_1..f_k
    std::vector<int> e;  // e_1..e_k
};

inline bool grk_word_valid(const GraphData& gd, const Word& w, int k) {
    return k >= 0 && w.degree() >= 2 * k && is_loop(gd, w);
}

inline GrkParts grk_parts(const GraphData& gd, const Word& w, int k) {
    if (!grk_word_valid(gd, w, k))
        throw std::invalid_argument("grk_parts: word is not a valid grading-" + std::to_string(k) +
                                    " element");
    GrkParts p;
    const int d = w.degree();
    p.u.letters.assign(w.letters.begin(), w.letters.begin() + (d - 2 * k));
    p.u.base = w.base;
    p.f.resize(k);
    p.e.resize(k);
    for (int i = 1; i <= k; ++i) {
        p.f[i - 1] = gd.opposite(w.letters[d - k - i]);
        p.e[i - 1] = w.letters[d - k + i - 1];
    }
    return p;
}

inline Word grk_assemble(const GraphData& gd, const Word& u, const std::vector<int>& f,
                         const std::vector<int>& e) {
    Word w = u;
    for (size_t i = f.size(); i-- > 0;) w.letters.push_back(gd.opposite(f[i]));
    for (int ei : e) w.letters.push_back(ei);
    if (w.base < 0 && !w.letters.empty()) w.base = gd.source(w.letters.front());
    return w;
}

// Conjugate-linear involution. Grading 0: reverse the word and flip every
// letter. Grading k >= 1: the adjoint compatible with the operator picture
// reverses the u and e/f blocks separately.
inline WordSeries involution(const GraphData& gd, const WordSeries& x) {
    WordSeries out(x.k);
    out.trunc = x.trunc;
    for (const auto& [w, c] : x.terms) {
        if (x.k == 0) {
            Word r(w.base);
            if (!w.empty()) {
                r.letters.resize(w.letters.size());
                for (size_t i = 0; i < w.letters.size(); ++i)
                    r.letters[w.letters.size() - 1 - i] = gd.opposite(w.letters[i]);
                r.base = gd.source(r.letters.front());
            }
            out.add(r, std::conj(c));
        } else {
            GrkParts p = grk_parts(gd, w, x.k);
            Word uop(word_end(gd, p.u));
            uop.letters.resize(p.u.letters.size());
            for (size_t i = 0; i < p.u.letters.size(); ++i)
                uop.letters[p.u.letters.size() - 1 - i] = gd.opposite(p.u.letters[i]);
            out.add(grk_assemble(gd, uop, p.e, p.f), std::conj(c));
        }
    }
    return out;
}

// Graded product: middle strings pair off with weight sigma(h_i)^-1 each.
inline WordSeries wedge_k(const GraphData& gd, const WordSeries& x, const WordSeries& y) {
    if (x.k != y.k || x.k < 1)
        throw std::invalid_argument("wedge_k: factors must share a grading k >= 1");
    const int k = x.k;
    WordSeries out(k);
    out.trunc = x.trunc ? x.trunc : y.trunc;
    for (const auto& [w, cw] : x.terms) {
        GrkParts a = grk_parts(gd, w, k);
        for (const auto& [v, cv] : y.terms) {
            GrkParts b = grk_parts(gd, v, k);
            double weight = 1.0;
            bool match = true;
            for (int i = 0; i < k; ++i) {
                if (a.f[i] != b.e[i]) {
                    match = false;
                    break;
                }
                weight /= gd.sigma(b.e[i]);
            }
            if (!match) continue;
            Word uu = a.u;
            uu.letters.insert(uu.letters.end(), b.u.letters.begin(), b.u.letters.end());
            if (uu.base < 0) uu.base = b.u.base;
            out.add(grk_assemble(gd, uu, b.f, a.e), weight * cw * cv);
        }
    }
    return out;
}

// Unit for wedge_k: sum over length-k paths p of prod sigma(p_i) . p°p.
inline WordSeries grk_unit(const GraphData& gd, int k);

// ---------------------------------------------------------------------------
// Rotation maps
// ---------------------------------------------------------------------------

// sigma_{-i}: scales a word by prod_l lambda(e_l); loops are exactly fixed.
inline WordSeries sigma_minus_i(const GraphData& gd, const WordSeries& x) {
    WordSeries out(x.k);
    out.trunc = x.trunc;
    for (const auto& [w, c] : x.terms) {
        if (is_loop(gd, w)) {
            out.add(w, c);
        } else {
            double f = 1.0;
            for (int e : w.letters) f *= gd.lambda(e);
            out.add(w, f * c);
        }
    }
    return out;
}

// One clockwise rotation of the last letter, with its modular weight.
inline std::pair<Word, double> rotate_word(const GraphData& gd, const Word& w, int k) {
    const int d = w.degree();
    if (d == 0) return {w, 1.0};
    const int r = ((k % d) + d) % d;
    double factor = 1.0;
    if (is_loop(gd, w)) {
        if (r != 0) factor = gd.perron.mu[gd.target(w.letters[d - 1])] / gd.perron.mu[gd.source(w.letters[d - r])];
    } else {
        double all = 1.0;
        for (int e : w.letters) all *= gd.lambda(e);
        long full = (k - r) / d;
        factor = std::pow(all, static_cast<double>(full));
        for (int i = d - r; i < d; ++i) factor *= gd.lambda(w.letters[i]);
    }
    if (r == 0) return {w, factor};
    Word out;
    out.letters.reserve(d);
    out.letters.insert(out.letters.end(), w.letters.end() - r, w.letters.end());
    out.letters.insert(out.letters.end(), w.letters.begin(), w.letters.end() - r);
    out.base = gd.source(out.letters.front());
    return {out, factor};
}

inline WordSeries rho_power(const GraphData& gd, const WordSeries& x, int k) {
    if (k < 0) throw std::invalid_argument("rho_power: negative power");
    WordSeries out(x.k);
    out.trunc = x.trunc;
    for (const auto& [w, c] : x.terms) {
        auto [rw, f] = rotate_word(gd, w, k);
        out.add(rw, f * c);
    }
    return out;
}

inline WordSeries rho(const GraphData& gd, const WordSeries& x) { return rho_power(gd, x, 1); }

// N: scale a degree-n term by n. Sigma: its inverse on positive degrees.
inline WordSeries number_map(const WordSeries& x) {
    WordSeries out(x.k);
    out.trunc = x.trunc;
    for (const auto& [w, c] : x.terms)
        if (w.degree() > 0) out.add(w, static_cast<double>(w.degree()) * c);
    return out;
}

inline WordSeries sigma_inv_map(const WordSeries& x) {
    WordSeries out(x.k);
    out.trunc = x.trunc;
    for (const auto& [w, c] : x.terms) {
        if (w.degree() == 0)
            throw std::invalid_argument("sigma_inv_map: undefined on constant terms");
        out.add(w, c / static_cast<double>(w.degree()));
    }
    return out;
}

// S: average over the full rotation orbit (degree-0 terms are fixed).
inline WordSeries symmetrize(const GraphData& gd, const WordSeries& x) {
    WordSeries out(x.k);
    out.trunc = x.trunc;
    for (const auto& [w, c] : x.terms) {
        const int d = w.degree();
        if (d == 0) {
            out.add(w, c);
            continue;
        }
        for (int k = 1; k <= d; ++k) {
            auto [rw, f] = rotate_word(gd, w, k);
            out.add(rw, c * f / static_cast<double>(d));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Banach norms
// ---------------------------------------------------------------------------

// Per-letter price of edge e at radius R (the X-basis conversion weight).
inline double letter_weight(const GraphData& gd, int e, double R) {
    return std::sqrt(gd.sigma(e) + gd.sigma(gd.opposite(e))) * R;
}

inline double word_weight(const GraphData& gd, const Word& w, double R) {
    double p = 1.0;
    for (int e : w.letters) p *= letter_weight(gd, e, R);
    return p;
}

inline double norm_R(const GraphData& gd, const WordSeries& x, double R) {
    if (R <= 0) throw std::invalid_argument("norm_R: R must be positive");
    double s = 0.0;
    for (const auto& [w, c] : x.terms) s += std::abs(c) * word_weight(gd, w, R);
    return s;
}

// Sum over degrees of the sup over rotations of the degree part.
inline double norm_R_sigma(const GraphData& gd, const WordSeries& x, double R) {
    if (R <= 0) throw std::invalid_argument("norm_R_sigma: R must be positive");
    std::map<int, WordSeries> by_degree;
    for (const auto& [w, c] : x.terms)
        by_degree.try_emplace(w.degree(), WordSeries(x.k)).first->second.add(w, c);
    double total = 0.0;
    for (const auto& [d, part] : by_degree) {
        double sup = norm_R(gd, part, R);
        for (int k = 1; k < d; ++k) sup = std::max(sup, norm_R(gd, rho_power(gd, part, k), R));
        total += sup;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Substitution
// ---------------------------------------------------------------------------

// Images keyed by edge; image words must run from s(e) to t(e).
using EdgeTuple = std::vector<WordSeries>;

inline void check_path_compatible(const GraphData& gd, int e, const WordSeries& image) {
    for (const auto& [w, c] : image.terms) {
        (void)c;
        if (!is_path(gd, w) || w.base != gd.source(e) || word_end(gd, w) != gd.target(e))
            throw std::invalid_argument("substitute: image of edge '" + gd.graph.edge_id(e) +
                                        "' contains a word not running s(e)->t(e)");
    }
}

inline WordSeries substitute(const GraphData& gd, const WordSeries& x, const EdgeTuple& images,
                             int degree_cap) {
    for (int e = 0; e < gd.graph.num_edges(); ++e) check_path_compatible(gd, e, images[e]);
    WordSeries out(x.k);
    out.trunc = degree_cap;
    for (const auto& [w, c] : x.terms) {
        WordSeries acc = single_word(Word(w.base), c);
        acc.trunc = degree_cap;
        for (int e : w.letters) {
            acc = concat_mul(acc, images[e], degree_cap);
            if (acc.empty()) break;
        }
        out += acc;
    }
    return out;
}

inline EdgeTuple identity_tuple(const GraphData& gd) {
    EdgeTuple t;
    t.reserve(gd.graph.num_edges());
    for (int e = 0; e < gd.graph.num_edges(); ++e)
        t.push_back(single_word(make_word(gd, {e})));
    return t;
}

// ---------------------------------------------------------------------------
// Path enumeration helpers (deterministic order)
// ---------------------------------------------------------------------------

inline void enumerate_paths_rec(const GraphData& gd, Word& cur, int len,
                                const std::function<void(const Word&)>& emit) {
    if (cur.degree() == len) {
        emit(cur);
        return;
    }
    int at = word_end(gd, cur);
    for (int e : gd.graph.out_edges[at]) {
        cur.letters.push_back(e);
        enumerate_paths_rec(gd, cur, len, emit);
        cur.letters.pop_back();
    }
}

// All paths of exactly `len` edges starting anywhere (or from `from` if >= 0).
inline std::vector<Word> enumerate_paths(const GraphData& gd, int len, int from = -1) {
    std::vector<Word> out;
    for (int v = 0; v < gd.graph.num_vertices(); ++v) {
        if (from >= 0 && v != from) continue;
        Word cur(v);
        enumerate_paths_rec(gd, cur, len, [&](const Word& w) { out.push_back(w); });
    }
    return out;
}

inline std::vector<Word> enumerate_loops(const GraphData& gd, int len, int base = -1) {
    std::vector<Word> out;
    for (int v = 0; v < gd.graph.num_vertices(); ++v) {
        if (base >= 0 && v != base) continue;
        Word cur(v);
        enumerate_paths_rec(gd, cur, len, [&](const Word& w) {
            if (word_end(gd, w) == w.base) out.push_back(w);
        });
    }
    return out;
}

inline WordSeries grk_unit(const GraphData& gd, int k) {
    if (k < 0) throw std::invalid_argument("grk_unit: negative grading");
    WordSeries out(k);
    if (k == 0) {
        for (int v = 0; v < gd.graph.num_vertices(); ++v) out.add(Word(v), 1.0);
        return out;
    }
    for (const Word& p : enumerate_paths(gd, k)) {
        double weight = 1.0;
        for (int e : p.letters) weight *= gd.sigma(e);
        std::vector<int> f(p.letters.begin(), p.letters.end());
        // the empty head sits where the reversed block starts: the path's end
        out.add(grk_assemble(gd, Word(word_end(gd, p)), f, f), weight);
    }
    return out;
}

inline std::string format_word(const GraphData& gd, const Word& w) {
    if (w.empty()) return "(" + gd.graph.vertex_id(w.base >= 0 ? w.base : 0) + ")";
    std::string s;
    for (size_t i = 0; i < w.letters.size(); ++i) {
        if (i) s += ".";
        s += gd.graph.edge_id(w.letters[i]);
    }
    return s;
}

}  // namespace loopalg

#endif
