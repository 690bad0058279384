// Non-crossing pairing combinatorics and the pairing-sum trace: the
// combinatorial route to every moment, independent of the operator engine.

#ifndef LOOPALG_PAIRING_HPP
#define LOOPALG_PAIRING_HPP

#include <map>
#include <mutex>
#include <vector>

#include "loopalg/word.hpp"

namespace loopalg {

// A perfect non-crossing pairing of {0..2n-1}, stored as (i<j) pairs.
struct NonCrossingPairing {
    std::vector<std::pair<int, int>> pairs;
};

namespace detail {
// Point lo pairs with an odd-offset partner j; the enclosed and remaining
// ranges are paired independently.
inline std::vector<NonCrossingPairing> enumerate_nc(int lo, int hi) {
    std::vector<NonCrossingPairing> out;
    if (lo > hi) {
        out.push_back(NonCrossingPairing{});
        return out;
    }
    for (int j = lo + 1; j <= hi; j += 2) {
        auto inner = enumerate_nc(lo + 1, j - 1);
        auto outer = enumerate_nc(j + 1, hi);
        for (const auto& in : inner)
            for (const auto& ou : outer) {
                NonCrossingPairing p;
                p.pairs.reserve(1 + in.pairs.size() + ou.pairs.size());
                p.pairs.emplace_back(lo, j);
                p.pairs.insert(p.pairs.end(), in.pairs.begin(), in.pairs.end());
                p.pairs.insert(p.pairs.end(), ou.pairs.begin(), ou.pairs.end());
                out.push_back(std::move(p));
            }
    }
    return out;
}
}  // namespace detail

// All non-crossing perfect pairings of 2n points, memoized per n.
inline const std::vector<NonCrossingPairing>& enumerate_pairings(int n) {
    if (n < 0) throw std::invalid_argument("enumerate_pairings: negative n");
    static std::mutex mtx;
    static std::map<int, std::vector<NonCrossingPairing>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    return cache.emplace(n, detail::enumerate_nc(0, 2 * n - 1)).first->second;
}

// Weight of one pair (i<j): the letters must be opposite and the pair prices
// at sigma(e_i). Pairings violating the matching contribute zero.
inline double pairing_weight(const GraphData& gd, const std::vector<int>& letters,
                             const NonCrossingPairing& p) {
    double w = 1.0;
    for (auto [i, j] : p.pairs) {
        if (letters[j] != gd.opposite(letters[i])) return 0.0;
        w *= gd.sigma(letters[i]);
    }
    return w;
}

// Interval dynamic program for the same sum; O(d^3) instead of Catalan-many
// terms. Equals the vacuum expectation of the operator word on any input.
inline double wick_moment(const GraphData& gd, const Word& w) {
    const int d = w.degree();
    if (d == 0) return 1.0;
    if (d % 2 != 0) return 0.0;
    // m[i][j] = moment of letters[i..j] inclusive; intervals of even length.
    std::vector<std::vector<double>> m(d + 1, std::vector<double>(d + 1, 0.0));
    auto val = [&](int i, int j) { return i > j ? 1.0 : m[i][j]; };
    for (int len = 2; len <= d; len += 2)
        for (int i = 0; i + len - 1 < d; ++i) {
            int j = i + len - 1;
            double acc = 0.0;
            for (int k = i + 1; k <= j; k += 2)
                if (w.letters[k] == gd.opposite(w.letters[i]))
                    acc += gd.sigma(w.letters[i]) * val(i + 1, k - 1) * val(k + 1, j);
            m[i][j] = acc;
        }
    return m[0][d - 1];
}

// The canonical trace pairing on loops. Odd or non-loop words evaluate to 0
// by convention; the operator vacuum state needs no such gate.
inline cx pairing_moment(const GraphData& gd, const Word& w) {
    const int d = w.degree();
    if (d % 2 != 0) return 0.0;
    if (!is_loop(gd, w)) return 0.0;
    if (d <= 16) {
        double acc = 0.0;
        for (const auto& p : enumerate_pairings(d / 2)) acc += pairing_weight(gd, w.letters, p);
        return acc;
    }
    return wick_moment(gd, w);
}

inline cx pairing_state(const GraphData& gd, const WordSeries& x) {
    cx acc = 0.0;
    for (const auto& [w, c] : x.terms) acc += c * pairing_moment(gd, w);
    return acc;
}

// The canonical degree-2 potential: (1/2) sum_e sigma(e) . ee°. This is the
// normalization whose cyclic gradient is exactly the generator tuple.
inline WordSeries v0(const GraphData& gd) {
    WordSeries out(0);
    for (int e = 0; e < gd.graph.num_edges(); ++e) {
        Word w = make_word(gd, {e, gd.opposite(e)});
        out.add(w, 0.5 * gd.sigma(e));
    }
    return out;
}

// Vertex-resolved trace on grading-k elements: close the k side strings
// (which forces e_i = f_i, each closed string weighing sigma(f_i)^-3),
// scale by delta^-k, and pair the remaining loop. The string weight is the
// one whose vertex sum reproduces the grading-k state.
inline std::map<int, cx> trace_k(const GraphData& gd, const WordSeries& x) {
    std::map<int, cx> out;
    const int k = x.k;
    const double dk = std::pow(gd.delta(), -static_cast<double>(k));
    for (const auto& [w, c] : x.terms) {
        if (k == 0) {
            if (!is_loop(gd, w)) continue;
            out[w.base] += c * pairing_moment(gd, w);
            continue;
        }
        GrkParts p = grk_parts(gd, w, k);
        double weight = dk;
        bool match = true;
        for (int i = 0; i < k; ++i) {
            if (p.e[i] != p.f[i]) {
                match = false;
                break;
            }
            weight /= gd.sigma(p.f[i]) * gd.sigma(p.f[i]) * gd.sigma(p.f[i]);
        }
        if (!match) continue;
        out[p.u.base] += c * weight * pairing_moment(gd, p.u);
    }
    return out;
}

}  // namespace loopalg

#endif
