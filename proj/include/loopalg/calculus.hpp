// Difference quotients, cyclic derivatives, their matrices, and the scalar
// 2x2 blocks entering the transport map. Blocks are computed numerically
// from their defining matrix expressions, never hardcoded.

#ifndef LOOPALG_CALCULUS_HPP
#define LOOPALG_CALCULUS_HPP

#include <array>

#include "loopalg/tensor.hpp"

namespace loopalg {

// word-level difference quotient: position k with letter e° splits the word,
// each hit priced at sigma(e).
inline TensorSeries partial_e(const GraphData& gd, int e, const WordSeries& x) {
    TensorSeries out;
    const int eo = gd.opposite(e);
    const double se = gd.sigma(e);
    for (const auto& [w, c] : x.terms) {
        for (int k = 0; k < w.degree(); ++k) {
            if (w.letters[k] != eo) continue;
            Word left, right;
            left.letters.assign(w.letters.begin(), w.letters.begin() + k);
            left.base = w.base;  // empty prefix sits at s(e°) = t(e)
            right.letters.assign(w.letters.begin() + k + 1, w.letters.end());
            right.base = right.empty() ? gd.target(w.letters[k]) : gd.source(right.letters.front());
            out.add(left, right, se * c);
        }
    }
    return out;
}

// cyclic derivative: rotate the hit letter out, weighting the rotated-out
// tail by its modular factors.
inline WordSeries cyclic_d_e(const GraphData& gd, int e, const WordSeries& x) {
    WordSeries out(0);
    const int eo = gd.opposite(e);
    const double seo = gd.sigma(eo);
    for (const auto& [w, c] : x.terms) {
        const int n = w.degree();
        for (int k = 0; k < n; ++k) {
            if (w.letters[k] != eo) continue;
            double f = seo;
            for (int l = k + 1; l < n; ++l) f *= gd.lambda(w.letters[l]);
            Word r;
            r.letters.reserve(n - 1);
            r.letters.insert(r.letters.end(), w.letters.begin() + k + 1, w.letters.end());
            r.letters.insert(r.letters.end(), w.letters.begin(), w.letters.begin() + k);
            r.base = r.empty() ? gd.source(e) : gd.source(r.letters.front());
            out.add(r, f * c);
        }
    }
    return out;
}

inline EdgeTuple cyclic_gradient(const GraphData& gd, const WordSeries& x) {
    EdgeTuple out;
    out.reserve(gd.graph.num_edges());
    for (int e = 0; e < gd.graph.num_edges(); ++e) out.push_back(cyclic_d_e(gd, e, x));
    return out;
}

// [J(Q)]_{ef} = partial_f Q_e
inline SeriesMatrix jacobian(const GraphData& gd, const EdgeTuple& q) {
    SeriesMatrix out;
    for (int e = 0; e < gd.graph.num_edges(); ++e)
        for (int f = 0; f < gd.graph.num_edges(); ++f) {
            TensorSeries t = partial_e(gd, f, q[e]);
            if (!t.empty()) out.add(e, f, t);
        }
    return out;
}

// ---------------------------------------------------------------------------
// Scalar 2x2 blocks
// ---------------------------------------------------------------------------

struct Mat2 {
    std::array<std::array<cx, 2>, 2> a{};

    static Mat2 identity() {
        Mat2 m;
        m.a[0][0] = m.a[1][1] = 1.0;
        return m;
    }
    friend Mat2 operator*(const Mat2& x, const Mat2& y) {
        Mat2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r.a[i][j] = x.a[i][0] * y.a[0][j] + x.a[i][1] * y.a[1][j];
        return r;
    }
    friend Mat2 operator+(const Mat2& x, const Mat2& y) {
        Mat2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r.a[i][j] = x.a[i][j] + y.a[i][j];
        return r;
    }
    friend Mat2 operator*(cx s, const Mat2& x) {
        Mat2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r.a[i][j] = s * x.a[i][j];
        return r;
    }
    Mat2 transpose() const {
        Mat2 r;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) r.a[i][j] = a[j][i];
        return r;
    }
    Mat2 inverse() const {
        cx det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        if (std::abs(det) < 1e-14) throw std::runtime_error("Mat2: singular block");
        Mat2 r;
        r.a[0][0] = a[1][1] / det;
        r.a[0][1] = -a[0][1] / det;
        r.a[1][0] = -a[1][0] / det;
        r.a[1][1] = a[0][0] / det;
        return r;
    }
};

enum class BlockKind { A, U, JcC, M3, M4 };

// The 2x2 block of the named matrix at a positive edge e, rows/columns
// indexed (e, e°).
inline Mat2 block(const GraphData& gd, BlockKind kind, int e) {
    if (!gd.graph.edge_positive(e)) throw std::invalid_argument("block: edge must start positive");
    const double lam = gd.lambda(e);
    const double s = gd.sigma(e), so = gd.sigma(gd.opposite(e));
    const cx i(0.0, 1.0);

    Mat2 A;
    A.a[0][0] = A.a[1][1] = 0.5 * (lam + 1.0 / lam);
    A.a[0][1] = -0.5 * i * (lam - 1.0 / lam);
    A.a[1][0] = 0.5 * i * (lam - 1.0 / lam);

    Mat2 U;
    const double su = 0.5 * std::sqrt(s + so);
    U.a[0][0] = su;
    U.a[0][1] = -su * i;
    U.a[1][0] = su;
    U.a[1][1] = su * i;

    switch (kind) {
        case BlockKind::A:
            return A;
        case BlockKind::U:
            return U;
        case BlockKind::JcC: {
            Mat2 inner = 2.0 * ((Mat2::identity() + A).inverse());
            return U * inner * U.transpose();
        }
        case BlockKind::M3: {
            Mat2 inner = 2.0 * (A.inverse() * (Mat2::identity() + A).inverse());
            return (U * inner * U.transpose()).inverse();
        }
        case BlockKind::M4: {
            Mat2 inner = 2.0 * (A * (Mat2::identity() + A).inverse());
            return (U * inner * U.transpose()).inverse();
        }
    }
    throw std::logic_error("block: unknown kind");
}

// Block-diagonal scalar matrix over all edges, assembled from the 2x2 blocks.
struct BlockMatrix {
    std::map<std::pair<int, int>, cx> entries;

    cx at(int e, int f) const {
        auto it = entries.find({e, f});
        return it == entries.end() ? cx{} : it->second;
    }
};

inline BlockMatrix block_matrix(const GraphData& gd, BlockKind kind) {
    BlockMatrix out;
    for (int e : gd.graph.positive_edges()) {
        Mat2 b = block(gd, kind, e);
        int eo = gd.opposite(e);
        int idx[2] = {e, eo};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                if (std::abs(b.a[i][j]) >= kPruneThreshold) out.entries[{idx[i], idx[j]}] = b.a[i][j];
    }
    return out;
}

// scalar-matrix # series-matrix
inline SeriesMatrix scalar_compose(const BlockMatrix& B, const SeriesMatrix& S) {
    SeriesMatrix out;
    for (const auto& [bij, c] : B.entries)
        for (const auto& [sjk, t] : S.entries) {
            if (bij.second != sjk.first) continue;
            TensorSeries scaled = t;
            scaled *= c;
            out.add(bij.first, sjk.second, scaled);
        }
    return out;
}

// Places the cyclic derivative of g into each letter slot of every monomial
// of x, summed over slots.
inline WordSeries insert_gradient(const GraphData& gd, const WordSeries& x, const WordSeries& g,
                                  std::optional<int> trunc = std::nullopt) {
    EdgeTuple dg = cyclic_gradient(gd, g);
    WordSeries out(0);
    out.trunc = trunc ? trunc : x.trunc;
    for (const auto& [w, c] : x.terms) {
        for (int pos = 0; pos < w.degree(); ++pos) {
            const WordSeries& ins = dg[w.letters[pos]];
            for (const auto& [iw, ic] : ins.terms) {
                Word nw;
                nw.base = w.base;
                nw.letters.reserve(w.degree() - 1 + iw.degree());
                nw.letters.insert(nw.letters.end(), w.letters.begin(), w.letters.begin() + pos);
                nw.letters.insert(nw.letters.end(), iw.letters.begin(), iw.letters.end());
                nw.letters.insert(nw.letters.end(), w.letters.begin() + pos + 1, w.letters.end());
                if (!nw.letters.empty() && nw.base < 0) nw.base = gd.source(nw.letters.front());
                out.add(nw, c * ic);
            }
        }
    }
    return out;
}

}  // namespace loopalg

#endif
