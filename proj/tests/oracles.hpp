// Test-only oracles, independent of the library paths they check.

#ifndef LOOPALG_TESTS_ORACLES_HPP
#define LOOPALG_TESTS_ORACLES_HPP

#include <cmath>
#include <vector>

#include "loopalg/graph.hpp"

namespace oracles {

// Dense symmetric eigensolve by cyclic Jacobi rotations; returns the largest
// eigenvalue and its eigenvector (max-normalized, sign fixed positive).
// Independent of the library's power iteration.
struct EigenResult {
    double value = 0.0;
    std::vector<double> vector;
};

inline EigenResult jacobi_largest(std::vector<std::vector<double>> a) {
    const int n = static_cast<int>(a.size());
    std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) v[i][i] = 1.0;

    for (int sweep = 0; sweep < 200; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        if (off < 1e-30) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300) continue;
                double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;
                for (int k = 0; k < n; ++k) {
                    double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
    }
    int best = 0;
    for (int i = 1; i < n; ++i)
        if (a[i][i] > a[best][best]) best = i;
    EigenResult r;
    r.value = a[best][best];
    r.vector.resize(n);
    double mx = 0.0;
    for (int i = 0; i < n; ++i) mx = std::max(mx, std::abs(v[i][best]));
    for (int i = 0; i < n; ++i) r.vector[i] = v[i][best] / mx * (v[0][best] < 0 ? -1.0 : 1.0);
    // re-fix sign: make the max-magnitude entry positive
    double lead = 0.0;
    for (int i = 0; i < n; ++i)
        if (std::abs(r.vector[i]) > std::abs(lead)) lead = r.vector[i];
    if (lead < 0)
        for (double& x : r.vector) x = -x;
    return r;
}

// Each undirected pair is stored as two directed edges, so summing directed
// edges already yields the symmetric adjacency matrix.
inline std::vector<std::vector<double>> adjacency(const loopalg::BipartiteGraph& g) {
    const int n = g.num_vertices();
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (int e = 0; e < g.num_edges(); ++e) a[g.source(e)][g.target(e)] += 1.0;
    return a;
}

}  // namespace oracles

#endif
