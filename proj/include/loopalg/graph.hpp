// Oriented bipartite graphs and their Perron-Frobenius data.
//
// A graph is stored with both orientations of every edge; opposite() is an
// involution pairing them. E+ is the set of edges leaving a positive vertex.

#ifndef LOOPALG_GRAPH_HPP
#define LOOPALG_GRAPH_HPP

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace loopalg {

struct GraphError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct BipartiteGraph {
    struct Vertex {
        std::string id;
        bool positive = true;
    };
    struct Edge {
        std::string id;
        int src = -1;
        int dst = -1;
        int opp = -1;
    };

    std::vector<Vertex> vertices;
    std::vector<Edge> edges;
    std::map<std::string, int> vertex_index;
    std::map<std::string, int> edge_index;
    std::vector<std::vector<int>> out_edges;  // by source vertex

    int num_vertices() const { return static_cast<int>(vertices.size()); }
    int num_edges() const { return static_cast<int>(edges.size()); }

    int source(int e) const { return edges[e].src; }
    int target(int e) const { return edges[e].dst; }
    int opposite(int e) const { return edges[e].opp; }
    bool vertex_positive(int v) const { return vertices[v].positive; }
    bool edge_positive(int e) const { return vertices[edges[e].src].positive; }

    const std::string& vertex_id(int v) const { return vertices[v].id; }
    const std::string& edge_id(int e) const { return edges[e].id; }

    int vertex(const std::string& id) const {
        auto it = vertex_index.find(id);
        if (it == vertex_index.end()) throw GraphError("unknown vertex id '" + id + "'");
        return it->second;
    }
    int edge(const std::string& id) const {
        auto it = edge_index.find(id);
        if (it == edge_index.end()) throw GraphError("unknown edge id '" + id + "'");
        return it->second;
    }

    std::vector<int> positive_edges() const {
        std::vector<int> out;
        for (int e = 0; e < num_edges(); ++e)
            if (edge_positive(e)) out.push_back(e);
        return out;
    }

    // Validates every structural invariant; throws GraphError naming the offender.
    void validate() const {
        if (vertices.empty()) throw GraphError("graph has no vertices");
        for (const auto& ed : edges) {
            if (ed.src < 0 || ed.src >= num_vertices() || ed.dst < 0 || ed.dst >= num_vertices())
                throw GraphError("edge '" + ed.id + "' references a missing vertex");
            if (vertices[ed.src].positive == vertices[ed.dst].positive)
                throw GraphError("edge '" + ed.id + "' joins two vertices of equal parity");
        }
        for (int e = 0; e < num_edges(); ++e) {
            int o = edges[e].opp;
            if (o < 0 || o >= num_edges())
                throw GraphError("edge '" + edges[e].id + "' has no opposite");
            if (edges[o].opp != e)
                throw GraphError("opposite pairing is not an involution at edge '" + edges[e].id + "'");
            if (edges[o].src != edges[e].dst || edges[o].dst != edges[e].src)
                throw GraphError("opposite of edge '" + edges[e].id + "' does not reverse it");
            if (o == e)
                throw GraphError("edge '" + edges[e].id + "' is its own opposite");
        }
        // connectivity of the underlying undirected graph
        std::vector<char> seen(vertices.size(), 0);
        std::vector<int> stack{0};
        seen[0] = 1;
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int e : out_edges[v]) {
                int w = edges[e].dst;
                if (!seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
            }
        }
        for (int v = 0; v < num_vertices(); ++v)
            if (!seen[v])
                throw GraphError("graph is disconnected: vertex '" + vertices[v].id + "' unreachable");
    }

    void rebuild_adjacency() {
        out_edges.assign(vertices.size(), {});
        for (int e = 0; e < num_edges(); ++e) out_edges[edges[e].src].push_back(e);
    }
};

// Perron-Frobenius data of the adjacency matrix: delta, the positive
// eigenvector mu (max entry 1), and the edge weights sigma, lambda.
struct PerronData {
    double delta = 0.0;
    std::vector<double> mu;       // by vertex index
    std::vector<double> sigma_;   // by edge index
    std::vector<double> lambda_;  // by edge index
    int iterations = 0;
    double residual = 0.0;

    double sigma(int e) const { return sigma_[e]; }
    double lambda(int e) const { return lambda_[e]; }
};

// Power iteration on A^2 (bipartite adjacency has spectrum symmetric about 0,
// so iterating on the square avoids sign oscillation); the relative scaling
// of the two parity blocks is fixed afterwards from A itself.
inline PerronData perron(const BipartiteGraph& g, double tol = 1e-13, long max_iter = 1000000) {
    if (tol <= 0) throw GraphError("perron: tol must be positive");
    const int n = g.num_vertices();
    auto apply_a = [&](const std::vector<double>& x) {
        std::vector<double> y(n, 0.0);
        for (int v = 0; v < n; ++v)
            for (int e : g.out_edges[v]) y[g.target(e)] += x[v];
        return y;
    };

    // The Rayleigh quotient converges quadratically in the vector error, so
    // the stop combines quotient stabilization with the actual eigen residual
    // of the block-rescaled candidate.
    std::vector<double> x(n, 1.0);
    std::vector<double> mu(n, 0.0);
    double rayleigh_prev = -1.0;
    double delta = 0.0;
    double res = 0.0;
    long it = 0;
    bool done = false;
    for (; it < max_iter && !done; ++it) {
        std::vector<double> ax = apply_a(x);
        std::vector<double> aax = apply_a(ax);
        double num = 0.0, den = 0.0;
        for (int v = 0; v < n; ++v) {
            num += x[v] * aax[v];
            den += x[v] * x[v];
        }
        double rayleigh = num / den;
        delta = std::sqrt(rayleigh);
        double mx = 0.0;
        for (double t : aax) mx = std::max(mx, std::abs(t));
        for (int v = 0; v < n; ++v) x[v] = aax[v] / mx;

        bool quotient_stable =
            rayleigh_prev >= 0 && std::abs(delta - std::sqrt(rayleigh_prev)) < tol;
        rayleigh_prev = rayleigh;
        if (!quotient_stable) continue;

        // Rescale the negative-parity block so that A mu = delta mu, not just A^2.
        std::vector<double> axc = apply_a(x);
        for (int v = 0; v < n; ++v) mu[v] = g.vertex_positive(v) ? x[v] : axc[v] / delta;
        double mmx = 0.0;
        for (double t : mu) mmx = std::max(mmx, t);
        for (double& t : mu) t /= mmx;
        std::vector<double> amu = apply_a(mu);
        res = 0.0;
        for (int v = 0; v < n; ++v) res = std::max(res, std::abs(amu[v] - delta * mu[v]));
        done = res <= tol * delta;
    }
    if (!done)
        throw GraphError("perron: power iteration did not converge within max_iter");

    PerronData pd;
    pd.delta = delta;
    pd.mu = mu;
    pd.iterations = static_cast<int>(it);
    pd.residual = res;
    for (int v = 0; v < n; ++v)
        if (!(mu[v] > 0)) throw GraphError("perron: eigenvector not strictly positive");

    pd.sigma_.resize(g.num_edges());
    pd.lambda_.resize(g.num_edges());
    for (int e = 0; e < g.num_edges(); ++e) {
        pd.lambda_[e] = mu[g.target(e)] / mu[g.source(e)];
        pd.sigma_[e] = std::sqrt(pd.lambda_[e]);
    }
    return pd;
}

// Graph plus its spectral data; nearly every higher-level operation needs both.
struct GraphData {
    BipartiteGraph graph;
    PerronData perron;

    double sigma(int e) const { return perron.sigma(e); }
    double lambda(int e) const { return perron.lambda(e); }
    double delta() const { return perron.delta; }
    int opposite(int e) const { return graph.opposite(e); }
    int source(int e) const { return graph.source(e); }
    int target(int e) const { return graph.target(e); }
};

inline GraphData make_graph_data(BipartiteGraph g, double tol = 1e-13, long max_iter = 1000000) {
    g.rebuild_adjacency();
    g.validate();
    PerronData pd = perron(g, tol, max_iter);
    return GraphData{std::move(g), std::move(pd)};
}

}  // namespace loopalg

#endif
