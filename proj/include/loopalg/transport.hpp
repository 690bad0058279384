// The free-transport solver: the fixed-point map built from substitution,
// the quadratic term, and the log-type matrix contraction series; the
// transport element; the perturbed embedding and trace; the translated
// Schwinger-Dyson residual diagnostic; and the inverse iteration that
// re-expresses generators through the perturbed ones.

#ifndef LOOPALG_TRANSPORT_HPP
#define LOOPALG_TRANSPORT_HPP

#include <sstream>

#include "loopalg/calculus.hpp"
#include "loopalg/fock.hpp"
#include "loopalg/pairing.hpp"

namespace loopalg {

struct TransportError : std::runtime_error {
    std::vector<double> history;
    TransportError(const std::string& msg, std::vector<double> hist = {})
        : std::runtime_error(msg), history(std::move(hist)) {}
};

struct TransportConfig {
    double R = 0.0;        // defaults to 4*sqrt(delta)
    double R_prime = 0.0;  // defaults to R + 1
    int D = 8;             // truncation degree
    int m_max = 40;        // cap on the contraction series
    double tol_fix = 1e-12;
    int k_max = 100;
    int q_max = 4;
    int tensor_degree_cap = 0;  // 0: use 2*D
    int fock_max_len = 0;       // 0: use max(16, 2*D)
    bool compute_sd = true;

    static TransportConfig defaults(const GraphData& gd) {
        TransportConfig c;
        c.R = 4.0 * std::sqrt(gd.delta());
        c.R_prime = c.R + 1.0;
        return c;
    }

    void validate(const GraphData& gd) const {
        const double floor = 4.0 * std::sqrt(gd.delta());
        if (!(R >= floor - 1e-12))
            throw std::invalid_argument("TransportConfig: R must be at least 4*sqrt(delta)");
        if (!(R_prime > R)) throw std::invalid_argument("TransportConfig: R' must exceed R");
        if (D < 4 || D % 2 != 0)
            throw std::invalid_argument("TransportConfig: D must be even and at least 4");
        if (m_max < 1) throw std::invalid_argument("TransportConfig: m_max must be positive");
        if (tol_fix <= 0 || k_max < 1 || q_max < 0)
            throw std::invalid_argument("TransportConfig: bad tolerance or iteration caps");
    }

    int resolved_tensor_cap() const { return tensor_degree_cap > 0 ? tensor_degree_cap : 2 * D; }
    int resolved_fock_len() const {
        return fock_max_len > 0 ? fock_max_len : std::max(kDefaultMaxWordLen, 2 * D);
    }
};

struct TransportResult {
    WordSeries g;      // the transport element (cyclically symmetric, no constant)
    WordSeries g_hat;  // N g
    int iterations = 0;
    bool converged = false;
    std::vector<double> delta_history;
    double xi = 0.0;                 // contraction proxy of the final iteration
    double m_tail_bound = 0.0;       // bound on the truncated contraction tail
    double tensor_drop_bound = 0.0;  // reported mass of capped tensor terms
    double sd_residual = -1.0;       // -1 when not evaluated
    double norm_g = 0.0;             // R'-sigma norm of g
    double norm_w = 0.0;             // (R'+1)-sigma norm of w
    int norm_excursions = 0;         // iterations leaving the unit ball
    double symmetry_defect = 0.0;    // max observed rho-invariance defect
    double adjoint_defect = 0.0;     // max observed self-adjointness defect
};

struct FDiagnostics {
    double xi = 0.0;
    double m_tail_bound = 0.0;
    double tensor_drop_bound = 0.0;
    int m_sum = 0;
    bool domain_warning = false;  // argument left the unit ball
};

// Memoizing vacuum state for contraction right legs; the interval dynamic
// program matches the operator vacuum state on every word and has
// polynomial cost in the degree.
class MomentCache {
  public:
    explicit MomentCache(const GraphData& gd) : gd_(gd) {}
    double operator()(const Word& w) {
        auto it = cache_.find(w);
        if (it != cache_.end()) return it->second;
        double v = wick_moment(gd_, w);
        cache_.emplace(w, v);
        return v;
    }

  private:
    const GraphData& gd_;
    std::map<Word, double> cache_;
};

inline EdgeTuple perturbed_generators(const GraphData& gd, const WordSeries& g) {
    EdgeTuple images;
    images.reserve(gd.graph.num_edges());
    for (int e = 0; e < gd.graph.num_edges(); ++e) {
        WordSeries img = single_word(make_word(gd, {e}));
        img += cyclic_d_e(gd, e, g);
        images.push_back(std::move(img));
    }
    return images;
}

// One application of the fixed-point map at truncation D.
inline WordSeries map_F(const GraphData& gd, const WordSeries& G, const WordSeries& w,
                        const TransportConfig& cfg, FDiagnostics* diag = nullptr) {
    const int D = cfg.D;
    FDiagnostics local;
    if (norm_R_sigma(gd, G, cfg.R_prime) > 1.0) local.domain_warning = true;

    WordSeries SG = G.empty() ? WordSeries(0) : sigma_inv_map(G);
    EdgeTuple DSG;
    DSG.reserve(gd.graph.num_edges());
    for (int e = 0; e < gd.graph.num_edges(); ++e) DSG.push_back(cyclic_d_e(gd, e, SG));

    EdgeTuple images;
    images.reserve(gd.graph.num_edges());
    for (int e = 0; e < gd.graph.num_edges(); ++e) {
        WordSeries img = single_word(make_word(gd, {e}));
        img += DSG[e];
        images.push_back(std::move(img));
    }

    WordSeries out(0);
    out.trunc = D;

    // -W(C + D Sigma G)
    WordSeries t1 = substitute(gd, w, images, D);
    t1 *= -1.0;
    out += t1;

    // -(1/2) sum_e sigma(e) (D_e Sigma G)(D_e° Sigma G)
    for (int e = 0; e < gd.graph.num_edges(); ++e) {
        if (DSG[e].empty()) continue;
        WordSeries q = concat_mul(DSG[e], DSG[gd.opposite(e)], D);
        q *= cx(-0.5 * gd.sigma(e));
        out += q;
    }

    // contraction series
    SeriesMatrix J = jacobian(gd, DSG);
    if (!J.entries.empty()) {
        BlockMatrix K = block_matrix(gd, BlockKind::JcC);
        BlockMatrix M3 = block_matrix(gd, BlockKind::M3);
        BlockMatrix M4 = block_matrix(gd, BlockKind::M4);
        SeriesMatrix X = scalar_compose(K, J);
        local.xi = matrix_contraction_norm(gd, X, cfg.R);
        if (local.xi >= 1.0) {
            std::ostringstream os;
            os << "map_F: contraction proxy xi = " << local.xi
               << " >= 1; the perturbation is too large for a reliable truncated series";
            throw TransportError(os.str());
        }
        local.m_sum = std::min(cfg.m_max, cfg.D);
        TensorCaps caps;
        caps.left_cap = D;
        caps.total_cap = cfg.resolved_tensor_cap();

        MomentCache moments(gd);
        StateFn state = [&moments](const Word& word) -> cx { return moments(word); };

        SeriesMatrix P3 = scalar_compose(M3, J);
        SeriesMatrix P4 = scalar_compose(M4, J);
        for (int m = 1; m <= local.m_sum; ++m) {
            const double coef = ((m % 2 == 1) ? 1.0 : -1.0) / static_cast<double>(m);
            WordSeries t3 = contract_left(trace_matrix(P3), state);
            WordSeries t4 = contract_right(trace_matrix(P4), state);
            t3 *= coef;
            t4 *= coef;
            out += t3;
            out += t4;
            if (m < local.m_sum) {
                P3 = hash_compose(gd, P3, X, &caps, cfg.R);
                P4 = hash_compose(gd, P4, X, &caps, cfg.R);
            }
        }
        local.tensor_drop_bound = caps.dropped_mass;
        local.m_tail_bound = std::pow(local.xi, local.m_sum + 1) /
                             ((local.m_sum + 1) * (1.0 - local.xi));
    }

    if (diag) *diag = local;
    return out;
}

// Prepares a perturbation: truncate, cyclically symmetrize, and check the
// admissibility constraints (self-adjoint, no degree-0 or degree-2 part).
inline WordSeries prepare_perturbation(const GraphData& gd, const WordSeries& w_in,
                                       const TransportConfig& cfg) {
    WordSeries w = symmetrize(gd, truncated(w_in, cfg.D));
    double sa = coeff_distance(involution(gd, w), w);
    double scale = 0.0;
    for (const auto& [word, c] : w.terms) {
        (void)word;
        scale = std::max(scale, std::abs(c));
    }
    if (sa > 1e-9 * (1.0 + scale))
        throw std::invalid_argument("transport: perturbation is not self-adjoint");
    for (const auto& [word, c] : w.terms) {
        (void)c;
        if (word.degree() == 0 || word.degree() == 2)
            throw std::invalid_argument(
                "transport: perturbation must have no degree-0 or degree-2 component");
    }
    return w;
}

inline double sd_residual(const GraphData& gd, const WordSeries& g, const WordSeries& w,
                          const TransportConfig& cfg);

inline TransportResult solve_transport(const GraphData& gd, const WordSeries& w_in,
                                       const TransportConfig& cfg) {
    cfg.validate(gd);
    WordSeries w = prepare_perturbation(gd, w_in, cfg);

    TransportResult res;
    res.norm_w = norm_R_sigma(gd, w, cfg.R_prime + 1.0);
    res.g.k = 0;
    res.g.trunc = cfg.D;
    res.g_hat = res.g;

    if (!w.empty()) {
        WordSeries G = w;
        G.trunc = cfg.D;
        FDiagnostics diag;
        bool converged = false;
        int it = 0;
        for (; it < cfg.k_max; ++it) {
            WordSeries Gn = symmetrize(gd, remove_constants(map_F(gd, G, w, cfg, &diag)));
            Gn.trunc = cfg.D;
            res.symmetry_defect =
                std::max(res.symmetry_defect, coeff_distance(rho(gd, Gn), Gn));
            res.adjoint_defect =
                std::max(res.adjoint_defect, coeff_distance(involution(gd, Gn), Gn));
            if (norm_R_sigma(gd, Gn, cfg.R_prime) > 1.0) ++res.norm_excursions;
            double delta = norm_R_sigma(gd, Gn - G, cfg.R_prime);
            res.delta_history.push_back(delta);
            G = Gn;
            if (delta < cfg.tol_fix) {
                converged = true;
                ++it;
                break;
            }
        }
        if (!converged)
            throw TransportError("solve_transport: no fixed point within k_max iterations",
                                 res.delta_history);
        if (res.symmetry_defect > 1e-6 || res.adjoint_defect > 1e-6)
            throw TransportError("solve_transport: iterate lost symmetry or self-adjointness");
        res.iterations = it;
        res.converged = true;
        res.g_hat = G;
        res.g = G.empty() ? G : sigma_inv_map(G);
        res.xi = diag.xi;
        res.m_tail_bound = diag.m_tail_bound;
        res.tensor_drop_bound = diag.tensor_drop_bound;
    } else {
        res.converged = true;
    }

    res.norm_g = norm_R_sigma(gd, res.g, cfg.R_prime);
    if (cfg.compute_sd) res.sd_residual = sd_residual(gd, res.g, w, cfg);
    return res;
}

// Substitutes the perturbed generators into x (the perturbed embedding).
inline WordSeries eta(const GraphData& gd, const WordSeries& x, const WordSeries& g,
                      const TransportConfig& cfg) {
    if (x.k != 0) throw std::invalid_argument("eta: only grading-0 input is supported");
    return substitute(gd, x, perturbed_generators(gd, g), cfg.D);
}

inline cx perturbed_trace(const GraphData& gd, const WordSeries& x, const WordSeries& g,
                          const TransportConfig& cfg) {
    return state(gd, eta(gd, x, g, cfg), cfg.resolved_fock_len());
}

inline std::map<int, cx> perturbed_trace_by_vertex(const GraphData& gd, const WordSeries& x,
                                                   const WordSeries& g,
                                                   const TransportConfig& cfg) {
    WordSeries y = eta(gd, x, g, cfg);
    std::map<int, cx> out;
    for (const auto& [word, c] : y.terms) {
        if (!is_loop(gd, word)) continue;
        out[word.base] += c * phi_v(gd, word, word.base, cfg.resolved_fock_len());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Schwinger-Dyson residual
// ---------------------------------------------------------------------------

struct SdReport {
    double max_residual = 0.0;
    int worst_edge = -1;
    Word worst_word;
    long checks = 0;
};

namespace detail {
inline void all_words_up_to(const GraphData& gd, int max_deg, std::vector<Word>& out) {
    out.push_back(Word(0));  // operator unit; the base plays no role here
    std::vector<int> letters;
    std::function<void()> rec = [&]() {
        if (!letters.empty()) {
            Word w;
            w.letters = letters;
            w.base = gd.source(letters.front());
            out.push_back(w);
        }
        if (static_cast<int>(letters.size()) == max_deg) return;
        for (int e = 0; e < gd.graph.num_edges(); ++e) {
            letters.push_back(e);
            rec();
            letters.pop_back();
        }
    };
    rec();
}
}  // namespace detail

// Max over edges e and monomials Q of degree <= q_max of the translated
// Schwinger-Dyson defect, every piece evaluated by substitution into the
// perturbed generators followed by the vacuum state.
inline SdReport sd_residual_report(const GraphData& gd, const WordSeries& g, const WordSeries& w,
                                   const TransportConfig& cfg) {
    const int fock_len = cfg.resolved_fock_len();
    EdgeTuple images = perturbed_generators(gd, g);

    std::map<Word, cx> cache;
    auto moment = [&](const Word& word) -> cx {
        auto it = cache.find(word);
        if (it != cache.end()) return it->second;
        cx v = vacuum_moment(gd, word, fock_len);
        cache.emplace(word, v);
        return v;
    };
    auto mstate = [&](const WordSeries& s) -> cx {
        cx acc = 0.0;
        for (const auto& [word, c] : s.terms) acc += c * moment(word);
        return acc;
    };

    const int nE = gd.graph.num_edges();
    EdgeTuple dw_sub(nE);
    for (int e = 0; e < nE; ++e)
        dw_sub[e] = substitute(gd, cyclic_d_e(gd, e, w), images, cfg.D);

    std::vector<Word> qs;
    detail::all_words_up_to(gd, cfg.q_max, qs);

    SdReport rep;
    for (const Word& q : qs) {
        WordSeries B = substitute(gd, single_word(q), images, cfg.D);
        for (int e = 0; e < nE; ++e) {
            cx lhs = mstate(concat_mul(images[e], B));
            cx rhs1 = 0.0;
            const int eo = gd.opposite(e);
            for (int k = 0; k < q.degree(); ++k) {
                if (q.letters[k] != eo) continue;
                Word left, right;
                left.letters.assign(q.letters.begin(), q.letters.begin() + k);
                left.base = q.base;
                right.letters.assign(q.letters.begin() + k + 1, q.letters.end());
                right.base =
                    right.empty() ? gd.target(q.letters[k]) : gd.source(right.letters.front());
                rhs1 += gd.sigma(e) * mstate(substitute(gd, single_word(left), images, cfg.D)) *
                        mstate(substitute(gd, single_word(right), images, cfg.D));
            }
            cx rhs2 = mstate(concat_mul(dw_sub[e], B));
            double r = std::abs(lhs - rhs1 + rhs2);
            ++rep.checks;
            if (r > rep.max_residual) {
                rep.max_residual = r;
                rep.worst_edge = e;
                rep.worst_word = q;
            }
        }
    }
    return rep;
}

inline double sd_residual(const GraphData& gd, const WordSeries& g, const WordSeries& w,
                          const TransportConfig& cfg) {
    return sd_residual_report(gd, g, w, cfg).max_residual;
}

// ---------------------------------------------------------------------------
// Loop reconstruction and the inverse iteration
// ---------------------------------------------------------------------------

// L(H) = sum_e sigma(e) H_e C_e°
inline WordSeries l_map(const GraphData& gd, const EdgeTuple& H) {
    WordSeries out(0);
    for (int e = 0; e < gd.graph.num_edges(); ++e) {
        if (H[e].empty()) continue;
        WordSeries tail = single_word(make_word(gd, {gd.opposite(e)}));
        WordSeries part = concat_mul(H[e], tail);
        part *= gd.sigma(e);
        out += part;
    }
    return out;
}

// Splits h (no constant part) by its final letter: words ending in e° feed
// component e with weight sigma(e°). Left inverse of l_map's assembly.
inline EdgeTuple coefficient_split(const GraphData& gd, const WordSeries& h) {
    EdgeTuple H(gd.graph.num_edges());
    for (const auto& [word, c] : h.terms) {
        if (word.degree() == 0)
            throw std::invalid_argument("coefficient_split: constant term present");
        int last = word.letters.back();
        int e = gd.opposite(last);
        Word u;
        u.letters.assign(word.letters.begin(), word.letters.end() - 1);
        u.base = word.base;
        H[e].add(u, c * gd.sigma(last));
    }
    return H;
}

struct InverseIterationReport {
    std::vector<double> distances;  // coefficientwise distance of eta(x_k) to x
    std::vector<WordSeries> iterates;
    double f_norm = 0.0;  // max_e R'-norm of the substitution tuple
    bool reached_target = false;
    int first_below_target = -1;
};

inline InverseIterationReport inverse_iteration(const GraphData& gd, const WordSeries& g,
                                                const WordSeries& x, const TransportConfig& cfg,
                                                int iterations = 20, double target = 1e-6) {
    EdgeTuple f(gd.graph.num_edges());
    InverseIterationReport rep;
    for (int e = 0; e < gd.graph.num_edges(); ++e) {
        f[e] = truncated(cyclic_d_e(gd, e, g), cfg.D);
        rep.f_norm = std::max(rep.f_norm, norm_R(gd, f[e], cfg.R_prime));
    }
    EdgeTuple images = perturbed_generators(gd, g);

    EdgeTuple H = identity_tuple(gd);
    int rises = 0;
    for (int k = 0; k <= iterations; ++k) {
        WordSeries xk = substitute(gd, x, H, cfg.D);
        for (const auto& [word, c] : xk.terms) {
            (void)c;
            if (!is_loop(gd, word))
                throw TransportError("inverse_iteration: iterate left the loop span");
        }
        double dist = coeff_distance(substitute(gd, xk, images, cfg.D), x);
        if (!rep.distances.empty() && dist > rep.distances.back()) {
            if (++rises >= 3)
                throw TransportError("inverse_iteration: distances increased three times",
                                     rep.distances);
        } else {
            rises = 0;
        }
        rep.distances.push_back(dist);
        rep.iterates.push_back(xk);
        if (dist < target && rep.first_below_target < 0) {
            rep.first_below_target = k;
            rep.reached_target = true;
        }
        if (k == iterations) break;
        EdgeTuple Hn(gd.graph.num_edges());
        for (int e = 0; e < gd.graph.num_edges(); ++e) {
            Hn[e] = single_word(make_word(gd, {e}));
            Hn[e] -= substitute(gd, f[e], H, cfg.D);
            Hn[e].trunc = cfg.D;
        }
        H = std::move(Hn);
    }
    return rep;
}

}  // namespace loopalg

#endif
