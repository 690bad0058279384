// Named verification scenarios shared by the command-line `verify` command
// and the acceptance suite. Every check pins its tolerance here; reports are
// deterministic for a fixed seed.

#ifndef LOOPALG_SCENARIOS_HPP
#define LOOPALG_SCENARIOS_HPP

#include <random>

#include "loopalg/transport.hpp"

namespace loopalg::scenarios {

struct CheckLine {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double threshold = 0.0;
    std::string note;
};

struct ScenarioReport {
    std::string scenario;
    std::vector<CheckLine> checks;
    bool pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

using Rng = std::mt19937_64;

// Uniform loop of the requested degree, from the enumerated list.
inline Word random_loop(const GraphData& gd, Rng& rng, int degree) {
    const auto loops = enumerate_loops(gd, degree);
    if (loops.empty()) throw std::runtime_error("random_loop: no loops of requested degree");
    std::uniform_int_distribution<size_t> pick(0, loops.size() - 1);
    return loops[pick(rng)];
}

inline Word random_loop_at(const GraphData& gd, Rng& rng, int degree, int base) {
    const auto loops = enumerate_loops(gd, degree, base);
    if (loops.empty()) throw std::runtime_error("random_loop_at: no loops here");
    std::uniform_int_distribution<size_t> pick(0, loops.size() - 1);
    return loops[pick(rng)];
}

// A few random loop terms of the given grading with real coefficients.
inline WordSeries random_grk_series(const GraphData& gd, Rng& rng, int k, int extra_deg = 4,
                                    int nterms = 3) {
    WordSeries s(k);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::uniform_int_distribution<int> extra(0, extra_deg / 2);
    for (int i = 0; i < nterms; ++i) {
        int deg = 2 * k + 2 * extra(rng);
        if (deg == 0) {
            std::uniform_int_distribution<int> pv(0, gd.graph.num_vertices() - 1);
            s.add(Word(pv(rng)), coef(rng));
        } else {
            s.add(random_loop(gd, rng, deg), coef(rng));
        }
    }
    return s;
}

// Degree-4 perturbation fixture: the basic power loop on the first positive
// edge; the solver symmetrizes it on entry.
inline WordSeries default_fixture(const GraphData& gd) {
    int e = gd.graph.positive_edges().front();
    int eo = gd.opposite(e);
    return single_word(make_word(gd, {e, eo, e, eo}));
}

// --- oracle-match: pairing trace vs operator vacuum state, and traciality --

inline ScenarioReport run_oracle_match(const GraphData& gd, uint64_t seed, int count = 200,
                                       int max_deg = 8) {
    ScenarioReport rep{"oracle-match", {}};
    Rng rng(seed);
    std::uniform_int_distribution<int> degpick(1, max_deg / 2);

    double worst = 0.0;
    for (int i = 0; i < count; ++i) {
        Word w = random_loop(gd, rng, 2 * degpick(rng));
        worst = std::max(worst,
                         std::abs(pairing_moment(gd, w) - vacuum_moment(gd, w)));
    }
    rep.checks.push_back({"pairing-vs-vacuum", worst <= 1e-10, worst, 1e-10,
                          std::to_string(count) + " random loops of degree <= " +
                              std::to_string(max_deg)});

    double worst_trace = 0.0;
    for (int i = 0; i < count / 2; ++i) {
        std::uniform_int_distribution<int> pv(0, gd.graph.num_vertices() - 1);
        int v = pv(rng);
        Word u = random_loop_at(gd, rng, 2 * degpick(rng), v);
        Word w = random_loop_at(gd, rng, 2 * degpick(rng), v);
        cx uw = vacuum_moment(gd, concat_words(u, w));
        cx wu = vacuum_moment(gd, concat_words(w, u));
        worst_trace = std::max(worst_trace, std::abs(uw - wu));
    }
    rep.checks.push_back({"traciality", worst_trace <= 1e-10, worst_trace, 1e-10,
                          "same-based loop pairs"});
    return rep;
}

// --- sd-v0: the Schwinger-Dyson identity for the unperturbed state ---------

inline ScenarioReport run_sd_v0(const GraphData& gd, int q_max = 5) {
    ScenarioReport rep{"sd-v0", {}};
    TransportConfig cfg = TransportConfig::defaults(gd);
    cfg.q_max = q_max;
    SdReport sd = sd_residual_report(gd, WordSeries(0), WordSeries(0), cfg);
    rep.checks.push_back({"sd-residual-v0", sd.max_residual <= 1e-9, sd.max_residual, 1e-9,
                          "all monomials of degree <= " + std::to_string(q_max) + ", " +
                              std::to_string(sd.checks) + " checks"});
    return rep;
}

// --- transport: degeneration at w = 0 and the small-t solve ----------------

inline ScenarioReport run_transport_degenerate(const GraphData& gd) {
    ScenarioReport rep{"transport-degenerate", {}};
    TransportConfig cfg = TransportConfig::defaults(gd);
    cfg.compute_sd = false;
    TransportResult r = solve_transport(gd, WordSeries(0), cfg);
    rep.checks.push_back({"g-zero", r.g.empty() && r.iterations == 0, r.norm_g, 0.0, "w = 0"});

    Rng rng(7);
    Word u = random_loop(gd, rng, 4);
    WordSeries x = single_word(u);
    double d_eta = coeff_distance(eta(gd, x, r.g, cfg), x);
    rep.checks.push_back({"eta-identity", d_eta == 0.0, d_eta, 0.0, "eta = id at g = 0"});

    cx tr = perturbed_trace(gd, x, r.g, cfg);
    cx tr0 = state(gd, x);
    double d_tr = std::abs(tr - tr0);
    rep.checks.push_back({"trace-identity", d_tr == 0.0, d_tr, 0.0, "perturbed trace = trace"});
    return rep;
}

inline ScenarioReport run_transport_small_t(const GraphData& gd, double t = 0.01,
                                            const WordSeries* fixture = nullptr) {
    ScenarioReport rep{"transport-small-t", {}};
    WordSeries base = fixture ? *fixture : default_fixture(gd);
    WordSeries w = base;
    w *= t;

    std::vector<int> degs{4, 6, 8};
    std::vector<double> residuals;
    TransportResult final_res;
    for (int D : degs) {
        TransportConfig cfg = TransportConfig::defaults(gd);
        cfg.D = D;
        TransportResult r = solve_transport(gd, w, cfg);
        residuals.push_back(r.sd_residual);
        if (D == 8) final_res = r;
    }

    rep.checks.push_back({"converged", final_res.converged && final_res.iterations <= 30,
                          double(final_res.iterations), 30.0, "iterations at D = 8"});

    bool decreasing = true;
    for (size_t i = 2; i + 1 < final_res.delta_history.size(); ++i)
        if (final_res.delta_history[i + 1] >= final_res.delta_history[i]) decreasing = false;
    rep.checks.push_back({"delta-decreasing", decreasing,
                          double(final_res.delta_history.size()), 0.0,
                          "strictly decreasing after step 2"});

    rep.checks.push_back({"sd-solved", final_res.sd_residual <= 1e-6, final_res.sd_residual, 1e-6,
                          "solved residual at D = 8"});

    TransportConfig cfg8 = TransportConfig::defaults(gd);
    WordSeries wp = prepare_perturbation(gd, w, cfg8);
    double sd_unsolved = sd_residual(gd, WordSeries(0), wp, cfg8);
    bool improved = final_res.sd_residual <= sd_unsolved / 10.0;
    rep.checks.push_back({"sd-improvement", improved, final_res.sd_residual,
                          sd_unsolved / 10.0, "solved <= unsolved/10"});

    bool noninc = residuals[0] >= residuals[1] - 1e-15 && residuals[1] >= residuals[2] - 1e-15;
    rep.checks.push_back({"sd-nonincreasing-in-D", noninc, residuals[2], residuals[0],
                          "residuals over D in {4,6,8}: " + std::to_string(residuals[0]) + ", " +
                              std::to_string(residuals[1]) + ", " + std::to_string(residuals[2])});

    rep.checks.push_back({"xi-below-one", final_res.xi < 1.0, final_res.xi, 1.0,
                          "contraction proxy"});
    return rep;
}

inline ScenarioReport run_scaling(const GraphData& gd, const WordSeries* fixture = nullptr) {
    ScenarioReport rep{"scaling", {}};
    WordSeries base = fixture ? *fixture : default_fixture(gd);
    std::vector<double> ts{0.02, 0.01, 0.005};
    std::vector<double> ratios;
    for (double t : ts) {
        WordSeries w = base;
        w *= t;
        TransportConfig cfg = TransportConfig::defaults(gd);
        cfg.compute_sd = false;
        TransportResult r = solve_transport(gd, w, cfg);
        ratios.push_back(r.norm_g / t);
    }
    double lo = *std::min_element(ratios.begin(), ratios.end());
    double hi = *std::max_element(ratios.begin(), ratios.end());
    double spread = (hi - lo) / ratios[1];
    rep.checks.push_back({"norm-linear-in-t", spread <= 0.10, spread, 0.10,
                          "relative spread of |g(t)|/t over t in {0.02, 0.01, 0.005}"});
    return rep;
}

// --- inverse-iteration ------------------------------------------------------

inline ScenarioReport run_inverse_iteration(const GraphData& gd, double t = 0.01,
                                            const WordSeries* fixture = nullptr) {
    ScenarioReport rep{"inverse-iteration", {}};
    WordSeries base = fixture ? *fixture : default_fixture(gd);
    WordSeries w = base;
    w *= t;
    TransportConfig cfg = TransportConfig::defaults(gd);
    cfg.compute_sd = false;
    TransportResult r = solve_transport(gd, w, cfg);

    for (const Word& u : enumerate_loops(gd, 2)) {
        InverseIterationReport ir = inverse_iteration(gd, r.g, single_word(u), cfg, 20, 1e-6);
        std::string label = "reconstruct(" + format_word(gd, u) + ")";
        rep.checks.push_back({label + "-converges",
                              ir.reached_target && ir.first_below_target <= 20,
                              ir.reached_target ? ir.distances[ir.first_below_target] : -1.0, 1e-6,
                              "within 20 iterations"});
        double worst_ratio = 0.0;
        for (int k = 1; k <= ir.first_below_target && k < int(ir.distances.size()); ++k) {
            if (ir.distances[k - 1] > 0.0)
                worst_ratio = std::max(worst_ratio, ir.distances[k] / ir.distances[k - 1]);
        }
        rep.checks.push_back({label + "-geometric", worst_ratio < 0.5 && ir.reached_target,
                              worst_ratio, 0.5, "decay ratio before crossing the target"});
    }
    return rep;
}

// --- tower: grading-k states, inclusions, multiplicativity ------------------

inline ScenarioReport run_tower(const GraphData& gd, uint64_t seed, int count = 50) {
    ScenarioReport rep{"tower", {}};
    Rng rng(seed);

    for (int k = 1; k <= 2; ++k) {
        double worst = 0.0;
        for (int i = 0; i < count; ++i) {
            WordSeries x = random_grk_series(gd, rng, k - 1);
            cx lhs = phi_k(gd, include_up(gd, x));
            cx rhs = phi_k(gd, x);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        rep.checks.push_back({"phi" + std::to_string(k) + "-inclusion", worst <= 1e-10, worst,
                              1e-10, std::to_string(count) + " random elements"});
    }

    double worst_mult = 0.0;
    std::uniform_int_distribution<int> kpick(1, 2);
    for (int i = 0; i < count; ++i) {
        int k = kpick(rng);
        WordSeries x = random_grk_series(gd, rng, k, 2, 2);
        WordSeries y = random_grk_series(gd, rng, k, 2, 2);
        WordSeries xy = wedge_k(gd, x, y);
        // compare operator images on a random path tensor
        std::uniform_int_distribution<int> lenpick(k, k + 2);
        const auto paths = enumerate_paths(gd, lenpick(rng));
        std::uniform_int_distribution<size_t> ppick(0, paths.size() - 1);
        FockVector vec;
        vec.add(FockLabel::tensor(paths[ppick(rng)].letters), 1.0);
        FockVector lhs = c_k_apply(gd, xy, vec);
        FockVector rhs = c_k_apply(gd, x, c_k_apply(gd, y, vec));
        double diff = 0.0;
        for (const auto& [l, c] : lhs.terms) diff = std::max(diff, std::abs(c - rhs.coeff(l)));
        for (const auto& [l, c] : rhs.terms) diff = std::max(diff, std::abs(c - lhs.coeff(l)));
        worst_mult = std::max(worst_mult, diff);
    }
    rep.checks.push_back({"ck-multiplicative", worst_mult <= 1e-10, worst_mult, 1e-10,
                          std::to_string(count) + " random pairs"});
    return rep;
}

}  // namespace loopalg::scenarios

#endif
