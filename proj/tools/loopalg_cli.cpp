// Command-line front end: graph inspection, traces and moments, the
// Schwinger-Dyson check, the transport solver, and the named verification
// scenarios. Reports are JSON; exit codes: 0 success, 1 criterion or solver
// failure, 2 input error.

#include <iostream>

#include <CLI11.hpp>

#include "loopalg/io.hpp"
#include "loopalg/scenarios.hpp"

using namespace loopalg;

namespace {

void emit(const json& rep, const std::string& out_path) {
    std::string text = rep.dump(2);
    if (out_path.empty()) {
        std::cout << text << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw std::invalid_argument("cannot open output file '" + out_path + "'");
        out << text << "\n";
    }
}

std::vector<int> parse_word_arg(const GraphData& gd, const std::string& arg) {
    std::vector<int> letters;
    std::string cur;
    std::istringstream is(arg);
    while (std::getline(is, cur, ','))
        if (!cur.empty()) letters.push_back(gd.graph.edge(cur));
    return letters;
}

json vertex_map_json(const GraphData& gd, const std::map<int, cx>& m) {
    json out = json::object();
    for (int v = 0; v < gd.graph.num_vertices(); ++v) {
        auto it = m.find(v);
        json val;
        val["re"] = it == m.end() ? 0.0 : it->second.real();
        val["im"] = it == m.end() ? 0.0 : it->second.imag();
        out[gd.graph.vertex_id(v)] = val;
    }
    return out;
}

json scenario_json(const scenarios::ScenarioReport& rep) {
    json out;
    out["scenario"] = rep.scenario;
    out["pass"] = rep.pass();
    json checks = json::array();
    for (const auto& c : rep.checks) {
        json line;
        line["name"] = c.name;
        line["pass"] = c.pass;
        line["measured"] = c.measured;
        line["threshold"] = c.threshold;
        line["note"] = c.note;
        checks.push_back(line);
    }
    out["checks"] = checks;
    return out;
}

void print_scenario(const scenarios::ScenarioReport& rep) {
    for (const auto& c : rep.checks)
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << rep.scenario << "/" << c.name
                  << ": measured " << c.measured << " vs threshold " << c.threshold << " ("
                  << c.note << ")\n";
}

struct CommonOpts {
    std::string graph_path;
    std::string out_path;
    double tol = 1e-13;
    long max_iter = 1000000;
};

TransportConfig config_from_flags(const GraphData& gd, int D, double t_unused, int q_max,
                                  double tol_fix, int k_max, int m_max) {
    (void)t_unused;
    TransportConfig cfg = TransportConfig::defaults(gd);
    cfg.D = D;
    cfg.q_max = q_max;
    cfg.tol_fix = tol_fix;
    cfg.k_max = k_max;
    cfg.m_max = m_max;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"loop-algebra toolkit: traces, moments, differential checks, and transport"};
    app.require_subcommand(1);

    CommonOpts common;

    // graph-info
    auto* cmd_info = app.add_subcommand("graph-info", "Perron data and edge weight table");
    cmd_info->add_option("--graph", common.graph_path, "graph document")->required();
    cmd_info->add_option("--out", common.out_path, "write the JSON report here");
    cmd_info->add_option("--tol", common.tol, "power iteration tolerance");
    cmd_info->add_option("--max-iter", common.max_iter, "power iteration cap");

    // moment
    std::string word_arg;
    auto* cmd_moment = app.add_subcommand("moment", "exact vacuum moment of an edge word");
    cmd_moment->add_option("--graph", common.graph_path)->required();
    cmd_moment->add_option("--word", word_arg, "comma-separated edge ids")->required();
    cmd_moment->add_option("--out", common.out_path);

    // trace
    std::string series_path;
    int trace_k_flag = -1;
    auto* cmd_trace = app.add_subcommand("trace", "vertex-indexed canonical trace of a series");
    cmd_trace->add_option("--graph", common.graph_path)->required();
    cmd_trace->add_option("--series", series_path)->required();
    cmd_trace->add_option("--k", trace_k_flag, "override the series' grading");
    cmd_trace->add_option("--out", common.out_path);

    // phik
    int phik_k = 0;
    auto* cmd_phik = app.add_subcommand("phik", "grading-k state of a series");
    cmd_phik->add_option("--graph", common.graph_path)->required();
    cmd_phik->add_option("--series", series_path)->required();
    cmd_phik->add_option("--k", phik_k, "grading (defaults to the series' tag)");
    cmd_phik->add_option("--out", common.out_path);

    // sd-check
    std::string potential_path;
    int sd_maxdeg = 4;
    auto* cmd_sd = app.add_subcommand("sd-check",
                                      "Schwinger-Dyson residual of the vacuum state for a "
                                      "potential (defaults to the canonical degree-2 one)");
    cmd_sd->add_option("--graph", common.graph_path)->required();
    cmd_sd->add_option("--potential", potential_path, "series document; default: canonical");
    cmd_sd->add_option("--max-degree", sd_maxdeg, "monomial degree cap");
    cmd_sd->add_option("--out", common.out_path);

    // transport
    std::string w_path;
    double t_scale = 1.0;
    int deg_D = 8;
    double tol_fix = 1e-12;
    int k_max = 100, m_max = 40, q_max = 4;
    bool no_sd = false;
    auto* cmd_tr = app.add_subcommand("transport", "solve for the transport element");
    cmd_tr->add_option("--graph", common.graph_path)->required();
    cmd_tr->add_option("--w", w_path, "perturbation series document")->required();
    cmd_tr->add_option("--t", t_scale, "scale factor applied to the perturbation");
    cmd_tr->add_option("--deg", deg_D, "truncation degree");
    cmd_tr->add_option("--tol-fix", tol_fix, "fixed-point tolerance");
    cmd_tr->add_option("--k-max", k_max, "iteration cap");
    cmd_tr->add_option("--m-max", m_max, "contraction series cap");
    cmd_tr->add_option("--q-max", q_max, "residual monomial degree cap");
    cmd_tr->add_flag("--no-sd", no_sd, "skip the residual diagnostic");
    cmd_tr->add_option("--report", common.out_path, "write the JSON report here");

    // invert
    std::string x_path;
    int inv_iters = 20;
    auto* cmd_inv = app.add_subcommand("invert", "inverse iteration diagnostics");
    cmd_inv->add_option("--graph", common.graph_path)->required();
    cmd_inv->add_option("--w", w_path)->required();
    cmd_inv->add_option("--x", x_path, "series to reconstruct")->required();
    cmd_inv->add_option("--t", t_scale);
    cmd_inv->add_option("--deg", deg_D);
    cmd_inv->add_option("--iters", inv_iters);
    cmd_inv->add_option("--report", common.out_path);

    // verify
    std::string scenario_name;
    uint64_t seed = 20240817ull;
    auto* cmd_verify = app.add_subcommand("verify", "run a named verification scenario");
    cmd_verify
        ->add_option("scenario", scenario_name,
                     "one of: oracle-match, sd-v0, transport, transport-small-t, scaling, "
                     "inverse-iteration, tower")
        ->required();
    cmd_verify->add_option("--graph", common.graph_path)->required();
    cmd_verify->add_option("--t", t_scale);
    cmd_verify->add_option("--w", w_path, "override the built-in perturbation fixture");
    cmd_verify->add_option("--seed", seed, "sampling seed");
    cmd_verify->add_option("--out", common.out_path);

    CLI11_PARSE(app, argc, argv);

    try {
        GraphData gd = load_graph_file(common.graph_path, common.tol, common.max_iter);

        if (cmd_info->parsed()) {
            json rep = report_envelope("graph-info", gd, common.graph_path);
            json res;
            res["delta"] = gd.delta();
            res["perron_iterations"] = gd.perron.iterations;
            res["perron_residual"] = gd.perron.residual;
            json mu = json::object();
            for (int v = 0; v < gd.graph.num_vertices(); ++v)
                mu[gd.graph.vertex_id(v)] = gd.perron.mu[v];
            res["mu"] = mu;
            json edges = json::array();
            bool lambda_ok = true;
            int pos = 0, neg = 0;
            for (int v = 0; v < gd.graph.num_vertices(); ++v)
                (gd.graph.vertex_positive(v) ? pos : neg)++;
            for (int e = 0; e < gd.graph.num_edges(); ++e) {
                json row;
                row["id"] = gd.graph.edge_id(e);
                row["src"] = gd.graph.vertex_id(gd.source(e));
                row["dst"] = gd.graph.vertex_id(gd.target(e));
                row["sigma"] = gd.sigma(e);
                row["lambda"] = gd.lambda(e);
                if (!(gd.lambda(e) <= gd.delta() + 1e-12)) lambda_ok = false;
                edges.push_back(row);
            }
            res["edges"] = edges;
            res["lambda_at_most_delta"] = lambda_ok;
            res["num_positive_vertices"] = pos;
            res["num_negative_vertices"] = neg;
            res["quantity"] = "largest adjacency eigenvalue, its eigenvector, and edge weights";
            rep["results"] = res;
            emit(rep, common.out_path);
            return lambda_ok ? 0 : 1;
        }

        if (cmd_moment->parsed()) {
            std::vector<int> letters = parse_word_arg(gd, word_arg);
            cx m = vacuum_moment(gd, letters, std::max<int>(kDefaultMaxWordLen,
                                                            int(letters.size())));
            json rep = report_envelope("moment", gd, common.graph_path);
            json res;
            res["word"] = word_arg;
            res["re"] = m.real();
            res["im"] = m.imag();
            res["quantity"] = "vacuum expectation of the operator word";
            rep["results"] = res;
            emit(rep, common.out_path);
            return 0;
        }

        if (cmd_trace->parsed()) {
            WordSeries s = load_series_file(gd, series_path);
            if (trace_k_flag >= 0) s.k = trace_k_flag;
            auto tr = trace_k(gd, s);
            json rep = report_envelope("trace", gd, common.graph_path);
            json res;
            res["k"] = s.k;
            res["trace"] = vertex_map_json(gd, tr);
            res["quantity"] = "vertex-indexed canonical trace (pairing sum)";
            rep["results"] = res;
            emit(rep, common.out_path);
            return 0;
        }

        if (cmd_phik->parsed()) {
            WordSeries s = load_series_file(gd, series_path);
            if (cmd_phik->count("--k")) s.k = phik_k;
            cx v = phi_k(gd, s);
            json rep = report_envelope("phik", gd, common.graph_path);
            json res;
            res["k"] = s.k;
            res["re"] = v.real();
            res["im"] = v.imag();
            res["quantity"] = "grading-k state (weighted diagonal of the operator image)";
            rep["results"] = res;
            emit(rep, common.out_path);
            return 0;
        }

        if (cmd_sd->parsed()) {
            TransportConfig cfg = TransportConfig::defaults(gd);
            cfg.q_max = sd_maxdeg;
            WordSeries w(0);  // difference from the canonical potential
            if (!potential_path.empty()) {
                WordSeries v = load_series_file(gd, potential_path);
                w = v - v0(gd);
                w = remove_constants(w);
            }
            SdReport sd = sd_residual_report(gd, WordSeries(0), w, cfg);
            json rep = report_envelope("sd-check", gd, common.graph_path);
            json res;
            res["max_residual"] = sd.max_residual;
            res["worst_edge"] = sd.worst_edge >= 0 ? gd.graph.edge_id(sd.worst_edge) : "";
            res["worst_word"] = format_word(gd, sd.worst_word);
            res["checks"] = sd.checks;
            res["monomial_degree_cap"] = sd_maxdeg;
            res["quantity"] = "max Schwinger-Dyson defect of the vacuum state";
            rep["results"] = res;
            emit(rep, common.out_path);
            return 0;
        }

        if (cmd_tr->parsed()) {
            WordSeries w = load_series_file(gd, w_path);
            w *= t_scale;
            TransportConfig cfg = config_from_flags(gd, deg_D, t_scale, q_max, tol_fix, k_max,
                                                    m_max);
            cfg.compute_sd = !no_sd;
            TransportResult r = solve_transport(gd, w, cfg);
            json rep = report_envelope("transport", gd, common.graph_path);
            json cfgj;
            cfgj["D"] = cfg.D;
            cfgj["R"] = cfg.R;
            cfgj["R_prime"] = cfg.R_prime;
            cfgj["t"] = t_scale;
            cfgj["tol_fix"] = cfg.tol_fix;
            cfgj["m_max"] = cfg.m_max;
            cfgj["q_max"] = cfg.q_max;
            rep["config"] = cfgj;
            json res;
            res["converged"] = r.converged;
            res["iterations"] = r.iterations;
            res["delta_history"] = r.delta_history;
            res["norm_g"] = r.norm_g;
            res["norm_w"] = r.norm_w;
            res["xi"] = r.xi;
            res["m_tail_bound"] = r.m_tail_bound;
            res["tensor_drop_bound"] = r.tensor_drop_bound;
            res["sd_residual"] = r.sd_residual;
            res["norm_excursions"] = r.norm_excursions;
            res["g"] = series_to_json(gd, r.g);
            res["quantity"] =
                "transport element, fixed-point history, and residual diagnostics";
            rep["results"] = res;
            emit(rep, common.out_path);
            return 0;
        }

        if (cmd_inv->parsed()) {
            WordSeries w = load_series_file(gd, w_path);
            w *= t_scale;
            WordSeries x = load_series_file(gd, x_path);
            TransportConfig cfg = TransportConfig::defaults(gd);
            cfg.D = deg_D;
            cfg.compute_sd = false;
            TransportResult r = solve_transport(gd, w, cfg);
            InverseIterationReport ir = inverse_iteration(gd, r.g, x, cfg, inv_iters, 1e-6);
            json rep = report_envelope("invert", gd, common.graph_path);
            json res;
            res["distances"] = ir.distances;
            res["f_norm"] = ir.f_norm;
            res["reached_target"] = ir.reached_target;
            res["first_below_target"] = ir.first_below_target;
            res["quantity"] = "distance of the reconstructed series to the original per step";
            rep["results"] = res;
            emit(rep, common.out_path);
            return ir.reached_target ? 0 : 1;
        }

        if (cmd_verify->parsed()) {
            std::optional<WordSeries> fixture;
            if (!w_path.empty()) fixture = load_series_file(gd, w_path);
            const WordSeries* fx = fixture ? &*fixture : nullptr;

            scenarios::ScenarioReport rep;
            if (scenario_name == "oracle-match") {
                rep = scenarios::run_oracle_match(gd, seed);
            } else if (scenario_name == "sd-v0") {
                rep = scenarios::run_sd_v0(gd);
            } else if (scenario_name == "transport" || scenario_name == "transport-small-t") {
                rep = (t_scale == 0.0) ? scenarios::run_transport_degenerate(gd)
                                       : scenarios::run_transport_small_t(
                                             gd, cmd_verify->count("--t") ? t_scale : 0.01, fx);
            } else if (scenario_name == "scaling") {
                rep = scenarios::run_scaling(gd, fx);
            } else if (scenario_name == "inverse-iteration") {
                rep = scenarios::run_inverse_iteration(gd, 0.01, fx);
            } else if (scenario_name == "tower") {
                rep = scenarios::run_tower(gd, seed);
            } else {
                throw std::invalid_argument("unknown scenario '" + scenario_name + "'");
            }
            print_scenario(rep);
            if (!common.out_path.empty()) {
                json full = report_envelope("verify", gd, common.graph_path);
                full["seed"] = seed;
                full["results"] = scenario_json(rep);
                emit(full, common.out_path);
            }
            return rep.pass() ? 0 : 1;
        }
    } catch (const TransportError& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
    return 2;
}
