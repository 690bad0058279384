// Document formats: graphs and series as JSON, plus report scaffolding for
// the command-line tools. Reports are machine-readable first; identical
// inputs and seeds produce byte-identical output.

#ifndef LOOPALG_IO_HPP
#define LOOPALG_IO_HPP

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "loopalg/word.hpp"

namespace loopalg {

constexpr const char* kLibraryVersion = "0.1.0";

using json = nlohmann::ordered_json;

// Graph document:
//   {"vertices":[{"id":"v1","parity":"+"},...],
//    "edges":[{"id":"e1","src":"v1","dst":"v2"},...]}
// Each listed edge is one orientation of an undirected pair; the opposite is
// synthesized as "<id>~" unless an explicit "opp" names a listed edge. A
// synthesized pair is oriented so that the bare id starts at the positive
// vertex.
inline BipartiteGraph parse_graph(const json& doc) {
    BipartiteGraph g;
    if (!doc.contains("vertices") || !doc.contains("edges"))
        throw GraphError("graph document needs 'vertices' and 'edges'");
    for (const auto& v : doc["vertices"]) {
        BipartiteGraph::Vertex vx;
        vx.id = v.at("id").get<std::string>();
        std::string parity = v.at("parity").get<std::string>();
        if (parity != "+" && parity != "-")
            throw GraphError("vertex '" + vx.id + "': parity must be '+' or '-'");
        vx.positive = parity == "+";
        if (g.vertex_index.count(vx.id)) throw GraphError("duplicate vertex id '" + vx.id + "'");
        g.vertex_index[vx.id] = g.num_vertices();
        g.vertices.push_back(vx);
    }
    struct Raw {
        std::string id, src, dst, opp;
    };
    std::vector<Raw> raw;
    for (const auto& e : doc["edges"]) {
        Raw r;
        r.id = e.at("id").get<std::string>();
        r.src = e.at("src").get<std::string>();
        r.dst = e.at("dst").get<std::string>();
        if (e.contains("opp")) r.opp = e["opp"].get<std::string>();
        raw.push_back(r);
    }
    auto vertex_of = [&](const std::string& id, const std::string& edge) {
        auto it = g.vertex_index.find(id);
        if (it == g.vertex_index.end())
            throw GraphError("edge '" + edge + "' references missing vertex '" + id + "'");
        return it->second;
    };
    // first pass: listed edges
    for (const auto& r : raw) {
        if (g.edge_index.count(r.id)) throw GraphError("duplicate edge id '" + r.id + "'");
        BipartiteGraph::Edge ed;
        ed.id = r.id;
        ed.src = vertex_of(r.src, r.id);
        ed.dst = vertex_of(r.dst, r.id);
        if (g.vertices[ed.src].positive == g.vertices[ed.dst].positive)
            throw GraphError("edge '" + r.id + "' joins two vertices of equal parity");
        g.edge_index[ed.id] = g.num_edges();
        g.edges.push_back(ed);
    }
    // second pass: wire explicit opposites, synthesize the rest
    for (size_t i = 0; i < raw.size(); ++i) {
        if (!raw[i].opp.empty()) {
            auto it = g.edge_index.find(raw[i].opp);
            if (it == g.edge_index.end())
                throw GraphError("edge '" + raw[i].id + "': opposite '" + raw[i].opp +
                                 "' is not a listed edge");
            g.edges[g.edge_index[raw[i].id]].opp = it->second;
        }
    }
    size_t listed = g.edges.size();
    for (size_t i = 0; i < listed; ++i) {
        if (g.edges[i].opp >= 0) continue;
        BipartiteGraph::Edge& fwd = g.edges[i];
        // orient the bare id out of the positive vertex
        if (!g.vertices[fwd.src].positive) std::swap(fwd.src, fwd.dst);
        BipartiteGraph::Edge rev;
        rev.id = fwd.id + "~";
        rev.src = fwd.dst;
        rev.dst = fwd.src;
        rev.opp = static_cast<int>(i);
        if (g.edge_index.count(rev.id)) throw GraphError("duplicate edge id '" + rev.id + "'");
        fwd.opp = g.num_edges();
        g.edge_index[rev.id] = g.num_edges();
        g.edges.push_back(rev);
    }
    g.rebuild_adjacency();
    g.validate();
    return g;
}

inline GraphData load_graph_file(const std::string& path, double tol = 1e-13,
                                 long max_iter = 1000000) {
    std::ifstream in(path);
    if (!in) throw GraphError("cannot open graph file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const std::exception& ex) {
        throw GraphError("cannot parse graph file '" + path + "': " + ex.what());
    }
    BipartiteGraph g = parse_graph(doc);
    PerronData pd = perron(g, tol, max_iter);
    return GraphData{std::move(g), std::move(pd)};
}

// Series document: either a bare array of terms or
//   {"k":0, "trunc_degree":8, "terms":[{"word":["e1","e1~"],"re":1.0,"im":0.0},...]}
inline WordSeries parse_series(const GraphData& gd, const json& doc) {
    WordSeries s(0);
    const json* terms = &doc;
    if (doc.is_object()) {
        if (doc.contains("k")) s.k = doc["k"].get<int>();
        if (doc.contains("trunc_degree") && !doc["trunc_degree"].is_null())
            s.trunc = doc["trunc_degree"].get<int>();
        if (!doc.contains("terms")) throw std::invalid_argument("series document has no 'terms'");
        terms = &doc["terms"];
    }
    for (const auto& t : *terms) {
        std::vector<int> letters;
        for (const auto& le : t.at("word")) letters.push_back(gd.graph.edge(le.get<std::string>()));
        double re = t.value("re", 0.0), im = t.value("im", 0.0);
        Word w;
        if (letters.empty()) {
            if (!t.contains("base"))
                throw std::invalid_argument("empty word in series document needs a 'base' vertex");
            w = Word(gd.graph.vertex(t["base"].get<std::string>()));
        } else {
            w = make_word(gd, letters);
        }
        s.add(w, cx(re, im));
    }
    return s;
}

inline WordSeries load_series_file(const GraphData& gd, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open series file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const std::exception& ex) {
        throw std::invalid_argument("cannot parse series file '" + path + "': " + ex.what());
    }
    return parse_series(gd, doc);
}

inline json series_to_json(const GraphData& gd, const WordSeries& s) {
    json terms = json::array();
    for (const auto& [w, c] : s.terms) {
        json t;
        json letters = json::array();
        for (int e : w.letters) letters.push_back(gd.graph.edge_id(e));
        t["word"] = letters;
        if (w.empty()) t["base"] = gd.graph.vertex_id(w.base);
        t["re"] = c.real();
        t["im"] = c.imag();
        terms.push_back(t);
    }
    json out;
    out["k"] = s.k;
    if (s.trunc)
        out["trunc_degree"] = *s.trunc;
    else
        out["trunc_degree"] = nullptr;
    out["terms"] = terms;
    return out;
}

// FNV-1a over a canonical rendering of the graph, for report provenance.
inline std::string graph_hash(const BipartiteGraph& g) {
    std::ostringstream os;
    for (const auto& v : g.vertices) os << "v:" << v.id << ":" << (v.positive ? '+' : '-') << ";";
    for (const auto& e : g.edges)
        os << "e:" << e.id << ":" << g.vertices[e.src].id << ":" << g.vertices[e.dst].id << ":"
           << g.edges[e.opp].id << ";";
    std::string s = os.str();
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream hex;
    hex << std::hex << h;
    return hex.str();
}

inline json report_envelope(const std::string& command, const GraphData& gd,
                            const std::string& graph_path) {
    json rep;
    rep["command"] = command;
    rep["library_version"] = kLibraryVersion;
    json gsec;
    gsec["path"] = graph_path;
    gsec["hash"] = graph_hash(gd.graph);
    gsec["vertices"] = gd.graph.num_vertices();
    gsec["edges"] = gd.graph.num_edges();
    rep["graph"] = gsec;
    return rep;
}

}  // namespace loopalg

#endif
