#pragma once

#include <cctype>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "ricciflow/errors.hpp"
#include "ricciflow/graph.hpp"
#include "ricciflow/metrics.hpp"

namespace ricciflow {

// Graph plus the original vertex tokens (dense ids assigned in first-seen
// order while reading the edge list).
struct GraphSource {
    WeightedGraph graph;
    std::vector<std::string> tokens;
    std::unordered_map<std::string, VertexId> token_to_id;
};

namespace io_detail {

inline bool blank_or_comment(const std::string& line) {
    for (char c : line) {
        if (c == '#') return true;
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

} // namespace io_detail

// Edge-list text format: one edge per line, whitespace separated `u v [w]`,
// omitted weight defaults to 1.0, lines starting with '#' ignored. Vertex
// labels are arbitrary tokens.
inline GraphSource read_edge_list(std::istream& in, const std::string& name) {
    GraphSource src;
    std::vector<Edge> edges;
    std::vector<long> edge_lines;
    std::string line;
    long line_no = 0;
    auto intern = [&src](const std::string& tok) {
        auto it = src.token_to_id.find(tok);
        if (it != src.token_to_id.end()) return it->second;
        const VertexId id = static_cast<VertexId>(src.tokens.size());
        src.tokens.push_back(tok);
        src.token_to_id.emplace(tok, id);
        return id;
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (io_detail::blank_or_comment(line)) continue;
        std::istringstream ls(line);
        std::string u, v;
        if (!(ls >> u >> v))
            throw parse_error(name, line_no, "expected `u v [w]`");
        double w = 1.0;
        std::string wtok;
        if (ls >> wtok) {
            try {
                std::size_t pos = 0;
                w = std::stod(wtok, &pos);
                if (pos != wtok.size()) throw std::invalid_argument(wtok);
            } catch (const std::exception&) {
                throw parse_error(name, line_no, "bad weight '" + wtok + "'");
            }
        }
        std::string extra;
        if (ls >> extra)
            throw parse_error(name, line_no, "trailing token '" + extra + "'");
        edges.push_back({intern(u), intern(v), w});
        edge_lines.push_back(line_no);
    }
    if (edges.empty()) throw input_error(name + ": no edges found");
    try {
        src.graph = WeightedGraph::build(std::move(edges), src.tokens.size());
    } catch (const self_loop_error& err) {
        throw self_loop_error(name + ": " + err.what());
    } catch (const duplicate_edge_error& err) {
        throw duplicate_edge_error(name + ": " + err.what());
    } catch (const non_positive_weight_error& err) {
        throw non_positive_weight_error(name + ": " + err.what());
    } catch (const disconnected_error& err) {
        throw disconnected_error(name + ": " + err.what());
    }
    return src;
}

inline GraphSource read_edge_list_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open edge list '" + path + "'");
    return read_edge_list(in, path);
}

// Ground-truth label format: one `vertex label` pair per line over the same
// token space as the edge list. Every graph vertex must be labeled.
inline Partition read_labels(std::istream& in, const std::string& name, const GraphSource& src) {
    std::vector<int> raw(src.tokens.size(), -1);
    std::unordered_map<std::string, int> label_ids;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (io_detail::blank_or_comment(line)) continue;
        std::istringstream ls(line);
        std::string v, lab, extra;
        if (!(ls >> v >> lab))
            throw parse_error(name, line_no, "expected `vertex label`");
        if (ls >> extra)
            throw parse_error(name, line_no, "trailing token '" + extra + "'");
        auto it = src.token_to_id.find(v);
        if (it == src.token_to_id.end())
            throw vertex_set_mismatch_error(name + ":" + std::to_string(line_no) + ": vertex '" +
                                            v + "' does not appear in the edge list");
        auto [lit, inserted] = label_ids.emplace(lab, static_cast<int>(label_ids.size()));
        if (raw[it->second] != -1 && raw[it->second] != lit->second)
            throw parse_error(name, line_no, "conflicting label for vertex '" + v + "'");
        raw[it->second] = lit->second;
    }
    for (std::size_t i = 0; i < raw.size(); ++i)
        if (raw[i] == -1)
            throw vertex_set_mismatch_error(name + ": vertex '" + src.tokens[i] +
                                            "' carries no label");
    return Partition::from_labels(std::move(raw));
}

inline Partition read_labels_file(const std::string& path, const GraphSource& src) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open label file '" + path + "'");
    return read_labels(in, path, src);
}

// Fixed-format number rendering: 6 significant digits, '.' decimal point,
// locale independent.
inline std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

inline void write_sweep_csv(std::ostream& out, const SweepResult& sweep) {
    out << "cutoff,k,modularity,ari,nmi\n";
    for (const SweepRow& r : sweep.rows) {
        out << format_number(r.cutoff) << ',' << r.communities << ','
            << format_number(r.modularity) << ',';
        if (r.ari) out << format_number(*r.ari);
        out << ',';
        if (r.nmi) out << format_number(*r.nmi);
        out << '\n';
    }
}

inline void write_final_weights_csv(std::ostream& out, const GraphSource& src,
                                    const std::vector<double>& weights) {
    out << "u,v,weight\n";
    for (EdgeId e = 0; e < src.graph.edge_count(); ++e) {
        const Edge& ed = src.graph.edge(e);
        out << src.tokens[ed.u] << ',' << src.tokens[ed.v] << ',' << format_number(weights[e])
            << '\n';
    }
}

inline void write_trace_csv(std::ostream& out, const GraphSource& src, const FlowState& state) {
    out << "iteration,u,v,weight,curvature\n";
    for (std::size_t it = 0; it < state.history.size(); ++it) {
        const IterationRecord& rec = state.history[it];
        for (EdgeId e = 0; e < src.graph.edge_count(); ++e) {
            const Edge& ed = src.graph.edge(e);
            out << (it + 1) << ',' << src.tokens[ed.u] << ',' << src.tokens[ed.v] << ','
                << format_number(rec.weights[e]) << ',' << format_number(rec.curvatures[e])
                << '\n';
        }
    }
}

} // namespace ricciflow
