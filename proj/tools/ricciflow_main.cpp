// Command-line driver: evolve edge weights on a connected graph, sweep
// surgery cutoffs, and report community-detection metrics.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ricciflow/driver.hpp"
#include "ricciflow/errors.hpp"
#include "ricciflow/flow.hpp"
#include "ricciflow/io.hpp"
#include "ricciflow/metrics.hpp"

namespace {

using namespace ricciflow;

int cmd_run(const RunManifest& manifest) {
    RunOutcome out = run_pipeline(manifest);
    std::cout << "wall_ms " << out.wall_ms << "\n";
    std::cout << "clamp_events " << out.state.clamp_events << "\n";
    std::cout << "best_modularity " << format_number(out.best_by_modularity.modularity)
              << " at cutoff " << format_number(out.best_by_modularity.cutoff) << " (k="
              << out.best_by_modularity.communities << ")\n";
    if (out.best_by_ari)
        std::cout << "best_ari " << format_number(*out.best_by_ari->ari) << " at cutoff "
                  << format_number(out.best_by_ari->cutoff) << " (k="
                  << out.best_by_ari->communities << ")\n";
    if (out.best_by_nmi)
        std::cout << "best_nmi " << format_number(*out.best_by_nmi->nmi) << " at cutoff "
                  << format_number(out.best_by_nmi->cutoff) << " (k="
                  << out.best_by_nmi->communities << ")\n";
    return 0;
}

struct OracleCase {
    OracleShape shape;
    int star_leaves;
    double alpha;
};

int cmd_oracle_check(double step, std::optional<double> alpha_override) {
    std::vector<OracleCase> cases;
    const int star_leaves = 6;
    auto add_shape = [&](OracleShape s, double knot) {
        if (alpha_override) {
            cases.push_back({s, star_leaves, *alpha_override});
        } else {
            cases.push_back({s, star_leaves, 0.5 * knot});
            cases.push_back({s, star_leaves, knot + 0.5 * (1.0 - knot)});
        }
    };
    add_shape(OracleShape::segment, 0.5);
    add_shape(OracleShape::path3, 1.0 / 3.0);
    add_shape(OracleShape::triangle, 1.0 / 3.0);
    add_shape(OracleShape::square, 1.0 / 3.0);
    add_shape(OracleShape::k4, 0.25);
    add_shape(OracleShape::star, 1.0 / (star_leaves + 1.0));

    const double horizon = 1.0;
    const double tolerance = 0.02;
    bool all_pass = true;
    std::printf("%-9s %-7s %-12s %-12s %-10s %s\n", "shape", "alpha", "numeric", "analytic",
                "rel.err", "status");
    for (const OracleCase& c : cases) {
        if (c.alpha < 0.0 || c.alpha >= 1.0) {
            std::printf("%-9s %-7.4g %-12s %-12s %-10s SKIP (alpha outside the [0,1) branch domains)\n",
                        shape_name(c.shape), c.alpha, "-", "-", "-");
            continue;
        }
        const WeightedGraph g = make_shape(c.shape, 1.0, c.star_leaves);
        FlowConfig cfg;
        cfg.alpha = Alpha::checked(c.alpha);
        cfg.step = step;
        cfg.iterations = static_cast<int>(horizon / step + 0.5);
        cfg.variant = FlowVariant::one_evol;
        const FlowState state = run_flow(g, cfg);
        const double expected = analytic_oracle(c.shape, c.alpha, horizon, 1.0, c.star_leaves);
        double worst = 0.0;
        for (double w : state.weights)
            worst = std::max(worst, std::fabs(w - expected) / expected);
        const bool pass = worst <= tolerance;
        all_pass = all_pass && pass;
        std::printf("%-9s %-7.4g %-12.8g %-12.8g %-10.3g %s\n", shape_name(c.shape), c.alpha,
                    state.weights[0], expected, worst, pass ? "PASS" : "FAIL");
    }
    return all_pass ? 0 : 1;
}

std::map<std::string, std::string> parse_label_map(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open label file '" + path + "'");
    std::map<std::string, std::string> out;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (io_detail::blank_or_comment(line)) continue;
        std::istringstream ls(line);
        std::string v, lab, extra;
        if (!(ls >> v >> lab)) throw parse_error(path, line_no, "expected `vertex label`");
        if (ls >> extra) throw parse_error(path, line_no, "trailing token '" + extra + "'");
        out[v] = lab;
    }
    return out;
}

int cmd_metrics(const std::string& pred_path, const std::string& truth_path,
                const std::optional<std::string>& input_path) {
    const auto pred = parse_label_map(pred_path);
    const auto truth = parse_label_map(truth_path);
    if (pred.size() != truth.size())
        throw vertex_set_mismatch_error("label files cover different vertex sets (" +
                                        std::to_string(pred.size()) + " vs " +
                                        std::to_string(truth.size()) + ")");
    std::vector<int> pred_raw, truth_raw;
    std::map<std::string, int> pred_ids, truth_ids;
    for (const auto& [v, lab] : pred) {
        auto it = truth.find(v);
        if (it == truth.end())
            throw vertex_set_mismatch_error("vertex '" + v + "' missing from '" + truth_path +
                                            "'");
        pred_raw.push_back(pred_ids.emplace(lab, static_cast<int>(pred_ids.size())).first->second);
        truth_raw.push_back(
            truth_ids.emplace(it->second, static_cast<int>(truth_ids.size())).first->second);
    }
    const Partition p_pred = Partition::from_labels(pred_raw);
    const Partition p_truth = Partition::from_labels(truth_raw);
    const ContingencyTable table = contingency(p_truth, p_pred);

    nlohmann::json j;
    j["ari"] = ari(table);
    j["nmi"] = nmi(table);
    if (input_path) {
        GraphSource src = read_edge_list_file(*input_path);
        std::vector<int> on_graph(src.graph.vertex_count(), -1);
        for (const auto& [v, lab] : pred) {
            auto it = src.token_to_id.find(v);
            if (it == src.token_to_id.end())
                throw vertex_set_mismatch_error("vertex '" + v +
                                                "' does not appear in the edge list");
            on_graph[it->second] = pred_ids.at(lab);
        }
        for (std::size_t i = 0; i < on_graph.size(); ++i)
            if (on_graph[i] == -1)
                throw vertex_set_mismatch_error("vertex '" + src.tokens[i] +
                                                "' carries no predicted label");
        j["modularity"] = modularity(src.graph, Partition::from_labels(on_graph));
    }
    std::cout << j.dump(2) << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Wasserstein-driven evolution of edge weights for community detection"};
    app.require_subcommand(1);

    RunManifest manifest;
    std::string variant = "one_evol";
    CLI::App* run = app.add_subcommand("run", "evolve weights, sweep cutoffs, emit artifacts");
    run->add_option("--input", manifest.input_path, "edge-list file")->required();
    run->add_option("--labels", manifest.labels_path, "ground-truth label file");
    run->add_option("--variant", variant, "one_evol|qn1_evol|two_evol|qn2_evol")
        ->default_val("one_evol");
    run->add_option("--alpha", manifest.alpha, "laziness parameter")->default_val(0.5);
    run->add_option("--step", manifest.step, "Euler step size")->default_val(0.01);
    run->add_option("--iters", manifest.iterations, "number of iterations")->default_val(20);
    run->add_option("--sweep-resolution", manifest.sweep_resolution, "cutoffs in the sweep")
        ->default_val(200);
    run->add_option("--out", manifest.out_dir, "output directory")->default_val(".");
    run->add_flag("--trace", manifest.trace, "record trace.csv (iteration,edge,weight,curvature)");
    run->add_flag("--allow-alpha-one", manifest.allow_alpha_one,
                  "permit the degenerate endpoint alpha = 1");

    double oracle_step = 0.01;
    std::optional<double> oracle_alpha;
    CLI::App* oracle = app.add_subcommand(
        "oracle-check", "integrate the six closed-form shapes and compare (2% tolerance)");
    oracle->add_option("--step", oracle_step, "Euler step size")->default_val(0.01);
    oracle->add_option("--alpha", oracle_alpha, "override the per-branch alpha values");

    std::string pred_path, truth_path;
    std::optional<std::string> metrics_input;
    CLI::App* metrics = app.add_subcommand("metrics", "score a predicted labeling (JSON output)");
    metrics->add_option("--pred", pred_path, "predicted label file")->required();
    metrics->add_option("--truth", truth_path, "ground-truth label file")->required();
    metrics->add_option("--input", metrics_input, "edge list (adds modularity to the output)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            manifest.variant = ricciflow::variant_from_name(variant);
            return cmd_run(manifest);
        }
        if (oracle->parsed()) return cmd_oracle_check(oracle_step, oracle_alpha);
        if (metrics->parsed()) return cmd_metrics(pred_path, truth_path, metrics_input);
    } catch (const ricciflow::internal_error& err) {
        std::cerr << "internal error: " << err.what() << '\n';
        return 3;
    } catch (const ricciflow::input_error& err) {
        std::cerr << "error: " << err.what() << '\n';
        return 2;
    } catch (const std::exception& err) {
        std::cerr << "internal error: " << err.what() << '\n';
        return 3;
    }
    return 0;
}
