#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "expforge/baselines.hpp"
#include "expforge/distance.hpp"
#include "expforge/expansion.hpp"
#include "expforge/harness.hpp"
#include "expforge/serialize.hpp"

namespace {

using namespace expforge;

GoalScope scope_from(const std::string& s) {
    if (s == "design") return GoalScope::DesignOnly;
    if (s == "rules") return GoalScope::RulesOnly;
    return GoalScope::Full;
}

GameGraph load_with_warnings(const std::string& path) {
    std::vector<std::string> warnings;
    GameGraph g = load_graph(path, &warnings);
    for (const auto& w : warnings) std::cerr << path << ": warning: " << w << "\n";
    return g;
}

PartialGoal load_goal(const std::string& path, const std::string& scope) {
    const GameGraph g = load_with_warnings(path);
    const GoalScope sc = scope_from(scope);
    if (sc == GoalScope::Full) return PartialGoal{g, GoalScope::Full};
    return project(g, sc);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

void write_trace(const std::string& path, const std::vector<double>& trace) {
    std::string text = "step,h\n";
    char buf[64];
    for (std::size_t i = 0; i < trace.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%zu,%.12g\n", i, trace[i]);
        text += buf;
    }
    write_text(path, text);
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"expansion-forge: recombine game graphs via conceptual expansion"};
    app.require_subcommand(1);

    // validate
    std::string v_path;
    auto* cmd_validate = app.add_subcommand("validate", "Check a game graph file");
    cmd_validate->add_option("file", v_path, "graph file (.gg.json)")->required();

    // distance
    std::string d_goal, d_cand, d_scope = "full";
    auto* cmd_distance =
        app.add_subcommand("distance", "Asymmetric Chamfer distance goal -> candidate");
    cmd_distance->add_option("goal", d_goal, "goal graph")->required();
    cmd_distance->add_option("candidate", d_cand, "candidate graph")->required();
    cmd_distance->add_option("--scope", d_scope, "project goal to design|rules|full")
        ->check(CLI::IsMember({"design", "rules", "full"}));

    // expand
    std::vector<std::string> e_kb;
    std::string e_goal, e_out, e_trace, e_scope = "full";
    std::uint64_t e_seed = 0;
    std::size_t e_steps = 500, e_neighbors = 10, e_n = 10;
    auto* cmd_expand = app.add_subcommand("expand", "Conceptual-expansion hill climb");
    cmd_expand->add_option("--kb", e_kb, "knowledge-base graphs")->required()->expected(-1);
    cmd_expand->add_option("--goal", e_goal, "goal graph")->required();
    cmd_expand->add_option("--seed", e_seed, "rng seed (default 0)");
    cmd_expand->add_option("--steps", e_steps, "max hill-climb moves");
    cmd_expand->add_option("--neighbors", e_neighbors, "neighbors sampled per step");
    cmd_expand->add_option("--n", e_n, "mapped parts per goal node");
    cmd_expand->add_option("--scope", e_scope, "project goal to design|rules|full")
        ->check(CLI::IsMember({"design", "rules", "full"}));
    cmd_expand->add_option("--out", e_out, "result graph file")->required();
    cmd_expand->add_option("--trace", e_trace, "heuristic trace CSV");

    // baseline
    std::vector<std::string> b_kb;
    std::string b_method, b_goal, b_out, b_trace, b_scope = "full";
    std::uint64_t b_seed = 0;
    std::size_t b_steps = 500, b_generations = 100, b_n = 10;
    auto* cmd_baseline = app.add_subcommand("baseline", "Run a comparison method");
    cmd_baseline->add_option("--method", b_method, "knn|blend|ga")
        ->required()
        ->check(CLI::IsMember({"knn", "blend", "ga"}));
    cmd_baseline->add_option("--kb", b_kb, "knowledge-base graphs")->required()->expected(-1);
    cmd_baseline->add_option("--goal", b_goal, "goal graph")->required();
    cmd_baseline->add_option("--seed", b_seed, "rng seed (default 0)");
    cmd_baseline->add_option("--steps", b_steps, "max hill-climb moves (blend)");
    cmd_baseline->add_option("--generations", b_generations, "generation cap (ga)");
    cmd_baseline->add_option("--n", b_n, "mapped parts per goal node (blend)");
    cmd_baseline->add_option("--scope", b_scope, "project goal to design|rules|full")
        ->check(CLI::IsMember({"design", "rules", "full"}));
    cmd_baseline->add_option("--out", b_out, "result graph file")->required();
    cmd_baseline->add_option("--trace", b_trace, "trace CSV (blend/ga)");

    // experiment
    std::string x_config, x_out, x_summary;
    auto* cmd_experiment = app.add_subcommand("experiment", "Run a recreation experiment");
    cmd_experiment->add_option("--config", x_config, "experiment config JSON")->required();
    cmd_experiment->add_option("--out", x_out, "report CSV")->required();
    cmd_experiment->add_option("--summary", x_summary, "summary JSON");

    // fixture
    std::string f_out, f_base;
    std::uint64_t f_seed = 0;
    std::size_t f_nodes = 8;
    double f_density = 0.5, f_shared = 0.0;
    auto* cmd_fixture = app.add_subcommand("fixture", "Generate a synthetic game graph");
    cmd_fixture->add_option("--seed", f_seed, "rng seed (default 0)");
    cmd_fixture->add_option("--nodes", f_nodes, "node count")->check(CLI::PositiveNumber);
    cmd_fixture->add_option("--density", f_density, "edge density in [0,1]");
    cmd_fixture->add_option("--shared", f_shared, "fraction of nodes copied from --base");
    cmd_fixture->add_option("--base", f_base, "base graph to share nodes with");
    cmd_fixture->add_option("--out", f_out, "output graph file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*cmd_validate) {
            load_with_warnings(v_path);
            return 0;
        }
        if (*cmd_distance) {
            const PartialGoal goal = load_goal(d_goal, d_scope);
            const GameGraph cand = load_with_warnings(d_cand);
            std::cout << report_to_json(graph_distance(goal, cand)) << "\n";
            return 0;
        }
        if (*cmd_expand) {
            std::vector<GameGraph> graphs;
            for (const auto& p : e_kb) graphs.push_back(load_with_warnings(p));
            const KnowledgeBase kb(std::move(graphs));
            const PartialGoal goal = load_goal(e_goal, e_scope);
            Rng rng(e_seed);
            const Expansion start = map_expansion(goal, kb, e_n);
            const ClimbResult r = hill_climb(start, goal, kb, rng, e_neighbors, e_steps);
            save_graph(r.graph, e_out);
            if (!e_trace.empty()) write_trace(e_trace, r.trace);
            return 0;
        }
        if (*cmd_baseline) {
            std::vector<GameGraph> graphs;
            for (const auto& p : b_kb) graphs.push_back(load_with_warnings(p));
            const KnowledgeBase kb(std::move(graphs));
            const PartialGoal goal = load_goal(b_goal, b_scope);
            Rng rng(b_seed);
            if (b_method == "knn") {
                save_graph(knn_select(kb, goal), b_out);
            } else if (b_method == "blend") {
                const ClimbResult r = blend_search(goal, kb, rng, 10, b_steps, b_n);
                save_graph(r.graph, b_out);
                if (!b_trace.empty()) write_trace(b_trace, r.trace);
            } else {
                const GAResult r = ga_search(kb, goal, rng, b_generations);
                save_graph(r.graph, b_out);
                if (!b_trace.empty()) write_trace(b_trace, r.trace);
            }
            return 0;
        }
        if (*cmd_experiment) {
            nlohmann::json cfg;
            try {
                cfg = nlohmann::json::parse(read_text(x_config));
            } catch (const nlohmann::json::parse_error& e) {
                throw ParseError(std::string("bad experiment config: ") + e.what());
            }
            std::vector<GameGraph> kb_graphs;
            for (const auto& p : cfg.at("kb"))
                kb_graphs.push_back(load_with_warnings(p.get<std::string>()));
            const GameGraph goal = load_with_warnings(cfg.at("goal").get<std::string>());
            ExperimentSpec spec;
            for (const auto& g : kb_graphs) spec.kb.push_back(g.name);
            spec.goal_game = goal.name;
            spec.mode = cfg.value("mode", std::string("designer")) == "developer"
                            ? ExperimentMode::Developer
                            : ExperimentMode::Designer;
            for (const auto& s : cfg.at("seeds")) spec.seeds.push_back(s.get<std::uint64_t>());
            if (cfg.contains("methods"))
                for (const auto& m : cfg["methods"])
                    spec.methods.push_back(method_from_name(m.get<std::string>()));
            else
                spec.methods = {Method::Expansion, Method::Blend, Method::KNN, Method::GA};
            spec.steps = cfg.value("steps", spec.steps);
            spec.neighbors = cfg.value("neighbors", spec.neighbors);
            spec.mapping_n = cfg.value("n", spec.mapping_n);
            spec.generations = cfg.value("generations", spec.generations);
            const ExperimentReport report = run_experiment(spec, kb_graphs, goal);
            if (report.degenerate)
                std::cerr << "warning: goal game is part of the knowledge base "
                             "(degenerate configuration)\n";
            write_text(x_out, report_to_csv(report));
            if (!x_summary.empty()) write_text(x_summary, report_summary_json(report));
            return 0;
        }
        if (*cmd_fixture) {
            GameGraph base;
            const bool has_base = !f_base.empty();
            if (has_base) base = load_with_warnings(f_base);
            const GameGraph g = generate_fixture(f_seed, f_nodes, f_density, f_shared,
                                                 has_base ? &base : nullptr);
            save_graph(g, f_out);
            return 0;
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
