#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "expforge/baselines.hpp"
#include "expforge/expansion.hpp"

namespace expforge {

// Synthetic-fixture generator and the two recreation experiments (designer:
// search sees only the design projection; developer: only the rules
// projection). Test error is always computed against the withheld
// projection, which no search method ever observes.

// Keeps exactly the edge kinds in scope; all nodes are retained (edge-free
// nodes contribute zero distance).
PartialGoal project(const GameGraph& g, GoalScope scope);

// Deterministic per (seed, parameters). When base is given, round(
// shared_fraction * node_count) of its nodes are copied with the edges that
// stay inside the copied set; remaining nodes are freshly sampled. Always
// produces a graph that validates cleanly, with every rule paired.
GameGraph generate_fixture(std::uint64_t seed, std::size_t node_count,
                           double edge_density, double shared_fraction = 0.0,
                           const GameGraph* base = nullptr);

enum class Method { Expansion, Blend, KNN, GA };
enum class ExperimentMode { Designer, Developer };

const char* method_name(Method m);
Method method_from_name(const std::string& s);
const char* mode_name(ExperimentMode m);

struct ExperimentSpec {
    std::vector<std::string> kb;       // exactly two graph names
    std::string goal_game;             // differs from both kb entries
    ExperimentMode mode = ExperimentMode::Designer;
    std::vector<std::uint64_t> seeds;
    std::vector<Method> methods;
    std::size_t steps = 500;           // hill-climb cap (expansion/blend)
    std::size_t neighbors = 10;
    std::size_t mapping_n = 10;
    std::size_t generations = 100;     // GA cap
};

struct ReportRow {
    Method method;
    std::uint64_t seed = 0;
    ExperimentMode mode;
    double train_error = 0;
    double test_error = 0;
    std::size_t steps = 0;
    double wall_time_ms = 0;
};

struct ExperimentReport {
    std::vector<ReportRow> rows;
    bool degenerate = false; // goal game duplicated inside the kb
};

// Runs every (method, seed) cell of the spec. Cells run concurrently, capped
// by EXPANSION_FORGE_THREADS when set. kb_graphs must match spec.kb; goal is
// the full goal graph (projections are taken internally).
ExperimentReport run_experiment(const ExperimentSpec& spec,
                                const std::vector<GameGraph>& kb_graphs,
                                const GameGraph& goal);

ExperimentReport run_designer(const ExperimentSpec& spec,
                              const std::vector<GameGraph>& kb_graphs,
                              const GameGraph& goal);

ExperimentReport run_developer(const ExperimentSpec& spec,
                               const std::vector<GameGraph>& kb_graphs,
                               const GameGraph& goal);

std::string report_to_csv(const ExperimentReport& report);
std::string report_summary_json(const ExperimentReport& report);

} // namespace expforge
