#pragma once

#include "expforge/expansion.hpp"

namespace expforge {

// Comparison methods: KNN, Blend (binary-weight expansion search) and a
// genetic algorithm over whole graphs.

// Returns the knowledge-base graph nearest to the goal, unmodified.
// Ties break by graph name ascending.
const GameGraph& knn_select(const KnowledgeBase& kb, const PartialGoal& goal);

// Conceptual blending: same search as hill_climb but every filter weight is
// constrained to {0,1}. The mapping's percentile weights round at 0.5
// (0.5 itself rounds down); the two weight-perturbation actions collapse
// into flipping one uniformly chosen weight.
Expansion map_blend(const PartialGoal& goal, const KnowledgeBase& kb,
                    std::size_t n = 10);

Expansion blend_neighbor(const Expansion& e, const KnowledgeBase& kb, Rng& rng);

ClimbResult blend_search(const PartialGoal& goal, const KnowledgeBase& kb,
                         Rng& rng, std::size_t neighbors_per_step = 10,
                         std::size_t max_steps = 500, std::size_t n = 10);

struct WrongKBSize : std::runtime_error {
    WrongKBSize() : std::runtime_error("GA requires exactly 2 knowledge-base graphs") {}
};

struct GAIndividual {
    GameGraph graph;
    double fitness = 1.0; // graph_distance to the goal, lower is better
};

struct GAResult {
    GameGraph graph;
    double fitness = 1.0;
    std::vector<double> trace; // best-ever fitness per generation
};

// Changes one uniformly chosen edge field to the value of the same field on
// another same-kind edge of the graph.
GameGraph mutate_graph(const GameGraph& g, Rng& rng);

// Child takes ceil(|A|/2) random nodes of A and floor(|B|/2) of B (with
// their owned edges); edges with dangling targets are dropped.
GameGraph crossover(const GameGraph& a, const GameGraph& b, Rng& rng);

using GAObserver = std::function<void(std::size_t generation, const std::vector<GAIndividual>&)>;

// Population of 10 seeded with the two kb graphs plus four mutations of
// each; elite 2, fitness-proportionate parents, mutation probability 0.3 per
// child; stops at max_generations or fitness 0. The observer, when set, sees
// every generation's population.
GAResult ga_search(const KnowledgeBase& kb, const PartialGoal& goal, Rng& rng,
                   std::size_t max_generations = 100, const GAObserver& observer = {});

} // namespace expforge
