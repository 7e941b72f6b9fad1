#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "expforge/distance.hpp"
#include "expforge/graph.hpp"
#include "expforge/rng.hpp"

namespace expforge {

// ---------------------------------------------------------------------------
// Knowledge base: the set of fully learned game graphs available for
// recombination, with per-node incident-edge views precomputed in canonical
// order so filter slot layouts are deterministic.
// ---------------------------------------------------------------------------

struct NodeRef {
    std::string graph;
    std::string node;

    auto operator<=>(const NodeRef&) const = default;
};

class KnowledgeBase {
public:
    explicit KnowledgeBase(std::vector<GameGraph> graphs);

    const std::vector<GameGraph>& graphs() const { return graphs_; }
    const GameGraph& graph(const std::string& name) const;

    // All node views across all graphs, ordered by (graph name, node id).
    const std::vector<NodeView>& all_nodes() const { return all_nodes_; }

    const NodeView& view(const NodeRef& ref) const;

    std::size_t total_node_count() const { return all_nodes_.size(); }

private:
    std::vector<GameGraph> graphs_;
    std::vector<NodeView> all_nodes_;
    std::map<NodeRef, std::size_t> index_;
};

struct EmptyKnowledgeBase : std::runtime_error {
    EmptyKnowledgeBase() : std::runtime_error("knowledge base has no nodes") {}
};

// ---------------------------------------------------------------------------
// Conceptual expansion: each output node is a weighted, filtered combination
// of knowledge-base nodes. A part's filter holds one inclusion weight per
// incident edge plus one weight per payload field of that edge.
// ---------------------------------------------------------------------------

// Slot count for a part sourced from `view`: sum over incident edges of
// 1 (inclusion) + field_count(payload).
std::size_t filter_slot_count(const NodeView& view);

struct ExpansionPart {
    NodeRef source;
    std::vector<double> weights; // size == filter_slot_count(view(source))

    double mean_weight() const;
};

struct ExpandedNode {
    std::string id;    // output node id (goal node id)
    std::string label;
    std::vector<ExpansionPart> parts; // never empty after mapping
};

struct Expansion {
    std::string name; // name of the materialized graph
    std::vector<ExpandedNode> nodes; // fixed length, set at mapping time

    std::size_t total_weight_count() const;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

// Initial mapping: one expanded node per goal node, whose parts are the n
// knowledge-base nodes nearest by node_distance. The best part gets weights
// 1.0; the rank-k part gets (n-k)/n throughout.
Expansion map_expansion(const PartialGoal& goal, const KnowledgeBase& kb,
                        std::size_t n = 10);

// Realize the expansion as a concrete game graph. Edges are included iff
// their inclusion weight >= 0.5; numeric fields scale by their weight;
// categorical fields with weight < 0.5 fall back to the first-ranked part's
// nearest same-kind edge, or drop the edge when no fallback exists.
// Cross-node targets remap to the expanded node claiming the target
// (highest mean part weight, ties by node order); unresolvable references
// drop the edge. Total: never fails.
GameGraph materialize(const Expansion& e, const KnowledgeBase& kb);

// One uniformly chosen action: add a part with random weights, remove a part
// (never emptying a node), shift every weight of one node by a shared
// uniform draw from [-2,2], or multiply one weight by a draw from [-2,2].
Expansion neighbor(const Expansion& e, const KnowledgeBase& kb, Rng& rng);

using NeighborFn = std::function<Expansion(const Expansion&, const KnowledgeBase&, Rng&)>;

struct ClimbResult {
    Expansion expansion;
    GameGraph graph;          // materialized final expansion
    std::vector<double> trace; // heuristic values, non-increasing, trace[0] = initial
};

// Greedy hill-climbing: each step samples `neighbors_per_step` neighbors,
// moves to the best iff it strictly improves, stops otherwise or after
// max_steps moves.
ClimbResult hill_climb(const Expansion& start, const PartialGoal& goal,
                       const KnowledgeBase& kb, Rng& rng,
                       std::size_t neighbors_per_step = 10,
                       std::size_t max_steps = 500,
                       const NeighborFn& neighbor_fn = {});

} // namespace expforge
