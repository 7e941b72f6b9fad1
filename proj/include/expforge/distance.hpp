#pragma once

#include <string>
#include <vector>

#include "expforge/graph.hpp"

namespace expforge {

// Asymmetric Chamfer distance from a (possibly partial) goal graph to a
// candidate graph: mean over goal nodes of the distance to the nearest
// candidate node. Extra candidate structure is never penalized. All three
// levels (edge, node, graph) are in [0,1] and pure functions of their inputs.

struct NodeMatch {
    std::string goal_node;
    std::string candidate_node;
    double distance = 0;
};

struct DistanceReport {
    double total = 0; // mean of per-goal-node distances
    std::vector<NodeMatch> per_goal_node;
};

// 1.0 across kinds; otherwise 1 - matching/total over payload fields, where
// categorical fields match 0/1, numeric fields match 1/(1+|delta|), shape
// matrices match by 1 - normalized Hamming distance, and rule ids are
// excluded from the count.
double edge_distance(const Edge& a, const Edge& b);

// Mean over the goal node's edges of the distance to the nearest candidate
// edge; 0 when the goal node has no edges.
double node_distance(const NodeView& goal, const NodeView& cand);

struct EmptyCandidate : std::runtime_error {
    EmptyCandidate() : std::runtime_error("candidate graph has no nodes") {}
};

// Throws EmptyCandidate when cand has zero nodes. Ties between equally near
// candidate nodes break by ascending candidate node id.
DistanceReport graph_distance(const PartialGoal& goal, const GameGraph& cand);

std::string report_to_json(const DistanceReport& r);

} // namespace expforge
