#pragma once

#include "expforge/graph.hpp"
#include "expforge/rng.hpp"

#include <string>

namespace expforge::testfix {

inline ShapeMatrix shape2x2(std::initializer_list<int> cells) {
    ShapeMatrix m;
    m.rows = 2;
    m.cols = 2;
    for (int c : cells) m.cells.push_back(c ? 1 : 0);
    return m;
}

// Two sprites with a design edge of each kind plus one rule.
inline GameGraph small_graph(const std::string& name = "small") {
    GameGraph g;
    g.name = name;
    g.nodes = {{"hero", "hero sprite"}, {"wall", "wall tile"}};
    g.edges.push_back({"hero", GEdge{10, 20, shape2x2({1, 1, 0, 1}), "S0", "L0"}});
    g.edges.push_back({"hero", NEdge{1, "L0"}});
    g.edges.push_back({"wall", GEdge{0, 0, shape2x2({1, 1, 1, 1}), "S1", "L0"}});
    g.edges.push_back({"wall", NEdge{6, "L0"}});
    g.edges.push_back({"hero", DEdge{4, -2, 0.75, "S0", "L0", "wall"}});
    g.edges.push_back({"hero", RuleConditionEdge{VelocityYFact{0}, "r0", "hero"}});
    g.edges.push_back(
        {"hero", RuleEffectEdge{VelocityYFact{0}, VelocityYFact{-3}, "r0", "hero"}});
    return g;
}

// Random small graphs for property-style sweeps: wraps the harness generator
// at test-friendly sizes.
} // namespace expforge::testfix
