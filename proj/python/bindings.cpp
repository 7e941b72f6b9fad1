#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "expforge/baselines.hpp"
#include "expforge/distance.hpp"
#include "expforge/expansion.hpp"
#include "expforge/harness.hpp"
#include "expforge/serialize.hpp"

namespace py = pybind11;
using namespace expforge;

namespace {

GoalScope scope_from(const std::string& s) {
    if (s == "design") return GoalScope::DesignOnly;
    if (s == "rules") return GoalScope::RulesOnly;
    if (s == "full") return GoalScope::Full;
    throw py::value_error("scope must be 'design', 'rules' or 'full'");
}

PartialGoal as_goal(const GameGraph& g, const std::string& scope) {
    const GoalScope sc = scope_from(scope);
    return sc == GoalScope::Full ? PartialGoal{g, GoalScope::Full} : project(g, sc);
}

py::dict report_dict(const DistanceReport& r) {
    py::dict d;
    d["total"] = r.total;
    py::list per;
    for (const auto& m : r.per_goal_node) {
        py::dict e;
        e["goal"] = m.goal_node;
        e["candidate"] = m.candidate_node;
        e["distance"] = m.distance;
        per.append(e);
    }
    d["per_goal_node"] = per;
    return d;
}

py::tuple search_result(const GameGraph& g, const std::vector<double>& trace) {
    return py::make_tuple(g, trace);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Conceptual expansion over game graphs";

    py::register_exception<ParseError>(m, "GraphParseError", PyExc_ValueError);
    py::register_exception<ValidationError>(m, "GraphValidationError", PyExc_ValueError);

    py::class_<GameGraph>(m, "GameGraph")
        .def_readonly("name", &GameGraph::name)
        .def_property_readonly("node_ids",
                               [](const GameGraph& g) {
                                   std::vector<std::string> ids;
                                   for (const auto& n : g.nodes) ids.push_back(n.id);
                                   return ids;
                               })
        .def_property_readonly("edge_count",
                               [](const GameGraph& g) { return g.edges.size(); })
        .def("to_json", &to_canonical_json)
        .def("__eq__",
             [](const GameGraph& a, const GameGraph& b) { return structurally_equal(a, b); })
        .def("__repr__", [](const GameGraph& g) {
            return "<GameGraph '" + g.name + "' nodes=" + std::to_string(g.nodes.size()) +
                   " edges=" + std::to_string(g.edges.size()) + ">";
        });

    m.def("loads", [](const std::string& text) { return graph_from_json(text); },
          py::arg("text"));
    m.def("load_graph", [](const std::string& path) { return load_graph(path); },
          py::arg("path"));
    m.def("save_graph", &save_graph, py::arg("graph"), py::arg("path"));

    m.def("validate",
          [](const GameGraph& g) {
              std::vector<std::string> out;
              for (const auto& v : validate(g))
                  out.push_back(std::string(violation_code_name(v.code)) + " " + v.locus +
                                ": " + v.message);
              return out;
          },
          py::arg("graph"));

    m.def("project",
          [](const GameGraph& g, const std::string& scope) {
              return project(g, scope_from(scope)).graph;
          },
          py::arg("graph"), py::arg("scope"));

    m.def("graph_distance",
          [](const GameGraph& goal, const GameGraph& cand, const std::string& scope) {
              return report_dict(graph_distance(as_goal(goal, scope), cand));
          },
          py::arg("goal"), py::arg("candidate"), py::arg("scope") = "full");

    m.def("generate_fixture",
          [](std::uint64_t seed, std::size_t nodes, double density, double shared,
             const GameGraph* base) {
              return generate_fixture(seed, nodes, density, shared, base);
          },
          py::arg("seed"), py::arg("nodes") = 8, py::arg("density") = 0.5,
          py::arg("shared") = 0.0, py::arg("base") = nullptr);

    m.def("expand",
          [](const std::vector<GameGraph>& kb_graphs, const GameGraph& goal,
             const std::string& scope, std::uint64_t seed, std::size_t steps,
             std::size_t neighbors, std::size_t n) {
              const KnowledgeBase kb(kb_graphs);
              const PartialGoal pg = as_goal(goal, scope);
              Rng rng(seed);
              const ClimbResult r =
                  hill_climb(map_expansion(pg, kb, n), pg, kb, rng, neighbors, steps);
              return search_result(r.graph, r.trace);
          },
          py::arg("kb"), py::arg("goal"), py::arg("scope") = "full", py::arg("seed") = 0,
          py::arg("steps") = 500, py::arg("neighbors") = 10, py::arg("n") = 10,
          "Greedy hill-climb over conceptual expansions; returns (graph, trace).");

    m.def("blend_search",
          [](const std::vector<GameGraph>& kb_graphs, const GameGraph& goal,
             const std::string& scope, std::uint64_t seed, std::size_t steps,
             std::size_t n) {
              const KnowledgeBase kb(kb_graphs);
              const PartialGoal pg = as_goal(goal, scope);
              Rng rng(seed);
              const ClimbResult r = blend_search(pg, kb, rng, 10, steps, n);
              return search_result(r.graph, r.trace);
          },
          py::arg("kb"), py::arg("goal"), py::arg("scope") = "full", py::arg("seed") = 0,
          py::arg("steps") = 500, py::arg("n") = 10);

    m.def("knn_select",
          [](const std::vector<GameGraph>& kb_graphs, const GameGraph& goal,
             const std::string& scope) {
              const KnowledgeBase kb(kb_graphs);
              return knn_select(kb, as_goal(goal, scope));
          },
          py::arg("kb"), py::arg("goal"), py::arg("scope") = "full");

    m.def("ga_search",
          [](const std::vector<GameGraph>& kb_graphs, const GameGraph& goal,
             const std::string& scope, std::uint64_t seed, std::size_t generations) {
              const KnowledgeBase kb(kb_graphs);
              Rng rng(seed);
              const GAResult r = ga_search(kb, as_goal(goal, scope), rng, generations);
              return search_result(r.graph, r.trace);
          },
          py::arg("kb"), py::arg("goal"), py::arg("scope") = "full", py::arg("seed") = 0,
          py::arg("generations") = 100);
}
