// Acceptance suite: one self-contained check per criterion, each printing a
// single pass/fail line. Criterion 7 is a directional benchmark and is
// reported but does not flip the exit code on its own.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "expforge/baselines.hpp"
#include "expforge/harness.hpp"
#include "expforge/serialize.hpp"
#include "oracle.hpp"

using namespace expforge;

namespace {

struct Checker {
    bool ok = true;
    std::string why;

    void require(bool cond, const std::string& msg) {
        if (!cond && ok) {
            ok = false;
            why = msg;
        }
    }
};

// --- 1: distance laws ------------------------------------------------------

void distance_laws(Checker& c) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const GameGraph g = generate_fixture(seed, 2 + seed % 6, 0.1 * double(seed % 10));
        const DistanceReport self = graph_distance({g, GoalScope::Full}, g);
        c.require(self.total == 0.0, "self distance not exactly 0 at seed " +
                                         std::to_string(seed));
        for (const auto& m : self.per_goal_node)
            c.require(m.distance == 0.0, "per-node self distance not 0");
    }
    // Range + kind wall on random edge pairs.
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const GameGraph a = generate_fixture(seed, 5, 0.8);
        const GameGraph b = generate_fixture(seed + 500, 5, 0.8);
        for (const auto& ea : a.edges)
            for (const auto& eb : b.edges) {
                const double d = edge_distance(ea, eb);
                c.require(d >= 0.0 && d <= 1.0, "edge distance out of range");
                if (std::string(edge_kind_name(ea.payload)) != edge_kind_name(eb.payload))
                    c.require(d == 1.0, "cross-kind edge distance not exactly 1.0");
            }
        const double gd = graph_distance({a, GoalScope::Full}, b).total;
        c.require(gd >= 0.0 && gd <= 1.0, "graph distance out of range");
    }
    // Candidate augmentation monotonicity, 100 randomized augmentations.
    Rng rng(12345);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const GameGraph goal = generate_fixture(seed, 4, 0.6);
        GameGraph cand = generate_fixture(seed + 50, 4, 0.6);
        double prev = graph_distance({goal, GoalScope::Full}, cand).total;
        for (int k = 0; k < 10; ++k) {
            const std::string owner = cand.nodes[rng.index(cand.nodes.size())].id;
            switch (rng.index(3)) {
                case 0:
                    cand.edges.push_back(
                        {owner, NEdge{static_cast<long long>(rng.index(9)),
                                      "L" + std::to_string(rng.index(4))}});
                    break;
                case 1:
                    cand.edges.push_back(
                        {owner, DEdge{double(rng.index(32)), double(rng.index(32)),
                                      rng.uniform(), "S0", "L0",
                                      cand.nodes[rng.index(cand.nodes.size())].id}});
                    break;
                default:
                    cand.edges.push_back(
                        {owner, RuleConditionEdge{VelocityXFact{double(rng.index(8))},
                                                  "ra" + std::to_string(k), owner}});
            }
            const double next = graph_distance({goal, GoalScope::Full}, cand).total;
            c.require(next <= prev + 1e-15, "augmentation increased goal distance");
            prev = next;
        }
    }
}

// --- 2: oracle equivalence -------------------------------------------------

void oracle_equivalence(Checker& c) {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const GameGraph goal = generate_fixture(seed, 1 + seed % 5, 0.5);
        const GameGraph cand = generate_fixture(seed + 5000, 1 + (seed + 3) % 5, 0.5);
        const double lib = graph_distance({goal, GoalScope::Full}, cand).total;
        const double ref = oracle::graph_distance(goal, cand);
        c.require(std::abs(lib - ref) <= 1e-12,
                  "oracle mismatch at seed " + std::to_string(seed) + ": " +
                      std::to_string(lib) + " vs " + std::to_string(ref));
    }
}

// --- 3: materialization identity -------------------------------------------

void materialization_identity(Checker& c) {
    std::size_t nodes_seen = 0;
    for (std::uint64_t seed = 0; nodes_seen < 100; ++seed) {
        const GameGraph g = generate_fixture(seed, 5, 0.7);
        const KnowledgeBase kb({g});
        Expansion e = map_expansion({g, GoalScope::Full}, kb, 1);
        for (auto& n : e.nodes)
            for (auto& p : n.parts)
                for (double& w : p.weights) w = 1.0;
        GameGraph out = materialize(e, kb);
        out.name = g.name;
        c.require(structurally_equal(out, g),
                  "identity materialization mismatch at seed " + std::to_string(seed));
        for (auto& n : e.nodes)
            for (auto& p : n.parts)
                for (double& w : p.weights) w = 0.0;
        const GameGraph zero = materialize(e, kb);
        c.require(zero.edges.empty(), "zero filter produced edges");
        c.require(zero.nodes.size() == g.nodes.size(), "zero filter lost nodes");
        nodes_seen += g.nodes.size();
    }
}

// --- 4: hill-climb contract ------------------------------------------------

void hill_climb_contract(Checker& c) {
    const std::size_t max_steps = 10;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const GameGraph base = generate_fixture(seed + 900, 5, 0.5);
        const GameGraph a = generate_fixture(seed + 910, 5, 0.5, 0.5, &base);
        const GameGraph b = generate_fixture(seed + 920, 5, 0.5, 0.5, &base);
        const GameGraph goal = generate_fixture(seed + 930, 5, 0.5, 0.5, &base);
        const KnowledgeBase kb({a, b});
        const PartialGoal train = project(goal, GoalScope::DesignOnly);
        const Expansion start = map_expansion(train, kb, 5);

        Rng r1(seed);
        const ClimbResult x = hill_climb(start, train, kb, r1, 10, max_steps);
        c.require(x.trace.size() >= 1 && x.trace.size() <= max_steps + 1,
                  "trace length out of bounds");
        for (std::size_t i = 1; i < x.trace.size(); ++i)
            c.require(x.trace[i] <= x.trace[i - 1], "trace increased");

        Rng r2(seed);
        const ClimbResult y = hill_climb(start, train, kb, r2, 10, max_steps);
        c.require(x.trace == y.trace, "same seed produced different traces");
        c.require(to_canonical_json(x.graph) == to_canonical_json(y.graph),
                  "same seed produced different graphs");
    }
}

// --- 5: mapping contract ---------------------------------------------------

void mapping_contract(Checker& c) {
    const GameGraph a = generate_fixture(41, 10, 0.6);
    const GameGraph b = generate_fixture(42, 10, 0.6);
    const GameGraph goal = generate_fixture(43, 5, 0.6);
    const KnowledgeBase kb({a, b});
    const std::size_t n = 10;
    const Expansion e = map_expansion({goal, GoalScope::Full}, kb, n);
    c.require(e.nodes.size() == goal.nodes.size(), "wrong expanded node count");
    for (const auto& node : e.nodes) {
        c.require(node.parts.size() == n, "wrong part count");
        for (std::size_t k = 0; k < node.parts.size(); ++k) {
            const double expect = double(n - k) / double(n);
            for (double w : node.parts[k].weights)
                c.require(w == expect, "rank weight mismatch at rank " + std::to_string(k));
        }
        if (!node.parts.empty())
            for (double w : node.parts[0].weights)
                c.require(w == 1.0, "rank-0 weight not exactly 1.0");
    }
    const Expansion e1 = map_expansion({goal, GoalScope::Full}, kb, 1);
    for (const auto& node : e1.nodes) {
        c.require(node.parts.size() == 1, "n=1 should give single parts");
        for (double w : node.parts[0].weights) c.require(w == 1.0, "n=1 weight not 1.0");
    }
}

// --- 6: baseline contracts -------------------------------------------------

void baseline_contracts(Checker& c) {
    const GameGraph base = generate_fixture(600, 7, 0.6);
    const GameGraph a = generate_fixture(601, 7, 0.6, 0.5, &base);
    const GameGraph b = generate_fixture(602, 7, 0.6, 0.5, &base);
    const GameGraph goal = generate_fixture(603, 7, 0.6, 0.5, &base);
    const KnowledgeBase kb({a, b});
    const PartialGoal train = project(goal, GoalScope::DesignOnly);

    // KNN: member of kb and argmin by independent evaluation.
    const GameGraph& picked = knn_select(kb, train);
    c.require(picked.name == a.name || picked.name == b.name, "knn output not in kb");
    const GameGraph& member = picked.name == a.name ? a : b;
    c.require(structurally_equal(picked, member), "knn output modified");
    const double da = oracle::graph_distance(train.graph, a);
    const double db = oracle::graph_distance(train.graph, b);
    const std::string expect = da < db ? a.name : (db < da ? b.name : std::min(a.name, b.name));
    c.require(picked.name == expect, "knn pick disagrees with independent evaluation");

    // Blend: binary weights at every step over 20 seeded runs.
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        bool binary = true;
        NeighborFn instrumented = [&](const Expansion& x, const KnowledgeBase& k, Rng& r) {
            Expansion nb = blend_neighbor(x, k, r);
            for (const auto& node : nb.nodes)
                for (const auto& p : node.parts)
                    for (double w : p.weights)
                        if (w != 0.0 && w != 1.0) binary = false;
            return nb;
        };
        Rng rng(seed);
        const ClimbResult r =
            hill_climb(map_blend(train, kb, 10), train, kb, rng, 10, 8, instrumented);
        for (const auto& node : r.expansion.nodes)
            for (const auto& p : node.parts)
                for (double w : p.weights)
                    if (w != 0.0 && w != 1.0) binary = false;
        c.require(binary, "blend weight left {0,1} at seed " + std::to_string(seed));
    }

    // GA: population exactly 10 at every generation, at most 100 generations.
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        std::size_t generations = 0;
        bool pop_ok = true;
        Rng rng(seed);
        const GAResult r = ga_search(kb, train, rng, 100,
                                     [&](std::size_t, const std::vector<GAIndividual>& pop) {
                                         ++generations;
                                         if (pop.size() != 10) pop_ok = false;
                                     });
        c.require(pop_ok, "GA population size deviated from 10");
        c.require(generations <= 100, "GA ran past 100 generations");
        c.require(r.trace.size() == generations, "GA trace/generation mismatch");
    }
}

// --- 7: directional benchmark (soft) ---------------------------------------

void directional_benchmark(Checker& c) {
    const std::size_t triads = 10;
    const std::size_t seeds = 10;
    std::size_t cells = 0, expansion_wins = 0;
    double designer_test_sum = 0, developer_test_sum = 0;
    std::size_t designer_n = 0, developer_n = 0;

    // Related-but-distinct triads: a shared ancestor with moderate overlap, so
    // no method can win by copying a knowledge-base graph outright.
    for (std::uint64_t t = 0; t < triads; ++t) {
        const GameGraph base = generate_fixture(7000 + t, 5, 0.4);
        const GameGraph a = generate_fixture(7100 + t, 5, 0.4, 0.3, &base);
        const GameGraph b = generate_fixture(7200 + t, 5, 0.4, 0.3, &base);
        const GameGraph goal = generate_fixture(7300 + t, 5, 0.4, 0.3, &base);

        for (ExperimentMode mode : {ExperimentMode::Designer, ExperimentMode::Developer}) {
            ExperimentSpec spec;
            spec.kb = {a.name, b.name};
            spec.goal_game = goal.name;
            spec.mode = mode;
            for (std::uint64_t s = 0; s < seeds; ++s) spec.seeds.push_back(s);
            spec.methods = {Method::Expansion, Method::Blend, Method::KNN, Method::GA};
            spec.steps = 500;
            spec.mapping_n = 10;
            spec.generations = 100;
            const ExperimentReport rep = run_experiment(spec, {a, b}, goal);

            std::map<Method, double> train_mean;
            std::map<Method, std::size_t> n;
            for (const auto& row : rep.rows) {
                train_mean[row.method] += row.train_error;
                n[row.method] += 1;
                if (mode == ExperimentMode::Designer) {
                    designer_test_sum += row.test_error;
                    ++designer_n;
                } else {
                    developer_test_sum += row.test_error;
                    ++developer_n;
                }
            }
            for (auto& [m, v] : train_mean) v /= double(n[m]);
            const double exp_mean = train_mean[Method::Expansion];
            const bool wins = exp_mean <= train_mean[Method::Blend] + 1e-12 &&
                              exp_mean <= train_mean[Method::KNN] + 1e-12 &&
                              exp_mean <= train_mean[Method::GA] + 1e-12;
            ++cells;
            if (wins) ++expansion_wins;
        }
    }
    const double win_rate = double(expansion_wins) / double(cells);
    std::printf("    expansion best-train rate: %.0f%% (%zu/%zu cells)\n",
                100.0 * win_rate, expansion_wins, cells);
    const double designer_test = designer_test_sum / double(designer_n);
    const double developer_test = developer_test_sum / double(developer_n);
    std::printf("    mean test error: designer %.4f, developer %.4f\n", designer_test,
                developer_test);
    c.require(win_rate >= 0.75, "expansion best-train rate below 75%");
    c.require(developer_test > designer_test,
              "developer-mode test error did not exceed designer-mode");
}

// --- 8: serialization ------------------------------------------------------

void serialization(Checker& c) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        const GameGraph g = generate_fixture(seed, 2 + seed % 7, 0.1 * double(seed % 10));
        const std::string bytes = to_canonical_json(g);
        c.require(bytes == to_canonical_json(g), "canonical bytes unstable");
        const GameGraph back = graph_from_json(bytes);
        c.require(structurally_equal(back, g), "round trip changed structure");
        c.require(to_canonical_json(back) == bytes, "round trip changed bytes");
    }
    const char* malformed[] = {
        "",                                            // empty
        "[1,2,3]",                                     // wrong top level
        "{\"name\":\"x\",\"nodes\":[",                 // truncated
        "{\"name\":\"x\"}",                            // missing collections
        "{\"edges\":[],\"name\":7,\"nodes\":[]}",      // name not a string
        R"({"edges":[],"name":"x","nodes":[{"id":"a"}]})",            // node sans label
        R"({"edges":[{"kind":"Z","owner":"a","payload":{}}],"name":"x","nodes":[{"id":"a","label":""}]})",
        R"({"edges":[{"kind":"N","owner":"a","payload":{"count":1}}],"name":"x","nodes":[{"id":"a","label":""}]})",
        R"({"edges":[{"kind":"N","owner":"a","payload":{"count":1.5,"lId":"L"}}],"name":"x","nodes":[{"id":"a","label":""}]})",
        R"({"edges":[{"kind":"cond","owner":"a","payload":{"fact":{"factKind":"Oops"},"ruleId":"r","target":"a"}}],"name":"x","nodes":[{"id":"a","label":""}]})",
    };
    int idx = 0;
    for (const char* text : malformed) {
        bool threw = false;
        try {
            graph_from_json(text);
        } catch (const ParseError&) {
            threw = true;
        } catch (const ValidationError&) {
            threw = true;
        }
        c.require(threw, "malformed case " + std::to_string(idx) + " did not throw");
        ++idx;
    }
    const char* invalid[] = {
        R"({"edges":[{"kind":"D","owner":"a","payload":{"dx":0,"dy":0,"lId":"L","probability":1.5,"sId":"S","target":"a"}}],"name":"x","nodes":[{"id":"a","label":""}]})",
        R"({"edges":[{"kind":"D","owner":"a","payload":{"dx":0,"dy":0,"lId":"L","probability":0.5,"sId":"S","target":"ghost"}}],"name":"x","nodes":[{"id":"a","label":""}]})",
        R"({"edges":[{"kind":"N","owner":"a","payload":{"count":-1,"lId":"L"}}],"name":"x","nodes":[{"id":"a","label":""}]})",
        R"({"edges":[],"name":"x","nodes":[{"id":"a","label":""},{"id":"a","label":""}]})",
    };
    for (const char* text : invalid) {
        bool threw = false;
        try {
            graph_from_json(text);
        } catch (const ValidationError&) {
            threw = true;
        }
        c.require(threw, "invalid case did not raise ValidationError");
    }
}

struct Criterion {
    int id;
    const char* label;
    double budget_s;
    bool soft;
    std::function<void(Checker&)> fn;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "distance laws", 10, false, distance_laws},
        {2, "oracle equivalence", 30, false, oracle_equivalence},
        {3, "materialization identity", 5, false, materialization_identity},
        {4, "hill-climb contract", 120, false, hill_climb_contract},
        {5, "mapping contract", 5, false, mapping_contract},
        {6, "baseline contracts", 120, false, baseline_contracts},
        {7, "directional benchmark", 900, true, directional_benchmark},
        {8, "serialization", 10, false, serialization},
    };

    int hard_failures = 0;
    for (const auto& crit : criteria) {
        Checker c;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            crit.fn(c);
        } catch (const std::exception& e) {
            c.require(false, std::string("exception: ") + e.what());
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > crit.budget_s)
            c.require(false, "exceeded runtime budget of " + std::to_string(crit.budget_s) + "s");
        const bool pass = c.ok;
        std::printf("[%s] criterion %d: %s (%.1fs)%s\n", pass ? "PASS" : "FAIL", crit.id,
                    crit.label, secs,
                    crit.soft && !pass ? " [soft: investigate, not auto-reject]" : "");
        if (!pass) {
            std::printf("       reason: %s\n", c.why.c_str());
            if (!crit.soft) ++hard_failures;
        }
    }
    return hard_failures == 0 ? 0 : 1;
}
