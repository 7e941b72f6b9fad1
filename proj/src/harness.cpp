#include "expforge/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <thread>

#include <json.hpp>

namespace expforge {

PartialGoal project(const GameGraph& g, GoalScope scope) {
    PartialGoal goal;
    goal.scope = scope;
    goal.graph.name = g.name;
    goal.graph.nodes = g.nodes; // edge-free nodes contribute zero distance
    for (const auto& e : g.edges) {
        const bool design = is_design_edge(e.payload);
        if (scope == GoalScope::Full || (scope == GoalScope::DesignOnly && design) ||
            (scope == GoalScope::RulesOnly && !design))
            goal.graph.edges.push_back(e);
    }
    return goal;
}

// ---------------------------------------------------------------------------
// Fixture generation
// ---------------------------------------------------------------------------

namespace {

std::string pick_id(const std::vector<std::string>& ids, Rng& rng) {
    return ids[rng.index(ids.size())];
}

Fact random_fact(const std::vector<std::string>& ids, Rng& rng) {
    switch (rng.index(9)) {
        case 0:
            return AnimationFact{"anim" + std::to_string(rng.index(8)),
                                 static_cast<double>(rng.index(32) + 1),
                                 static_cast<double>(rng.index(32) + 1)};
        case 1:
            return SpatialFact{static_cast<double>(rng.index(256)),
                               static_cast<double>(rng.index(224))};
        case 2:
            return RelationshipXFact{pick_id(ids, rng),
                                     static_cast<double>(rng.index(65)) - 32.0};
        case 3:
            return RelationshipYFact{pick_id(ids, rng),
                                     static_cast<double>(rng.index(65)) - 32.0};
        case 4: return VelocityXFact{static_cast<double>(rng.index(9)) - 4.0};
        case 5: return VelocityYFact{static_cast<double>(rng.index(9)) - 4.0};
        case 6: return CameraXFact{static_cast<double>(rng.index(256))};
        case 7: return CameraYFact{static_cast<double>(rng.index(224))};
        default: return RandomFact{"rv" + std::to_string(rng.index(4))};
    }
}

// Pre/post pairs must share a fact kind; post is a perturbed copy of pre.
Fact perturb_fact(const Fact& pre, const std::vector<std::string>& ids, Rng& rng) {
    Fact post = pre;
    if (auto* a = std::get_if<AnimationFact>(&post)) {
        a->name = "anim" + std::to_string(rng.index(8));
    } else if (auto* s = std::get_if<SpatialFact>(&post)) {
        s->x += static_cast<double>(rng.index(9)) - 4.0;
        s->y += static_cast<double>(rng.index(9)) - 4.0;
    } else if (auto* rx = std::get_if<RelationshipXFact>(&post)) {
        rx->offset += static_cast<double>(rng.index(9)) - 4.0;
        (void)ids;
    } else if (auto* ry = std::get_if<RelationshipYFact>(&post)) {
        ry->offset += static_cast<double>(rng.index(9)) - 4.0;
    } else if (auto* vx = std::get_if<VelocityXFact>(&post)) {
        vx->vx = static_cast<double>(rng.index(9)) - 4.0;
    } else if (auto* vy = std::get_if<VelocityYFact>(&post)) {
        vy->vy = static_cast<double>(rng.index(9)) - 4.0;
    } else if (auto* cx = std::get_if<CameraXFact>(&post)) {
        cx->x = static_cast<double>(rng.index(256));
    } else if (auto* cy = std::get_if<CameraYFact>(&post)) {
        cy->y = static_cast<double>(rng.index(224));
    } else if (auto* r = std::get_if<RandomFact>(&post)) {
        r->seed_tag = "rv" + std::to_string(rng.index(4));
    }
    return post;
}

bool fact_targets_ok(const Fact& f, const std::set<std::string>& kept) {
    if (const auto* rx = std::get_if<RelationshipXFact>(&f)) return kept.count(rx->target) != 0;
    if (const auto* ry = std::get_if<RelationshipYFact>(&f)) return kept.count(ry->target) != 0;
    return true;
}

} // namespace

GameGraph generate_fixture(std::uint64_t seed, std::size_t node_count,
                           double edge_density, double shared_fraction,
                           const GameGraph* base) {
    Rng rng(seed);
    std::size_t copied = 0;
    std::vector<const SpriteNode*> base_nodes;
    if (base) {
        for (const auto& n : base->nodes) base_nodes.push_back(&n);
        std::sort(base_nodes.begin(), base_nodes.end(),
                  [](const SpriteNode* a, const SpriteNode* b) { return a->id < b->id; });
        copied = std::min<std::size_t>(
            static_cast<std::size_t>(std::llround(shared_fraction *
                                                  static_cast<double>(node_count))),
            base_nodes.size());
    }
    if (base && copied == node_count && copied == base->nodes.size())
        return *base; // full copy

    GameGraph g;
    g.name = "fix" + std::to_string(seed);

    std::set<std::string> kept;
    for (std::size_t i = 0; i < copied; ++i) {
        g.nodes.push_back(*base_nodes[i]);
        kept.insert(base_nodes[i]->id);
    }
    for (std::size_t i = copied; i < node_count; ++i) {
        std::string id = "s" + std::to_string(seed) + "_" + std::to_string(i);
        while (kept.count(id)) id += "'";
        kept.insert(id);
        g.nodes.push_back({id, "sprite " + std::to_string(i)});
    }

    // Base edges whose endpoints all stayed inside the copied set.
    if (base) {
        for (const auto& e : base->edges) {
            if (!kept.count(e.owner) || !kept.count(edge_target(e))) continue;
            bool ok = true;
            if (const auto* c = std::get_if<RuleConditionEdge>(&e.payload))
                ok = fact_targets_ok(c->fact, kept);
            else if (const auto* fx = std::get_if<RuleEffectEdge>(&e.payload))
                ok = fact_targets_ok(fx->pre, kept) && fact_targets_ok(fx->post, kept);
            if (ok) g.edges.push_back(e);
        }
    }

    std::vector<std::string> ids;
    for (const auto& n : g.nodes) ids.push_back(n.id);

    std::size_t rule_seq = 0;
    for (std::size_t i = copied; i < node_count; ++i) {
        const std::string& id = g.nodes[i].id;
        if (rng.uniform() < 0.9) {
            ShapeMatrix shape;
            shape.rows = static_cast<int>(rng.index(4)) + 1;
            shape.cols = static_cast<int>(rng.index(4)) + 1;
            shape.cells.resize(static_cast<std::size_t>(shape.rows) * shape.cols);
            for (auto& c : shape.cells) c = rng.coin() ? 1 : 0;
            g.edges.push_back({id, GEdge{static_cast<double>(rng.index(256)),
                                         static_cast<double>(rng.index(224)), shape,
                                         "S" + std::to_string(rng.index(4)),
                                         "L" + std::to_string(rng.index(4))}});
        }
        if (rng.uniform() < 0.8)
            g.edges.push_back({id, NEdge{static_cast<long long>(rng.index(8)),
                                         "L" + std::to_string(rng.index(4))}});
        const std::size_t n_d = static_cast<std::size_t>(std::llround(edge_density * 3.0));
        for (std::size_t k = 0; k < n_d; ++k)
            g.edges.push_back({id, DEdge{static_cast<double>(rng.index(65)) - 32.0,
                                         static_cast<double>(rng.index(65)) - 32.0,
                                         rng.uniform(), "S" + std::to_string(rng.index(4)),
                                         "L" + std::to_string(rng.index(4)),
                                         pick_id(ids, rng)}});
        if (rng.uniform() < edge_density) {
            const std::string rule =
                "r" + std::to_string(seed) + "_" + std::to_string(rule_seq++);
            g.edges.push_back(
                {id, RuleConditionEdge{random_fact(ids, rng), rule, pick_id(ids, rng)}});
            Fact pre = random_fact(ids, rng);
            Fact post = perturb_fact(pre, ids, rng);
            g.edges.push_back(
                {id, RuleEffectEdge{std::move(pre), std::move(post), rule, id}});
        }
    }
    return g;
}

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

const char* method_name(Method m) {
    switch (m) {
        case Method::Expansion: return "expansion";
        case Method::Blend: return "blend";
        case Method::KNN: return "knn";
        case Method::GA: return "ga";
    }
    return "?";
}

Method method_from_name(const std::string& s) {
    if (s == "expansion") return Method::Expansion;
    if (s == "blend") return Method::Blend;
    if (s == "knn") return Method::KNN;
    if (s == "ga") return Method::GA;
    throw std::invalid_argument("unknown method '" + s + "'");
}

const char* mode_name(ExperimentMode m) {
    return m == ExperimentMode::Designer ? "designer" : "developer";
}

namespace {

std::size_t thread_cap(std::size_t cells) {
    std::size_t cap = std::thread::hardware_concurrency();
    if (cap == 0) cap = 1;
    if (const char* env = std::getenv("EXPANSION_FORGE_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 0) cap = static_cast<std::size_t>(v);
    }
    return std::max<std::size_t>(1, std::min(cap, cells));
}

} // namespace

ExperimentReport run_experiment(const ExperimentSpec& spec,
                                const std::vector<GameGraph>& kb_graphs,
                                const GameGraph& goal) {
    const PartialGoal train = project(
        goal, spec.mode == ExperimentMode::Designer ? GoalScope::DesignOnly
                                                    : GoalScope::RulesOnly);
    const PartialGoal test = project(
        goal, spec.mode == ExperimentMode::Designer ? GoalScope::RulesOnly
                                                    : GoalScope::DesignOnly);
    const KnowledgeBase kb(kb_graphs);

    ExperimentReport report;
    for (const auto& name : spec.kb)
        if (name == goal.name) report.degenerate = true;

    struct Cell {
        Method method;
        std::uint64_t seed;
    };
    std::vector<Cell> cells;
    for (Method m : spec.methods)
        for (std::uint64_t s : spec.seeds) cells.push_back({m, s});
    report.rows.resize(cells.size());

    auto run_cell = [&](std::size_t ci) {
        const Cell& cell = cells[ci];
        Rng rng(cell.seed);
        const auto t0 = std::chrono::steady_clock::now();
        GameGraph result;
        std::size_t steps = 0;
        switch (cell.method) {
            case Method::Expansion: {
                Expansion start = map_expansion(train, kb, spec.mapping_n);
                ClimbResult r =
                    hill_climb(start, train, kb, rng, spec.neighbors, spec.steps);
                result = std::move(r.graph);
                steps = r.trace.size() - 1;
                break;
            }
            case Method::Blend: {
                ClimbResult r =
                    blend_search(train, kb, rng, spec.neighbors, spec.steps, spec.mapping_n);
                result = std::move(r.graph);
                steps = r.trace.size() - 1;
                break;
            }
            case Method::KNN:
                result = knn_select(kb, train);
                break;
            case Method::GA: {
                GAResult r = ga_search(kb, train, rng, spec.generations);
                result = std::move(r.graph);
                steps = r.trace.empty() ? 0 : r.trace.size() - 1;
                break;
            }
        }
        const auto t1 = std::chrono::steady_clock::now();
        ReportRow row;
        row.method = cell.method;
        row.seed = cell.seed;
        row.mode = spec.mode;
        row.steps = steps;
        row.wall_time_ms =
            std::chrono::duration<double, std::milli>(t1 - t0).count();
        if (result.nodes.empty()) {
            row.train_error = 1.0;
            row.test_error = 1.0;
        } else {
            row.train_error = graph_distance(train, result).total;
            row.test_error = graph_distance(test, result).total;
        }
        report.rows[ci] = row;
    };

    const std::size_t workers = thread_cap(cells.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= cells.size()) return;
                    run_cell(i);
                }
            });
        for (auto& t : pool) t.join();
    }
    return report;
}

ExperimentReport run_designer(const ExperimentSpec& spec,
                              const std::vector<GameGraph>& kb_graphs,
                              const GameGraph& goal) {
    ExperimentSpec s = spec;
    s.mode = ExperimentMode::Designer;
    return run_experiment(s, kb_graphs, goal);
}

ExperimentReport run_developer(const ExperimentSpec& spec,
                               const std::vector<GameGraph>& kb_graphs,
                               const GameGraph& goal) {
    ExperimentSpec s = spec;
    s.mode = ExperimentMode::Developer;
    return run_experiment(s, kb_graphs, goal);
}

std::string report_to_csv(const ExperimentReport& report) {
    std::string out = "method,seed,mode,trainError,testError,steps,wallTimeMs\n";
    char buf[256];
    for (const auto& r : report.rows) {
        std::snprintf(buf, sizeof(buf), "%s,%llu,%s,%.6f,%.6f,%zu,%.3f\n",
                      method_name(r.method),
                      static_cast<unsigned long long>(r.seed), mode_name(r.mode),
                      r.train_error, r.test_error, r.steps, r.wall_time_ms);
        out += buf;
    }
    return out;
}

std::string report_summary_json(const ExperimentReport& report) {
    nlohmann::json methods;
    for (Method m : {Method::Expansion, Method::Blend, Method::KNN, Method::GA}) {
        double train = 0, test = 0;
        std::size_t n = 0;
        for (const auto& r : report.rows)
            if (r.method == m) {
                train += r.train_error;
                test += r.test_error;
                ++n;
            }
        if (n == 0) continue;
        methods[method_name(m)] = {{"meanTrainError", train / static_cast<double>(n)},
                                   {"meanTestError", test / static_cast<double>(n)},
                                   {"runs", n}};
    }
    nlohmann::json j;
    j["degenerate"] = report.degenerate;
    if (!report.rows.empty()) j["mode"] = mode_name(report.rows.front().mode);
    j["methods"] = std::move(methods);
    return j.dump();
}

} // namespace expforge
