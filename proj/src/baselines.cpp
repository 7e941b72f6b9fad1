#include "expforge/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace expforge {

// ---------------------------------------------------------------------------
// KNN
// ---------------------------------------------------------------------------

const GameGraph& knn_select(const KnowledgeBase& kb, const PartialGoal& goal) {
    if (kb.graphs().empty()) throw EmptyKnowledgeBase{};
    const GameGraph* best = nullptr;
    double best_d = 2.0;
    for (const auto& g : kb.graphs()) { // sorted by name: ties keep first
        const double d = graph_distance(goal, g).total;
        if (d < best_d) {
            best_d = d;
            best = &g;
        }
    }
    return *best;
}

// ---------------------------------------------------------------------------
// Blend: expansion search restricted to binary weights
// ---------------------------------------------------------------------------

namespace {

double binarize(double w) { return w > 0.5 ? 1.0 : 0.0; }

} // namespace

Expansion map_blend(const PartialGoal& goal, const KnowledgeBase& kb, std::size_t n) {
    Expansion e = map_expansion(goal, kb, n);
    for (auto& node : e.nodes)
        for (auto& p : node.parts)
            for (double& w : p.weights) w = binarize(w);
    return e;
}

Expansion blend_neighbor(const Expansion& e, const KnowledgeBase& kb, Rng& rng) {
    Expansion out = e;
    for (;;) {
        switch (rng.index(3)) {
            case 0: { // add a part with random binary weights
                ExpandedNode& node = out.nodes[rng.index(out.nodes.size())];
                const NodeView& src = kb.all_nodes()[rng.index(kb.total_node_count())];
                ExpansionPart part;
                part.source = {src.graph->name, src.node->id};
                part.weights.resize(filter_slot_count(src));
                for (double& w : part.weights) w = rng.coin() ? 1.0 : 0.0;
                node.parts.push_back(std::move(part));
                return out;
            }
            case 1: { // remove a part, never emptying a node
                bool any = false;
                for (const auto& n : out.nodes) any = any || n.parts.size() >= 2;
                if (!any) continue;
                for (;;) {
                    ExpandedNode& node = out.nodes[rng.index(out.nodes.size())];
                    if (node.parts.size() < 2) continue;
                    node.parts.erase(node.parts.begin() +
                                     static_cast<std::ptrdiff_t>(rng.index(node.parts.size())));
                    return out;
                }
            }
            default: { // flip one weight
                std::size_t total = out.total_weight_count();
                if (total == 0) continue;
                std::size_t target = rng.index(total);
                for (auto& n : out.nodes)
                    for (auto& p : n.parts) {
                        if (target < p.weights.size()) {
                            p.weights[target] = 1.0 - p.weights[target];
                            return out;
                        }
                        target -= p.weights.size();
                    }
            }
        }
    }
}

ClimbResult blend_search(const PartialGoal& goal, const KnowledgeBase& kb, Rng& rng,
                         std::size_t neighbors_per_step, std::size_t max_steps,
                         std::size_t n) {
    Expansion start = map_blend(goal, kb, n);
    return hill_climb(start, goal, kb, rng, neighbors_per_step, max_steps,
                      [](const Expansion& x, const KnowledgeBase& k, Rng& r) {
                          return blend_neighbor(x, k, r);
                      });
}

// ---------------------------------------------------------------------------
// Genetic algorithm
// ---------------------------------------------------------------------------

namespace {

struct EdgeSlots {
    std::vector<FieldKindSlot> slots;
};

EdgeSlots mutable_slots(EdgePayload& p) {
    EdgeSlots out;
    for_each_field(p, [&](const FieldKindSlot& s) {
        if (s.ref) out.slots.push_back(s); // skip fact-kind pseudo slots
    });
    return out;
}

bool same_layout(const EdgeSlots& a, const EdgeSlots& b) {
    if (a.slots.size() != b.slots.size()) return false;
    for (std::size_t i = 0; i < a.slots.size(); ++i)
        if (a.slots[i].type != b.slots[i].type ||
            std::string(a.slots[i].name) != b.slots[i].name)
            return false;
    return true;
}

void copy_slot_value(const FieldKindSlot& dst, const FieldKindSlot& src) {
    switch (dst.type) {
        case FieldType::Numeric:
            *std::get<double*>(*dst.ref) = *std::get<double*>(*src.ref);
            break;
        case FieldType::Count:
            *std::get<long long*>(*dst.ref) = *std::get<long long*>(*src.ref);
            break;
        case FieldType::Categorical:
            *std::get<std::string*>(*dst.ref) = *std::get<std::string*>(*src.ref);
            break;
        case FieldType::Shape:
            *std::get<ShapeMatrix*>(*dst.ref) = *std::get<ShapeMatrix*>(*src.ref);
            break;
    }
}

std::vector<std::size_t> shuffled_indices(std::size_t n, Rng& rng) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    for (std::size_t i = n; i > 1; --i)
        std::swap(idx[i - 1], idx[rng.index(i)]);
    return idx;
}

} // namespace

GameGraph mutate_graph(const GameGraph& g, Rng& rng) {
    GameGraph out = g;
    if (out.edges.empty()) return out;
    const std::size_t ei = rng.index(out.edges.size());
    Edge& edge = out.edges[ei];
    EdgeSlots slots = mutable_slots(edge.payload);
    if (slots.slots.empty()) return out;
    const std::size_t fi = rng.index(slots.slots.size());

    // Donors: other edges of the same kind with an identical field layout.
    std::vector<std::size_t> donors;
    for (std::size_t i = 0; i < out.edges.size(); ++i) {
        if (i == ei) continue;
        if (std::string(edge_kind_name(out.edges[i].payload)) != edge_kind_name(edge.payload))
            continue;
        EdgeSlots cand = mutable_slots(out.edges[i].payload);
        if (same_layout(slots, cand)) donors.push_back(i);
    }
    if (donors.empty()) return out;
    const std::size_t di = donors[rng.index(donors.size())];
    EdgeSlots donor = mutable_slots(out.edges[di].payload);
    copy_slot_value(slots.slots[fi], donor.slots[fi]);
    return out;
}

GameGraph crossover(const GameGraph& a, const GameGraph& b, Rng& rng) {
    GameGraph child;
    child.name = "child"; // a fixed name keeps repeated crossover from growing it

    const std::size_t ka = (a.nodes.size() + 1) / 2; // ceil
    const std::size_t kb = b.nodes.size() / 2;       // floor
    auto pick_a = shuffled_indices(a.nodes.size(), rng);
    auto pick_b = shuffled_indices(b.nodes.size(), rng);
    pick_a.resize(std::min(ka, pick_a.size()));
    pick_b.resize(std::min(kb, pick_b.size()));

    std::set<std::string> ids_a;
    for (std::size_t i : pick_a) {
        child.nodes.push_back(a.nodes[i]);
        ids_a.insert(a.nodes[i].id);
    }
    // B-inherited nodes rename on id collision; their edges follow the rename.
    std::map<std::string, std::string> b_rename;
    std::set<std::string> used = ids_a;
    for (std::size_t i : pick_b) {
        SpriteNode n = b.nodes[i];
        std::string id = n.id;
        while (used.count(id)) id += "#b";
        used.insert(id);
        b_rename[n.id] = id;
        n.id = id;
        child.nodes.push_back(std::move(n));
    }

    auto keep_a = [&](const std::string& id) { return ids_a.count(id) != 0; };
    for (const auto& e : a.edges) {
        if (!keep_a(e.owner) || !keep_a(edge_target(e))) continue;
        Edge copy = e;
        bool ok = true;
        if (auto* c = std::get_if<RuleConditionEdge>(&copy.payload)) {
            if (auto* rx = std::get_if<RelationshipXFact>(&c->fact)) ok = keep_a(rx->target);
            else if (auto* ry = std::get_if<RelationshipYFact>(&c->fact)) ok = keep_a(ry->target);
        } else if (auto* fx = std::get_if<RuleEffectEdge>(&copy.payload)) {
            for (Fact* f : {&fx->pre, &fx->post}) {
                if (auto* rx = std::get_if<RelationshipXFact>(f)) ok = ok && keep_a(rx->target);
                else if (auto* ry = std::get_if<RelationshipYFact>(f)) ok = ok && keep_a(ry->target);
            }
        }
        if (ok) child.edges.push_back(std::move(copy));
    }

    auto remap_b = [&](std::string& id) -> bool {
        auto it = b_rename.find(id);
        if (it == b_rename.end()) return false;
        id = it->second;
        return true;
    };
    for (const auto& e : b.edges) {
        Edge copy = e;
        if (!remap_b(copy.owner)) continue;
        bool ok = true;
        if (auto* d = std::get_if<DEdge>(&copy.payload))
            ok = remap_b(d->target);
        else if (auto* c = std::get_if<RuleConditionEdge>(&copy.payload)) {
            ok = remap_b(c->target);
            if (ok) {
                if (auto* rx = std::get_if<RelationshipXFact>(&c->fact)) ok = remap_b(rx->target);
                else if (auto* ry = std::get_if<RelationshipYFact>(&c->fact)) ok = remap_b(ry->target);
            }
        } else if (auto* fx = std::get_if<RuleEffectEdge>(&copy.payload)) {
            ok = remap_b(fx->target);
            for (Fact* f : {&fx->pre, &fx->post}) {
                if (!ok) break;
                if (auto* rx = std::get_if<RelationshipXFact>(f)) ok = remap_b(rx->target);
                else if (auto* ry = std::get_if<RelationshipYFact>(f)) ok = remap_b(ry->target);
            }
        }
        if (ok) child.edges.push_back(std::move(copy));
    }
    return child;
}

GAResult ga_search(const KnowledgeBase& kb, const PartialGoal& goal, Rng& rng,
                   std::size_t max_generations, const GAObserver& observer) {
    if (kb.graphs().size() != 2) throw WrongKBSize{};
    const GameGraph& a = kb.graphs()[0];
    const GameGraph& b = kb.graphs()[1];

    auto fitness_of = [&](const GameGraph& g) {
        return g.nodes.empty() ? 1.0 : graph_distance(goal, g).total;
    };

    std::vector<GAIndividual> pop;
    pop.push_back({a, fitness_of(a)});
    pop.push_back({b, fitness_of(b)});
    for (int i = 0; i < 4; ++i) {
        GameGraph m = mutate_graph(a, rng);
        pop.push_back({std::move(m), 0.0});
    }
    for (int i = 0; i < 4; ++i) {
        GameGraph m = mutate_graph(b, rng);
        pop.push_back({std::move(m), 0.0});
    }
    for (std::size_t i = 2; i < pop.size(); ++i) pop[i].fitness = fitness_of(pop[i].graph);

    GAResult result;
    auto update_best = [&](const GAIndividual& ind) {
        if (result.trace.empty() || ind.fitness < result.fitness) {
            result.fitness = ind.fitness;
            result.graph = ind.graph;
        }
    };
    result.fitness = 2.0;
    for (const auto& ind : pop) update_best(ind);
    result.trace.push_back(result.fitness);
    if (observer) observer(0, pop);

    auto select_parent = [&](const std::vector<GAIndividual>& p) -> const GAIndividual& {
        double sum = 0;
        for (const auto& ind : p) sum += 1.0 - ind.fitness;
        if (sum <= 0) return p[rng.index(p.size())];
        double r = rng.uniform() * sum;
        for (const auto& ind : p) {
            r -= 1.0 - ind.fitness;
            if (r <= 0) return ind;
        }
        return p.back();
    };

    for (std::size_t gen = 1; gen < max_generations && result.fitness > 0.0; ++gen) {
        std::vector<GAIndividual> next;
        // Elitism: keep the best two.
        std::vector<std::size_t> order(pop.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
            return pop[x].fitness < pop[y].fitness;
        });
        next.push_back(pop[order[0]]);
        next.push_back(pop[order[1]]);
        while (next.size() < pop.size()) {
            const GAIndividual& pa = select_parent(pop);
            const GAIndividual& pb = select_parent(pop);
            GameGraph childg = crossover(pa.graph, pb.graph, rng);
            if (rng.uniform() < 0.3) childg = mutate_graph(childg, rng);
            GAIndividual child{std::move(childg), 0.0};
            child.fitness = fitness_of(child.graph);
            next.push_back(std::move(child));
        }
        pop = std::move(next);
        for (const auto& ind : pop) update_best(ind);
        result.trace.push_back(result.fitness);
        if (observer) observer(gen, pop);
    }
    return result;
}

} // namespace expforge
