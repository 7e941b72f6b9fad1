#include "expforge/expansion.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace expforge {

// ---------------------------------------------------------------------------
// KnowledgeBase
// ---------------------------------------------------------------------------

KnowledgeBase::KnowledgeBase(std::vector<GameGraph> graphs) : graphs_(std::move(graphs)) {
    std::sort(graphs_.begin(), graphs_.end(),
              [](const GameGraph& a, const GameGraph& b) { return a.name < b.name; });
    for (const auto& g : graphs_) {
        for (auto& v : node_views(g)) {
            index_[{g.name, v.node->id}] = all_nodes_.size();
            all_nodes_.push_back(std::move(v));
        }
    }
}

const GameGraph& KnowledgeBase::graph(const std::string& name) const {
    for (const auto& g : graphs_)
        if (g.name == name) return g;
    throw std::out_of_range("no graph named '" + name + "' in knowledge base");
}

const NodeView& KnowledgeBase::view(const NodeRef& ref) const {
    auto it = index_.find(ref);
    if (it == index_.end())
        throw std::out_of_range("no node '" + ref.node + "' in graph '" + ref.graph + "'");
    return all_nodes_[it->second];
}

// ---------------------------------------------------------------------------
// Filters
// ---------------------------------------------------------------------------

std::size_t filter_slot_count(const NodeView& view) {
    std::size_t n = 0;
    for (const Edge* e : view.edges) n += 1 + field_count(e->payload);
    return n;
}

double ExpansionPart::mean_weight() const {
    if (weights.empty()) return 0.0;
    double s = 0;
    for (double w : weights) s += w;
    return s / static_cast<double>(weights.size());
}

std::size_t Expansion::total_weight_count() const {
    std::size_t n = 0;
    for (const auto& node : nodes)
        for (const auto& p : node.parts) n += p.weights.size();
    return n;
}

// ---------------------------------------------------------------------------
// Mapping
// ---------------------------------------------------------------------------

Expansion map_expansion(const PartialGoal& goal, const KnowledgeBase& kb, std::size_t n) {
    if (kb.total_node_count() == 0) throw EmptyKnowledgeBase{};
    const auto goal_views = node_views(goal.graph);
    Expansion e;
    e.name = goal.graph.name + "-expanded";
    for (const auto& gv : goal_views) {
        struct Ranked {
            double d;
            std::size_t idx;
        };
        std::vector<Ranked> ranked;
        const auto& all = kb.all_nodes();
        for (std::size_t i = 0; i < all.size(); ++i)
            ranked.push_back({node_distance(gv, all[i]), i});
        std::stable_sort(ranked.begin(), ranked.end(),
                         [](const Ranked& a, const Ranked& b) { return a.d < b.d; });
        ExpandedNode node;
        node.id = gv.node->id;
        node.label = gv.node->label;
        const std::size_t take = std::min(n, ranked.size());
        for (std::size_t k = 0; k < take; ++k) {
            const NodeView& src = all[ranked[k].idx];
            ExpansionPart part;
            part.source = {src.graph->name, src.node->id};
            const double w = static_cast<double>(n - k) / static_cast<double>(n);
            part.weights.assign(filter_slot_count(src), w);
            node.parts.push_back(std::move(part));
        }
        e.nodes.push_back(std::move(node));
    }
    return e;
}

// ---------------------------------------------------------------------------
// Materialization
// ---------------------------------------------------------------------------

namespace {

struct SlotVec {
    std::vector<FieldKindSlot> slots;
};

SlotVec slots_of(EdgePayload& p) {
    SlotVec v;
    for_each_field(p, [&](const FieldKindSlot& s) { v.slots.push_back(s); });
    return v;
}

// Nearest same-kind edge of the first-ranked part, used as the fallback
// source for categorical fields whose weight falls below the threshold.
const Edge* nearest_same_kind(const Edge& e, const NodeView& first) {
    const Edge* best = nullptr;
    double best_d = 2.0;
    for (const Edge* cand : first.edges) {
        if (std::string(edge_kind_name(cand->payload)) != edge_kind_name(e.payload)) continue;
        const double d = edge_distance(e, *cand);
        if (d < best_d) {
            best_d = d;
            best = cand;
        }
    }
    return best;
}

bool is_reference_slot(const FieldKindSlot& s) {
    return s.type == FieldType::Categorical && std::string(s.name) == "target";
}

} // namespace

GameGraph materialize(const Expansion& e, const KnowledgeBase& kb) {
    GameGraph out;
    out.name = e.name;
    for (const auto& node : e.nodes) out.nodes.push_back({node.id, node.label});

    // Which expanded node a knowledge-base node maps into: highest mean part
    // weight wins, ties keep the earliest expanded node.
    std::map<NodeRef, std::pair<double, std::size_t>> claims;
    for (std::size_t i = 0; i < e.nodes.size(); ++i) {
        for (const auto& part : e.nodes[i].parts) {
            const double m = part.mean_weight();
            auto it = claims.find(part.source);
            if (it == claims.end() || m > it->second.first) claims[part.source] = {m, i};
        }
    }

    // A source edge reaches the output once per remapped owner: the same kb
    // edge seen through both its owner's and its target's view collapses,
    // while distinct expanded nodes sharing a part each keep their own copy.
    std::set<std::pair<const Edge*, std::string>> emitted;

    for (std::size_t i = 0; i < e.nodes.size(); ++i) {
        const ExpandedNode& node = e.nodes[i];
        for (std::size_t pi = 0; pi < node.parts.size(); ++pi) {
            const ExpansionPart& part = node.parts[pi];
            const NodeView& src = kb.view(part.source);
            const NodeView* first =
                pi > 0 ? &kb.view(node.parts[0].source) : nullptr;
            const std::string& first_graph =
                pi > 0 ? node.parts[0].source.graph : part.source.graph;

            std::size_t cursor = 0;
            for (const Edge* src_edge : src.edges) {
                const std::size_t nfields = field_count(src_edge->payload);
                const double inclusion = part.weights.at(cursor);
                const std::size_t field_base = cursor + 1;
                cursor += 1 + nfields;
                if (inclusion < 0.5) continue;

                Edge copy = *src_edge;
                bool dropped = false;
                // Provenance of reference fields: which graph each node id
                // belongs to, needed after fallback substitution.
                std::map<const std::string*, const std::string*> ref_graph;

                SlotVec sv = slots_of(copy.payload);
                const Edge* fb_edge = first ? nearest_same_kind(copy, *first) : nullptr;
                Edge fb_copy;
                SlotVec fb_slots;
                if (fb_edge) {
                    fb_copy = *fb_edge;
                    fb_slots = slots_of(fb_copy.payload);
                }

                std::size_t skip_until = 0; // slots consumed by a replaced fact
                for (std::size_t k = 0; k < sv.slots.size() && !dropped; ++k) {
                    const FieldKindSlot& slot = sv.slots[k];
                    if (k < skip_until) continue;
                    const double w = part.weights.at(field_base + k);
                    const FieldKindSlot* fb = nullptr;
                    if (fb_edge && k < fb_slots.slots.size() &&
                        std::string(fb_slots.slots[k].name) == slot.name &&
                        fb_slots.slots[k].type == slot.type &&
                        (fb_slots.slots[k].fact != nullptr) == (slot.fact != nullptr))
                        fb = &fb_slots.slots[k];

                    if (slot.fact != nullptr) {
                        // Fact-kind pseudo slot gates the whole fact.
                        std::size_t end = k + 1;
                        while (end < sv.slots.size() && sv.slots[end].fact == nullptr) ++end;
                        if (w < 0.5) {
                            if (!fb) {
                                dropped = true;
                                break;
                            }
                            *slot.fact = *fb->fact;
                            // Relationship targets now come from the fallback graph.
                            if (auto* rx = std::get_if<RelationshipXFact>(slot.fact))
                                ref_graph[&rx->target] = &first_graph;
                            else if (auto* ry = std::get_if<RelationshipYFact>(slot.fact))
                                ref_graph[&ry->target] = &first_graph;
                            skip_until = end;
                        }
                        continue;
                    }

                    switch (slot.type) {
                        case FieldType::Numeric:
                            *std::get<double*>(*slot.ref) *= w;
                            break;
                        case FieldType::Count: {
                            long long& c = *std::get<long long*>(*slot.ref);
                            c = std::max<long long>(0, std::llround(w * static_cast<double>(c)));
                            break;
                        }
                        case FieldType::Categorical:
                            if (w < 0.5) {
                                if (!fb) {
                                    dropped = true;
                                    break;
                                }
                                std::string& dst = *std::get<std::string*>(*slot.ref);
                                dst = *std::get<std::string*>(*fb->ref);
                                if (is_reference_slot(slot)) ref_graph[&dst] = &first_graph;
                            }
                            break;
                        case FieldType::Shape:
                            if (w < 0.5) {
                                if (!fb) {
                                    dropped = true;
                                    break;
                                }
                                *std::get<ShapeMatrix*>(*slot.ref) =
                                    *std::get<ShapeMatrix*>(*fb->ref);
                            }
                            break;
                    }
                }
                if (dropped) continue;

                // Keep invariants intact after scaling.
                if (auto* d = std::get_if<DEdge>(&copy.payload))
                    d->probability = std::clamp(d->probability, 0.0, 1.0);
                auto clamp_fact = [](Fact& f) {
                    if (auto* a = std::get_if<AnimationFact>(&f)) {
                        a->width = std::max(0.0, a->width);
                        a->height = std::max(0.0, a->height);
                    }
                };
                if (auto* c = std::get_if<RuleConditionEdge>(&copy.payload))
                    clamp_fact(c->fact);
                else if (auto* fx = std::get_if<RuleEffectEdge>(&copy.payload)) {
                    clamp_fact(fx->pre);
                    clamp_fact(fx->post);
                }

                // Remap node references into the expanded graph.
                auto remap = [&](std::string& id) -> bool {
                    const std::string& graph_of_id =
                        ref_graph.count(&id) ? *ref_graph[&id] : part.source.graph;
                    if (graph_of_id == part.source.graph && id == part.source.node) {
                        id = node.id;
                        return true;
                    }
                    auto it = claims.find({graph_of_id, id});
                    if (it == claims.end()) return false;
                    id = e.nodes[it->second.second].id;
                    return true;
                };

                bool ok = remap(copy.owner);
                if (ok) {
                    if (auto* d = std::get_if<DEdge>(&copy.payload))
                        ok = remap(d->target);
                    else if (auto* c = std::get_if<RuleConditionEdge>(&copy.payload)) {
                        ok = remap(c->target);
                        if (ok) {
                            if (auto* rx = std::get_if<RelationshipXFact>(&c->fact))
                                ok = remap(rx->target);
                            else if (auto* ry = std::get_if<RelationshipYFact>(&c->fact))
                                ok = remap(ry->target);
                        }
                    } else if (auto* fx = std::get_if<RuleEffectEdge>(&copy.payload)) {
                        ok = remap(fx->target);
                        auto remap_fact = [&](Fact& f) {
                            if (!ok) return;
                            if (auto* rx = std::get_if<RelationshipXFact>(&f))
                                ok = remap(rx->target);
                            else if (auto* ry = std::get_if<RelationshipYFact>(&f))
                                ok = remap(ry->target);
                        };
                        remap_fact(fx->pre);
                        remap_fact(fx->post);
                    }
                }
                if (!ok) continue;

                if (!emitted.insert({src_edge, copy.owner}).second) continue;
                out.edges.push_back(std::move(copy));
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Neighborhood
// ---------------------------------------------------------------------------

namespace {

bool any_multi_part(const Expansion& e) {
    for (const auto& n : e.nodes)
        if (n.parts.size() >= 2) return true;
    return false;
}

// Locate the global weight index `target` within the expansion.
double& weight_at(Expansion& e, std::size_t target) {
    for (auto& n : e.nodes)
        for (auto& p : n.parts) {
            if (target < p.weights.size()) return p.weights[target];
            target -= p.weights.size();
        }
    throw std::out_of_range("weight index out of range");
}

} // namespace

Expansion neighbor(const Expansion& e, const KnowledgeBase& kb, Rng& rng) {
    Expansion out = e;
    for (;;) {
        switch (rng.index(4)) {
            case 0: { // add a part with random weights in [0,1)
                ExpandedNode& node = out.nodes[rng.index(out.nodes.size())];
                const NodeView& src = kb.all_nodes()[rng.index(kb.total_node_count())];
                ExpansionPart part;
                part.source = {src.graph->name, src.node->id};
                part.weights.resize(filter_slot_count(src));
                for (double& w : part.weights) w = rng.uniform();
                node.parts.push_back(std::move(part));
                return out;
            }
            case 1: { // remove a part, never emptying a node
                if (!any_multi_part(out)) continue;
                for (;;) {
                    ExpandedNode& node = out.nodes[rng.index(out.nodes.size())];
                    if (node.parts.size() < 2) continue;
                    node.parts.erase(node.parts.begin() +
                                     static_cast<std::ptrdiff_t>(rng.index(node.parts.size())));
                    return out;
                }
            }
            case 2: { // shift every weight of one node by a shared draw
                ExpandedNode& node = out.nodes[rng.index(out.nodes.size())];
                const double delta = rng.uniform(-2.0, 2.0);
                for (auto& p : node.parts)
                    for (double& w : p.weights) w += delta;
                return out;
            }
            default: { // scale one weight
                const std::size_t total = out.total_weight_count();
                if (total == 0) continue;
                weight_at(out, rng.index(total)) *= rng.uniform(-2.0, 2.0);
                return out;
            }
        }
    }
}

// ---------------------------------------------------------------------------
// Hill climbing
// ---------------------------------------------------------------------------

ClimbResult hill_climb(const Expansion& start, const PartialGoal& goal,
                       const KnowledgeBase& kb, Rng& rng,
                       std::size_t neighbors_per_step, std::size_t max_steps,
                       const NeighborFn& neighbor_fn) {
    const NeighborFn& step_fn = neighbor_fn
        ? neighbor_fn
        : NeighborFn([](const Expansion& x, const KnowledgeBase& k, Rng& r) {
              return neighbor(x, k, r);
          });

    ClimbResult result;
    result.expansion = start;
    result.graph = materialize(result.expansion, kb);
    double current = graph_distance(goal, result.graph).total;
    result.trace.push_back(current);

    for (std::size_t step = 0; step < max_steps; ++step) {
        // RNG draws are sequenced here; evaluation order never affects them.
        std::vector<Expansion> candidates;
        candidates.reserve(neighbors_per_step);
        for (std::size_t i = 0; i < neighbors_per_step; ++i)
            candidates.push_back(step_fn(result.expansion, kb, rng));

        double best = current;
        std::size_t best_idx = candidates.size();
        std::vector<GameGraph> graphs(candidates.size());
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            graphs[i] = materialize(candidates[i], kb);
            const double h = graph_distance(goal, graphs[i]).total;
            if (h < best) {
                best = h;
                best_idx = i;
            }
        }
        if (best_idx == candidates.size()) break; // no strict improvement
        result.expansion = std::move(candidates[best_idx]);
        result.graph = std::move(graphs[best_idx]);
        current = best;
        result.trace.push_back(current);
    }
    return result;
}

} // namespace expforge
