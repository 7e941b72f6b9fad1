#include "expforge/graph.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace expforge {

const char* fact_kind_name(const Fact& f) {
    struct V {
        const char* operator()(const AnimationFact&) const { return "Animation"; }
        const char* operator()(const SpatialFact&) const { return "Spatial"; }
        const char* operator()(const RelationshipXFact&) const { return "RelationshipX"; }
        const char* operator()(const RelationshipYFact&) const { return "RelationshipY"; }
        const char* operator()(const VelocityXFact&) const { return "VelocityX"; }
        const char* operator()(const VelocityYFact&) const { return "VelocityY"; }
        const char* operator()(const CameraXFact&) const { return "CameraX"; }
        const char* operator()(const CameraYFact&) const { return "CameraY"; }
        const char* operator()(const RandomFact&) const { return "Random"; }
    };
    return std::visit(V{}, f);
}

const char* edge_kind_name(const EdgePayload& p) {
    struct V {
        const char* operator()(const GEdge&) const { return "G"; }
        const char* operator()(const DEdge&) const { return "D"; }
        const char* operator()(const NEdge&) const { return "N"; }
        const char* operator()(const RuleConditionEdge&) const { return "cond"; }
        const char* operator()(const RuleEffectEdge&) const { return "effect"; }
    };
    return std::visit(V{}, p);
}

std::string edge_target(const Edge& e) {
    struct V {
        const std::string& owner;
        std::string operator()(const GEdge&) const { return owner; }
        std::string operator()(const NEdge&) const { return owner; }
        std::string operator()(const DEdge& d) const { return d.target; }
        std::string operator()(const RuleConditionEdge& c) const { return c.target; }
        std::string operator()(const RuleEffectEdge& f) const { return f.target; }
    };
    return std::visit(V{e.owner}, e.payload);
}

const SpriteNode* GameGraph::find_node(const std::string& id) const {
    for (const auto& n : nodes)
        if (n.id == id) return &n;
    return nullptr;
}

const char* scope_name(GoalScope s) {
    switch (s) {
        case GoalScope::DesignOnly: return "design";
        case GoalScope::RulesOnly: return "rules";
        default: return "full";
    }
}

bool is_design_edge(const EdgePayload& p) {
    return std::holds_alternative<GEdge>(p) || std::holds_alternative<DEdge>(p) ||
           std::holds_alternative<NEdge>(p);
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

const char* violation_code_name(ViolationCode c) {
    switch (c) {
        case ViolationCode::EmptyNodeId: return "EmptyNodeId";
        case ViolationCode::DuplicateNodeId: return "DuplicateNodeId";
        case ViolationCode::BadShape: return "BadShape";
        case ViolationCode::DanglingOwner: return "DanglingOwner";
        case ViolationCode::DanglingTarget: return "DanglingTarget";
        case ViolationCode::BadProbability: return "BadProbability";
        case ViolationCode::NegativeCount: return "NegativeCount";
        case ViolationCode::NegativeSize: return "NegativeSize";
        case ViolationCode::EffectKindMismatch: return "EffectKindMismatch";
        case ViolationCode::ScopeMismatch: return "ScopeMismatch";
    }
    return "?";
}

namespace {

std::string edge_locus(std::size_t i) {
    return "edge[" + std::to_string(i) + "]";
}

void check_fact(const Fact& f, const std::set<std::string>& ids,
                std::size_t edge_index, std::vector<Violation>& out) {
    if (const auto* a = std::get_if<AnimationFact>(&f)) {
        if (a->width < 0 || a->height < 0)
            out.push_back({ViolationCode::NegativeSize, edge_locus(edge_index),
                           "animation width/height must be non-negative"});
    } else if (const auto* rx = std::get_if<RelationshipXFact>(&f)) {
        if (!ids.count(rx->target))
            out.push_back({ViolationCode::DanglingTarget, edge_locus(edge_index),
                           "RelationshipX fact references missing node '" + rx->target + "'"});
    } else if (const auto* ry = std::get_if<RelationshipYFact>(&f)) {
        if (!ids.count(ry->target))
            out.push_back({ViolationCode::DanglingTarget, edge_locus(edge_index),
                           "RelationshipY fact references missing node '" + ry->target + "'"});
    }
}

} // namespace

std::vector<Violation> validate(const GameGraph& g) {
    std::vector<Violation> out;
    std::set<std::string> ids;
    for (const auto& n : g.nodes) {
        if (n.id.empty())
            out.push_back({ViolationCode::EmptyNodeId, n.id, "node id is empty"});
        if (!ids.insert(n.id).second)
            out.push_back({ViolationCode::DuplicateNodeId, n.id,
                           "duplicate node id '" + n.id + "'"});
    }
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const Edge& e = g.edges[i];
        if (!ids.count(e.owner))
            out.push_back({ViolationCode::DanglingOwner, edge_locus(i),
                           "edge owner '" + e.owner + "' is not a node"});
        const std::string target = edge_target(e);
        if (!ids.count(target))
            out.push_back({ViolationCode::DanglingTarget, edge_locus(i),
                           "edge target '" + target + "' is not a node"});
        if (const auto* ge = std::get_if<GEdge>(&e.payload)) {
            const auto& s = ge->shape;
            if (s.rows < 1 || s.cols < 1 ||
                s.cells.size() != static_cast<std::size_t>(s.rows) * static_cast<std::size_t>(s.cols))
                out.push_back({ViolationCode::BadShape, edge_locus(i),
                               "shape matrix dimensions do not match cell count"});
        } else if (const auto* de = std::get_if<DEdge>(&e.payload)) {
            if (de->probability < 0.0 || de->probability > 1.0)
                out.push_back({ViolationCode::BadProbability, edge_locus(i),
                               "D edge probability outside [0,1]"});
        } else if (const auto* ne = std::get_if<NEdge>(&e.payload)) {
            if (ne->count < 0)
                out.push_back({ViolationCode::NegativeCount, edge_locus(i),
                               "N edge count is negative"});
        } else if (const auto* ce = std::get_if<RuleConditionEdge>(&e.payload)) {
            check_fact(ce->fact, ids, i, out);
        } else if (const auto* fe = std::get_if<RuleEffectEdge>(&e.payload)) {
            if (std::string(fact_kind_name(fe->pre)) != fact_kind_name(fe->post))
                out.push_back({ViolationCode::EffectKindMismatch, edge_locus(i),
                               "rule effect pre/post facts differ in kind"});
            check_fact(fe->pre, ids, i, out);
            check_fact(fe->post, ids, i, out);
        }
    }
    return out;
}

std::vector<std::string> validate_warnings(const GameGraph& g) {
    std::set<std::string> cond_rules, effect_rules;
    for (const auto& e : g.edges) {
        if (const auto* c = std::get_if<RuleConditionEdge>(&e.payload))
            cond_rules.insert(c->rule_id);
        else if (const auto* f = std::get_if<RuleEffectEdge>(&e.payload))
            effect_rules.insert(f->rule_id);
    }
    std::vector<std::string> out;
    for (const auto& r : effect_rules)
        if (!cond_rules.count(r))
            out.push_back("rule '" + r + "' has effects but no condition");
    for (const auto& r : cond_rules)
        if (!effect_rules.count(r))
            out.push_back("rule '" + r + "' has conditions but no effect");
    return out;
}

std::vector<Violation> validate(const PartialGoal& goal) {
    std::vector<Violation> out = validate(goal.graph);
    if (goal.scope == GoalScope::Full) return out;
    for (std::size_t i = 0; i < goal.graph.edges.size(); ++i) {
        const bool design = is_design_edge(goal.graph.edges[i].payload);
        if (goal.scope == GoalScope::DesignOnly && !design)
            out.push_back({ViolationCode::ScopeMismatch, edge_locus(i),
                           "rule edge in a design-only goal"});
        if (goal.scope == GoalScope::RulesOnly && design)
            out.push_back({ViolationCode::ScopeMismatch, edge_locus(i),
                           "design edge in a rules-only goal"});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Field enumeration
// ---------------------------------------------------------------------------

namespace {

using Emit = std::function<void(const FieldKindSlot&)>;

void emit_fact_fields(Fact& f, const char* kind_slot_name, const Emit& fn) {
    FieldKindSlot kind_slot{kind_slot_name, FieldType::Categorical, std::nullopt, false, &f};
    fn(kind_slot);
    if (auto* a = std::get_if<AnimationFact>(&f)) {
        fn({"name", FieldType::Categorical, FieldRef{&a->name}});
        fn({"width", FieldType::Numeric, FieldRef{&a->width}});
        fn({"height", FieldType::Numeric, FieldRef{&a->height}});
    } else if (auto* s = std::get_if<SpatialFact>(&f)) {
        fn({"x", FieldType::Numeric, FieldRef{&s->x}});
        fn({"y", FieldType::Numeric, FieldRef{&s->y}});
    } else if (auto* rx = std::get_if<RelationshipXFact>(&f)) {
        fn({"target", FieldType::Categorical, FieldRef{&rx->target}});
        fn({"offset", FieldType::Numeric, FieldRef{&rx->offset}});
    } else if (auto* ry = std::get_if<RelationshipYFact>(&f)) {
        fn({"target", FieldType::Categorical, FieldRef{&ry->target}});
        fn({"offset", FieldType::Numeric, FieldRef{&ry->offset}});
    } else if (auto* vx = std::get_if<VelocityXFact>(&f)) {
        fn({"vx", FieldType::Numeric, FieldRef{&vx->vx}});
    } else if (auto* vy = std::get_if<VelocityYFact>(&f)) {
        fn({"vy", FieldType::Numeric, FieldRef{&vy->vy}});
    } else if (auto* cx = std::get_if<CameraXFact>(&f)) {
        fn({"x", FieldType::Numeric, FieldRef{&cx->x}});
    } else if (auto* cy = std::get_if<CameraYFact>(&f)) {
        fn({"y", FieldType::Numeric, FieldRef{&cy->y}});
    } else if (auto* r = std::get_if<RandomFact>(&f)) {
        fn({"seedTag", FieldType::Categorical, FieldRef{&r->seed_tag}});
    }
}

} // namespace

void for_each_field(EdgePayload& p, const Emit& fn) {
    if (auto* g = std::get_if<GEdge>(&p)) {
        fn({"x", FieldType::Numeric, FieldRef{&g->x}});
        fn({"y", FieldType::Numeric, FieldRef{&g->y}});
        fn({"shape", FieldType::Shape, FieldRef{&g->shape}});
        fn({"sId", FieldType::Categorical, FieldRef{&g->s_id}});
        fn({"lId", FieldType::Categorical, FieldRef{&g->l_id}});
    } else if (auto* d = std::get_if<DEdge>(&p)) {
        fn({"dx", FieldType::Numeric, FieldRef{&d->dx}});
        fn({"dy", FieldType::Numeric, FieldRef{&d->dy}});
        fn({"probability", FieldType::Numeric, FieldRef{&d->probability}});
        fn({"sId", FieldType::Categorical, FieldRef{&d->s_id}});
        fn({"lId", FieldType::Categorical, FieldRef{&d->l_id}});
        fn({"target", FieldType::Categorical, FieldRef{&d->target}});
    } else if (auto* n = std::get_if<NEdge>(&p)) {
        fn({"count", FieldType::Count, FieldRef{&n->count}});
        fn({"lId", FieldType::Categorical, FieldRef{&n->l_id}});
    } else if (auto* c = std::get_if<RuleConditionEdge>(&p)) {
        fn({"target", FieldType::Categorical, FieldRef{&c->target}});
        fn({"ruleId", FieldType::Categorical, FieldRef{&c->rule_id}, true});
        emit_fact_fields(c->fact, "factKind", fn);
    } else if (auto* e = std::get_if<RuleEffectEdge>(&p)) {
        fn({"target", FieldType::Categorical, FieldRef{&e->target}});
        fn({"ruleId", FieldType::Categorical, FieldRef{&e->rule_id}, true});
        emit_fact_fields(e->pre, "preKind", fn);
        emit_fact_fields(e->post, "postKind", fn);
    }
}

std::size_t field_count(const EdgePayload& p) {
    std::size_t n = 0;
    EdgePayload copy = p;
    for_each_field(copy, [&](const FieldKindSlot&) { ++n; });
    return n;
}

// ---------------------------------------------------------------------------
// Node views
// ---------------------------------------------------------------------------

std::vector<NodeView> node_views(const GameGraph& g) {
    const std::vector<std::size_t> order = canonical_edge_order(g);
    std::vector<NodeView> views;
    views.reserve(g.nodes.size());
    std::vector<const SpriteNode*> sorted;
    for (const auto& n : g.nodes) sorted.push_back(&n);
    std::sort(sorted.begin(), sorted.end(),
              [](const SpriteNode* a, const SpriteNode* b) { return a->id < b->id; });
    for (const SpriteNode* node : sorted) {
        NodeView v;
        v.graph = &g;
        v.node = node;
        for (std::size_t idx : order)
            if (g.edges[idx].owner == node->id) v.edges.push_back(&g.edges[idx]);
        for (std::size_t idx : order) {
            const Edge& e = g.edges[idx];
            if (e.owner != node->id && edge_target(e) == node->id)
                v.edges.push_back(&e);
        }
        views.push_back(std::move(v));
    }
    return views;
}

ValidationError::ValidationError(std::vector<Violation> v)
    : std::runtime_error([&v] {
          std::ostringstream os;
          os << "graph failed validation (" << v.size() << " violation"
             << (v.size() == 1 ? "" : "s") << ")";
          for (const auto& viol : v)
              os << "\n  [" << violation_code_name(viol.code) << "] " << viol.locus
                 << ": " << viol.message;
          return os.str();
      }()),
      violations(std::move(v)) {}

} // namespace expforge
