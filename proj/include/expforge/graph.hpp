#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace expforge {

// ---------------------------------------------------------------------------
// Core game-graph data model. Graphs are treated as immutable after
// construction or load; anything that needs a changed graph builds a new one.
// ---------------------------------------------------------------------------

struct SpriteNode {
    std::string id;    // unique within its graph
    std::string label; // human-readable sprite name
};

struct ShapeMatrix {
    int rows = 1;
    int cols = 1;
    std::vector<std::uint8_t> cells; // row-major occupancy, size rows*cols
};

// Atomic frame observations carried by rule edges.
struct AnimationFact { std::string name; double width = 0; double height = 0; };
struct SpatialFact { double x = 0; double y = 0; };
struct RelationshipXFact { std::string target; double offset = 0; };
struct RelationshipYFact { std::string target; double offset = 0; };
struct VelocityXFact { double vx = 0; };
struct VelocityYFact { double vy = 0; };
struct CameraXFact { double x = 0; };
struct CameraYFact { double y = 0; };
struct RandomFact { std::string seed_tag; };

using Fact = std::variant<AnimationFact, SpatialFact, RelationshipXFact,
                          RelationshipYFact, VelocityXFact, VelocityYFact,
                          CameraXFact, CameraYFact, RandomFact>;

const char* fact_kind_name(const Fact& f);

// Level-design edges (G/D/N) and rule edges (condition/effect).
// G and N are always cyclic; D, condition and effect carry a target node id
// (equal to the owner when cyclic).
struct GEdge {
    double x = 0;
    double y = 0;
    ShapeMatrix shape;
    std::string s_id;
    std::string l_id;
};

struct DEdge {
    double dx = 0;
    double dy = 0;
    double probability = 0; // in [0,1]
    std::string s_id;
    std::string l_id;
    std::string target;
};

struct NEdge {
    long long count = 0; // non-negative
    std::string l_id;
};

struct RuleConditionEdge {
    Fact fact;
    std::string rule_id;
    std::string target;
};

struct RuleEffectEdge {
    Fact pre;  // pre and post are the same fact kind
    Fact post;
    std::string rule_id;
    std::string target;
};

using EdgePayload = std::variant<GEdge, DEdge, NEdge, RuleConditionEdge, RuleEffectEdge>;

const char* edge_kind_name(const EdgePayload& p);

struct Edge {
    std::string owner;
    EdgePayload payload;
};

// Target node id of an edge, if the payload carries one (G/N are cyclic and
// resolve to the owner).
std::string edge_target(const Edge& e);

struct GameGraph {
    std::string name;
    std::vector<SpriteNode> nodes;
    std::vector<Edge> edges;

    const SpriteNode* find_node(const std::string& id) const;
};

enum class GoalScope { DesignOnly, RulesOnly, Full };

const char* scope_name(GoalScope s);
bool is_design_edge(const EdgePayload& p);

struct PartialGoal {
    GameGraph graph;
    GoalScope scope = GoalScope::Full;
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

enum class ViolationCode {
    EmptyNodeId,
    DuplicateNodeId,
    BadShape,
    DanglingOwner,
    DanglingTarget,
    BadProbability,
    NegativeCount,
    NegativeSize,
    EffectKindMismatch,
    ScopeMismatch,
};

struct Violation {
    ViolationCode code;
    std::string locus;   // node id or "edge[i]"
    std::string message;
};

const char* violation_code_name(ViolationCode c);

// Hard invariant violations. Empty result means the graph is valid.
std::vector<Violation> validate(const GameGraph& g);

// Soft checks: every effect's rule id also appears on a condition edge and
// vice versa. Reported separately so partial goal graphs load cleanly.
std::vector<std::string> validate_warnings(const GameGraph& g);

std::vector<Violation> validate(const PartialGoal& goal);

// ---------------------------------------------------------------------------
// Field enumeration — the single source of truth for an edge payload's value
// slots. Distance field counting, filter slot layout, materialization and GA
// mutation all walk payloads through this.
// ---------------------------------------------------------------------------

enum class FieldType { Numeric, Count, Categorical, Shape };

using FieldRef = std::variant<double*, long long*, std::string*, ShapeMatrix*>;

// Slots in declared order; for rule edges the layout depends on the fact
// kind(s), with the fact kind itself exposed as a pseudo-categorical slot
// (name "factKind", null ref).
struct FieldKindSlot {
    const char* name;
    FieldType type;
    std::optional<FieldRef> ref; // nullopt for fact-kind pseudo slots
    bool rule_id = false;
    Fact* fact = nullptr; // set on fact-kind pseudo slots: the fact it gates
};

void for_each_field(EdgePayload& p, const std::function<void(const FieldKindSlot&)>& fn);
std::size_t field_count(const EdgePayload& p);

// ---------------------------------------------------------------------------
// Canonical ordering / equality
// ---------------------------------------------------------------------------

// Indices of g.edges in canonical order: (owner, kind, canonical payload).
std::vector<std::size_t> canonical_edge_order(const GameGraph& g);

// Structural equality, independent of node/edge insertion order.
bool structurally_equal(const GameGraph& a, const GameGraph& b);

// ---------------------------------------------------------------------------
// Node views: a node together with its incident edges (owned plus incoming),
// in canonical order. This is the unit both the distance heuristic and the
// expansion mapping operate on.
// ---------------------------------------------------------------------------

struct NodeView {
    const GameGraph* graph = nullptr;
    const SpriteNode* node = nullptr;
    std::vector<const Edge*> edges; // owned first, then incoming, canonical order
};

std::vector<NodeView> node_views(const GameGraph& g);

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
    explicit ValidationError(std::vector<Violation> v);
    std::vector<Violation> violations;
};

} // namespace expforge
