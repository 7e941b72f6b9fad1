#include "expforge/serialize.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

namespace expforge {

using nlohmann::json;

namespace {

json fact_to_json(const Fact& f) {
    json j;
    j["factKind"] = fact_kind_name(f);
    if (const auto* a = std::get_if<AnimationFact>(&f)) {
        j["name"] = a->name;
        j["width"] = a->width;
        j["height"] = a->height;
    } else if (const auto* s = std::get_if<SpatialFact>(&f)) {
        j["x"] = s->x;
        j["y"] = s->y;
    } else if (const auto* rx = std::get_if<RelationshipXFact>(&f)) {
        j["target"] = rx->target;
        j["offset"] = rx->offset;
    } else if (const auto* ry = std::get_if<RelationshipYFact>(&f)) {
        j["target"] = ry->target;
        j["offset"] = ry->offset;
    } else if (const auto* vx = std::get_if<VelocityXFact>(&f)) {
        j["vx"] = vx->vx;
    } else if (const auto* vy = std::get_if<VelocityYFact>(&f)) {
        j["vy"] = vy->vy;
    } else if (const auto* cx = std::get_if<CameraXFact>(&f)) {
        j["x"] = cx->x;
    } else if (const auto* cy = std::get_if<CameraYFact>(&f)) {
        j["y"] = cy->y;
    } else if (const auto* r = std::get_if<RandomFact>(&f)) {
        j["seedTag"] = r->seed_tag;
    }
    return j;
}

json payload_to_json(const EdgePayload& p) {
    json j;
    if (const auto* g = std::get_if<GEdge>(&p)) {
        j["x"] = g->x;
        j["y"] = g->y;
        j["shape"] = {{"rows", g->shape.rows},
                      {"cols", g->shape.cols},
                      {"cells", g->shape.cells}};
        j["sId"] = g->s_id;
        j["lId"] = g->l_id;
    } else if (const auto* d = std::get_if<DEdge>(&p)) {
        j["dx"] = d->dx;
        j["dy"] = d->dy;
        j["probability"] = d->probability;
        j["sId"] = d->s_id;
        j["lId"] = d->l_id;
        j["target"] = d->target;
    } else if (const auto* n = std::get_if<NEdge>(&p)) {
        j["count"] = n->count;
        j["lId"] = n->l_id;
    } else if (const auto* c = std::get_if<RuleConditionEdge>(&p)) {
        j["fact"] = fact_to_json(c->fact);
        j["ruleId"] = c->rule_id;
        j["target"] = c->target;
    } else if (const auto* e = std::get_if<RuleEffectEdge>(&p)) {
        j["pre"] = fact_to_json(e->pre);
        j["post"] = fact_to_json(e->post);
        j["ruleId"] = e->rule_id;
        j["target"] = e->target;
    }
    return j;
}

json edge_to_json(const Edge& e) {
    return {{"owner", e.owner},
            {"kind", edge_kind_name(e.payload)},
            {"payload", payload_to_json(e.payload)}};
}

// --- parsing helpers -------------------------------------------------------

[[noreturn]] void malformed(const std::string& what) {
    throw ParseError("malformed game graph: " + what);
}

const json& need(const json& j, const char* key, const char* ctx) {
    auto it = j.find(key);
    if (it == j.end()) malformed(std::string(ctx) + " is missing key '" + key + "'");
    return *it;
}

std::string need_str(const json& j, const char* key, const char* ctx) {
    const json& v = need(j, key, ctx);
    if (!v.is_string()) malformed(std::string(ctx) + " key '" + key + "' must be a string");
    return v.get<std::string>();
}

double need_num(const json& j, const char* key, const char* ctx) {
    const json& v = need(j, key, ctx);
    if (!v.is_number()) malformed(std::string(ctx) + " key '" + key + "' must be a number");
    return v.get<double>();
}

Fact fact_from_json(const json& j) {
    if (!j.is_object()) malformed("fact must be an object");
    const std::string kind = need_str(j, "factKind", "fact");
    if (kind == "Animation")
        return AnimationFact{need_str(j, "name", "Animation fact"),
                             need_num(j, "width", "Animation fact"),
                             need_num(j, "height", "Animation fact")};
    if (kind == "Spatial")
        return SpatialFact{need_num(j, "x", "Spatial fact"), need_num(j, "y", "Spatial fact")};
    if (kind == "RelationshipX")
        return RelationshipXFact{need_str(j, "target", "RelationshipX fact"),
                                 need_num(j, "offset", "RelationshipX fact")};
    if (kind == "RelationshipY")
        return RelationshipYFact{need_str(j, "target", "RelationshipY fact"),
                                 need_num(j, "offset", "RelationshipY fact")};
    if (kind == "VelocityX") return VelocityXFact{need_num(j, "vx", "VelocityX fact")};
    if (kind == "VelocityY") return VelocityYFact{need_num(j, "vy", "VelocityY fact")};
    if (kind == "CameraX") return CameraXFact{need_num(j, "x", "CameraX fact")};
    if (kind == "CameraY") return CameraYFact{need_num(j, "y", "CameraY fact")};
    if (kind == "Random") return RandomFact{need_str(j, "seedTag", "Random fact")};
    malformed("unknown factKind '" + kind + "'");
}

ShapeMatrix shape_from_json(const json& j) {
    if (!j.is_object()) malformed("shape must be an object");
    ShapeMatrix m;
    m.rows = static_cast<int>(need_num(j, "rows", "shape"));
    m.cols = static_cast<int>(need_num(j, "cols", "shape"));
    const json& cells = need(j, "cells", "shape");
    if (!cells.is_array()) malformed("shape cells must be an array");
    for (const auto& c : cells) {
        if (!c.is_number()) malformed("shape cells must be numbers");
        m.cells.push_back(c.get<double>() != 0 ? 1 : 0);
    }
    return m;
}

EdgePayload payload_from_json(const std::string& kind, const json& j) {
    if (!j.is_object()) malformed("edge payload must be an object");
    if (kind == "G")
        return GEdge{need_num(j, "x", "G edge"), need_num(j, "y", "G edge"),
                     shape_from_json(need(j, "shape", "G edge")),
                     need_str(j, "sId", "G edge"), need_str(j, "lId", "G edge")};
    if (kind == "D")
        return DEdge{need_num(j, "dx", "D edge"), need_num(j, "dy", "D edge"),
                     need_num(j, "probability", "D edge"), need_str(j, "sId", "D edge"),
                     need_str(j, "lId", "D edge"), need_str(j, "target", "D edge")};
    if (kind == "N") {
        const json& c = need(j, "count", "N edge");
        if (!c.is_number_integer()) malformed("N edge count must be an integer");
        return NEdge{c.get<long long>(), need_str(j, "lId", "N edge")};
    }
    if (kind == "cond")
        return RuleConditionEdge{fact_from_json(need(j, "fact", "cond edge")),
                                 need_str(j, "ruleId", "cond edge"),
                                 need_str(j, "target", "cond edge")};
    if (kind == "effect")
        return RuleEffectEdge{fact_from_json(need(j, "pre", "effect edge")),
                              fact_from_json(need(j, "post", "effect edge")),
                              need_str(j, "ruleId", "effect edge"),
                              need_str(j, "target", "effect edge")};
    malformed("unknown edge kind '" + kind + "'");
}

} // namespace

std::vector<std::size_t> canonical_edge_order(const GameGraph& g) {
    std::vector<std::string> keys;
    keys.reserve(g.edges.size());
    for (const auto& e : g.edges)
        keys.push_back(e.owner + '\x1f' + edge_kind_name(e.payload) + '\x1f' +
                       payload_to_json(e.payload).dump());
    std::vector<std::size_t> order(g.edges.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
    return order;
}

std::string to_canonical_json(const GameGraph& g) {
    json doc;
    doc["name"] = g.name;
    json nodes = json::array();
    std::vector<const SpriteNode*> sorted;
    for (const auto& n : g.nodes) sorted.push_back(&n);
    std::sort(sorted.begin(), sorted.end(),
              [](const SpriteNode* a, const SpriteNode* b) { return a->id < b->id; });
    for (const SpriteNode* n : sorted) nodes.push_back({{"id", n->id}, {"label", n->label}});
    doc["nodes"] = std::move(nodes);
    json edges = json::array();
    for (std::size_t idx : canonical_edge_order(g)) edges.push_back(edge_to_json(g.edges[idx]));
    doc["edges"] = std::move(edges);
    return doc.dump();
}

bool structurally_equal(const GameGraph& a, const GameGraph& b) {
    return to_canonical_json(a) == to_canonical_json(b);
}

GameGraph graph_from_json(const std::string& text, std::vector<std::string>* warnings) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("invalid JSON at byte ") + std::to_string(e.byte) +
                         ": " + e.what());
    }
    if (!doc.is_object()) malformed("top level must be an object");
    GameGraph g;
    g.name = need_str(doc, "name", "document");
    const json& nodes = need(doc, "nodes", "document");
    if (!nodes.is_array()) malformed("'nodes' must be an array");
    for (const auto& n : nodes)
        g.nodes.push_back({need_str(n, "id", "node"), need_str(n, "label", "node")});
    const json& edges = need(doc, "edges", "document");
    if (!edges.is_array()) malformed("'edges' must be an array");
    for (const auto& e : edges) {
        const std::string kind = need_str(e, "kind", "edge");
        g.edges.push_back({need_str(e, "owner", "edge"),
                           payload_from_json(kind, need(e, "payload", "edge"))});
    }
    auto violations = validate(g);
    if (!violations.empty()) throw ValidationError(std::move(violations));
    if (warnings) {
        auto w = validate_warnings(g);
        warnings->insert(warnings->end(), w.begin(), w.end());
    }
    return g;
}

GameGraph load_graph(const std::string& path, std::vector<std::string>* warnings) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return graph_from_json(buf.str(), warnings);
}

void save_graph(const GameGraph& g, const std::string& path) {
    auto violations = validate(g);
    if (!violations.empty()) throw ValidationError(std::move(violations));
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << to_canonical_json(g);
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

} // namespace expforge
