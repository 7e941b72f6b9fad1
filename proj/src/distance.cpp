#include "expforge/distance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include <json.hpp>

namespace expforge {

namespace {

double numeric_match(double a, double b) { return 1.0 / (1.0 + std::abs(a - b)); }

// Normalized Hamming distance over the top-left-aligned overlap, with cells
// covered by only one grid counted as mismatches.
double shape_distance(const ShapeMatrix& a, const ShapeMatrix& b) {
    const int rmax = std::max(a.rows, b.rows);
    const int cmax = std::max(a.cols, b.cols);
    const int rmin = std::min(a.rows, b.rows);
    const int cmin = std::min(a.cols, b.cols);
    const double total = static_cast<double>(rmax) * cmax;
    if (total <= 0) return 0.0;
    double mismatch = total - static_cast<double>(rmin) * cmin;
    for (int r = 0; r < rmin; ++r)
        for (int c = 0; c < cmin; ++c)
            if (a.cells[static_cast<std::size_t>(r) * a.cols + c] !=
                b.cells[static_cast<std::size_t>(r) * b.cols + c])
                mismatch += 1.0;
    return mismatch / total;
}

struct SlotList {
    std::vector<FieldKindSlot> slots;
    EdgePayload storage; // slots point into this copy
};

SlotList collect_slots(const EdgePayload& p) {
    SlotList out;
    out.storage = p;
    for_each_field(out.storage, [&](const FieldKindSlot& s) { out.slots.push_back(s); });
    return out;
}

double paired_match(const FieldKindSlot& a, const FieldKindSlot& b) {
    if (a.type != b.type) return 0.0;
    switch (a.type) {
        case FieldType::Numeric:
            return numeric_match(*std::get<double*>(*a.ref), *std::get<double*>(*b.ref));
        case FieldType::Count:
            return numeric_match(static_cast<double>(*std::get<long long*>(*a.ref)),
                                 static_cast<double>(*std::get<long long*>(*b.ref)));
        case FieldType::Categorical:
            return *std::get<std::string*>(*a.ref) == *std::get<std::string*>(*b.ref) ? 1.0 : 0.0;
        case FieldType::Shape:
            return 1.0 - shape_distance(*std::get<ShapeMatrix*>(*a.ref),
                                        *std::get<ShapeMatrix*>(*b.ref));
    }
    return 0.0;
}

} // namespace

double edge_distance(const Edge& a, const Edge& b) {
    if (std::string(edge_kind_name(a.payload)) != edge_kind_name(b.payload)) return 1.0;

    SlotList sa = collect_slots(a.payload);
    SlotList sb = collect_slots(b.payload);

    double matches = 0.0;
    double total = 0.0;
    std::size_t ia = 0, ib = 0;
    while (ia < sa.slots.size() || ib < sb.slots.size()) {
        // Fact blocks: a kind pseudo-slot followed by that fact's subfields.
        const bool block_a = ia < sa.slots.size() && sa.slots[ia].fact != nullptr;
        const bool block_b = ib < sb.slots.size() && sb.slots[ib].fact != nullptr;
        if (block_a && block_b) {
            const Fact& fa = *sa.slots[ia].fact;
            const Fact& fb = *sb.slots[ib].fact;
            std::size_t ea = ia + 1, eb = ib + 1;
            while (ea < sa.slots.size() && sa.slots[ea].fact == nullptr) ++ea;
            while (eb < sb.slots.size() && sb.slots[eb].fact == nullptr) ++eb;
            const std::size_t na = ea - ia - 1, nb = eb - ib - 1;
            if (std::string(fact_kind_name(fa)) == fact_kind_name(fb)) {
                matches += 1.0;
                total += 1.0 + static_cast<double>(na);
                for (std::size_t k = 0; k < na; ++k)
                    matches += paired_match(sa.slots[ia + 1 + k], sb.slots[ib + 1 + k]);
            } else {
                // Kind mismatch: the whole block scores zero over the wider layout.
                total += 1.0 + static_cast<double>(std::max(na, nb));
            }
            ia = ea;
            ib = eb;
            continue;
        }
        // Leading scalar slots; same edge kind means these always align.
        const FieldKindSlot& la = sa.slots[ia];
        const FieldKindSlot& lb = sb.slots[ib];
        if (!la.rule_id) { // rule ids are arbitrary labels, excluded
            total += 1.0;
            matches += paired_match(la, lb);
        }
        ++ia;
        ++ib;
    }
    if (total <= 0) return 0.0;
    double d = 1.0 - matches / total;
    return std::clamp(d, 0.0, 1.0);
}

double node_distance(const NodeView& goal, const NodeView& cand) {
    if (goal.edges.empty()) return 0.0;
    double sum = 0.0;
    for (const Edge* ge : goal.edges) {
        double best = 1.0;
        for (const Edge* ce : cand.edges) best = std::min(best, edge_distance(*ge, *ce));
        sum += best;
    }
    return sum / static_cast<double>(goal.edges.size());
}

DistanceReport graph_distance(const PartialGoal& goal, const GameGraph& cand) {
    if (cand.nodes.empty()) throw EmptyCandidate{};
    const auto goal_views = node_views(goal.graph);
    const auto cand_views = node_views(cand); // sorted by id: ties keep lowest id
    DistanceReport report;
    double sum = 0.0;
    for (const auto& gv : goal_views) {
        double best = 2.0;
        const NodeView* best_cand = nullptr;
        for (const auto& cv : cand_views) {
            const double d = node_distance(gv, cv);
            if (d < best) {
                best = d;
                best_cand = &cv;
            }
        }
        report.per_goal_node.push_back({gv.node->id, best_cand->node->id, best});
        sum += best;
    }
    report.total = goal_views.empty() ? 0.0 : sum / static_cast<double>(goal_views.size());
    return report;
}

std::string report_to_json(const DistanceReport& r) {
    nlohmann::json j;
    j["total"] = r.total;
    auto arr = nlohmann::json::array();
    for (const auto& m : r.per_goal_node)
        arr.push_back({{"goal", m.goal_node},
                       {"candidate", m.candidate_node},
                       {"distance", m.distance}});
    j["perGoalNode"] = std::move(arr);
    return j.dump();
}

} // namespace expforge
