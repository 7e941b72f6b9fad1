#pragma once

#include <iosfwd>
#include <string>

#include "expforge/graph.hpp"

namespace expforge {

// Canonical serialization (.gg.json): UTF-8 JSON, sorted keys, nodes sorted
// by id, edges sorted by (owner, kind, payload), no insignificant whitespace.
// Identical graphs always produce identical bytes.

std::string to_canonical_json(const GameGraph& g);

// Throws ParseError on malformed input, ValidationError on hard invariant
// violations. Soft warnings, when requested, are appended to *warnings.
GameGraph graph_from_json(const std::string& text,
                          std::vector<std::string>* warnings = nullptr);

GameGraph load_graph(const std::string& path,
                     std::vector<std::string>* warnings = nullptr);

void save_graph(const GameGraph& g, const std::string& path);

} // namespace expforge
