#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "muxdyn/multiplex.hpp"

namespace muxdyn {

/**
 * Layer manifests.
 *
 * JSON:
 *   {"nodes": [labels...],
 *    "layers": [{"name": "...", "directed": bool, "edges": [[src, dst], [src, dst, w], ...]}],
 *    "checksum": "fnv1a64:<hex>"        (optional)
 *    "allow_self_loops": bool           (optional)}
 * Labels may be strings or integers. A layer may carry its own "nodes"
 * array, which must name the same set as the top-level one.
 *
 * TSV:
 *   #layers advice:directed friendship:undirected
 *   #nodes a b c                        (optional; else order of first use)
 *   advice<TAB>a<TAB>b[<TAB>weight]
 * Blank lines and other '#' lines are ignored.
 */
Multiplex parse_manifest_json(std::string_view text);
Multiplex parse_manifest_tsv(std::string_view text);

/// Dispatches on extension: ".tsv"/".txt" -> TSV, anything else -> JSON.
Multiplex load_multiplex(const std::filesystem::path& path);

/// Serialize back to the JSON manifest form (edges listed src-major).
nlohmann::json to_manifest_json(const Multiplex& m);

/// FNV-1a 64 of the canonical manifest text, formatted "fnv1a64:<16 hex>".
std::string manifest_checksum(std::string_view canonical_text);

}  // namespace muxdyn
