/*
 * Copyright 2026 The adtool-cpp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/** \file
 * .adt persistence (JSON, format tag "adt-json", version 1) and SVG / TikZ
 * export.
 *
 * File layout:
 * \code
 * { "format": "adt-json", "version": 1, "rootRole": "attacker",
 *   "root": { "id": 1, "label": "...", "refinement": "AND", "folded": false,
 *             "children": [ ... ], "counter": null },
 *   "domains": [ { "instanceId": "i1", "domainId": "min-cost", "params": {},
 *                  "valuations": { "p:label": 10, "o:label": "inf" },
 *                  "userSet": [ "p:label" ] } ] }
 * \endcode
 * Fields not listed here are kept and written back unchanged.
 */

#ifndef ADT_IO_HPP
#define ADT_IO_HPP

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "adt/document.hpp"
#include "adt/eval.hpp"
#include "adt/layout.hpp"

namespace adt {

inline constexpr std::string_view kFormatTag = "adt-json";
inline constexpr int kFormatVersion = 1;

nlohmann::json document_to_json(const Document &doc, const DomainRegistry &registry);
/// Throws FormatError or IntegrityError; never returns a partial document.
Document document_from_json(const nlohmann::json &j, const DomainRegistry &registry);

std::string save(const Document &doc, const DomainRegistry &registry);
Document load(std::string_view bytes, const DomainRegistry &registry);

struct ExportStyle {
    RootRole rootRole = RootRole::Attacker;
    LayoutConfig geometry;
    /// Margin around the drawing, in layout units.
    double margin = 20;
};

/// Optional value annotation for each drawn node.
struct ExportOverlay {
    const EvaluationResult *result = nullptr;
    ValueKind kind = ValueKind::ExtendedNonNegativeReal;
};

/// Nodes absent from `placement` (e.g. hidden by folding) are skipped.
std::string export_svg(const AdTree &tree, const LayoutResult &placement, const ExportStyle &style,
                       std::optional<ExportOverlay> overlay = std::nullopt);

/// Standalone LaTeX document drawing the same geometry with TikZ.
std::string export_tikz(const AdTree &tree, const LayoutResult &placement,
                        const ExportStyle &style,
                        std::optional<ExportOverlay> overlay = std::nullopt);

/// Evaluation as JSON: per-node values in preorder, then `rootValue`,
/// `rootDisplay` and `warnings`.
nlohmann::json evaluation_to_json(const AdTree &tree, const AttributeDomain &domain,
                                  const EvaluationResult &result);

/// Positions in preorder plus bounds.
nlohmann::json layout_to_json(const AdTree &tree, const LayoutResult &placement);

std::string xml_escape(std::string_view s);
std::string latex_escape(std::string_view s);

} // namespace adt

#endif
