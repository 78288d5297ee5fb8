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
 * Ordered tree edit distance (Zhang & Shasha) between attack-defense trees,
 * and reconciliation of a document with an edited ADTerm.
 *
 * A node's counter takes part as its last child. Time is
 * O(|A| |B| min(depth, leaves)^2), memory O(|A| |B|).
 */

#ifndef ADT_TREEDIFF_HPP
#define ADT_TREEDIFF_HPP

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include <json.hpp>

#include "adt/document.hpp"
#include "adt/model.hpp"
#include "adt/term.hpp"

namespace adt {

struct CostModel {
    std::function<double(const Node &)> remove;
    std::function<double(const Node &)> insert;
    std::function<double(const Node &, const Node &)> relabel;
};

/// insert = delete = 1; relabel 0 when label, player and (on refined nodes)
/// refinement agree, 1 otherwise; matching across players costs infinity.
CostModel unit_costs();

struct EditOp {
    enum class Kind { Relabel, Delete, Insert };
    Kind kind;
    /// Node of tree A (Relabel, Delete).
    std::optional<NodeId> nodeA;
    /// Node of tree B (Relabel, Insert).
    std::optional<NodeId> nodeB;
    /// Insert only: parent in B and position among its ordered children.
    std::optional<NodeId> parentB;
    std::size_t position = 0;
    double cost = 0;
};

std::string_view to_string(EditOp::Kind k);

struct EditScript {
    /// Relabels, then deletes (A postorder), then inserts (B preorder).
    std::vector<EditOp> ops;
    double cost = 0;
};

/// Matched nodes, A id to B id.
using NodeMapping = std::map<NodeId, NodeId>;

struct TreeDiff {
    double cost = 0;
    EditScript script;
    NodeMapping mapping;
};

TreeDiff tree_edit_distance(const AdTree &a, const AdTree &b, const CostModel &costs = unit_costs());

nlohmann::json to_json(const TreeDiff &d);

struct ReconcileSummary {
    std::size_t matched = 0;
    std::size_t inserted = 0;
    std::size_t deleted = 0;
    std::size_t relabeled = 0;
    std::vector<NodeId> insertedIds;
    std::vector<NodeId> deletedIds;
    double cost = 0;
};

nlohmann::json to_json(const ReconcileSummary &s);

struct ReconcileResult {
    Document document;
    ReconcileSummary summary;
};

/// Reshapes `doc` to the tree of `newTerm`. Matched nodes keep their ids,
/// fold state and extras; refined nodes keep their labels (terms carry
/// none). Valuations of surviving actions are kept, new actions get
/// defaults. Throws TypeError or StructureError from the conversion.
ReconcileResult reconcile(const Document &doc, const Term &newTerm,
                          const DomainRegistry &registry);

} // namespace adt

#endif
