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
 * The tree model: attack-defense trees stored as a flat node table.
 *
 * Node 0 is always the root. Refining children are kept in order; the
 * countermeasure of a node (if any) is kept separately and is treated as
 * an additional last child by traversals, layout and edit distance.
 */

#ifndef ADT_MODEL_HPP
#define ADT_MODEL_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace adt {

enum class Player { Proponent, Opponent };

constexpr Player opposite(Player p) noexcept {
    return p == Player::Proponent ? Player::Opponent : Player::Proponent;
}

/// Which real-world party the proponent (the root's owner) is.
enum class RootRole { Attacker, Defender };

enum class Refinement { And, Or };

std::string_view to_string(Player p);
std::string_view to_string(RootRole r);
std::string_view to_string(Refinement r);

struct NodeId {
    std::uint64_t value = 0;

    friend auto operator<=>(const NodeId &, const NodeId &) = default;
};

struct NodeIdHash {
    std::size_t operator()(NodeId id) const noexcept { return std::hash<std::uint64_t>{}(id.value); }
};

using NodeIndex = std::size_t;

struct Node {
    NodeId id;
    std::string label;
    Player player = Player::Proponent;
    Refinement refinement = Refinement::Or;
    std::vector<NodeIndex> children;
    // A valid tree has at most one entry here; the list form lets malformed
    // input reach validate_tree instead of being rejected on construction.
    std::vector<NodeIndex> counters;
    std::optional<NodeIndex> parent;
    bool folded = false;

    bool isRefined() const noexcept { return !children.empty(); }
    bool hasCounter() const noexcept { return !counters.empty(); }
    std::optional<NodeIndex> counter() const {
        if (counters.empty())
            return std::nullopt;
        return counters.front();
    }
    /// A non-refined node is a basic action, whether or not it is countered.
    bool isBasicAction() const noexcept { return children.empty(); }
};

/// Attack-defense tree. Cheap to copy relative to the work done on it;
/// edits produce new values and never mutate shared snapshots.
class AdTree {
public:
    static constexpr NodeIndex kRoot = 0;

    explicit AdTree(std::string rootLabel = "Root", std::optional<NodeId> rootId = std::nullopt,
                    Player rootPlayer = Player::Proponent);

    std::size_t size() const noexcept { return nodes_.size(); }
    const Node &node(NodeIndex i) const { return nodes_.at(i); }
    const Node &root() const { return nodes_.front(); }
    const std::vector<Node> &nodes() const noexcept { return nodes_; }

    std::optional<NodeIndex> find(NodeId id) const;
    /// Throws UnknownNode.
    NodeIndex indexOf(NodeId id) const;

    /// Appends a refining child. Player defaults to the parent's player.
    NodeIndex addChild(NodeIndex parent, std::string label, std::optional<NodeId> id = std::nullopt,
                       std::optional<Player> player = std::nullopt,
                       Refinement refinement = Refinement::Or);
    /// Attaches a counter. Player defaults to the opposite of the parent's.
    /// No check for an existing counter is made here; see add_counter().
    NodeIndex addCounter(NodeIndex parent, std::string label, std::optional<NodeId> id = std::nullopt,
                         std::optional<Player> player = std::nullopt,
                         Refinement refinement = Refinement::Or);

    void setLabel(NodeIndex i, std::string label) { nodes_.at(i).label = std::move(label); }
    void setRefinement(NodeIndex i, Refinement r) { nodes_.at(i).refinement = r; }
    void setFolded(NodeIndex i, bool folded) { nodes_.at(i).folded = folded; }

    /// Preorder; a node's counter is visited after its refining children.
    std::vector<NodeIndex> preorder() const;
    /// Postorder, same child order as preorder().
    std::vector<NodeIndex> postorder() const;
    /// Refining children followed by the counter, if any.
    std::vector<NodeIndex> orderedChildren(NodeIndex i) const;
    std::vector<std::size_t> depths() const;

    NodeId nextFreeId() const noexcept { return NodeId{nextId_}; }

    /// Copy of the subtree rooted at `top` removed from this tree.
    AdTree withoutSubtree(NodeIndex top) const;

    /// Structural equality walking from the root: ids, labels, players,
    /// refinements, fold state and child order.
    friend bool operator==(const AdTree &a, const AdTree &b);

private:
    NodeIndex append(NodeIndex parent, std::string label, std::optional<NodeId> id, Player player,
                     Refinement refinement);

    std::vector<Node> nodes_;
    std::unordered_map<NodeId, NodeIndex, NodeIdHash> byId_;
    std::uint64_t nextId_ = 1;
};

enum class ViolationReason { DuplicateId, EmptyLabel, BadEncoding, DoubleCounter, PlayerMismatch };

std::string_view to_string(ViolationReason r);

struct StructureViolation {
    NodeId node;
    ViolationReason reason;

    friend bool operator==(const StructureViolation &, const StructureViolation &) = default;
};

std::vector<StructureViolation> validate_tree(const AdTree &tree);

/// Length of the well-formed UTF-8 sequence at the start of `s`, or 0.
std::size_t utf8_sequence_length(std::string_view s);
bool is_valid_utf8(std::string_view s);

/// Trims ASCII whitespace; throws InvalidLabel when nothing remains or the
/// label is not valid UTF-8.
std::string normalize_label(std::string_view label);

/// Same shape, labels, players, child order, and refinement type on refined
/// nodes. Ids and fold state are ignored.
bool isomorphic(const AdTree &a, const AdTree &b);

/// Like isomorphic() but refining children are compared as multisets.
bool equal_modulo_permutation(const AdTree &a, const AdTree &b);

// ---------------------------------------------------------------------------
// Edits

enum class EditKind { Refine, AddCounter, Relabel, DeleteSubtree, SetRefinement, ToggleFold };

std::string_view to_string(EditKind k);

struct ChangeRecord {
    EditKind kind;
    NodeId target;
    /// Nodes created, removed or modified by the edit, target first.
    std::vector<NodeId> changed;
};

struct EditResult {
    AdTree tree;
    ChangeRecord change;
};

EditResult refine(const AdTree &tree, NodeId node, Refinement type, std::string_view label);
EditResult add_counter(const AdTree &tree, NodeId node, std::string_view label);
EditResult relabel(const AdTree &tree, NodeId node, std::string_view label);
EditResult delete_subtree(const AdTree &tree, NodeId node);
EditResult set_refinement(const AdTree &tree, NodeId node, Refinement type);
EditResult toggle_fold(const AdTree &tree, NodeId node);

} // namespace adt

#endif
