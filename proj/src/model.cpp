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

#include "adt/model.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <unordered_set>
#include <utility>

#include "adt/errors.hpp"

namespace adt {

std::string_view to_string(Player p) {
    return p == Player::Proponent ? "proponent" : "opponent";
}

std::string_view to_string(RootRole r) {
    return r == RootRole::Attacker ? "attacker" : "defender";
}

std::string_view to_string(Refinement r) {
    return r == Refinement::And ? "AND" : "OR";
}

std::string_view to_string(ViolationReason r) {
    switch (r) {
    case ViolationReason::DuplicateId:
        return "DuplicateId";
    case ViolationReason::EmptyLabel:
        return "EmptyLabel";
    case ViolationReason::BadEncoding:
        return "BadEncoding";
    case ViolationReason::DoubleCounter:
        return "DoubleCounter";
    case ViolationReason::PlayerMismatch:
        return "PlayerMismatch";
    }
    return "?";
}

std::string_view to_string(EditKind k) {
    switch (k) {
    case EditKind::Refine:
        return "refine";
    case EditKind::AddCounter:
        return "addCounter";
    case EditKind::Relabel:
        return "relabel";
    case EditKind::DeleteSubtree:
        return "delete";
    case EditKind::SetRefinement:
        return "setRefinement";
    case EditKind::ToggleFold:
        return "toggleFold";
    }
    return "?";
}

// ---------------------------------------------------------------------------

AdTree::AdTree(std::string rootLabel, std::optional<NodeId> rootId, Player rootPlayer) {
    Node root;
    root.id = rootId.value_or(NodeId{nextId_});
    root.label = std::move(rootLabel);
    root.player = rootPlayer;
    nextId_ = std::max(nextId_, root.id.value + 1);
    byId_.emplace(root.id, 0);
    nodes_.push_back(std::move(root));
}

std::optional<NodeIndex> AdTree::find(NodeId id) const {
    auto it = byId_.find(id);
    if (it == byId_.end())
        return std::nullopt;
    return it->second;
}

NodeIndex AdTree::indexOf(NodeId id) const {
    auto i = find(id);
    if (!i)
        throw UnknownNode("unknown node id " + std::to_string(id.value));
    return *i;
}

NodeIndex AdTree::append(NodeIndex parent, std::string label, std::optional<NodeId> id,
                         Player player, Refinement refinement) {
    if (parent >= nodes_.size())
        throw UnknownNode("parent index out of range");
    Node n;
    n.id = id.value_or(NodeId{nextId_});
    n.label = std::move(label);
    n.player = player;
    n.refinement = refinement;
    n.parent = parent;
    nextId_ = std::max(nextId_, n.id.value + 1);
    NodeIndex idx = nodes_.size();
    byId_.emplace(n.id, idx); // first occurrence wins for duplicates
    nodes_.push_back(std::move(n));
    return idx;
}

NodeIndex AdTree::addChild(NodeIndex parent, std::string label, std::optional<NodeId> id,
                           std::optional<Player> player, Refinement refinement) {
    Player p = player.value_or(nodes_.at(parent).player);
    NodeIndex idx = append(parent, std::move(label), id, p, refinement);
    nodes_[parent].children.push_back(idx);
    return idx;
}

NodeIndex AdTree::addCounter(NodeIndex parent, std::string label, std::optional<NodeId> id,
                             std::optional<Player> player, Refinement refinement) {
    Player p = player.value_or(opposite(nodes_.at(parent).player));
    NodeIndex idx = append(parent, std::move(label), id, p, refinement);
    nodes_[parent].counters.push_back(idx);
    return idx;
}

std::vector<NodeIndex> AdTree::orderedChildren(NodeIndex i) const {
    const Node &n = nodes_.at(i);
    std::vector<NodeIndex> out = n.children;
    out.insert(out.end(), n.counters.begin(), n.counters.end());
    return out;
}

std::vector<NodeIndex> AdTree::preorder() const {
    std::vector<NodeIndex> out;
    out.reserve(nodes_.size());
    std::vector<NodeIndex> stack{kRoot};
    while (!stack.empty()) {
        NodeIndex v = stack.back();
        stack.pop_back();
        out.push_back(v);
        const Node &n = nodes_[v];
        for (auto it = n.counters.rbegin(); it != n.counters.rend(); ++it)
            stack.push_back(*it);
        for (auto it = n.children.rbegin(); it != n.children.rend(); ++it)
            stack.push_back(*it);
    }
    return out;
}

std::vector<NodeIndex> AdTree::postorder() const {
    std::vector<NodeIndex> out;
    out.reserve(nodes_.size());
    // (node, next child slot)
    std::vector<std::pair<NodeIndex, std::size_t>> stack{{kRoot, 0}};
    while (!stack.empty()) {
        auto &[v, slot] = stack.back();
        const Node &n = nodes_[v];
        std::size_t total = n.children.size() + n.counters.size();
        if (slot < total) {
            NodeIndex c = slot < n.children.size() ? n.children[slot]
                                                   : n.counters[slot - n.children.size()];
            ++slot;
            stack.emplace_back(c, 0);
        } else {
            out.push_back(v);
            stack.pop_back();
        }
    }
    return out;
}

std::vector<std::size_t> AdTree::depths() const {
    std::vector<std::size_t> d(nodes_.size(), 0);
    for (NodeIndex v : preorder())
        if (nodes_[v].parent)
            d[v] = d[*nodes_[v].parent] + 1;
    return d;
}

AdTree AdTree::withoutSubtree(NodeIndex top) const {
    if (top == kRoot)
        throw EmptyDocumentError("the root cannot be deleted");
    AdTree out(nodes_[kRoot].label, nodes_[kRoot].id, nodes_[kRoot].player);
    out.nodes_[kRoot].refinement = nodes_[kRoot].refinement;
    out.nodes_[kRoot].folded = nodes_[kRoot].folded;
    std::vector<std::pair<NodeIndex, NodeIndex>> stack{{kRoot, kRoot}};
    while (!stack.empty()) {
        auto [src, dst] = stack.back();
        stack.pop_back();
        const Node &s = nodes_[src];
        auto copyInto = [&](NodeIndex c, bool isCounter) {
            if (c == top)
                return;
            const Node &cn = nodes_[c];
            NodeIndex n = isCounter ? out.addCounter(dst, cn.label, cn.id, cn.player, cn.refinement)
                                    : out.addChild(dst, cn.label, cn.id, cn.player, cn.refinement);
            out.nodes_[n].folded = cn.folded;
            stack.emplace_back(c, n);
        };
        for (NodeIndex c : s.children)
            copyInto(c, false);
        for (NodeIndex c : s.counters)
            copyInto(c, true);
    }
    out.nextId_ = std::max(out.nextId_, nextId_);
    return out;
}

namespace {

template <typename Pred>
bool parallelWalk(const AdTree &a, const AdTree &b, Pred samePayload) {
    if (a.size() != b.size())
        return false;
    std::vector<std::pair<NodeIndex, NodeIndex>> stack{{AdTree::kRoot, AdTree::kRoot}};
    while (!stack.empty()) {
        auto [x, y] = stack.back();
        stack.pop_back();
        const Node &nx = a.node(x);
        const Node &ny = b.node(y);
        if (!samePayload(nx, ny))
            return false;
        if (nx.children.size() != ny.children.size() || nx.counters.size() != ny.counters.size())
            return false;
        for (std::size_t i = 0; i < nx.children.size(); ++i)
            stack.emplace_back(nx.children[i], ny.children[i]);
        for (std::size_t i = 0; i < nx.counters.size(); ++i)
            stack.emplace_back(nx.counters[i], ny.counters[i]);
    }
    return true;
}

bool sameShapePayload(const Node &x, const Node &y) {
    if (x.label != y.label || x.player != y.player)
        return false;
    if (x.isRefined() && x.refinement != y.refinement)
        return false;
    return true;
}

} // namespace

bool operator==(const AdTree &a, const AdTree &b) {
    return parallelWalk(a, b, [](const Node &x, const Node &y) {
        return x.id == y.id && x.label == y.label && x.player == y.player &&
               x.refinement == y.refinement && x.folded == y.folded;
    });
}

bool isomorphic(const AdTree &a, const AdTree &b) {
    return parallelWalk(a, b, sameShapePayload);
}

namespace {

// Canonical string of a subtree with refining children sorted.
std::string canonicalForm(const AdTree &t, NodeIndex v) {
    const Node &n = t.node(v);
    std::string s = "(";
    s += n.player == Player::Proponent ? 'p' : 'o';
    if (n.isRefined())
        s += n.refinement == Refinement::And ? 'A' : 'O';
    s += std::to_string(n.label.size());
    s += ':';
    s += n.label;
    std::vector<std::string> kids;
    kids.reserve(n.children.size());
    for (NodeIndex c : n.children)
        kids.push_back(canonicalForm(t, c));
    std::sort(kids.begin(), kids.end());
    for (auto &k : kids)
        s += k;
    for (NodeIndex c : n.counters) {
        s += '!';
        s += canonicalForm(t, c);
    }
    s += ')';
    return s;
}

} // namespace

bool equal_modulo_permutation(const AdTree &a, const AdTree &b) {
    return a.size() == b.size() && canonicalForm(a, AdTree::kRoot) == canonicalForm(b, AdTree::kRoot);
}

// ---------------------------------------------------------------------------

std::vector<StructureViolation> validate_tree(const AdTree &tree) {
    std::vector<StructureViolation> out;
    std::unordered_set<NodeId, NodeIdHash> seen;
    const auto order = tree.preorder();
    for (NodeIndex v : order) {
        const Node &n = tree.node(v);
        if (!seen.insert(n.id).second)
            out.push_back({n.id, ViolationReason::DuplicateId});
        bool blank = std::all_of(n.label.begin(), n.label.end(),
                                 [](unsigned char c) { return std::isspace(c) != 0; });
        if (blank)
            out.push_back({n.id, ViolationReason::EmptyLabel});
        else if (!is_valid_utf8(n.label))
            out.push_back({n.id, ViolationReason::BadEncoding});
        if (n.counters.size() > 1)
            out.push_back({n.id, ViolationReason::DoubleCounter});
        if (!n.parent) {
            if (n.player != Player::Proponent)
                out.push_back({n.id, ViolationReason::PlayerMismatch});
        } else {
            const Node &p = tree.node(*n.parent);
            bool viaCounter =
                std::find(p.counters.begin(), p.counters.end(), v) != p.counters.end();
            Player expected = viaCounter ? opposite(p.player) : p.player;
            if (n.player != expected)
                out.push_back({n.id, ViolationReason::PlayerMismatch});
        }
    }
    return out;
}

std::size_t utf8_sequence_length(std::string_view s) {
    if (s.empty())
        return 0;
    auto at = [&](std::size_t i) { return static_cast<unsigned char>(s[i]); };
    const unsigned char c = at(0);
    if (c < 0x80)
        return 1;
    std::size_t len;
    unsigned char lo = 0x80, hi = 0xBF;
    if (c >= 0xC2 && c <= 0xDF) {
        len = 2;
    } else if (c >= 0xE0 && c <= 0xEF) {
        len = 3;
        if (c == 0xE0)
            lo = 0xA0;
        else if (c == 0xED)
            hi = 0x9F;
    } else if (c >= 0xF0 && c <= 0xF4) {
        len = 4;
        if (c == 0xF0)
            lo = 0x90;
        else if (c == 0xF4)
            hi = 0x8F;
    } else {
        return 0;
    }
    if (s.size() < len || at(1) < lo || at(1) > hi)
        return 0;
    for (std::size_t i = 2; i < len; ++i)
        if ((at(i) & 0xC0) != 0x80)
            return 0;
    return len;
}

bool is_valid_utf8(std::string_view s) {
    while (!s.empty()) {
        std::size_t n = utf8_sequence_length(s);
        if (n == 0)
            return false;
        s.remove_prefix(n);
    }
    return true;
}

std::string normalize_label(std::string_view label) {
    auto isSpace = [](unsigned char c) { return std::isspace(c) != 0; };
    std::size_t b = 0, e = label.size();
    while (b < e && isSpace(label[b]))
        ++b;
    while (e > b && isSpace(label[e - 1]))
        --e;
    if (b == e)
        throw InvalidLabel("label must not be empty");
    if (!is_valid_utf8(label))
        throw InvalidLabel("label is not valid UTF-8");
    return std::string(label.substr(b, e - b));
}

// ---------------------------------------------------------------------------

EditResult refine(const AdTree &tree, NodeId node, Refinement type, std::string_view label) {
    NodeIndex v = tree.indexOf(node);
    std::string l = normalize_label(label);
    AdTree out = tree;
    NodeId fresh = out.nextFreeId();
    out.setRefinement(v, type);
    out.addChild(v, std::move(l), fresh);
    return {std::move(out), {EditKind::Refine, node, {node, fresh}}};
}

EditResult add_counter(const AdTree &tree, NodeId node, std::string_view label) {
    NodeIndex v = tree.indexOf(node);
    if (tree.node(v).hasCounter())
        throw DoubleCounter("node " + std::to_string(node.value) + " already has a counter");
    std::string l = normalize_label(label);
    AdTree out = tree;
    NodeId fresh = out.nextFreeId();
    out.addCounter(v, std::move(l), fresh);
    return {std::move(out), {EditKind::AddCounter, node, {node, fresh}}};
}

EditResult relabel(const AdTree &tree, NodeId node, std::string_view label) {
    NodeIndex v = tree.indexOf(node);
    std::string l = normalize_label(label);
    AdTree out = tree;
    out.setLabel(v, std::move(l));
    return {std::move(out), {EditKind::Relabel, node, {node}}};
}

EditResult delete_subtree(const AdTree &tree, NodeId node) {
    NodeIndex v = tree.indexOf(node);
    if (v == AdTree::kRoot)
        throw EmptyDocumentError("the root cannot be deleted; relabel it instead");
    ChangeRecord rec{EditKind::DeleteSubtree, node, {}};
    std::vector<NodeIndex> stack{v};
    while (!stack.empty()) {
        NodeIndex x = stack.back();
        stack.pop_back();
        rec.changed.push_back(tree.node(x).id);
        for (NodeIndex c : tree.orderedChildren(x))
            stack.push_back(c);
    }
    rec.changed.push_back(tree.node(*tree.node(v).parent).id);
    return {tree.withoutSubtree(v), std::move(rec)};
}

EditResult set_refinement(const AdTree &tree, NodeId node, Refinement type) {
    NodeIndex v = tree.indexOf(node);
    AdTree out = tree;
    out.setRefinement(v, type);
    return {std::move(out), {EditKind::SetRefinement, node, {node}}};
}

EditResult toggle_fold(const AdTree &tree, NodeId node) {
    NodeIndex v = tree.indexOf(node);
    AdTree out = tree;
    out.setFolded(v, !tree.node(v).folded);
    return {std::move(out), {EditKind::ToggleFold, node, {node}}};
}

} // namespace adt
