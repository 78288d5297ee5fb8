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

#include "adt/treediff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace adt {

std::string_view to_string(EditOp::Kind k) {
    switch (k) {
    case EditOp::Kind::Relabel:
        return "relabel";
    case EditOp::Kind::Delete:
        return "delete";
    case EditOp::Kind::Insert:
        return "insert";
    }
    return "?";
}

CostModel unit_costs() {
    CostModel c;
    c.remove = [](const Node &) { return 1.0; };
    c.insert = [](const Node &) { return 1.0; };
    c.relabel = [](const Node &x, const Node &y) {
        if (x.player != y.player)
            return std::numeric_limits<double>::infinity();
        if (x.label != y.label)
            return 1.0;
        if (x.isRefined() && y.isRefined() && x.refinement != y.refinement)
            return 1.0;
        return 0.0;
    };
    return c;
}

namespace {

// Postorder view with 1-based positions, as in Zhang and Shasha.
struct Flat {
    std::vector<NodeIndex> node; // position -> node index; [0] unused
    std::vector<int> lml;        // leftmost leaf descendant
    std::vector<int> keyroots;

    explicit Flat(const AdTree &t) {
        const auto post = t.postorder();
        const int n = static_cast<int>(post.size());
        node.assign(n + 1, 0);
        lml.assign(n + 1, 0);
        std::vector<int> pos(t.size(), 0);
        for (int k = 1; k <= n; ++k) {
            NodeIndex v = post[k - 1];
            node[k] = v;
            pos[v] = k;
            const Node &nd = t.node(v);
            if (nd.children.empty() && nd.counters.empty())
                lml[k] = k;
            else
                lml[k] = lml[pos[nd.children.empty() ? nd.counters.front() : nd.children.front()]];
        }
        std::vector<bool> seen(n + 1, false);
        for (int k = n; k >= 1; --k) {
            if (!seen[lml[k]]) {
                keyroots.push_back(k);
                seen[lml[k]] = true;
            }
        }
        std::reverse(keyroots.begin(), keyroots.end());
    }

    int size() const { return static_cast<int>(node.size()) - 1; }
};

class ZhangShasha {
public:
    ZhangShasha(const AdTree &a, const AdTree &b, const CostModel &c)
        : a_(a), b_(b), fa_(a), fb_(b), costs_(c), n_(fa_.size()), m_(fb_.size()),
          td_(static_cast<std::size_t>(n_ + 1) * (m_ + 1), 0.0),
          fd_(static_cast<std::size_t>(n_ + 2) * (m_ + 2), 0.0) {
        del_.assign(n_ + 1, 0);
        ins_.assign(m_ + 1, 0);
        for (int x = 1; x <= n_; ++x)
            del_[x] = costs_.remove(a_.node(fa_.node[x]));
        for (int y = 1; y <= m_; ++y)
            ins_[y] = costs_.insert(b_.node(fb_.node[y]));
    }

    double run() {
        for (int i : fa_.keyroots)
            for (int j : fb_.keyroots)
                forest(i, j);
        return td(n_, m_);
    }

    /// Matched (x, y) postorder position pairs of an optimal mapping.
    std::vector<std::pair<int, int>> mapping() {
        std::vector<std::pair<int, int>> out;
        std::vector<std::pair<int, int>> pending{{n_, m_}};
        while (!pending.empty()) {
            auto [i, j] = pending.back();
            pending.pop_back();
            forest(i, j);
            const int li = fa_.lml[i], lj = fb_.lml[j];
            int x = i, y = j;
            while (x >= li || y >= lj) {
                if (x >= li && y >= lj) {
                    const bool aligned = fa_.lml[x] == li && fb_.lml[y] == lj;
                    if (aligned) {
                        if (fd(x - 1, y - 1, li, lj) + ren(x, y) == fd(x, y, li, lj)) {
                            out.emplace_back(x, y);
                            --x;
                            --y;
                            continue;
                        }
                    } else if (fd(fa_.lml[x] - 1, fb_.lml[y] - 1, li, lj) + td(x, y) ==
                               fd(x, y, li, lj)) {
                        pending.emplace_back(x, y);
                        x = fa_.lml[x] - 1;
                        y = fb_.lml[y] - 1;
                        continue;
                    }
                }
                if (x >= li && fd(x - 1, y, li, lj) + del_[x] == fd(x, y, li, lj)) {
                    --x;
                } else {
                    --y;
                }
            }
        }
        return out;
    }

    const Flat &flatA() const { return fa_; }
    const Flat &flatB() const { return fb_; }
    double ren(int x, int y) const {
        return costs_.relabel(a_.node(fa_.node[x]), b_.node(fb_.node[y]));
    }
    double delCost(int x) const { return del_[x]; }
    double insCost(int y) const { return ins_[y]; }

private:
    double &td(int x, int y) { return td_[static_cast<std::size_t>(x) * (m_ + 1) + y]; }
    // Forest distance between A[li..x] and B[lj..y]; x = li-1 / y = lj-1 is
    // the empty forest.
    double &fd(int x, int y, int li, int lj) {
        return fd_[static_cast<std::size_t>(x - li + 1) * (m_ + 2) + (y - lj + 1)];
    }

    void forest(int i, int j) {
        const int li = fa_.lml[i], lj = fb_.lml[j];
        fd(li - 1, lj - 1, li, lj) = 0;
        for (int x = li; x <= i; ++x)
            fd(x, lj - 1, li, lj) = fd(x - 1, lj - 1, li, lj) + del_[x];
        for (int y = lj; y <= j; ++y)
            fd(li - 1, y, li, lj) = fd(li - 1, y - 1, li, lj) + ins_[y];
        for (int x = li; x <= i; ++x) {
            for (int y = lj; y <= j; ++y) {
                const double viaDelete = fd(x - 1, y, li, lj) + del_[x];
                const double viaInsert = fd(x, y - 1, li, lj) + ins_[y];
                if (fa_.lml[x] == li && fb_.lml[y] == lj) {
                    const double viaMatch = fd(x - 1, y - 1, li, lj) + ren(x, y);
                    fd(x, y, li, lj) = std::min({viaDelete, viaInsert, viaMatch});
                    td(x, y) = fd(x, y, li, lj);
                } else {
                    const double viaSubtree =
                        fd(fa_.lml[x] - 1, fb_.lml[y] - 1, li, lj) + td(x, y);
                    fd(x, y, li, lj) = std::min({viaDelete, viaInsert, viaSubtree});
                }
            }
        }
    }

    const AdTree &a_;
    const AdTree &b_;
    Flat fa_, fb_;
    const CostModel &costs_;
    int n_, m_;
    std::vector<double> td_;
    std::vector<double> fd_;
    std::vector<double> del_, ins_;
};

} // namespace

TreeDiff tree_edit_distance(const AdTree &a, const AdTree &b, const CostModel &costs) {
    ZhangShasha zs(a, b, costs);
    TreeDiff out;
    out.cost = zs.run();
    const auto pairs = zs.mapping();

    const Flat &fa = zs.flatA();
    const Flat &fb = zs.flatB();
    std::vector<bool> keptA(a.size(), false), keptB(b.size(), false);
    std::vector<std::pair<int, int>> sorted = pairs;
    std::sort(sorted.begin(), sorted.end());
    double total = 0;
    for (auto [x, y] : sorted) {
        NodeIndex va = fa.node[x], vb = fb.node[y];
        keptA[va] = keptB[vb] = true;
        out.mapping.emplace(a.node(va).id, b.node(vb).id);
        double c = zs.ren(x, y);
        if (c != 0) {
            out.script.ops.push_back(
                {EditOp::Kind::Relabel, a.node(va).id, b.node(vb).id, std::nullopt, 0, c});
            total += c;
        }
    }
    for (int x = 1; x <= fa.size(); ++x) {
        NodeIndex va = fa.node[x];
        if (!keptA[va]) {
            out.script.ops.push_back(
                {EditOp::Kind::Delete, a.node(va).id, std::nullopt, std::nullopt, 0, zs.delCost(x)});
            total += zs.delCost(x);
        }
    }
    std::vector<int> posB(b.size(), 0);
    for (int y = 1; y <= fb.size(); ++y)
        posB[fb.node[y]] = y;
    for (NodeIndex vb : b.preorder()) {
        if (keptB[vb])
            continue;
        const Node &n = b.node(vb);
        EditOp op{EditOp::Kind::Insert, std::nullopt, n.id, std::nullopt, 0, zs.insCost(posB[vb])};
        if (n.parent) {
            op.parentB = b.node(*n.parent).id;
            auto siblings = b.orderedChildren(*n.parent);
            op.position = static_cast<std::size_t>(
                std::find(siblings.begin(), siblings.end(), vb) - siblings.begin());
        }
        out.script.ops.push_back(op);
        total += op.cost;
    }
    out.script.cost = total;
    return out;
}

nlohmann::json to_json(const TreeDiff &d) {
    auto num = [](double c) -> nlohmann::json {
        if (std::isinf(c))
            return "inf";
        return c;
    };
    nlohmann::json script = nlohmann::json::array();
    for (const auto &op : d.script.ops) {
        nlohmann::json j{{"op", to_string(op.kind)}, {"cost", num(op.cost)}};
        if (op.nodeA)
            j["nodeA"] = op.nodeA->value;
        if (op.nodeB)
            j["nodeB"] = op.nodeB->value;
        if (op.kind == EditOp::Kind::Insert) {
            j["parentB"] = op.parentB ? nlohmann::json(op.parentB->value) : nlohmann::json();
            j["position"] = op.position;
        }
        script.push_back(std::move(j));
    }
    nlohmann::json mapping = nlohmann::json::array();
    for (const auto &[x, y] : d.mapping)
        mapping.push_back({x.value, y.value});
    return {{"distance", num(d.cost)}, {"script", std::move(script)}, {"mapping", std::move(mapping)}};
}

nlohmann::json to_json(const ReconcileSummary &s) {
    nlohmann::json ins = nlohmann::json::array(), del = nlohmann::json::array();
    for (auto id : s.insertedIds)
        ins.push_back(id.value);
    for (auto id : s.deletedIds)
        del.push_back(id.value);
    return {{"matched", s.matched},   {"inserted", s.inserted},  {"deleted", s.deleted},
            {"relabeled", s.relabeled}, {"insertedIds", ins},   {"deletedIds", del},
            {"cost", s.cost}};
}

// ---------------------------------------------------------------------------

ReconcileResult reconcile(const Document &doc, const Term &newTerm,
                          const DomainRegistry &registry) {
    const TreeConversion cand = term_to_tree_detailed(newTerm);
    const AdTree &old = doc.tree;
    const AdTree &next = cand.tree;

    // Terms carry no labels for refined nodes; those synthesized labels
    // match any old label.
    CostModel costs = unit_costs();
    auto base = costs.relabel;
    costs.relabel = [&, base](const Node &x, const Node &y) {
        NodeIndex vy = next.indexOf(y.id);
        if (cand.synthesizedLabel[vy] && x.player == y.player) {
            if (x.isRefined() && y.isRefined() && x.refinement != y.refinement)
                return 1.0;
            return 0.0;
        }
        return base(x, y);
    };
    const TreeDiff diff = tree_edit_distance(old, next, costs);

    std::map<NodeId, NodeId> fromNew; // candidate id -> old id
    for (const auto &[oldId, newId] : diff.mapping)
        fromNew.emplace(newId, oldId);

    ReconcileResult out;
    out.summary.cost = diff.cost;
    std::uint64_t fresh = old.nextFreeId().value;

    auto payload = [&](NodeIndex v, NodeId &id, std::string &label, Refinement &ref, bool &folded) {
        const Node &n = next.node(v);
        auto it = fromNew.find(n.id);
        label = n.label;
        ref = n.refinement;
        folded = false;
        if (it == fromNew.end()) {
            id = NodeId{fresh++};
            out.summary.insertedIds.push_back(id);
            return;
        }
        const Node &o = old.node(old.indexOf(it->second));
        id = o.id;
        folded = o.folded;
        if (cand.synthesizedLabel[v])
            label = o.label;
        if (!n.isRefined())
            ref = o.refinement;
        ++out.summary.matched;
        if (label != o.label || (n.isRefined() && o.isRefined() && ref != o.refinement))
            ++out.summary.relabeled;
    };

    NodeId rid;
    std::string rlabel;
    Refinement rref;
    bool rfold;
    payload(AdTree::kRoot, rid, rlabel, rref, rfold);
    AdTree tree(rlabel, rid, next.root().player);
    tree.setRefinement(AdTree::kRoot, rref);
    tree.setFolded(AdTree::kRoot, rfold);
    std::vector<std::pair<NodeIndex, NodeIndex>> stack{{AdTree::kRoot, AdTree::kRoot}};
    while (!stack.empty()) {
        auto [src, dst] = stack.back();
        stack.pop_back();
        const Node &s = next.node(src);
        auto copy = [&](NodeIndex c, bool isCounter) {
            NodeId id;
            std::string label;
            Refinement ref;
            bool fold;
            payload(c, id, label, ref, fold);
            const Player p = next.node(c).player;
            NodeIndex n = isCounter ? tree.addCounter(dst, label, id, p, ref)
                                    : tree.addChild(dst, label, id, p, ref);
            tree.setFolded(n, fold);
            stack.emplace_back(c, n);
        };
        for (NodeIndex c : s.children)
            copy(c, false);
        for (NodeIndex c : s.counters)
            copy(c, true);
    }

    for (const Node &o : old.nodes())
        if (!diff.mapping.count(o.id))
            out.summary.deletedIds.push_back(o.id);
    out.summary.inserted = out.summary.insertedIds.size();
    out.summary.deleted = out.summary.deletedIds.size();

    out.document = doc;
    out.document.tree = std::move(tree);
    for (auto it = out.document.nodeExtra.begin(); it != out.document.nodeExtra.end();) {
        if (!out.document.tree.find(it->first))
            it = out.document.nodeExtra.erase(it);
        else
            ++it;
    }
    sync_valuations(out.document, registry);
    return out;
}

} // namespace adt
