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

#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>

namespace adt::testing {

namespace {

using Strategy = std::vector<double>;
using Strategies = std::vector<Strategy>;

Strategies product(const Strategies &a, const Strategies &b) {
    Strategies out;
    out.reserve(a.size() * b.size());
    for (const auto &x : a)
        for (const auto &y : b) {
            Strategy s = x;
            s.insert(s.end(), y.begin(), y.end());
            out.push_back(std::move(s));
        }
    return out;
}

Strategies alternatives(Strategies a, const Strategies &b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

double lookup(const ValuationMap &valuation, const Node &n) {
    const ValuationEntry *e = valuation.find(ActionKey{n.player, n.label});
    if (!e)
        throw std::invalid_argument("valuation has no entry for " + n.label);
    return e->value;
}

Strategies strategies(const AdTree &tree, NodeIndex v, const ValuationMap &valuation) {
    const Node &n = tree.node(v);
    Strategies core;
    if (n.children.empty()) {
        core = {{lookup(valuation, n)}};
    } else {
        // Proponent OR and opponent AND are the proponent's choices.
        const bool choice = (n.player == Player::Proponent) == (n.refinement == Refinement::Or);
        core = strategies(tree, n.children.front(), valuation);
        for (std::size_t i = 1; i < n.children.size(); ++i) {
            Strategies next = strategies(tree, n.children[i], valuation);
            core = choice ? alternatives(std::move(core), next) : product(core, next);
        }
    }
    if (!n.counters.empty()) {
        Strategies counter = strategies(tree, n.counters.front(), valuation);
        core = n.player == Player::Proponent ? product(core, counter)
                                             : alternatives(std::move(core), counter);
    }
    return core;
}

} // namespace

Value oracle_strategy_min(const AdTree &tree, std::string_view domainId,
                          const ValuationMap &valuation, std::size_t maxBasic) {
    std::size_t basic = 0;
    for (const Node &n : tree.nodes())
        basic += n.children.empty();
    if (basic > maxBasic)
        throw TooLarge("tree has " + std::to_string(basic) + " basic actions");

    std::function<double(double, double)> conj;
    if (domainId == "min-cost" || domainId == "min-time-sequential")
        conj = [](double x, double y) { return x + y; };
    else if (domainId == "min-time-parallel" || domainId == "min-skill-level")
        conj = [](double x, double y) { return std::max(x, y); };
    else
        throw std::invalid_argument("no strategy oracle for domain " + std::string(domainId));

    double best = std::numeric_limits<double>::infinity();
    for (const Strategy &s : strategies(tree, AdTree::kRoot, valuation)) {
        double total = s.front();
        for (std::size_t i = 1; i < s.size(); ++i)
            total = conj(total, s[i]);
        best = std::min(best, total);
    }
    return best;
}

double oracle_world_probability(const AdTree &tree, const ValuationMap &valuation,
                                std::size_t maxBasic) {
    std::vector<NodeIndex> post = tree.postorder();
    std::vector<int> bit(tree.size(), -1);
    std::vector<double> p;
    std::set<std::pair<Player, std::string>> seen;
    for (NodeIndex v : post) {
        const Node &n = tree.node(v);
        if (!n.children.empty())
            continue;
        if (!seen.insert({n.player, n.label}).second)
            throw SharedLabel("action '" + n.label + "' occurs more than once");
        bit[v] = static_cast<int>(p.size());
        p.push_back(lookup(valuation, n));
    }
    if (p.size() > maxBasic)
        throw TooLarge("tree has " + std::to_string(p.size()) + " basic actions");

    std::vector<char> sat(tree.size());
    double total = 0;
    const std::uint64_t worlds = std::uint64_t{1} << p.size();
    for (std::uint64_t w = 0; w < worlds; ++w) {
        double weight = 1;
        for (std::size_t i = 0; i < p.size(); ++i)
            weight *= (w >> i) & 1 ? p[i] : 1 - p[i];
        if (weight == 0)
            continue;
        for (NodeIndex v : post) {
            const Node &n = tree.node(v);
            bool s;
            if (n.children.empty()) {
                s = (w >> bit[v]) & 1;
            } else if (n.refinement == Refinement::And) {
                s = std::all_of(n.children.begin(), n.children.end(),
                                [&](NodeIndex c) { return sat[c] != 0; });
            } else {
                s = std::any_of(n.children.begin(), n.children.end(),
                                [&](NodeIndex c) { return sat[c] != 0; });
            }
            if (!n.counters.empty())
                s = s && !sat[n.counters.front()];
            sat[v] = s;
        }
        if (sat[AdTree::kRoot])
            total += weight;
    }
    return total;
}

// ---------------------------------------------------------------------------

namespace {

struct Flat {
    std::vector<NodeIndex> pre;
    std::vector<std::size_t> pos;
    std::vector<std::vector<bool>> ancestor;

    explicit Flat(const AdTree &t) : pre(t.preorder()), pos(t.size()) {
        for (std::size_t i = 0; i < pre.size(); ++i)
            pos[pre[i]] = i;
        ancestor.assign(pre.size(), std::vector<bool>(pre.size(), false));
        for (std::size_t i = 0; i < pre.size(); ++i) {
            std::vector<NodeIndex> stack = t.orderedChildren(pre[i]);
            while (!stack.empty()) {
                NodeIndex d = stack.back();
                stack.pop_back();
                ancestor[i][pos[d]] = true;
                for (NodeIndex c : t.orderedChildren(d))
                    stack.push_back(c);
            }
        }
    }
};

} // namespace

double brute_force_ted(const AdTree &a, const AdTree &b, const CostModel &costs) {
    const Flat fa(a), fb(b);
    const std::size_t na = fa.pre.size(), nb = fb.pre.size();
    double base = 0;
    for (NodeIndex v : fa.pre)
        base += costs.remove(a.node(v));
    for (NodeIndex v : fb.pre)
        base += costs.insert(b.node(v));
    // Gain of mapping i to j instead of deleting i and inserting j.
    std::vector<std::vector<double>> delta(na, std::vector<double>(nb));
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j) {
            const Node &x = a.node(fa.pre[i]), &y = b.node(fb.pre[j]);
            delta[i][j] = costs.relabel(x, y) - costs.remove(x) - costs.insert(y);
        }

    double best = base;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    // Valid mappings are increasing in preorder on both sides, so j only
    // ever moves right.
    std::function<void(std::size_t, std::size_t, double)> go = [&](std::size_t i, std::size_t j0,
                                                                   double cost) {
        if (i == na) {
            best = std::min(best, cost);
            return;
        }
        go(i + 1, j0, cost);
        for (std::size_t j = j0; j < nb; ++j) {
            if (!std::isfinite(delta[i][j]))
                continue;
            bool ok = true;
            for (auto [pi, pj] : pairs)
                if (fa.ancestor[pi][i] != fb.ancestor[pj][j]) {
                    ok = false;
                    break;
                }
            if (!ok)
                continue;
            pairs.emplace_back(i, j);
            go(i + 1, j + 1, cost + delta[i][j]);
            pairs.pop_back();
        }
    };
    go(0, 0, base);
    return best;
}

// ---------------------------------------------------------------------------

namespace {

struct Work {
    std::string label;
    Player player = Player::Proponent;
    Refinement refinement = Refinement::Or;
    std::optional<NodeId> bId;
    int parent = -1;
    std::vector<int> kids;
};

bool bDescends(const AdTree &b, NodeId desc, NodeId anc) {
    std::optional<NodeIndex> v = b.node(b.indexOf(desc)).parent;
    const NodeIndex target = b.indexOf(anc);
    while (v) {
        if (*v == target)
            return true;
        v = b.node(*v).parent;
    }
    return false;
}

std::string compare(const std::vector<Work> &w, int x, const AdTree &b, NodeIndex y) {
    const Node &n = b.node(y);
    const Work &m = w[x];
    const std::string where = "node " + std::to_string(n.id.value) + " of b";
    if (m.label != n.label)
        return where + ": label '" + m.label + "' != '" + n.label + "'";
    if (m.player != n.player)
        return where + ": player differs";
    auto kids = b.orderedChildren(y);
    if (kids.size() != m.kids.size())
        return where + ": " + std::to_string(m.kids.size()) + " children instead of " +
               std::to_string(kids.size());
    if (n.isRefined() && m.refinement != n.refinement)
        return where + ": refinement differs";
    for (std::size_t i = 0; i < kids.size(); ++i) {
        std::string r = compare(w, m.kids[i], b, kids[i]);
        if (!r.empty())
            return r;
    }
    return {};
}

} // namespace

std::string check_edit_script(const AdTree &a, const AdTree &b, const TreeDiff &diff,
                              const CostModel &costs) {
    std::vector<Work> w(1); // w[0] is a virtual super-root
    std::map<NodeId, int> fromA, fromB;
    for (NodeIndex v : a.preorder()) {
        const Node &n = a.node(v);
        Work x{n.label, n.player, n.refinement, std::nullopt,
               n.parent ? fromA.at(a.node(*n.parent).id) : 0, {}};
        w.push_back(std::move(x));
        const int idx = static_cast<int>(w.size() - 1);
        fromA[n.id] = idx;
        w[w.back().parent].kids.push_back(idx);
    }
    for (const auto &[x, y] : diff.mapping) {
        int idx = fromA.at(x);
        w[idx].bId = y;
        fromB[y] = idx;
        // A basic action's refinement is meaningless; take b's.
        if (!a.node(a.indexOf(x)).isRefined())
            w[idx].refinement = b.node(b.indexOf(y)).refinement;
    }

    double sum = 0;
    for (const EditOp &op : diff.script.ops) {
        sum += op.cost;
        switch (op.kind) {
        case EditOp::Kind::Relabel: {
            if (!op.nodeA || !op.nodeB || diff.mapping.count(*op.nodeA) == 0 ||
                diff.mapping.at(*op.nodeA) != *op.nodeB)
                return "relabel of an unmapped pair";
            const Node &x = a.node(a.indexOf(*op.nodeA));
            const Node &y = b.node(b.indexOf(*op.nodeB));
            if (op.cost != costs.relabel(x, y))
                return "relabel cost mismatch";
            Work &m = w[fromA.at(*op.nodeA)];
            m.label = y.label;
            m.player = y.player;
            m.refinement = y.refinement;
            break;
        }
        case EditOp::Kind::Delete: {
            if (!op.nodeA || diff.mapping.count(*op.nodeA))
                return "delete of a mapped node";
            if (op.cost != costs.remove(a.node(a.indexOf(*op.nodeA))))
                return "delete cost mismatch";
            const int x = fromA.at(*op.nodeA);
            auto &siblings = w[w[x].parent].kids;
            auto it = std::find(siblings.begin(), siblings.end(), x);
            for (int k : w[x].kids)
                w[k].parent = w[x].parent;
            it = siblings.erase(it);
            siblings.insert(it, w[x].kids.begin(), w[x].kids.end());
            w[x].kids.clear();
            break;
        }
        case EditOp::Kind::Insert: {
            if (!op.nodeB)
                return "insert without a node of b";
            const Node &y = b.node(b.indexOf(*op.nodeB));
            if (op.cost != costs.insert(y))
                return "insert cost mismatch";
            int parent = 0;
            if (op.parentB) {
                auto it = fromB.find(*op.parentB);
                if (it == fromB.end())
                    return "insert under a parent that does not exist yet";
                parent = it->second;
            }
            auto &siblings = w[parent].kids;
            if (op.position > siblings.size())
                return "insert position out of range";
            std::size_t end = op.position;
            while (end < siblings.size() && w[siblings[end]].bId &&
                   bDescends(b, *w[siblings[end]].bId, *op.nodeB))
                ++end;
            Work x{y.label, y.player, y.refinement, y.id, parent, {}};
            x.kids.assign(siblings.begin() + static_cast<long>(op.position),
                          siblings.begin() + static_cast<long>(end));
            w.push_back(std::move(x));
            const int idx = static_cast<int>(w.size() - 1);
            for (int k : w[idx].kids)
                w[k].parent = idx;
            auto &sib = w[parent].kids; // w may have reallocated
            sib.erase(sib.begin() + static_cast<long>(op.position),
                      sib.begin() + static_cast<long>(end));
            sib.insert(sib.begin() + static_cast<long>(op.position), idx);
            fromB[y.id] = idx;
            break;
        }
        }
    }
    if (std::fabs(sum - diff.cost) > 1e-9 || std::fabs(diff.script.cost - diff.cost) > 1e-9)
        return "op costs add up to " + std::to_string(sum) + ", distance is " +
               std::to_string(diff.cost);
    if (w[0].kids.size() != 1)
        return "result has " + std::to_string(w[0].kids.size()) + " roots";
    return compare(w, w[0].kids.front(), b, AdTree::kRoot);
}

} // namespace adt::testing
