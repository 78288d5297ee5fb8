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

#include "adt/layout.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace adt {

void LayoutConfig::validate() const {
    if (!(nodeWidth > 0 && nodeHeight > 0 && siblingGap > 0 && subtreeGap > 0 && levelGap > 0))
        throw std::invalid_argument("layout dimensions must all be positive");
}

namespace {

constexpr NodeIndex kNone = std::numeric_limits<NodeIndex>::max();

class TidyLayout {
public:
    TidyLayout(const AdTree &tree, const LayoutConfig &cfg, bool respectFold)
        : tree_(tree), cfg_(cfg), n_(tree.size()) {
        kids_.resize(n_);
        visible_.assign(n_, false);
        parent_.assign(n_, kNone);
        leftSibling_.assign(n_, kNone);
        number_.assign(n_, 0);
        prelim_.assign(n_, 0);
        mod_.assign(n_, 0);
        shift_.assign(n_, 0);
        change_.assign(n_, 0);
        thread_.assign(n_, kNone);
        ancestor_.resize(n_);
        defaultAncestor_.assign(n_, kNone);
        for (NodeIndex v = 0; v < n_; ++v)
            ancestor_[v] = v;

        // Visible structure, preorder.
        std::vector<NodeIndex> stack{AdTree::kRoot};
        while (!stack.empty()) {
            NodeIndex v = stack.back();
            stack.pop_back();
            visible_[v] = true;
            preorder_.push_back(v);
            if (respectFold && tree.node(v).folded)
                continue;
            kids_[v] = tree.orderedChildren(v);
            for (std::size_t i = 0; i < kids_[v].size(); ++i) {
                NodeIndex c = kids_[v][i];
                parent_[c] = v;
                number_[c] = i;
                leftSibling_[c] = i ? kids_[v][i - 1] : kNone;
            }
            for (auto it = kids_[v].rbegin(); it != kids_[v].rend(); ++it)
                stack.push_back(*it);
        }
    }

    LayoutResult run() {
        firstWalk();
        return secondWalk();
    }

private:
    double siblingDistance() const { return cfg_.nodeWidth + cfg_.siblingGap; }
    double subtreeDistance() const { return cfg_.nodeWidth + cfg_.subtreeGap; }

    bool isLeaf(NodeIndex v) const { return kids_[v].empty(); }
    NodeIndex nextLeft(NodeIndex v) const { return isLeaf(v) ? thread_[v] : kids_[v].front(); }
    NodeIndex nextRight(NodeIndex v) const { return isLeaf(v) ? thread_[v] : kids_[v].back(); }
    NodeIndex leftmostSibling(NodeIndex v) const {
        return parent_[v] == kNone ? v : kids_[parent_[v]].front();
    }

    // Postorder, so each child is finished (and apportioned) before its
    // right sibling starts and before its parent is placed.
    void firstWalk() {
        std::vector<NodeIndex> post;
        post.reserve(preorder_.size());
        std::vector<std::pair<NodeIndex, std::size_t>> stack{{AdTree::kRoot, 0}};
        while (!stack.empty()) {
            auto &[v, slot] = stack.back();
            if (slot < kids_[v].size()) {
                NodeIndex c = kids_[v][slot++];
                stack.emplace_back(c, 0);
            } else {
                post.push_back(v);
                stack.pop_back();
            }
        }
        for (NodeIndex v : post) {
            const NodeIndex w = leftSibling_[v];
            if (isLeaf(v)) {
                prelim_[v] = w == kNone ? 0 : prelim_[w] + siblingDistance();
            } else {
                executeShifts(v);
                const double midpoint = (prelim_[kids_[v].front()] + prelim_[kids_[v].back()]) / 2;
                if (w == kNone) {
                    prelim_[v] = midpoint;
                } else {
                    prelim_[v] = prelim_[w] + siblingDistance();
                    mod_[v] = prelim_[v] - midpoint;
                }
            }
            const NodeIndex p = parent_[v];
            if (p != kNone) {
                if (defaultAncestor_[p] == kNone)
                    defaultAncestor_[p] = kids_[p].front();
                defaultAncestor_[p] = apportion(v, defaultAncestor_[p]);
            }
        }
    }

    NodeIndex apportion(NodeIndex v, NodeIndex defaultAncestor) {
        const NodeIndex w = leftSibling_[v];
        if (w == kNone)
            return defaultAncestor;
        NodeIndex vip = v, vop = v, vim = w, vom = leftmostSibling(v);
        double sip = mod_[vip], sop = mod_[vop], sim = mod_[vim], som = mod_[vom];
        while (nextRight(vim) != kNone && nextLeft(vip) != kNone) {
            vim = nextRight(vim);
            vip = nextLeft(vip);
            vom = nextLeft(vom);
            vop = nextRight(vop);
            ancestor_[vop] = v;
            // Contour nodes below the sibling level never share a parent.
            const double shift = (prelim_[vim] + sim) - (prelim_[vip] + sip) + subtreeDistance();
            if (shift > 0) {
                moveSubtree(ancestorOf(vim, v, defaultAncestor), v, shift);
                sip += shift;
                sop += shift;
            }
            sim += mod_[vim];
            sip += mod_[vip];
            som += mod_[vom];
            sop += mod_[vop];
        }
        if (nextRight(vim) != kNone && nextRight(vop) == kNone) {
            thread_[vop] = nextRight(vim);
            mod_[vop] += sim - sop;
        }
        if (nextLeft(vip) != kNone && nextLeft(vom) == kNone) {
            thread_[vom] = nextLeft(vip);
            mod_[vom] += sip - som;
            defaultAncestor = v;
        }
        return defaultAncestor;
    }

    NodeIndex ancestorOf(NodeIndex vim, NodeIndex v, NodeIndex defaultAncestor) const {
        NodeIndex a = ancestor_[vim];
        return parent_[a] == parent_[v] ? a : defaultAncestor;
    }

    void moveSubtree(NodeIndex wm, NodeIndex wp, double shift) {
        const double subtrees = static_cast<double>(number_[wp] - number_[wm]);
        change_[wp] -= shift / subtrees;
        shift_[wp] += shift;
        change_[wm] += shift / subtrees;
        prelim_[wp] += shift;
        mod_[wp] += shift;
    }

    void executeShifts(NodeIndex v) {
        double shift = 0, change = 0;
        for (auto it = kids_[v].rbegin(); it != kids_[v].rend(); ++it) {
            NodeIndex w = *it;
            prelim_[w] += shift;
            mod_[w] += shift;
            change += change_[w];
            shift += shift_[w] + change;
        }
    }

    LayoutResult secondWalk() {
        std::vector<double> modSum(n_, 0), x(n_, 0);
        std::vector<std::size_t> depth(n_, 0);
        for (NodeIndex v : preorder_) {
            x[v] = prelim_[v] + modSum[v];
            for (NodeIndex c : kids_[v]) {
                modSum[c] = modSum[v] + mod_[v];
                depth[c] = depth[v] + 1;
            }
        }
        const double origin = x[AdTree::kRoot];
        const double rowHeight = cfg_.nodeHeight + cfg_.levelGap;
        LayoutResult out;
        out.positions.reserve(preorder_.size());
        Bounds b{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                 -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
        for (NodeIndex v : preorder_) {
            Point p{x[v] - origin, static_cast<double>(depth[v]) * rowHeight};
            out.positions.emplace(tree_.node(v).id, p);
            b.minX = std::min(b.minX, p.x - cfg_.nodeWidth / 2);
            b.maxX = std::max(b.maxX, p.x + cfg_.nodeWidth / 2);
            b.minY = std::min(b.minY, p.y - cfg_.nodeHeight / 2);
            b.maxY = std::max(b.maxY, p.y + cfg_.nodeHeight / 2);
        }
        out.bounds = b;
        return out;
    }

    const AdTree &tree_;
    const LayoutConfig &cfg_;
    std::size_t n_;
    std::vector<std::vector<NodeIndex>> kids_;
    std::vector<bool> visible_;
    std::vector<NodeIndex> preorder_;
    std::vector<NodeIndex> parent_, leftSibling_;
    std::vector<std::size_t> number_;
    std::vector<double> prelim_, mod_, shift_, change_;
    std::vector<NodeIndex> thread_, ancestor_, defaultAncestor_;
};

} // namespace

LayoutResult layout(const AdTree &tree, const LayoutConfig &config, bool respectFold) {
    config.validate();
    return TidyLayout(tree, config, respectFold).run();
}

} // namespace adt
