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

#include <gtest/gtest.h>

#include "adt/errors.hpp"
#include "adt/model.hpp"
#include "generators.hpp"

namespace adt {
namespace {

using testing::Rng;

// Root "steal data" (OR) with proponent leaves a, b and counter d.
AdTree stealData() {
    AdTree t("steal data");
    t.addChild(AdTree::kRoot, "a");
    t.addChild(AdTree::kRoot, "b");
    t.addCounter(AdTree::kRoot, "d");
    return t;
}

std::vector<std::string> labels(const AdTree &t, const std::vector<NodeIndex> &order) {
    std::vector<std::string> out;
    for (NodeIndex v : order)
        out.push_back(t.node(v).label);
    return out;
}

TEST(Model, SingleNodeIsValid) {
    AdTree t("attack server");
    EXPECT_TRUE(validate_tree(t).empty());
    EXPECT_EQ(t.size(), 1u);
    EXPECT_TRUE(t.root().isBasicAction());
    EXPECT_EQ(t.root().player, Player::Proponent);
}

TEST(Model, PlayersFollowRefinementAndCounterEdges) {
    AdTree t = stealData();
    EXPECT_EQ(t.node(1).player, Player::Proponent);
    EXPECT_EQ(t.node(3).player, Player::Opponent);
    NodeIndex x = t.addChild(3, "x");
    EXPECT_EQ(t.node(x).player, Player::Opponent);
    NodeIndex y = t.addCounter(x, "y");
    EXPECT_EQ(t.node(y).player, Player::Proponent);
    EXPECT_TRUE(validate_tree(t).empty());
}

TEST(Model, TraversalsPutCounterLast) {
    AdTree t = stealData();
    t.addChild(1, "a1");
    EXPECT_EQ(labels(t, t.preorder()),
              (std::vector<std::string>{"steal data", "a", "a1", "b", "d"}));
    EXPECT_EQ(labels(t, t.postorder()),
              (std::vector<std::string>{"a1", "a", "b", "d", "steal data"}));
    EXPECT_EQ(labels(t, t.orderedChildren(AdTree::kRoot)),
              (std::vector<std::string>{"a", "b", "d"}));
    EXPECT_EQ(t.depths(), (std::vector<std::size_t>{0, 1, 1, 1, 2}));
}

TEST(Model, CounterWithSamePlayerIsReported) {
    AdTree t("r");
    NodeIndex c = t.addCounter(AdTree::kRoot, "c", std::nullopt, Player::Proponent);
    auto v = validate_tree(t);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].reason, ViolationReason::PlayerMismatch);
    EXPECT_EQ(v[0].node, t.node(c).id);
}

TEST(Model, RefiningChildWithOtherPlayerIsReported) {
    AdTree t("r");
    t.addChild(AdTree::kRoot, "c", std::nullopt, Player::Opponent);
    auto v = validate_tree(t);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].reason, ViolationReason::PlayerMismatch);
}

TEST(Model, DuplicateIdsAreReported) {
    AdTree t("r", NodeId{5});
    t.addChild(AdTree::kRoot, "a", NodeId{7});
    t.addChild(AdTree::kRoot, "b", NodeId{7});
    auto v = validate_tree(t);
    ASSERT_FALSE(v.empty());
    EXPECT_EQ(v[0].reason, ViolationReason::DuplicateId);
    EXPECT_EQ(v[0].node, NodeId{7});
}

TEST(Model, EmptyLabelAndDoubleCounterAreReported) {
    AdTree t("r");
    t.addChild(AdTree::kRoot, "  ");
    t.addCounter(AdTree::kRoot, "c1");
    t.addCounter(AdTree::kRoot, "c2");
    std::vector<ViolationReason> reasons;
    for (const auto &v : validate_tree(t))
        reasons.push_back(v.reason);
    EXPECT_NE(std::find(reasons.begin(), reasons.end(), ViolationReason::EmptyLabel), reasons.end());
    EXPECT_NE(std::find(reasons.begin(), reasons.end(), ViolationReason::DoubleCounter),
              reasons.end());
}

TEST(Model, NonProponentRootIsReported) {
    AdTree t("r", std::nullopt, Player::Opponent);
    ASSERT_EQ(validate_tree(t).size(), 1u);
}

TEST(Model, RefineTwiceMakesOrNodeWithTwoChildren) {
    AdTree t("leaf");
    EditResult r1 = refine(t, t.root().id, Refinement::Or, "child");
    EditResult r2 = refine(r1.tree, t.root().id, Refinement::Or, "child");
    const AdTree &u = r2.tree;
    EXPECT_EQ(u.root().children.size(), 2u);
    EXPECT_EQ(u.root().refinement, Refinement::Or);
    EXPECT_TRUE(validate_tree(u).empty());
    EXPECT_EQ(r2.change.kind, EditKind::Refine);
    ASSERT_EQ(r2.change.changed.size(), 2u);
    EXPECT_EQ(r2.change.changed[1], u.node(u.root().children[1]).id);
    // Snapshots are not touched by edits.
    EXPECT_EQ(t.size(), 1u);
    EXPECT_EQ(r1.tree.size(), 2u);
}

TEST(Model, SecondCounterIsRejected) {
    AdTree t = stealData();
    EXPECT_THROW(add_counter(t, t.root().id, "again"), DoubleCounter);
    EditResult r = add_counter(t, t.node(1).id, "guard");
    EXPECT_EQ(r.tree.node(r.tree.indexOf(r.change.changed.back())).player, Player::Opponent);
}

TEST(Model, RootCannotBeDeleted) {
    AdTree t = stealData();
    EXPECT_THROW(delete_subtree(t, t.root().id), EmptyDocumentError);
}

TEST(Model, DeleteRemovesWholeSubtree) {
    AdTree t = stealData();
    t.addChild(1, "a1");
    t.addCounter(1, "a2");
    EditResult r = delete_subtree(t, t.node(1).id);
    EXPECT_EQ(r.tree.size(), 3u);
    // Removed nodes, then the parent that lost a child.
    ASSERT_EQ(r.change.changed.size(), 4u);
    EXPECT_EQ(r.change.changed.front(), t.node(1).id);
    EXPECT_EQ(r.change.changed.back(), t.root().id);
    EXPECT_FALSE(r.tree.find(t.node(1).id));
    EXPECT_TRUE(validate_tree(r.tree).empty());
}

TEST(Model, UnknownNodeIsRejected) {
    AdTree t = stealData();
    NodeId ghost{999};
    EXPECT_THROW(refine(t, ghost, Refinement::And, "x"), UnknownNode);
    EXPECT_THROW(add_counter(t, ghost, "x"), UnknownNode);
    EXPECT_THROW(relabel(t, ghost, "x"), UnknownNode);
    EXPECT_THROW(delete_subtree(t, ghost), UnknownNode);
    EXPECT_THROW(set_refinement(t, ghost, Refinement::And), UnknownNode);
    EXPECT_THROW(toggle_fold(t, ghost), UnknownNode);
}

TEST(Model, LabelsAreTrimmedAndMustNotBeEmpty) {
    AdTree t = stealData();
    EXPECT_EQ(relabel(t, t.node(1).id, "  pick lock\t").tree.node(1).label, "pick lock");
    EXPECT_THROW(relabel(t, t.node(1).id, " \t "), InvalidLabel);
    EXPECT_THROW(refine(t, t.node(1).id, Refinement::Or, ""), InvalidLabel);
}

TEST(Model, SetRefinementAndFold) {
    AdTree t = stealData();
    AdTree u = set_refinement(t, t.root().id, Refinement::And).tree;
    EXPECT_EQ(u.root().refinement, Refinement::And);
    AdTree f = toggle_fold(u, u.root().id).tree;
    EXPECT_TRUE(f.root().folded);
    EXPECT_FALSE(toggle_fold(f, f.root().id).tree.root().folded);
}

TEST(Model, IsomorphismIgnoresIdsAndFolding) {
    AdTree a = stealData();
    AdTree b("steal data", NodeId{40});
    b.addChild(AdTree::kRoot, "a", NodeId{41});
    b.addChild(AdTree::kRoot, "b", NodeId{42});
    b.addCounter(AdTree::kRoot, "d", NodeId{43});
    b.setFolded(1, true);
    EXPECT_TRUE(isomorphic(a, b));
    EXPECT_FALSE(a == b);
    b.setLabel(2, "c");
    EXPECT_FALSE(isomorphic(a, b));
}

TEST(Model, InertRefinementIsIgnoredByIsomorphism) {
    AdTree a = stealData();
    AdTree b = stealData();
    b.setRefinement(1, Refinement::And); // "a" is a leaf
    EXPECT_TRUE(isomorphic(a, b));
    b.setRefinement(0, Refinement::And);
    EXPECT_FALSE(isomorphic(a, b));
}

TEST(Model, EqualityModuloPermutation) {
    AdTree a("r");
    a.addChild(0, "x");
    a.addChild(0, "y");
    NodeIndex y = a.addChild(0, "z");
    a.addChild(y, "z1");
    a.addChild(y, "z2");
    AdTree b("r");
    NodeIndex z = b.addChild(0, "z");
    b.addChild(z, "z2");
    b.addChild(z, "z1");
    b.addChild(0, "y");
    b.addChild(0, "x");
    EXPECT_FALSE(isomorphic(a, b));
    EXPECT_TRUE(equal_modulo_permutation(a, b));
    b.setLabel(z, "w");
    EXPECT_FALSE(equal_modulo_permutation(a, b));
}

TEST(Model, WithoutSubtreeKeepsIdsAndOrder) {
    AdTree t = stealData();
    AdTree u = t.withoutSubtree(1);
    EXPECT_EQ(labels(u, u.preorder()), (std::vector<std::string>{"steal data", "b", "d"}));
    EXPECT_EQ(u.node(u.indexOf(t.node(2).id)).label, "b");
    EXPECT_GE(u.nextFreeId().value, t.nextFreeId().value);
}

// Property: any sequence of edits keeps the tree valid, and players can be
// recomputed from the root by the refinement/counter rule.
TEST(ModelProperty, RandomEditSequencesPreserveValidity) {
    Rng rng(11);
    for (int round = 0; round < 200; ++round) {
        AdTree t("root");
        for (int step = 0; step < 40; ++step) {
            NodeIndex v = std::uniform_int_distribution<std::size_t>(0, t.size() - 1)(rng);
            NodeId id = t.node(v).id;
            try {
                switch (std::uniform_int_distribution<int>(0, 5)(rng)) {
                case 0:
                    t = refine(t, id, rng() % 2 ? Refinement::And : Refinement::Or,
                               "n" + std::to_string(step))
                            .tree;
                    break;
                case 1:
                    t = add_counter(t, id, "c" + std::to_string(step)).tree;
                    break;
                case 2:
                    t = relabel(t, id, "r" + std::to_string(step)).tree;
                    break;
                case 3:
                    t = delete_subtree(t, id).tree;
                    break;
                case 4:
                    t = set_refinement(t, id, Refinement::And).tree;
                    break;
                default:
                    t = toggle_fold(t, id).tree;
                }
            } catch (const DoubleCounter &) {
            } catch (const EmptyDocumentError &) {
            }
            ASSERT_TRUE(validate_tree(t).empty());
            for (NodeIndex u : t.preorder()) {
                const Node &n = t.node(u);
                if (!n.parent) {
                    ASSERT_EQ(n.player, Player::Proponent);
                    continue;
                }
                const Node &p = t.node(*n.parent);
                const bool viaCounter = p.hasCounter() && *p.counter() == u;
                ASSERT_EQ(n.player, viaCounter ? opposite(p.player) : p.player);
            }
        }
    }
}

TEST(ModelProperty, FreshIdsAreNeverReused) {
    Rng rng(3);
    AdTree t("root");
    std::set<std::uint64_t> seen{t.root().id.value};
    for (int step = 0; step < 500; ++step) {
        NodeIndex v = std::uniform_int_distribution<std::size_t>(0, t.size() - 1)(rng);
        if (step % 3 == 2 && v != AdTree::kRoot) {
            t = delete_subtree(t, t.node(v).id).tree;
            continue;
        }
        EditResult r = refine(t, t.node(v).id, Refinement::Or, "x");
        ASSERT_TRUE(seen.insert(r.change.changed.back().value).second);
        t = r.tree;
    }
}

TEST(Labels, Utf8Validation) {
    EXPECT_TRUE(is_valid_utf8("plain"));
    EXPECT_TRUE(is_valid_utf8("\xC3\xA9t\xC3\xA9 \xE2\x88\x9E \xF0\x9F\x94\x92"));
    EXPECT_FALSE(is_valid_utf8("\x80"));
    EXPECT_FALSE(is_valid_utf8("\xC0\x80"));         // overlong
    EXPECT_FALSE(is_valid_utf8("\xED\xA0\x80"));     // surrogate
    EXPECT_FALSE(is_valid_utf8("\xF4\x90\x80\x80")); // above U+10FFFF
    EXPECT_FALSE(is_valid_utf8("\xE2\x88"));         // truncated
    EXPECT_THROW(normalize_label("a\xFF"), InvalidLabel);
    AdTree t("ok");
    t.addChild(0, "\xC0\x80");
    auto v = validate_tree(t);
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0].reason, ViolationReason::BadEncoding);
}

} // namespace
} // namespace adt
