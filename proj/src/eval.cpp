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

#include "adt/eval.hpp"

#include "adt/errors.hpp"

namespace adt {

std::string to_string(const ActionKey &k) {
    return (k.player == Player::Proponent ? "p:" : "o:") + k.label;
}

std::optional<ActionKey> parse_action_key(std::string_view s) {
    if (s.size() < 3 || s[1] != ':' || (s[0] != 'p' && s[0] != 'o'))
        return std::nullopt;
    return ActionKey{s[0] == 'p' ? Player::Proponent : Player::Opponent, std::string(s.substr(2))};
}

std::set<ActionKey> basic_actions(const AdTree &tree) {
    std::set<ActionKey> out;
    for (const Node &n : tree.nodes())
        if (n.isBasicAction())
            out.insert({n.player, n.label});
    return out;
}

ValuationMap init_valuation(const AdTree &tree, const AttributeDomain &domain,
                            std::string instanceId) {
    ValuationMap v;
    v.domainInstanceId = std::move(instanceId);
    for (auto &key : basic_actions(tree))
        v.entries.emplace(key, ValuationEntry{domain.defaultFor(key.player), Provenance::Default});
    return v;
}

ValuationMap set_value(const ValuationMap &v, const AttributeDomain &domain, const ActionKey &key,
                       Value value) {
    if (!v.find(key))
        throw UnknownAction("no basic action " + to_string(key) + " in this tree");
    if (!in_kind(domain.kind, value))
        throw ValueOutOfDomain("value " + format_value(ValueKind::ExtendedNonNegativeReal, value) +
                               " is outside the value kind " +
                               std::string(to_string(domain.kind)) + " of " + domain.id);
    ValuationMap out = v;
    out.entries[key] = {value, Provenance::UserSet};
    return out;
}

namespace {

Value lookup(const ValuationMap &valuation, Player p, const std::string &label) {
    auto it = valuation.entries.find(ActionKey{p, label});
    if (it == valuation.entries.end())
        throw IncompleteValuation("no value for basic action " + to_string(ActionKey{p, label}));
    return it->second.value;
}

} // namespace

EvaluationResult evaluate(const AdTree &tree, const AttributeDomain &domain,
                          const ValuationMap &valuation, const Params &params) {
    const auto &nodes = tree.nodes();
    std::vector<Value> value(nodes.size());
    std::map<ActionKey, int> occurrences;
    const bool dependenceMatters = domain.kind == ValueKind::UnitInterval;

    for (NodeIndex v : tree.postorder()) {
        const Node &n = nodes[v];
        Value x;
        if (n.isBasicAction()) {
            x = lookup(valuation, n.player, n.label);
            if (dependenceMatters)
                ++occurrences[ActionKey{n.player, n.label}];
        } else {
            const BinaryOp &op = domain.op(refinement_op(n.player, n.refinement));
            x = value[n.children.front()];
            for (std::size_t i = 1; i < n.children.size(); ++i)
                x = op(x, value[n.children[i]]);
        }
        if (auto c = n.counter())
            x = domain.op(counter_op(n.player))(x, value[*c]);
        value[v] = x;
    }

    EvaluationResult r;
    r.perNode.reserve(nodes.size());
    for (NodeIndex i = 0; i < nodes.size(); ++i)
        r.perNode.emplace(nodes[i].id, value[i]);
    r.rootValue = value[AdTree::kRoot];
    r.rootDisplay = apply_root_predicate(domain, r.rootValue, params);
    for (const auto &[key, count] : occurrences)
        if (count > 1)
            r.warnings.push_back("basic action " + to_string(key) + " occurs " +
                                 std::to_string(count) +
                                 " times; the bottom-up value treats the occurrences as "
                                 "independent");
    return r;
}

EvaluationResult recompute_after_change(const AdTree &tree, const AttributeDomain &domain,
                                        const ValuationMap &valuation, const ActionKey &,
                                        const Params &params) {
    return evaluate(tree, domain, valuation, params);
}

Value evaluate_term(const Term &term, const AttributeDomain &domain,
                    const ValuationMap &valuation) {
    if (term.isBasic())
        return lookup(valuation, term.player(), term.label());
    const BinaryOp &op = domain.op(term.op());
    Value acc = evaluate_term(term.args().front(), domain, valuation);
    for (std::size_t i = 1; i < term.args().size(); ++i)
        acc = op(acc, evaluate_term(term.args()[i], domain, valuation));
    return acc;
}

} // namespace adt
