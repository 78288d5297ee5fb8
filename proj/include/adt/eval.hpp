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

#ifndef ADT_EVAL_HPP
#define ADT_EVAL_HPP

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "adt/domains.hpp"
#include "adt/model.hpp"
#include "adt/term.hpp"

namespace adt {

/// A basic action: nodes with equal keys share one value.
struct ActionKey {
    Player player = Player::Proponent;
    std::string label;

    friend auto operator<=>(const ActionKey &, const ActionKey &) = default;
};

/// "p:<label>" or "o:<label>".
std::string to_string(const ActionKey &k);
/// Inverse of to_string(ActionKey); nullopt on a malformed key.
std::optional<ActionKey> parse_action_key(std::string_view s);

enum class Provenance { Default, UserSet };

struct ValuationEntry {
    Value value = 0;
    Provenance provenance = Provenance::Default;

    friend bool operator==(const ValuationEntry &, const ValuationEntry &) = default;
};

/// The basic assignment: one value per distinct basic action of a tree.
struct ValuationMap {
    std::string domainInstanceId;
    std::map<ActionKey, ValuationEntry> entries;

    const ValuationEntry *find(const ActionKey &k) const {
        auto it = entries.find(k);
        return it == entries.end() ? nullptr : &it->second;
    }

    friend bool operator==(const ValuationMap &, const ValuationMap &) = default;
};

/// Distinct basic actions of the tree.
std::set<ActionKey> basic_actions(const AdTree &tree);

/// Worst-case defaults for every basic action.
ValuationMap init_valuation(const AdTree &tree, const AttributeDomain &domain,
                            std::string instanceId = {});

/// Throws UnknownAction or ValueOutOfDomain.
ValuationMap set_value(const ValuationMap &v, const AttributeDomain &domain, const ActionKey &key,
                       Value value);

struct EvaluationResult {
    std::unordered_map<NodeId, Value, NodeIdHash> perNode;
    Value rootValue = 0;
    RootDisplay rootDisplay;
    /// Non-fatal caveats, e.g. repeated actions in a probability domain.
    std::vector<std::string> warnings;

    Value at(NodeId id) const { return perNode.at(id); }

    friend bool operator==(const EvaluationResult &, const EvaluationResult &) = default;
};

/// Bottom-up evaluation over the node table. Throws IncompleteValuation.
EvaluationResult evaluate(const AdTree &tree, const AttributeDomain &domain,
                          const ValuationMap &valuation, const Params &params = {});

/// Reactive entry point used after a valuation change. Recomputes fully.
EvaluationResult recompute_after_change(const AdTree &tree, const AttributeDomain &domain,
                                        const ValuationMap &valuation, const ActionKey &changed,
                                        const Params &params = {});

/// Direct recursive interpreter over an ADTerm. Independent of the node
/// table path; used to cross-check evaluate().
Value evaluate_term(const Term &term, const AttributeDomain &domain,
                    const ValuationMap &valuation);

} // namespace adt

#endif
