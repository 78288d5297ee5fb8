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

#ifndef ADT_DOCUMENT_HPP
#define ADT_DOCUMENT_HPP

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "adt/domains.hpp"
#include "adt/eval.hpp"
#include "adt/model.hpp"

namespace adt {

/// A domain attached to a document together with its basic assignment.
struct DomainInstance {
    std::string instanceId;
    std::string domainId;
    Params params;
    ValuationMap valuations;
    /// Fields of the file record this version does not understand.
    nlohmann::json extra = nlohmann::json::object();

    friend bool operator==(const DomainInstance &, const DomainInstance &) = default;
};

struct Document {
    RootRole rootRole = RootRole::Attacker;
    AdTree tree = AdTree();
    std::vector<DomainInstance> domains;
    nlohmann::json extra = nlohmann::json::object();
    std::map<NodeId, nlohmann::json> nodeExtra;

    const DomainInstance *instance(std::string_view id) const;
    /// Throws UnknownInstance.
    const DomainInstance &getInstance(std::string_view id) const;
    DomainInstance &getInstance(std::string_view id);

    friend bool operator==(const Document &, const Document &) = default;
};

/// Fresh document: a single root labeled "Root", attacker role.
Document new_document();

/// Attaches a domain instance with worst-case defaults and returns its id
/// ("i1", "i2", ...). Throws UnknownDomain or DomainDefinitionError.
std::string attach_domain(Document &doc, const DomainRegistry &registry, std::string_view domainId,
                          const Params &params = {});

/// Restores valuation coverage after a tree change: entries of vanished
/// actions are dropped, new actions get the domain defaults.
void sync_valuations(Document &doc, const DomainRegistry &registry);

/// Applies a tree edit and re-syncs valuations and node extras.
ChangeRecord apply_edit(Document &doc, const DomainRegistry &registry, EditResult edit);

/// Sets one basic action value in an instance. Throws UnknownInstance,
/// UnknownAction, ValueOutOfDomain.
void set_document_value(Document &doc, const DomainRegistry &registry,
                        std::string_view instanceId, const ActionKey &key, Value value);

EvaluationResult evaluate_instance(const Document &doc, const DomainRegistry &registry,
                                   std::string_view instanceId);

/// Human-readable integrity problems; empty when the document is coherent.
std::vector<std::string> check_document(const Document &doc, const DomainRegistry &registry);

} // namespace adt

#endif
