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

#include "adt/document.hpp"

#include <algorithm>

#include "adt/errors.hpp"

namespace adt {

const DomainInstance *Document::instance(std::string_view id) const {
    for (const auto &d : domains)
        if (d.instanceId == id)
            return &d;
    return nullptr;
}

const DomainInstance &Document::getInstance(std::string_view id) const {
    if (const auto *d = instance(id))
        return *d;
    throw UnknownInstance("unknown domain instance '" + std::string(id) + "'");
}

DomainInstance &Document::getInstance(std::string_view id) {
    return const_cast<DomainInstance &>(std::as_const(*this).getInstance(id));
}

Document new_document() {
    return Document{};
}

std::string attach_domain(Document &doc, const DomainRegistry &registry, std::string_view domainId,
                          const Params &params) {
    auto domain = registry.get(domainId);
    Params resolved = resolve_params(*domain, params);
    int n = 1;
    std::string id;
    do {
        id = "i" + std::to_string(n++);
    } while (doc.instance(id));
    DomainInstance inst;
    inst.instanceId = id;
    inst.domainId = domain->id;
    inst.params = std::move(resolved);
    inst.valuations = init_valuation(doc.tree, *domain, id);
    doc.domains.push_back(std::move(inst));
    return id;
}

void sync_valuations(Document &doc, const DomainRegistry &registry) {
    const auto actions = basic_actions(doc.tree);
    for (auto &inst : doc.domains) {
        auto domain = registry.get(inst.domainId);
        auto &entries = inst.valuations.entries;
        for (auto it = entries.begin(); it != entries.end();) {
            if (!actions.count(it->first))
                it = entries.erase(it);
            else
                ++it;
        }
        for (const auto &key : actions)
            entries.try_emplace(key, ValuationEntry{domain->defaultFor(key.player),
                                                    Provenance::Default});
    }
}

ChangeRecord apply_edit(Document &doc, const DomainRegistry &registry, EditResult edit) {
    doc.tree = std::move(edit.tree);
    for (auto it = doc.nodeExtra.begin(); it != doc.nodeExtra.end();) {
        if (!doc.tree.find(it->first))
            it = doc.nodeExtra.erase(it);
        else
            ++it;
    }
    sync_valuations(doc, registry);
    return std::move(edit.change);
}

void set_document_value(Document &doc, const DomainRegistry &registry,
                        std::string_view instanceId, const ActionKey &key, Value value) {
    DomainInstance &inst = doc.getInstance(instanceId);
    auto domain = registry.get(inst.domainId);
    inst.valuations = set_value(inst.valuations, *domain, key, value);
}

EvaluationResult evaluate_instance(const Document &doc, const DomainRegistry &registry,
                                   std::string_view instanceId) {
    const DomainInstance &inst = doc.getInstance(instanceId);
    auto domain = registry.get(inst.domainId);
    return evaluate(doc.tree, *domain, inst.valuations, inst.params);
}

std::vector<std::string> check_document(const Document &doc, const DomainRegistry &registry) {
    std::vector<std::string> problems;
    for (const auto &v : validate_tree(doc.tree))
        problems.push_back(std::string(to_string(v.reason)) + " at node " +
                           std::to_string(v.node.value));
    const auto actions = basic_actions(doc.tree);
    std::vector<std::string> seenIds;
    for (const auto &inst : doc.domains) {
        if (std::find(seenIds.begin(), seenIds.end(), inst.instanceId) != seenIds.end())
            problems.push_back("duplicate domain instance id '" + inst.instanceId + "'");
        seenIds.push_back(inst.instanceId);
        auto domain = registry.find(inst.domainId);
        if (!domain) {
            problems.push_back("instance '" + inst.instanceId + "' uses unknown domain '" +
                               inst.domainId + "'");
            continue;
        }
        try {
            resolve_params(*domain, inst.params);
        } catch (const Error &e) {
            problems.push_back("instance '" + inst.instanceId + "': " + e.what());
        }
        for (const auto &[key, entry] : inst.valuations.entries) {
            if (!actions.count(key))
                problems.push_back("instance '" + inst.instanceId + "' values " + to_string(key) +
                                   ", which is not a basic action of the tree");
            if (!in_kind(domain->kind, entry.value))
                problems.push_back("instance '" + inst.instanceId + "' value of " +
                                   to_string(key) + " is outside " +
                                   std::string(to_string(domain->kind)));
        }
        for (const auto &key : actions)
            if (!inst.valuations.find(key))
                problems.push_back("instance '" + inst.instanceId + "' has no value for " +
                                   to_string(key));
    }
    return problems;
}

} // namespace adt
