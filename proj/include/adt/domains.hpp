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
 * Attribute domains: a value kind, one binary operator per term
 * constructor, and per-player worst-case defaults.
 *
 * All values are carried as doubles. Booleans are 0 and 1, infinity is
 * +inf; the value kind decides which doubles are admissible.
 */

#ifndef ADT_DOMAINS_HPP
#define ADT_DOMAINS_HPP

#include <array>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "adt/term.hpp"

namespace adt {

using Value = double;

inline constexpr Value kInfinity = std::numeric_limits<double>::infinity();

enum class ValueKind {
    ExtendedNonNegativeReal, ///< [0, inf]
    NonNegativeReal,         ///< [0, inf)
    UnitInterval,            ///< [0, 1]
    ExtendedNaturalLevel,    ///< {0, 1, 2, ...} plus inf
    Boolean,                 ///< {0, 1}
};

std::string_view to_string(ValueKind k);
std::optional<ValueKind> value_kind_from_name(std::string_view name);

bool in_kind(ValueKind kind, Value v);

/// Parses "inf", "true"/"false" or a decimal. Throws ValueOutOfDomain with a
/// message naming the expected kind.
Value parse_value(ValueKind kind, std::string_view text);
std::string format_value(ValueKind kind, Value v);
nlohmann::json value_to_json(ValueKind kind, Value v);
/// Throws ValueOutOfDomain.
Value value_from_json(ValueKind kind, const nlohmann::json &j);

struct BinaryOp {
    std::string name;
    std::function<Value(Value, Value)> fn;
    bool commutative = true;

    Value operator()(Value a, Value b) const { return fn(a, b); }
};

/// The operators a declarative domain file may name.
std::optional<BinaryOp> whitelisted_op(std::string_view name);
std::vector<std::string> whitelisted_op_names();

using Params = std::map<std::string, double>;

struct ParamSpec {
    std::string name;
    double minimum = 0;
};

struct RootPredicate {
    std::string description;
    std::function<bool(Value, const Params &)> test;
};

/// Boolean when the domain has a root predicate, otherwise the value itself.
using RootDisplay = std::variant<Value, bool>;

struct AttributeDomain {
    std::string id;
    std::string displayName;
    ValueKind kind = ValueKind::ExtendedNonNegativeReal;
    /// Indexed by Op: or_p, and_p, or_o, and_o, c_p, c_o.
    std::array<BinaryOp, 6> ops;
    Value defaultProponent = 0;
    Value defaultOpponent = 0;
    std::vector<ParamSpec> params;
    std::optional<RootPredicate> rootPredicate;

    const BinaryOp &op(Op o) const { return ops[static_cast<std::size_t>(o)]; }
    Value defaultFor(Player p) const {
        return p == Player::Proponent ? defaultProponent : defaultOpponent;
    }
};

/// The eight built-in measures, in a fixed order.
std::vector<AttributeDomain> builtin_domains();

/// Fills defaults and validates instance parameters against the domain's
/// declared ones. Throws DomainDefinitionError.
Params resolve_params(const AttributeDomain &d, const Params &given);

RootDisplay apply_root_predicate(const AttributeDomain &d, Value v, const Params &params = {});

/// Randomized self-check of a domain: associativity of the four refinement
/// operators on `trials` triples, commutativity where declared, closure of
/// all six operators over the value kind and in-kind defaults. Returns
/// problems found; empty when the domain passes.
std::vector<std::string> check_domain(const AttributeDomain &d, int trials = 1000,
                                      unsigned seed = 0x5eed);

/// Builds a domain from the declarative JSON format. Throws
/// DomainDefinitionError.
AttributeDomain domain_from_json(const nlohmann::json &j);

class DomainRegistry {
public:
    /// Registry holding the built-ins.
    DomainRegistry();

    /// Throws DuplicateDomainId, or DomainDefinitionError when the domain
    /// fails check_domain().
    void registerDomain(AttributeDomain d);

    std::shared_ptr<const AttributeDomain> find(std::string_view id) const;
    /// Throws UnknownDomain.
    std::shared_ptr<const AttributeDomain> get(std::string_view id) const;
    std::vector<std::shared_ptr<const AttributeDomain>> all() const;

private:
    mutable std::shared_mutex mutex_;
    std::vector<std::shared_ptr<const AttributeDomain>> domains_;
};

} // namespace adt

#endif
