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

#include "adt/domains.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <mutex>
#include <random>

#include "adt/errors.hpp"

namespace adt {

std::string_view to_string(ValueKind k) {
    switch (k) {
    case ValueKind::ExtendedNonNegativeReal:
        return "extended-real";
    case ValueKind::NonNegativeReal:
        return "real";
    case ValueKind::UnitInterval:
        return "unit-interval";
    case ValueKind::ExtendedNaturalLevel:
        return "extended-level";
    case ValueKind::Boolean:
        return "boolean";
    }
    return "?";
}

std::optional<ValueKind> value_kind_from_name(std::string_view name) {
    for (auto k : {ValueKind::ExtendedNonNegativeReal, ValueKind::NonNegativeReal,
                   ValueKind::UnitInterval, ValueKind::ExtendedNaturalLevel, ValueKind::Boolean})
        if (to_string(k) == name)
            return k;
    return std::nullopt;
}

namespace {

std::string kindDescription(ValueKind k) {
    switch (k) {
    case ValueKind::ExtendedNonNegativeReal:
        return "a non-negative number or \"inf\"";
    case ValueKind::NonNegativeReal:
        return "a finite non-negative number";
    case ValueKind::UnitInterval:
        return "a probability in [0, 1]";
    case ValueKind::ExtendedNaturalLevel:
        return "a non-negative integer level or \"inf\"";
    case ValueKind::Boolean:
        return "a boolean (true or false)";
    }
    return "a value";
}

} // namespace

bool in_kind(ValueKind kind, Value v) {
    if (std::isnan(v))
        return false;
    switch (kind) {
    case ValueKind::ExtendedNonNegativeReal:
        return v >= 0;
    case ValueKind::NonNegativeReal:
        return v >= 0 && std::isfinite(v);
    case ValueKind::UnitInterval:
        return v >= 0 && v <= 1;
    case ValueKind::ExtendedNaturalLevel:
        return v >= 0 && (std::isinf(v) || std::floor(v) == v);
    case ValueKind::Boolean:
        return v == 0 || v == 1;
    }
    return false;
}

Value parse_value(ValueKind kind, std::string_view text) {
    auto reject = [&]() -> ValueOutOfDomain {
        return ValueOutOfDomain("invalid value '" + std::string(text) + "': expected " +
                                kindDescription(kind));
    };
    if (kind == ValueKind::Boolean) {
        if (text == "true")
            return 1;
        if (text == "false")
            return 0;
        throw reject();
    }
    Value v;
    if (text == "inf") {
        v = kInfinity;
    } else {
        double d = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), d);
        if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
            throw reject();
        v = d;
    }
    if (!in_kind(kind, v))
        throw reject();
    return v;
}

std::string format_value(ValueKind kind, Value v) {
    if (kind == ValueKind::Boolean)
        return v != 0 ? "true" : "false";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

nlohmann::json value_to_json(ValueKind kind, Value v) {
    if (kind == ValueKind::Boolean)
        return v != 0;
    if (std::isinf(v))
        return "inf";
    return v;
}

Value value_from_json(ValueKind kind, const nlohmann::json &j) {
    Value v;
    if (kind == ValueKind::Boolean) {
        if (!j.is_boolean())
            throw ValueOutOfDomain("invalid value " + j.dump() + ": expected " +
                                   kindDescription(kind));
        v = j.get<bool>() ? 1 : 0;
    } else if (j.is_string() && j.get<std::string>() == "inf") {
        v = kInfinity;
    } else if (j.is_number()) {
        v = j.get<double>();
    } else {
        throw ValueOutOfDomain("invalid value " + j.dump() + ": expected " +
                               kindDescription(kind));
    }
    if (!in_kind(kind, v))
        throw ValueOutOfDomain("value " + j.dump() + " is outside the domain: expected " +
                               kindDescription(kind));
    return v;
}

// ---------------------------------------------------------------------------

std::optional<BinaryOp> whitelisted_op(std::string_view name) {
    if (name == "min")
        return BinaryOp{"min", [](Value a, Value b) { return std::min(a, b); }};
    if (name == "max")
        return BinaryOp{"max", [](Value a, Value b) { return std::max(a, b); }};
    if (name == "add")
        return BinaryOp{"add", [](Value a, Value b) { return a + b; }};
    if (name == "mul")
        return BinaryOp{"mul", [](Value a, Value b) { return a * b; }};
    if (name == "or")
        return BinaryOp{"or", [](Value a, Value b) { return (a != 0 || b != 0) ? 1.0 : 0.0; }};
    if (name == "and")
        return BinaryOp{"and", [](Value a, Value b) { return (a != 0 && b != 0) ? 1.0 : 0.0; }};
    if (name == "and_not")
        return BinaryOp{"and_not",
                        [](Value a, Value b) { return (a != 0 && b == 0) ? 1.0 : 0.0; }, false};
    if (name == "prob_or")
        return BinaryOp{"prob_or", [](Value a, Value b) { return a + b - a * b; }};
    if (name == "mul_complement")
        return BinaryOp{"mul_complement", [](Value a, Value b) { return a * (1 - b); }, false};
    return std::nullopt;
}

std::vector<std::string> whitelisted_op_names() {
    return {"min", "max", "add", "mul", "or", "and", "and_not", "prob_or", "mul_complement"};
}

namespace {

BinaryOp named(std::string_view n) {
    return *whitelisted_op(n);
}

AttributeDomain make(std::string id, std::string display, ValueKind kind,
                     std::array<std::string_view, 6> ops, Value dp, Value dO) {
    AttributeDomain d;
    d.id = std::move(id);
    d.displayName = std::move(display);
    d.kind = kind;
    for (std::size_t i = 0; i < 6; ++i)
        d.ops[i] = named(ops[i]);
    d.defaultProponent = dp;
    d.defaultOpponent = dO;
    return d;
}

} // namespace

std::vector<AttributeDomain> builtin_domains() {
    using VK = ValueKind;
    std::vector<AttributeDomain> out;
    out.push_back(make("satisfiability", "Satisfiability of the scenario", VK::Boolean,
                       {"or", "and", "or", "and", "and_not", "and_not"}, 0, 1));
    out.push_back(make("min-cost", "Minimal cost for the proponent", VK::ExtendedNonNegativeReal,
                       {"min", "add", "add", "min", "add", "min"}, kInfinity, kInfinity));
    out.push_back(make("min-time-sequential", "Minimal time (sequential actions)",
                       VK::ExtendedNonNegativeReal, {"min", "add", "add", "min", "add", "min"},
                       kInfinity, kInfinity));
    out.push_back(make("min-time-parallel", "Minimal time (parallel actions)",
                       VK::ExtendedNonNegativeReal, {"min", "max", "max", "min", "max", "min"},
                       kInfinity, kInfinity));
    out.push_back(make("min-skill-level", "Minimal required skill level",
                       VK::ExtendedNaturalLevel, {"min", "max", "max", "min", "max", "min"},
                       kInfinity, kInfinity));
    out.push_back(make("probability-of-success", "Probability of success", VK::UnitInterval,
                       {"prob_or", "mul", "prob_or", "mul", "mul_complement", "mul_complement"}, 0,
                       1));

    AttributeDomain reach =
        make("reachability-within-k", "Reachability of the goal in less than k time units",
             VK::ExtendedNonNegativeReal, {"min", "max", "max", "min", "max", "min"}, kInfinity,
             kInfinity);
    reach.params.push_back({"k", 0});
    reach.rootPredicate = RootPredicate{
        "value < k", [](Value v, const Params &p) { return v < p.at("k"); }};
    out.push_back(std::move(reach));

    out.push_back(make("max-power-consumption", "Overall maximal power consumption",
                       VK::NonNegativeReal, {"max", "add", "max", "add", "add", "add"}, 0, 0));
    return out;
}

Params resolve_params(const AttributeDomain &d, const Params &given) {
    Params out;
    for (const auto &[name, value] : given) {
        auto it = std::find_if(d.params.begin(), d.params.end(),
                               [&](const ParamSpec &s) { return s.name == name; });
        if (it == d.params.end())
            throw DomainDefinitionError("domain '" + d.id + "' has no parameter '" + name + "'");
        if (std::isnan(value) || value < it->minimum)
            throw DomainDefinitionError("parameter '" + name + "' must be >= " +
                                        format_value(ValueKind::NonNegativeReal, it->minimum));
        out[name] = value;
    }
    for (const auto &spec : d.params)
        if (!out.count(spec.name))
            throw DomainDefinitionError("domain '" + d.id + "' requires parameter '" +
                                        spec.name + "'");
    return out;
}

RootDisplay apply_root_predicate(const AttributeDomain &d, Value v, const Params &params) {
    if (!d.rootPredicate)
        return RootDisplay{std::in_place_index<0>, v};
    return RootDisplay{std::in_place_index<1>, d.rootPredicate->test(v, params)};
}

// ---------------------------------------------------------------------------

namespace {

Value sample(ValueKind kind, std::mt19937_64 &rng) {
    std::uniform_int_distribution<int> pick(0, 9);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    switch (kind) {
    case ValueKind::Boolean:
        return pick(rng) % 2;
    case ValueKind::UnitInterval: {
        int p = pick(rng);
        if (p == 0)
            return 0;
        if (p == 1)
            return 1;
        return unit(rng);
    }
    case ValueKind::ExtendedNaturalLevel: {
        int p = pick(rng);
        if (p == 0)
            return kInfinity;
        return std::uniform_int_distribution<int>(0, 20)(rng);
    }
    case ValueKind::ExtendedNonNegativeReal:
    case ValueKind::NonNegativeReal: {
        int p = pick(rng);
        if (p == 0 && kind == ValueKind::ExtendedNonNegativeReal)
            return kInfinity;
        if (p <= 2)
            return std::uniform_int_distribution<int>(0, 10)(rng);
        return unit(rng) * 1000.0;
    }
    }
    return 0;
}

bool close(Value a, Value b) {
    if (std::isnan(a) || std::isnan(b))
        return false;
    if (std::isinf(a) || std::isinf(b))
        return a == b;
    double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
    return std::fabs(a - b) <= 1e-9 * scale;
}

} // namespace

std::vector<std::string> check_domain(const AttributeDomain &d, int trials, unsigned seed) {
    std::vector<std::string> problems;
    if (d.id.empty())
        problems.push_back("domain id must not be empty");
    for (std::size_t i = 0; i < 6; ++i)
        if (!d.ops[i].fn)
            problems.push_back("operator " + std::string(to_string(static_cast<Op>(i))) +
                               " is missing");
    if (!problems.empty())
        return problems;
    if (!in_kind(d.kind, d.defaultProponent))
        problems.push_back("proponent default is outside the value kind");
    if (!in_kind(d.kind, d.defaultOpponent))
        problems.push_back("opponent default is outside the value kind");

    std::mt19937_64 rng(seed);
    for (std::size_t i = 0; i < 6; ++i) {
        const Op slot = static_cast<Op>(i);
        const BinaryOp &op = d.ops[i];
        const std::string tag = std::string(to_string(slot)) + " (" + op.name + ")";
        bool assocOk = true, commOk = true, closedOk = true;
        for (int t = 0; t < trials; ++t) {
            Value x = sample(d.kind, rng), y = sample(d.kind, rng), z = sample(d.kind, rng);
            Value xy = op(x, y);
            if (closedOk && !in_kind(d.kind, xy)) {
                closedOk = false;
                problems.push_back(tag + " leaves the value kind on (" + format_value(d.kind, x) +
                                   ", " + format_value(d.kind, y) + ")");
            }
            if (is_counter_op(slot))
                continue;
            if (assocOk && !close(op(xy, z), op(x, op(y, z)))) {
                assocOk = false;
                problems.push_back(tag + " is not associative on (" + format_value(d.kind, x) +
                                   ", " + format_value(d.kind, y) + ", " +
                                   format_value(d.kind, z) + ")");
            }
            if (op.commutative && commOk && !close(xy, op(y, x))) {
                commOk = false;
                problems.push_back(tag + " is declared commutative but is not on (" +
                                   format_value(d.kind, x) + ", " + format_value(d.kind, y) +
                                   ")");
            }
        }
    }
    return problems;
}

AttributeDomain domain_from_json(const nlohmann::json &j) {
    if (!j.is_object())
        throw DomainDefinitionError("domain definition must be a JSON object");
    auto str = [&](const char *key) -> std::string {
        if (!j.contains(key) || !j[key].is_string())
            throw DomainDefinitionError(std::string("domain definition needs string field '") +
                                        key + "'");
        return j[key].get<std::string>();
    };
    AttributeDomain d;
    d.id = str("id");
    d.displayName = j.contains("displayName") && j["displayName"].is_string()
                        ? j["displayName"].get<std::string>()
                        : d.id;
    auto kind = value_kind_from_name(str("valueKind"));
    if (!kind)
        throw DomainDefinitionError("unknown valueKind '" + str("valueKind") + "'");
    d.kind = *kind;

    static constexpr const char *kSlots[] = {"orP", "andP", "orO", "andO", "cP", "cO"};
    if (!j.contains("ops") || !j["ops"].is_object())
        throw DomainDefinitionError("domain definition needs an 'ops' object");
    const auto &ops = j["ops"];
    for (std::size_t i = 0; i < 6; ++i) {
        if (!ops.contains(kSlots[i]) || !ops[kSlots[i]].is_string())
            throw DomainDefinitionError(std::string("missing operator '") + kSlots[i] + "'");
        auto name = ops[kSlots[i]].get<std::string>();
        auto op = whitelisted_op(name);
        if (!op)
            throw DomainDefinitionError("operator '" + name + "' is not in the whitelist");
        d.ops[i] = std::move(*op);
    }
    if (!j.contains("defaults") || !j["defaults"].is_object())
        throw DomainDefinitionError("domain definition needs a 'defaults' object");
    try {
        d.defaultProponent = value_from_json(d.kind, j["defaults"].at("p"));
        d.defaultOpponent = value_from_json(d.kind, j["defaults"].at("o"));
    } catch (const nlohmann::json::exception &) {
        throw DomainDefinitionError("defaults need both 'p' and 'o'");
    } catch (const ValueOutOfDomain &e) {
        throw DomainDefinitionError(std::string("bad default: ") + e.what());
    }
    return d;
}

// ---------------------------------------------------------------------------

DomainRegistry::DomainRegistry() {
    for (auto &d : builtin_domains())
        domains_.push_back(std::make_shared<const AttributeDomain>(std::move(d)));
}

void DomainRegistry::registerDomain(AttributeDomain d) {
    if (find(d.id))
        throw DuplicateDomainId("domain id '" + d.id + "' is already registered");
    auto problems = check_domain(d);
    if (!problems.empty())
        throw DomainDefinitionError("domain '" + d.id + "' rejected: " + problems.front());
    std::unique_lock lock(mutex_);
    for (const auto &existing : domains_)
        if (existing->id == d.id)
            throw DuplicateDomainId("domain id '" + d.id + "' is already registered");
    domains_.push_back(std::make_shared<const AttributeDomain>(std::move(d)));
}

std::shared_ptr<const AttributeDomain> DomainRegistry::find(std::string_view id) const {
    std::shared_lock lock(mutex_);
    for (const auto &d : domains_)
        if (d->id == id)
            return d;
    return nullptr;
}

std::shared_ptr<const AttributeDomain> DomainRegistry::get(std::string_view id) const {
    auto d = find(id);
    if (!d)
        throw UnknownDomain("unknown domain '" + std::string(id) + "'");
    return d;
}

std::vector<std::shared_ptr<const AttributeDomain>> DomainRegistry::all() const {
    std::shared_lock lock(mutex_);
    return domains_;
}

} // namespace adt
