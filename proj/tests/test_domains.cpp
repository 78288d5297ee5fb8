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

#include <cmath>
#include <random>

#include "adt/domains.hpp"
#include "adt/errors.hpp"

namespace adt {
namespace {

const AttributeDomain &get(const char *id) {
    static DomainRegistry registry;
    return *registry.get(id);
}

double apply(const char *id, Op op, double x, double y) {
    return get(id).op(op).fn(x, y);
}

const double inf = kInfinity;

TEST(Domains, BuiltinTableIsComplete) {
    std::vector<std::string> ids;
    for (const auto &d : builtin_domains())
        ids.push_back(d.id);
    EXPECT_EQ(ids, (std::vector<std::string>{"satisfiability", "min-cost", "min-time-sequential",
                                             "min-time-parallel", "min-skill-level",
                                             "probability-of-success", "reachability-within-k",
                                             "max-power-consumption"}));
}

struct Row {
    const char *id;
    ValueKind kind;
    std::array<const char *, 6> ops;
    double p, o;
};

TEST(Domains, OperatorTable) {
    const std::vector<Row> table{
        {"satisfiability", ValueKind::Boolean, {"or", "and", "or", "and", "and_not", "and_not"}, 0, 1},
        {"min-cost", ValueKind::ExtendedNonNegativeReal, {"min", "add", "add", "min", "add", "min"}, inf, inf},
        {"min-time-sequential", ValueKind::ExtendedNonNegativeReal, {"min", "add", "add", "min", "add", "min"}, inf, inf},
        {"min-time-parallel", ValueKind::ExtendedNonNegativeReal, {"min", "max", "max", "min", "max", "min"}, inf, inf},
        {"min-skill-level", ValueKind::ExtendedNaturalLevel, {"min", "max", "max", "min", "max", "min"}, inf, inf},
        {"probability-of-success", ValueKind::UnitInterval, {"prob_or", "mul", "prob_or", "mul", "mul_complement", "mul_complement"}, 0, 1},
        {"reachability-within-k", ValueKind::ExtendedNonNegativeReal, {"min", "max", "max", "min", "max", "min"}, inf, inf},
        {"max-power-consumption", ValueKind::NonNegativeReal, {"max", "add", "max", "add", "add", "add"}, 0, 0},
    };
    for (const Row &r : table) {
        const AttributeDomain &d = get(r.id);
        EXPECT_EQ(d.kind, r.kind) << r.id;
        for (std::size_t i = 0; i < 6; ++i)
            EXPECT_EQ(d.ops[i].name, r.ops[i]) << r.id << " op " << i;
        EXPECT_EQ(d.defaultProponent, r.p) << r.id;
        EXPECT_EQ(d.defaultOpponent, r.o) << r.id;
    }
}

TEST(Domains, OperatorExamples) {
    EXPECT_EQ(apply("min-cost", Op::OrP, 10, 7), 7);
    EXPECT_EQ(apply("satisfiability", Op::CP, 1, 1), 0);
    EXPECT_EQ(apply("satisfiability", Op::CP, 1, 0), 1);
    EXPECT_DOUBLE_EQ(apply("probability-of-success", Op::OrP, 0.5, 0.5), 0.75);
    EXPECT_DOUBLE_EQ(apply("probability-of-success", Op::CP, 0.8, 0.5), 0.4);
}

TEST(Domains, InfinityRules) {
    EXPECT_EQ(apply("min-cost", Op::AndP, inf, 3), inf);
    EXPECT_EQ(apply("min-cost", Op::OrP, inf, 3), 3);
    EXPECT_EQ(apply("min-time-parallel", Op::AndP, inf, 3), inf);
    EXPECT_EQ(apply("min-cost", Op::AndP, 0, 3), 3);
    EXPECT_EQ(apply("min-cost", Op::AndP, inf, inf), inf);
}

TEST(Domains, RootPredicateIsStrict) {
    const AttributeDomain &d = get("reachability-within-k");
    Params k{{"k", 10}};
    EXPECT_EQ(std::get<bool>(apply_root_predicate(d, 3, k)), true);
    EXPECT_EQ(std::get<bool>(apply_root_predicate(d, 10, k)), false);
    EXPECT_EQ(std::get<bool>(apply_root_predicate(d, inf, k)), false);
    EXPECT_EQ(std::get<Value>(apply_root_predicate(get("min-cost"), 13)), 13);
}

TEST(Domains, Params) {
    const AttributeDomain &d = get("reachability-within-k");
    EXPECT_EQ(resolve_params(d, {{"k", 4}}).at("k"), 4);
    EXPECT_THROW(resolve_params(d, {}), DomainDefinitionError);
    EXPECT_THROW(resolve_params(d, {{"k", -1}}), DomainDefinitionError);
    EXPECT_THROW(resolve_params(d, {{"k", 1}, {"j", 2}}), DomainDefinitionError);
    EXPECT_THROW(resolve_params(get("min-cost"), {{"k", 1}}), DomainDefinitionError);
}

TEST(Domains, ValueKinds) {
    EXPECT_TRUE(in_kind(ValueKind::ExtendedNonNegativeReal, inf));
    EXPECT_FALSE(in_kind(ValueKind::ExtendedNonNegativeReal, -1));
    EXPECT_FALSE(in_kind(ValueKind::NonNegativeReal, inf));
    EXPECT_FALSE(in_kind(ValueKind::UnitInterval, 1.2));
    EXPECT_TRUE(in_kind(ValueKind::UnitInterval, 1.0));
    EXPECT_FALSE(in_kind(ValueKind::ExtendedNaturalLevel, 2.5));
    EXPECT_TRUE(in_kind(ValueKind::ExtendedNaturalLevel, inf));
    EXPECT_FALSE(in_kind(ValueKind::Boolean, 0.5));
    EXPECT_FALSE(in_kind(ValueKind::UnitInterval, std::nan("")));
}

TEST(Domains, ParseAndFormatValues) {
    EXPECT_EQ(parse_value(ValueKind::ExtendedNonNegativeReal, "inf"), inf);
    EXPECT_EQ(parse_value(ValueKind::ExtendedNonNegativeReal, "12.5"), 12.5);
    EXPECT_EQ(parse_value(ValueKind::Boolean, "true"), 1);
    EXPECT_EQ(parse_value(ValueKind::Boolean, "false"), 0);
    EXPECT_THROW(parse_value(ValueKind::UnitInterval, "1.2"), ValueOutOfDomain);
    EXPECT_THROW(parse_value(ValueKind::UnitInterval, "inf"), ValueOutOfDomain);
    EXPECT_THROW(parse_value(ValueKind::ExtendedNonNegativeReal, "abc"), ValueOutOfDomain);
    EXPECT_THROW(parse_value(ValueKind::ExtendedNaturalLevel, "1.5"), ValueOutOfDomain);
    EXPECT_EQ(format_value(ValueKind::ExtendedNonNegativeReal, inf), "inf");
    EXPECT_EQ(format_value(ValueKind::Boolean, 1), "true");
    EXPECT_EQ(format_value(ValueKind::ExtendedNonNegativeReal, 0.1), "0.1");
    EXPECT_EQ(value_to_json(ValueKind::ExtendedNonNegativeReal, inf), "inf");
    EXPECT_EQ(value_from_json(ValueKind::Boolean, true), 1);
    EXPECT_THROW(value_from_json(ValueKind::UnitInterval, 1.5), ValueOutOfDomain);
    EXPECT_THROW(value_from_json(ValueKind::UnitInterval, "x"), ValueOutOfDomain);
}

TEST(Domains, ErrorNamesExpectedKind) {
    try {
        parse_value(ValueKind::UnitInterval, "2");
        FAIL();
    } catch (const ValueOutOfDomain &e) {
        EXPECT_NE(std::string(e.what()).find("[0, 1]"), std::string::npos) << e.what();
    }
}

// Property: associativity, declared commutativity and closure of every
// built-in domain on randomized triples.
TEST(DomainsProperty, BuiltinsPassSelfCheck) {
    for (const auto &d : builtin_domains())
        EXPECT_TRUE(check_domain(d, 1000, 99).empty()) << d.id;
}

TEST(DomainsProperty, ProbabilitiesStayInUnitInterval) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0, 1);
    const AttributeDomain &d = get("probability-of-success");
    for (int i = 0; i < 10000; ++i)
        for (const auto &op : d.ops) {
            double v = op.fn(u(rng), u(rng));
            ASSERT_TRUE(v >= 0 && v <= 1);
        }
}

TEST(Registry, DuplicateIdIsRejected) {
    DomainRegistry r;
    AttributeDomain copy = *r.get("min-cost");
    EXPECT_THROW(r.registerDomain(copy), DuplicateDomainId);
    copy.id = "min-cost-copy";
    r.registerDomain(copy);
    EXPECT_THROW(r.registerDomain(copy), DuplicateDomainId);
    EXPECT_EQ(r.get("min-cost-copy")->ops[1].name, "add");
    EXPECT_THROW(r.get("nope"), UnknownDomain);
}

TEST(Registry, NonAssociativeOperatorIsRejected) {
    DomainRegistry r;
    AttributeDomain d = *r.get("min-cost");
    d.id = "broken";
    d.ops[0] = BinaryOp{"avg", [](double x, double y) { return (x + y) / 2; }, true};
    EXPECT_FALSE(check_domain(d).empty());
    EXPECT_THROW(r.registerDomain(d), DomainDefinitionError);
    EXPECT_FALSE(r.find("broken"));
}

TEST(Registry, DeclarativeDefinition) {
    DomainRegistry r;
    auto j = nlohmann::json::parse(R"({"id": "min-cost-copy", "displayName": "Copy",
        "valueKind": "extended-real",
        "ops": {"orP": "min", "andP": "add", "orO": "add", "andO": "min", "cP": "add", "cO": "min"},
        "defaults": {"p": "inf", "o": "inf"}})");
    r.registerDomain(domain_from_json(j));
    EXPECT_EQ(r.get("min-cost-copy")->defaultProponent, inf);

    j["ops"]["orP"] = "exp";
    j["id"] = "other";
    EXPECT_THROW(domain_from_json(j), DomainDefinitionError);
    j["ops"]["orP"] = "min";
    j["defaults"]["p"] = -1;
    EXPECT_THROW(domain_from_json(j), DomainDefinitionError);
    j["defaults"]["p"] = 1;
    j["valueKind"] = "complex";
    EXPECT_THROW(domain_from_json(j), DomainDefinitionError);
}

TEST(Registry, WhitelistIsClosed) {
    auto names = whitelisted_op_names();
    EXPECT_EQ(names.size(), 9u);
    for (const auto &n : names)
        EXPECT_TRUE(whitelisted_op(n));
    EXPECT_FALSE(whitelisted_op("sub"));
}

} // namespace
} // namespace adt
