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
 * ADTerms: the algebraic form of attack-defense trees, their typing rules,
 * conversion to and from the tree model, and the textual syntax
 *
 *   term := IDENT | STRING | OP '(' term (',' term)* ')'
 *   OP   := or_p | and_p | or_o | and_o | c_p | c_o
 */

#ifndef ADT_TERM_HPP
#define ADT_TERM_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "adt/errors.hpp"
#include "adt/model.hpp"

namespace adt {

enum class Op { OrP, AndP, OrO, AndO, CP, CO };

std::string_view to_string(Op op);
std::optional<Op> op_from_name(std::string_view name);
/// Player of the value an operator produces.
Player op_player(Op op);
bool is_counter_op(Op op);
Op refinement_op(Player p, Refinement r);
Op counter_op(Player p);

class Term {
public:
    static Term basic(Player player, std::string label);
    static Term apply(Op op, std::vector<Term> args);

    bool isBasic() const noexcept { return !op_; }
    /// Only valid on Apply terms.
    Op op() const { return *op_; }
    /// Result type: the leaf's player, or the operator's player.
    Player player() const noexcept { return op_ ? op_player(*op_) : player_; }
    const std::string &label() const noexcept { return label_; }
    const std::vector<Term> &args() const noexcept { return args_; }

    /// Where this term came from in parsed text, if it was parsed.
    const std::optional<SourceSpan> &span() const noexcept { return span_; }
    void setSpan(SourceSpan s) { span_ = s; }

    std::size_t size() const;

    /// Structural equality; spans are ignored.
    friend bool operator==(const Term &a, const Term &b);

private:
    std::optional<Op> op_;
    Player player_ = Player::Proponent;
    std::string label_;
    std::vector<Term> args_;
    std::optional<SourceSpan> span_;
};

/// Throws TypeError or StructureError when the term breaks a typing rule.
/// The whole term must be proponent-typed.
void check_term(const Term &t);
/// Warnings for degenerate (arity-1) refinements; empty when clean.
std::vector<std::string> lint_term(const Term &t);

/// Child positions from the root term down to a subterm.
using TermPath = std::vector<std::uint32_t>;

/// Node data the term syntax cannot carry, keyed by the path of the
/// outermost term that represents each node.
struct TermSidecar {
    struct Entry {
        NodeId id;
        std::string label;
    };
    std::map<TermPath, Entry> nodes;
};

struct TermConversion {
    Term term;
    TermSidecar sidecar;
};

/// Throws InvalidTree when validate_tree reports violations.
TermConversion tree_to_term(const AdTree &tree);

struct TreeConversion {
    AdTree tree;
    /// Per node index: true when the label was synthesized ("node_<k>").
    std::vector<bool> synthesizedLabel;
};

TreeConversion term_to_tree_detailed(const Term &term, const TermSidecar *sidecar = nullptr);
AdTree term_to_tree(const Term &term, const TermSidecar *sidecar = nullptr);

/// Parses and type-checks ADTerm text. Throws ParseError, TypeError or
/// StructureError, each carrying a source span.
Term parse_term(std::string_view text);

/// Canonical text form.
std::string print_term(const Term &term);

/// True when `label` can be printed without quotes.
bool is_identifier(std::string_view label);

} // namespace adt

#endif
