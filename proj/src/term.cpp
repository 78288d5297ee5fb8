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

#include "adt/term.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <utility>

namespace adt {

namespace {

constexpr std::string_view kOpNames[] = {"or_p", "and_p", "or_o", "and_o", "c_p", "c_o"};

// Nesting limit for parsed text; keeps recursion depth bounded on hostile input.
constexpr int kMaxNesting = 4096;

} // namespace

std::string_view to_string(Op op) {
    return kOpNames[static_cast<int>(op)];
}

std::optional<Op> op_from_name(std::string_view name) {
    for (int i = 0; i < 6; ++i)
        if (kOpNames[i] == name)
            return static_cast<Op>(i);
    return std::nullopt;
}

Player op_player(Op op) {
    switch (op) {
    case Op::OrP:
    case Op::AndP:
    case Op::CP:
        return Player::Proponent;
    default:
        return Player::Opponent;
    }
}

bool is_counter_op(Op op) {
    return op == Op::CP || op == Op::CO;
}

Op refinement_op(Player p, Refinement r) {
    if (p == Player::Proponent)
        return r == Refinement::Or ? Op::OrP : Op::AndP;
    return r == Refinement::Or ? Op::OrO : Op::AndO;
}

Op counter_op(Player p) {
    return p == Player::Proponent ? Op::CP : Op::CO;
}

// ---------------------------------------------------------------------------

Term Term::basic(Player player, std::string label) {
    Term t;
    t.player_ = player;
    t.label_ = std::move(label);
    return t;
}

Term Term::apply(Op op, std::vector<Term> args) {
    Term t;
    t.op_ = op;
    t.player_ = op_player(op);
    t.args_ = std::move(args);
    return t;
}

std::size_t Term::size() const {
    std::size_t n = 1;
    for (const auto &a : args_)
        n += a.size();
    return n;
}

bool operator==(const Term &a, const Term &b) {
    if (a.op_ != b.op_)
        return false;
    if (!a.op_)
        return a.player_ == b.player_ && a.label_ == b.label_;
    return a.args_ == b.args_;
}

// ---------------------------------------------------------------------------
// Typing

namespace {

template <typename E>
[[noreturn]] void failAt(const Term &t, const std::string &msg) {
    if (t.span())
        throw E(msg, *t.span(), true);
    throw E(msg);
}

void checkTyped(const Term &t, Player expected, std::vector<std::string> *lint) {
    if (t.player() != expected)
        failAt<TypeError>(t, "expected a " + std::string(to_string(expected)) +
                                 " term, found a " + std::string(to_string(t.player())) + " one");
    if (t.isBasic()) {
        bool blank = std::all_of(t.label().begin(), t.label().end(),
                                 [](unsigned char c) { return std::isspace(c) != 0; });
        if (blank)
            failAt<TypeError>(t, "basic action label must not be empty");
        return;
    }
    const Op op = t.op();
    const Player self = op_player(op);
    if (is_counter_op(op)) {
        if (t.args().size() != 2)
            failAt<StructureError>(t, std::string(to_string(op)) + " takes exactly 2 arguments");
        const Term &guarded = t.args()[0];
        if (!guarded.isBasic() && is_counter_op(guarded.op()) && guarded.player() == self)
            failAt<StructureError>(guarded, "a node may carry at most one counter; " +
                                                std::string(to_string(op)) +
                                                " cannot be applied directly to " +
                                                std::string(to_string(guarded.op())));
        checkTyped(guarded, self, lint);
        checkTyped(t.args()[1], opposite(self), lint);
        return;
    }
    if (t.args().empty())
        failAt<StructureError>(t, std::string(to_string(op)) + " needs at least one argument");
    if (lint && t.args().size() == 1)
        lint->push_back("degenerate refinement: " + std::string(to_string(op)) +
                        " with a single argument");
    for (const auto &a : t.args())
        checkTyped(a, self, lint);
}

} // namespace

void check_term(const Term &t) {
    checkTyped(t, Player::Proponent, nullptr);
}

std::vector<std::string> lint_term(const Term &t) {
    std::vector<std::string> out;
    checkTyped(t, Player::Proponent, &out);
    return out;
}

// ---------------------------------------------------------------------------
// Tree <-> term

namespace {

Term nodeToTerm(const AdTree &tree, NodeIndex v, TermPath &path, TermSidecar &sidecar) {
    const Node &n = tree.node(v);
    sidecar.nodes.emplace(path, TermSidecar::Entry{n.id, n.label});

    auto core = [&](TermPath &corePath) {
        if (!n.isRefined())
            return Term::basic(n.player, n.label);
        std::vector<Term> args;
        args.reserve(n.children.size());
        for (std::size_t i = 0; i < n.children.size(); ++i) {
            corePath.push_back(static_cast<std::uint32_t>(i));
            args.push_back(nodeToTerm(tree, n.children[i], corePath, sidecar));
            corePath.pop_back();
        }
        return Term::apply(refinement_op(n.player, n.refinement), std::move(args));
    };

    if (auto c = n.counter()) {
        path.push_back(0);
        Term guarded = core(path);
        path.back() = 1;
        Term counter = nodeToTerm(tree, *c, path, sidecar);
        path.pop_back();
        std::vector<Term> args;
        args.push_back(std::move(guarded));
        args.push_back(std::move(counter));
        return Term::apply(counter_op(n.player), std::move(args));
    }
    return core(path);
}

class TreeBuilder {
public:
    explicit TreeBuilder(const TermSidecar *sidecar) : sidecar_(sidecar) {
        if (sidecar_)
            for (const auto &[p, e] : sidecar_->nodes)
                nextId_ = std::max(nextId_, e.id.value + 1);
    }

    TreeConversion build(const Term &term) {
        TermPath path;
        place(term, path, std::nullopt, false);
        return {std::move(*tree_), std::move(synthesized_)};
    }

private:
    const TermSidecar::Entry *lookup(const TermPath &p) const {
        if (!sidecar_)
            return nullptr;
        auto it = sidecar_->nodes.find(p);
        return it == sidecar_->nodes.end() ? nullptr : &it->second;
    }

    NodeIndex create(const Term &core, const TermPath &path, std::optional<NodeIndex> parent,
                     bool asCounter) {
        const auto *entry = lookup(path);
        NodeId id = entry ? entry->id : NodeId{nextId_++};
        std::string label;
        bool synthesized = false;
        if (core.isBasic()) {
            label = core.label();
        } else if (entry) {
            label = entry->label;
        } else {
            label = "node_" + std::to_string(++synthCount_);
            synthesized = true;
        }
        Refinement r = Refinement::Or;
        if (!core.isBasic())
            r = (core.op() == Op::AndP || core.op() == Op::AndO) ? Refinement::And
                                                                 : Refinement::Or;
        NodeIndex idx;
        if (!parent) {
            tree_.emplace(std::move(label), id, core.player());
            tree_->setRefinement(AdTree::kRoot, r);
            idx = AdTree::kRoot;
        } else if (asCounter) {
            idx = tree_->addCounter(*parent, std::move(label), id, core.player(), r);
        } else {
            idx = tree_->addChild(*parent, std::move(label), id, core.player(), r);
        }
        if (synthesized_.size() <= idx)
            synthesized_.resize(idx + 1, false);
        synthesized_[idx] = synthesized;
        return idx;
    }

    void place(const Term &t, TermPath &path, std::optional<NodeIndex> parent, bool asCounter) {
        const bool countered = !t.isBasic() && is_counter_op(t.op());
        const Term &core = countered ? t.args()[0] : t;
        NodeIndex idx = create(core, path, parent, asCounter);
        if (countered)
            path.push_back(0);
        if (!core.isBasic()) {
            for (std::size_t i = 0; i < core.args().size(); ++i) {
                path.push_back(static_cast<std::uint32_t>(i));
                place(core.args()[i], path, idx, false);
                path.pop_back();
            }
        }
        if (countered) {
            path.back() = 1;
            place(t.args()[1], path, idx, true);
            path.pop_back();
        }
    }

    const TermSidecar *sidecar_;
    std::optional<AdTree> tree_;
    std::vector<bool> synthesized_;
    std::uint64_t nextId_ = 1;
    int synthCount_ = 0;
};

} // namespace

TermConversion tree_to_term(const AdTree &tree) {
    auto violations = validate_tree(tree);
    if (!violations.empty())
        throw InvalidTree("tree has " + std::to_string(violations.size()) +
                          " structure violation(s), first: " +
                          std::string(to_string(violations.front().reason)) + " at node " +
                          std::to_string(violations.front().node.value));
    TermConversion out{Term::basic(Player::Proponent, "?"), {}};
    TermPath path;
    out.term = nodeToTerm(tree, AdTree::kRoot, path, out.sidecar);
    return out;
}

TreeConversion term_to_tree_detailed(const Term &term, const TermSidecar *sidecar) {
    if (term.player() != Player::Proponent) {
        if (term.span())
            throw TypeError("the root term must be proponent-typed", *term.span(), true);
        throw TypeError("the root term must be proponent-typed");
    }
    check_term(term);
    return TreeBuilder(sidecar).build(term);
}

AdTree term_to_tree(const Term &term, const TermSidecar *sidecar) {
    return std::move(term_to_tree_detailed(term, sidecar).tree);
}

// ---------------------------------------------------------------------------
// Text

bool is_identifier(std::string_view label) {
    if (label.empty())
        return false;
    auto head = static_cast<unsigned char>(label.front());
    if (!(std::isalpha(head) || head == '_') || head >= 0x80)
        return false;
    return std::all_of(label.begin() + 1, label.end(), [](char ch) {
        auto c = static_cast<unsigned char>(ch);
        return c < 0x80 && (std::isalnum(c) || c == '_');
    });
}

namespace {

void printInto(const Term &t, std::string &out) {
    if (t.isBasic()) {
        if (is_identifier(t.label())) {
            out += t.label();
            return;
        }
        out += '"';
        for (char c : t.label()) {
            if (c == '"' || c == '\\')
                out += '\\';
            out += c;
        }
        out += '"';
        return;
    }
    out += to_string(t.op());
    out += '(';
    for (std::size_t i = 0; i < t.args().size(); ++i) {
        if (i)
            out += ", ";
        printInto(t.args()[i], out);
    }
    out += ')';
}

enum class Tok { Ident, String, LParen, RParen, Comma, End, Bad };

struct Token {
    Tok kind;
    std::string text; // decoded value for strings, raw lexeme otherwise
    SourceSpan span;
};

std::string describe(const Token &t) {
    switch (t.kind) {
    case Tok::End:
        return "end of input";
    case Tok::String:
        return "\"" + t.text + "\"";
    default:
        return t.text;
    }
}

// Length of the UTF-8 sequence starting with `lead`, 0 if invalid.
int utf8Length(unsigned char lead) {
    if (lead < 0x80)
        return 1;
    if ((lead & 0xE0) == 0xC0)
        return lead >= 0xC2 ? 2 : 0;
    if ((lead & 0xF0) == 0xE0)
        return 3;
    if ((lead & 0xF8) == 0xF0)
        return lead <= 0xF4 ? 4 : 0;
    return 0;
}

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    Token next() {
        skipSpace();
        SourceSpan start{line_, col_, line_, col_};
        if (pos_ >= src_.size())
            return {Tok::End, "", start};
        char c = src_[pos_];
        auto single = [&](Tok k) {
            advance();
            return Token{k, std::string(1, c), start};
        };
        switch (c) {
        case '(':
            return single(Tok::LParen);
        case ')':
            return single(Tok::RParen);
        case ',':
            return single(Tok::Comma);
        case '"':
            return string(start);
        default:
            break;
        }
        auto u = static_cast<unsigned char>(c);
        if (u < 0x80 && (std::isalpha(u) || u == '_')) {
            std::size_t b = pos_;
            while (pos_ < src_.size()) {
                auto d = static_cast<unsigned char>(src_[pos_]);
                if (d >= 0x80 || !(std::isalnum(d) || d == '_'))
                    break;
                advance();
            }
            return {Tok::Ident, std::string(src_.substr(b, pos_ - b)), closeSpan(start)};
        }
        // Unexpected byte or code point: consume one sequence and report it.
        int len = std::max(1, utf8Length(u));
        std::string raw(src_.substr(pos_, std::min<std::size_t>(len, src_.size() - pos_)));
        for (int i = 0; i < len && pos_ < src_.size(); ++i)
            advance();
        return {Tok::Bad, printable(raw), closeSpan(start)};
    }

private:
    static std::string printable(const std::string &raw) {
        std::string out;
        for (unsigned char c : raw) {
            if (c >= 0x20 && c < 0x7f) {
                out += static_cast<char>(c);
            } else {
                static const char *hex = "0123456789abcdef";
                out += "\\x";
                out += hex[c >> 4];
                out += hex[c & 15];
            }
        }
        return out;
    }

    SourceSpan closeSpan(SourceSpan s) const {
        s.endLine = lastLine_;
        s.endCol = lastCol_;
        return s;
    }

    void advance() {
        unsigned char c = static_cast<unsigned char>(src_[pos_]);
        lastLine_ = line_;
        lastCol_ = col_;
        ++pos_;
        if (c == '\n') {
            ++line_;
            col_ = 1;
        } else if ((c & 0xC0) != 0x80) {
            ++col_;
        }
    }

    void skipSpace() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v')
                advance();
            else
                break;
        }
    }

    Token string(SourceSpan start) {
        advance(); // opening quote
        std::string value;
        while (true) {
            if (pos_ >= src_.size())
                throw ParseError("unterminated string literal", closeSpan(start), {"'\"'"},
                                 "end of input");
            char c = src_[pos_];
            if (c == '"') {
                advance();
                break;
            }
            if (c == '\\') {
                SourceSpan esc{line_, col_, line_, col_};
                advance();
                if (pos_ >= src_.size())
                    throw ParseError("unterminated string literal", closeSpan(start), {"'\"'"},
                                     "end of input");
                char e = src_[pos_];
                if (e != '"' && e != '\\') {
                    advance();
                    esc.endLine = lastLine_;
                    esc.endCol = lastCol_;
                    throw ParseError("invalid escape sequence", esc, {"'\\\"'", "'\\\\'"},
                                     printable(std::string("\\") + e));
                }
                value += e;
                advance();
                continue;
            }
            const std::size_t len = utf8_sequence_length(src_.substr(pos_));
            if (len == 0) {
                SourceSpan bad{line_, col_, line_, col_};
                throw ParseError("invalid UTF-8 in string literal", bad, {"UTF-8 text"},
                                 printable(std::string(1, c)));
            }
            for (std::size_t i = 0; i < len; ++i) {
                value += src_[pos_];
                advance();
            }
        }
        return {Tok::String, std::move(value), closeSpan(start)};
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;
    int lastLine_ = 1, lastCol_ = 1;
};

class Parser {
public:
    explicit Parser(std::string_view text) : lex_(text) { cur_ = lex_.next(); }

    Term parseAll() {
        Term t = term(Player::Proponent, 0);
        if (cur_.kind != Tok::End)
            unexpected({"end of input"});
        return t;
    }

private:
    [[noreturn]] void unexpected(std::vector<std::string> expected) {
        std::string msg = "expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i)
                msg += i + 1 == expected.size() ? " or " : ", ";
            msg += expected[i];
        }
        msg += ", found " + describe(cur_);
        throw ParseError(msg, cur_.span, std::move(expected), describe(cur_));
    }

    void bump() { cur_ = lex_.next(); }

    // `expected` is the player forced by context; leaves take it, operators
    // must agree with it.
    Term term(Player expected, int depth) {
        if (depth > kMaxNesting)
            throw ParseError("term nested too deeply", cur_.span, {"shallower term"},
                             describe(cur_));
        if (cur_.kind == Tok::String || cur_.kind == Tok::Ident) {
            Token head = cur_;
            bump();
            if (head.kind == Tok::Ident && cur_.kind == Tok::LParen) {
                auto op = op_from_name(head.text);
                if (!op)
                    throw ParseError("unknown operator '" + head.text + "'", head.span,
                                     {"or_p", "and_p", "or_o", "and_o", "c_p", "c_o"}, head.text);
                return application(*op, head.span, expected, depth);
            }
            bool blank = std::all_of(head.text.begin(), head.text.end(),
                                     [](unsigned char c) { return std::isspace(c) != 0; });
            if (blank)
                throw ParseError("empty label", head.span, {"non-empty label"}, describe(head));
            Term leaf = Term::basic(expected, head.text);
            leaf.setSpan(head.span);
            return leaf;
        }
        unexpected({"term"});
    }

    Term application(Op op, SourceSpan start, Player expected, int depth) {
        bump(); // '('
        const Player self = op_player(op);
        std::vector<Term> args;
        std::vector<SourceSpan> argSpans;
        while (true) {
            Player argPlayer = self;
            if (is_counter_op(op) && args.size() == 1)
                argPlayer = opposite(self);
            args.push_back(term(argPlayer, depth + 1));
            if (cur_.kind == Tok::Comma) {
                bump();
                continue;
            }
            if (cur_.kind == Tok::RParen)
                break;
            unexpected({"','", "')'"});
        }
        SourceSpan span = start;
        span.endLine = cur_.span.endLine;
        span.endCol = cur_.span.endCol;
        bump(); // ')'

        Term t = Term::apply(op, std::move(args));
        t.setSpan(span);
        if (self != expected)
            throw TypeError(std::string(to_string(op)) + " yields a " +
                                std::string(to_string(self)) + " term where a " +
                                std::string(to_string(expected)) + " term is required",
                            span, true);
        if (is_counter_op(op)) {
            if (t.args().size() != 2)
                throw StructureError(std::string(to_string(op)) + " takes exactly 2 arguments",
                                     span, true);
            const Term &guarded = t.args()[0];
            if (!guarded.isBasic() && is_counter_op(guarded.op()))
                throw StructureError("a node may carry at most one counter; " +
                                         std::string(to_string(op)) +
                                         " cannot be applied directly to " +
                                         std::string(to_string(guarded.op())),
                                     *guarded.span(), true);
        }
        return t;
    }

    Lexer lex_;
    Token cur_;
};

} // namespace

Term parse_term(std::string_view text) {
    return Parser(text).parseAll();
}

std::string print_term(const Term &term) {
    std::string out;
    printInto(term, out);
    return out;
}

} // namespace adt
