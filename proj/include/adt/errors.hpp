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

#ifndef ADT_ERRORS_HPP
#define ADT_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace adt {

/// 1-based source position range inside ADTerm text.
struct SourceSpan {
    int startLine = 1;
    int startCol = 1;
    int endLine = 1;
    int endCol = 1;

    friend bool operator==(const SourceSpan &, const SourceSpan &) = default;
};

/// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string &what) : std::runtime_error(what) {}
};

class InvalidTree : public Error {
public:
    using Error::Error;
};

class UnknownNode : public Error {
public:
    using Error::Error;
};

class DoubleCounter : public Error {
public:
    using Error::Error;
};

class EmptyDocumentError : public Error {
public:
    using Error::Error;
};

class InvalidLabel : public Error {
public:
    using Error::Error;
};

/// Errors tied to a location in ADTerm text. The span is empty
/// (default-constructed) when the term did not come from text.
class SpannedError : public Error {
public:
    SpannedError(const std::string &what, SourceSpan span, bool hasSpan)
        : Error(what), span_(span), hasSpan_(hasSpan) {}

    const SourceSpan &span() const noexcept { return span_; }
    bool hasSpan() const noexcept { return hasSpan_; }

private:
    SourceSpan span_;
    bool hasSpan_;
};

class ParseError : public SpannedError {
public:
    ParseError(const std::string &what, SourceSpan span,
               std::vector<std::string> expected, std::string found)
        : SpannedError(what, span, true), expected_(std::move(expected)),
          found_(std::move(found)) {}

    const std::vector<std::string> &expected() const noexcept { return expected_; }
    const std::string &found() const noexcept { return found_; }

private:
    std::vector<std::string> expected_;
    std::string found_;
};

/// Player typing conflict, e.g. or_p over an opponent argument.
class TypeError : public SpannedError {
public:
    explicit TypeError(const std::string &what, SourceSpan span = {}, bool hasSpan = false)
        : SpannedError(what, span, hasSpan) {}
};

/// Counter operator whose first argument is itself a counter of the same player.
class StructureError : public SpannedError {
public:
    explicit StructureError(const std::string &what, SourceSpan span = {}, bool hasSpan = false)
        : SpannedError(what, span, hasSpan) {}
};

class DuplicateDomainId : public Error {
public:
    using Error::Error;
};

class UnknownDomain : public Error {
public:
    using Error::Error;
};

class DomainDefinitionError : public Error {
public:
    using Error::Error;
};

class UnknownAction : public Error {
public:
    using Error::Error;
};

class ValueOutOfDomain : public Error {
public:
    using Error::Error;
};

class IncompleteValuation : public Error {
public:
    using Error::Error;
};

class UnknownInstance : public Error {
public:
    using Error::Error;
};

/// Malformed file: bad JSON, wrong format tag or unsupported version.
class FormatError : public Error {
public:
    using Error::Error;
};

/// Well-formed file whose content violates tree or valuation invariants.
class IntegrityError : public Error {
public:
    using Error::Error;
};

} // namespace adt

#endif
