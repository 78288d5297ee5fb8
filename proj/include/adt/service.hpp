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
 * HTTP/JSON document service.
 *
 * Documents live in memory, each with a version that starts at 1 and grows
 * by exactly one per accepted mutation. Mutations carry the version they
 * were based on and fail with 409 when it is stale. Readers get immutable
 * snapshots.
 *
 * Routes (all bodies JSON unless noted):
 * \code
 * POST /documents                          empty or .adt body    -> {docId, version}
 * GET  /documents/{id}                                           -> {docId, version, document}
 * POST /documents/{id}/edits               {baseVersion, op, args}
 * GET  /documents/{id}/term                                      -> {text, version}
 * PUT  /documents/{id}/term                {baseVersion, text}
 * GET  /domains
 * POST /documents/{id}/domains             {domainId, params, [baseVersion]}
 * PUT  /documents/{id}/valuations/{inst}   {baseVersion, player, label, value}
 * GET  /documents/{id}/evaluation/{inst}
 * GET  /documents/{id}/layout?fold=true|false
 * GET  /documents/{id}/export?format=svg|tikz|adt[&instanceId=..][&fold=..]
 * POST /documents/{id}/save                {name}      (needs a document directory)
 * POST /documents/open                     {name}      (needs a document directory)
 * \endcode
 */

#ifndef ADT_SERVICE_HPP
#define ADT_SERVICE_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <thread>

#include "adt/document.hpp"
#include "adt/domains.hpp"

namespace httplib {
class Server;
}

namespace adt {

struct Response {
    int status = 200;
    std::string contentType = "application/json";
    std::string body;
};

struct Snapshot {
    std::uint64_t version = 0;
    std::shared_ptr<const Document> document;
};

/// Thread-safe in-memory store. Mutations on one document are serialized;
/// different documents proceed independently.
class DocumentStore {
public:
    /// Returns the new id.
    std::string create(Document doc);
    std::optional<Snapshot> get(std::string_view id) const;

    struct Conflict {
        std::uint64_t current;
    };

    /// Runs `change` on a copy of the current document under the document's
    /// lock. The copy replaces the current snapshot only when `change`
    /// returns without throwing. Throws Conflict when `baseVersion` is
    /// given and stale; returns nullopt for an unknown id.
    template <class F>
    std::optional<std::uint64_t> mutate(std::string_view id,
                                        std::optional<std::uint64_t> baseVersion, F &&change);

private:
    struct Entry {
        mutable std::mutex mutex;
        std::uint64_t version = 1;
        std::shared_ptr<const Document> document;
    };

    std::shared_ptr<Entry> entry(std::string_view id) const;

    mutable std::shared_mutex mapMutex_;
    std::map<std::string, std::shared_ptr<Entry>, std::less<>> docs_;
    std::uint64_t nextId_ = 1;
};

struct ServiceConfig {
    /// Directory for the save/open routes; disabled when empty.
    std::filesystem::path documentDir;
};

class Service {
public:
    explicit Service(ServiceConfig config = {});

    /// `query` holds decoded query parameters.
    Response handle(std::string_view method, std::string_view path,
                    const std::map<std::string, std::string> &query, std::string_view body);

    DomainRegistry &registry() { return registry_; }
    DocumentStore &store() { return store_; }

private:
    DomainRegistry registry_;
    DocumentStore store_;
    ServiceConfig config_;
};

/// Serves a Service over HTTP on a background thread pool.
class HttpServer {
public:
    explicit HttpServer(Service &service);
    ~HttpServer();
    HttpServer(const HttpServer &) = delete;
    HttpServer &operator=(const HttpServer &) = delete;

    /// Binds and starts listening. Port 0 picks a free port. Returns the
    /// bound port; throws std::runtime_error when binding fails.
    int start(const std::string &host, int port);
    /// Blocks in the calling thread until stop().
    void run(const std::string &host, int port);
    void stop();

private:
    Service &service_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
};

/// Splits "host:port"; a bare port or bare host falls back to the defaults
/// 127.0.0.1 and 8345. Throws std::invalid_argument.
std::pair<std::string, int> parse_listen_address(std::string_view text);

// ---------------------------------------------------------------------------

template <class F>
std::optional<std::uint64_t> DocumentStore::mutate(std::string_view id,
                                                   std::optional<std::uint64_t> baseVersion,
                                                   F &&change) {
    auto e = entry(id);
    if (!e)
        return std::nullopt;
    std::lock_guard lock(e->mutex);
    if (baseVersion && *baseVersion != e->version)
        throw Conflict{e->version};
    auto next = std::make_shared<Document>(*e->document);
    change(*next);
    e->document = std::move(next);
    return ++e->version;
}

} // namespace adt

#endif
