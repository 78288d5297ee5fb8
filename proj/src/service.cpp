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

#include "adt/service.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include <httplib.h>
#include <json.hpp>

#include "adt/errors.hpp"
#include "adt/io.hpp"
#include "adt/layout.hpp"
#include "adt/term.hpp"
#include "adt/treediff.hpp"

namespace adt {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Store

std::string DocumentStore::create(Document doc) {
    auto e = std::make_shared<Entry>();
    e->document = std::make_shared<const Document>(std::move(doc));
    std::unique_lock lock(mapMutex_);
    std::string id = "d" + std::to_string(nextId_++);
    docs_.emplace(id, std::move(e));
    return id;
}

std::shared_ptr<DocumentStore::Entry> DocumentStore::entry(std::string_view id) const {
    std::shared_lock lock(mapMutex_);
    auto it = docs_.find(id);
    return it == docs_.end() ? nullptr : it->second;
}

std::optional<Snapshot> DocumentStore::get(std::string_view id) const {
    auto e = entry(id);
    if (!e)
        return std::nullopt;
    std::lock_guard lock(e->mutex);
    return Snapshot{e->version, e->document};
}

// ---------------------------------------------------------------------------
// Routing

namespace {

struct HttpError {
    int status;
    std::string error;
    std::string message;
    json detail = json::object();
};

[[noreturn]] void badRequest(const std::string &msg) {
    throw HttpError{400, "BadRequest", msg};
}

[[noreturn]] void notFound(const std::string &error, const std::string &msg) {
    throw HttpError{404, error, msg};
}

Response jsonResponse(int status, const json &j) {
    return {status, "application/json", j.dump()};
}

Response errorResponse(const HttpError &e) {
    json j{{"error", e.error}, {"message", e.message}};
    for (auto it = e.detail.begin(); it != e.detail.end(); ++it)
        j[it.key()] = it.value();
    return jsonResponse(e.status, j);
}

json spanToJson(const SourceSpan &s) {
    return {{"startLine", s.startLine},
            {"startCol", s.startCol},
            {"endLine", s.endLine},
            {"endCol", s.endCol}};
}

json parseBody(std::string_view body) {
    if (body.empty())
        badRequest("request body must be a JSON object");
    json j = json::parse(body.begin(), body.end(), nullptr, false);
    if (j.is_discarded() || !j.is_object())
        badRequest("request body must be a JSON object");
    return j;
}

const json &need(const json &body, const char *key) {
    if (!body.contains(key))
        badRequest(std::string("missing field '") + key + "'");
    return body[key];
}

std::string needString(const json &body, const char *key) {
    const json &v = need(body, key);
    if (!v.is_string())
        badRequest(std::string("field '") + key + "' must be a string");
    return v.get<std::string>();
}

std::uint64_t needVersion(const json &body) {
    const json &v = need(body, "baseVersion");
    if (!v.is_number_unsigned())
        badRequest("field 'baseVersion' must be a non-negative integer");
    return v.get<std::uint64_t>();
}

NodeId needNodeId(const json &args) {
    const json &v = need(args, "nodeId");
    if (!v.is_number_unsigned())
        badRequest("field 'nodeId' must be a non-negative integer");
    return NodeId{v.get<std::uint64_t>()};
}

Refinement needRefinement(const json &args) {
    const std::string t = needString(args, "type");
    if (t == "AND")
        return Refinement::And;
    if (t == "OR")
        return Refinement::Or;
    badRequest("field 'type' must be \"AND\" or \"OR\"");
}

bool queryFlag(const std::map<std::string, std::string> &q, const char *key) {
    auto it = q.find(key);
    if (it == q.end() || it->second == "false" || it->second == "0")
        return false;
    if (it->second == "true" || it->second == "1" || it->second.empty())
        return true;
    badRequest(std::string("query parameter '") + key + "' must be true or false");
}

std::vector<std::string_view> splitPath(std::string_view path) {
    std::vector<std::string_view> parts;
    std::size_t i = 0;
    while (i < path.size()) {
        std::size_t j = path.find('/', i);
        if (j == std::string_view::npos)
            j = path.size();
        if (j > i)
            parts.push_back(path.substr(i, j - i));
        i = j + 1;
    }
    return parts;
}

bool safeFileName(std::string_view name) {
    if (name.empty() || name.size() > 200 || name.front() == '.')
        return false;
    for (char c : name)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '_' || c == '-'))
            return false;
    return true;
}

json domainToJson(const AttributeDomain &d) {
    json params = json::array();
    for (const auto &p : d.params)
        params.push_back({{"name", p.name}, {"minimum", p.minimum}});
    return {{"id", d.id},
            {"displayName", d.displayName},
            {"valueKind", to_string(d.kind)},
            {"params", std::move(params)},
            {"rootPredicate", d.rootPredicate ? json(d.rootPredicate->description) : json()},
            {"defaults",
             {{"p", value_to_json(d.kind, d.defaultProponent)},
              {"o", value_to_json(d.kind, d.defaultOpponent)}}}};
}

class Router {
public:
    Router(DomainRegistry &registry, DocumentStore &store, const ServiceConfig &config,
           std::string_view method, const std::map<std::string, std::string> &query,
           std::string_view body)
        : registry_(registry), store_(store), config_(config), method_(method), query_(query),
          body_(body) {}

    Response route(const std::vector<std::string_view> &p) {
        if (p.size() == 1 && p[0] == "domains" && method_ == "GET")
            return listDomains();
        if (p.empty() || p[0] != "documents")
            notFound("NotFound", "no such route");
        if (p.size() == 1 && method_ == "POST")
            return createDocument();
        if (p.size() == 2 && p[1] == "open" && method_ == "POST")
            return openDocument();
        if (p.size() < 2)
            notFound("NotFound", "no such route");
        const std::string id(p[1]);
        if (p.size() == 2 && method_ == "GET")
            return getDocument(id);
        if (p.size() == 3) {
            if (p[2] == "edits" && method_ == "POST")
                return edit(id);
            if (p[2] == "term" && method_ == "GET")
                return getTerm(id);
            if (p[2] == "term" && method_ == "PUT")
                return putTerm(id);
            if (p[2] == "domains" && method_ == "POST")
                return attachDomain(id);
            if (p[2] == "layout" && method_ == "GET")
                return getLayout(id);
            if (p[2] == "export" && method_ == "GET")
                return exportDocument(id);
            if (p[2] == "save" && method_ == "POST")
                return saveDocument(id);
        }
        if (p.size() == 4) {
            if (p[2] == "valuations" && method_ == "PUT")
                return putValuation(id, std::string(p[3]));
            if (p[2] == "evaluation" && method_ == "GET")
                return getEvaluation(id, std::string(p[3]));
        }
        notFound("NotFound", "no such route");
    }

private:
    Snapshot snapshot(const std::string &id) {
        auto s = store_.get(id);
        if (!s)
            notFound("UnknownDocument", "no document '" + id + "'");
        return *s;
    }

    template <class F>
    std::uint64_t mutate(const std::string &id, std::optional<std::uint64_t> base, F &&change) {
        std::optional<std::uint64_t> v;
        try {
            v = store_.mutate(id, base, std::forward<F>(change));
        } catch (const DocumentStore::Conflict &c) {
            throw HttpError{409, "VersionConflict",
                            "document '" + id + "' is at version " + std::to_string(c.current),
                            {{"currentVersion", c.current}}};
        }
        if (!v)
            notFound("UnknownDocument", "no document '" + id + "'");
        return *v;
    }

    Response listDomains() {
        json out = json::array();
        for (const auto &d : registry_.all())
            out.push_back(domainToJson(*d));
        return jsonResponse(200, out);
    }

    Response created(Document doc) {
        std::string id = store_.create(std::move(doc));
        return jsonResponse(201, {{"docId", id}, {"version", 1}});
    }

    Response createDocument() {
        bool blank = body_.find_first_not_of(" \t\r\n") == std::string_view::npos;
        return created(blank ? new_document() : load(body_, registry_));
    }

    std::filesystem::path fileInDir(const json &body) {
        if (config_.documentDir.empty())
            throw HttpError{403, "NoDocumentDirectory", "the service has no document directory"};
        const std::string name = needString(body, "name");
        if (!safeFileName(name))
            badRequest("file name may only contain letters, digits, '.', '_' and '-'");
        return config_.documentDir / name;
    }

    Response openDocument() {
        auto path = fileInDir(parseBody(body_));
        std::ifstream in(path, std::ios::binary);
        if (!in)
            notFound("UnknownFile", "cannot read '" + path.filename().string() + "'");
        std::stringstream ss;
        ss << in.rdbuf();
        return created(load(ss.str(), registry_));
    }

    Response saveDocument(const std::string &id) {
        auto path = fileInDir(parseBody(body_));
        Snapshot s = snapshot(id);
        const std::string bytes = save(*s.document, registry_);
        auto tmp = path;
        tmp += ".tmp";
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out << bytes;
            if (!out)
                throw HttpError{500, "IoError", "cannot write '" + path.filename().string() + "'"};
        }
        std::filesystem::rename(tmp, path);
        return jsonResponse(200, {{"version", s.version}, {"name", path.filename().string()}});
    }

    Response getDocument(const std::string &id) {
        Snapshot s = snapshot(id);
        return jsonResponse(200, {{"docId", id},
                                  {"version", s.version},
                                  {"document", document_to_json(*s.document, registry_)}});
    }

    Response edit(const std::string &id) {
        json body = parseBody(body_);
        const std::uint64_t base = needVersion(body);
        const std::string op = needString(body, "op");
        const json args = body.contains("args") ? body["args"] : json::object();
        if (!args.is_object())
            badRequest("field 'args' must be an object");

        std::function<EditResult(const AdTree &)> make;
        if (op == "refine") {
            NodeId n = needNodeId(args);
            Refinement r = args.contains("type") ? needRefinement(args) : Refinement::Or;
            std::string label = needString(args, "label");
            make = [=](const AdTree &t) { return refine(t, n, r, label); };
        } else if (op == "addCounter") {
            NodeId n = needNodeId(args);
            std::string label = needString(args, "label");
            make = [=](const AdTree &t) { return add_counter(t, n, label); };
        } else if (op == "relabel") {
            NodeId n = needNodeId(args);
            std::string label = needString(args, "label");
            make = [=](const AdTree &t) { return relabel(t, n, label); };
        } else if (op == "delete") {
            NodeId n = needNodeId(args);
            make = [=](const AdTree &t) { return delete_subtree(t, n); };
        } else if (op == "setRefinement") {
            NodeId n = needNodeId(args);
            Refinement r = needRefinement(args);
            make = [=](const AdTree &t) { return set_refinement(t, n, r); };
        } else if (op == "toggleFold") {
            NodeId n = needNodeId(args);
            make = [=](const AdTree &t) { return toggle_fold(t, n); };
        } else {
            badRequest("unknown edit op '" + op + "'");
        }

        ChangeRecord change{};
        std::uint64_t v = mutate(id, base, [&](Document &doc) {
            change = apply_edit(doc, registry_, make(doc.tree));
        });
        json ids = json::array();
        for (NodeId n : change.changed)
            ids.push_back(n.value);
        return jsonResponse(200, {{"version", v}, {"changedNodeIds", std::move(ids)}});
    }

    Response getTerm(const std::string &id) {
        Snapshot s = snapshot(id);
        return jsonResponse(200, {{"text", print_term(tree_to_term(s.document->tree).term)},
                                  {"version", s.version}});
    }

    Response putTerm(const std::string &id) {
        json body = parseBody(body_);
        const std::uint64_t base = needVersion(body);
        const std::string text = needString(body, "text");
        const Term term = parse_term(text);
        ReconcileSummary summary;
        std::uint64_t v = mutate(id, base, [&](Document &doc) {
            ReconcileResult r = reconcile(doc, term, registry_);
            doc = std::move(r.document);
            summary = std::move(r.summary);
        });
        return jsonResponse(200, {{"version", v}, {"summary", to_json(summary)}});
    }

    Response attachDomain(const std::string &id) {
        json body = parseBody(body_);
        std::optional<std::uint64_t> base;
        if (body.contains("baseVersion"))
            base = needVersion(body);
        const std::string domainId = needString(body, "domainId");
        Params params;
        if (body.contains("params") && !body["params"].is_null()) {
            if (!body["params"].is_object())
                badRequest("field 'params' must be an object");
            for (auto it = body["params"].begin(); it != body["params"].end(); ++it) {
                if (!it.value().is_number())
                    badRequest("parameter '" + it.key() + "' must be a number");
                params[it.key()] = it.value().get<double>();
            }
        }
        std::string instanceId;
        std::uint64_t v = mutate(id, base, [&](Document &doc) {
            instanceId = attach_domain(doc, registry_, domainId, params);
        });
        return jsonResponse(200, {{"instanceId", instanceId}, {"version", v}});
    }

    Response putValuation(const std::string &id, const std::string &instanceId) {
        json body = parseBody(body_);
        const std::uint64_t base = needVersion(body);
        const std::string player = needString(body, "player");
        ActionKey key;
        if (player == "p" || player == "proponent")
            key.player = Player::Proponent;
        else if (player == "o" || player == "opponent")
            key.player = Player::Opponent;
        else
            badRequest("field 'player' must be \"proponent\" or \"opponent\"");
        key.label = needString(body, "label");
        const json value = need(body, "value");
        std::uint64_t v = mutate(id, base, [&](Document &doc) {
            const DomainInstance &inst = doc.getInstance(instanceId);
            auto domain = registry_.get(inst.domainId);
            set_document_value(doc, registry_, instanceId, key,
                               value_from_json(domain->kind, value));
        });
        return jsonResponse(200, {{"version", v}});
    }

    Response getEvaluation(const std::string &id, const std::string &instanceId) {
        Snapshot s = snapshot(id);
        const DomainInstance &inst = s.document->getInstance(instanceId);
        auto domain = registry_.get(inst.domainId);
        EvaluationResult r = evaluate_instance(*s.document, registry_, instanceId);
        json out = evaluation_to_json(s.document->tree, *domain, r);
        out["instanceId"] = instanceId;
        out["version"] = s.version;
        return jsonResponse(200, out);
    }

    Response getLayout(const std::string &id) {
        Snapshot s = snapshot(id);
        json out = layout_to_json(s.document->tree,
                                  layout(s.document->tree, {}, queryFlag(query_, "fold")));
        out["version"] = s.version;
        return jsonResponse(200, out);
    }

    Response exportDocument(const std::string &id) {
        Snapshot s = snapshot(id);
        const Document &doc = *s.document;
        auto fmt = query_.find("format");
        const std::string format = fmt == query_.end() ? "adt" : fmt->second;
        if (format == "adt")
            return {200, "application/json", save(doc, registry_)};
        if (format != "svg" && format != "tikz")
            badRequest("format must be svg, tikz or adt");

        ExportStyle style;
        style.rootRole = doc.rootRole;
        LayoutResult placement = layout(doc.tree, style.geometry, queryFlag(query_, "fold"));
        std::optional<EvaluationResult> result;
        std::optional<ExportOverlay> overlay;
        if (auto it = query_.find("instanceId"); it != query_.end()) {
            const DomainInstance &inst = doc.getInstance(it->second);
            result = evaluate_instance(doc, registry_, it->second);
            overlay = ExportOverlay{&*result, registry_.get(inst.domainId)->kind};
        }
        if (format == "svg")
            return {200, "image/svg+xml", export_svg(doc.tree, placement, style, overlay)};
        return {200, "application/x-tex", export_tikz(doc.tree, placement, style, overlay)};
    }

    DomainRegistry &registry_;
    DocumentStore &store_;
    const ServiceConfig &config_;
    std::string_view method_;
    const std::map<std::string, std::string> &query_;
    std::string_view body_;
};

} // namespace

Service::Service(ServiceConfig config) : config_(std::move(config)) {}

Response Service::handle(std::string_view method, std::string_view path,
                         const std::map<std::string, std::string> &query, std::string_view body) {
    Router router(registry_, store_, config_, method, query, body);
    try {
        return router.route(splitPath(path));
    } catch (const HttpError &e) {
        return errorResponse(e);
    } catch (const ParseError &e) {
        return errorResponse({422,
                              "ParseError",
                              e.what(),
                              {{"span", spanToJson(e.span())},
                               {"expected", e.expected()},
                               {"found", e.found()}}});
    } catch (const SpannedError &e) {
        const char *kind = dynamic_cast<const TypeError *>(&e) ? "TypeError" : "StructureError";
        json detail = json::object();
        if (e.hasSpan())
            detail["span"] = spanToJson(e.span());
        return errorResponse({422, kind, e.what(), std::move(detail)});
    } catch (const UnknownNode &e) {
        return errorResponse({404, "UnknownNode", e.what()});
    } catch (const UnknownAction &e) {
        return errorResponse({404, "UnknownAction", e.what()});
    } catch (const UnknownInstance &e) {
        return errorResponse({404, "UnknownInstance", e.what()});
    } catch (const DoubleCounter &e) {
        return errorResponse({422, "DoubleCounter", e.what()});
    } catch (const ValueOutOfDomain &e) {
        return errorResponse({422, "ValueOutOfDomain", e.what()});
    } catch (const FormatError &e) {
        return errorResponse({422, "FormatError", e.what()});
    } catch (const IntegrityError &e) {
        return errorResponse({422, "IntegrityError", e.what()});
    } catch (const EmptyDocumentError &e) {
        return errorResponse({422, "EmptyDocumentError", e.what()});
    } catch (const InvalidLabel &e) {
        return errorResponse({422, "InvalidLabel", e.what()});
    } catch (const UnknownDomain &e) {
        return errorResponse({422, "UnknownDomain", e.what()});
    } catch (const DomainDefinitionError &e) {
        return errorResponse({422, "DomainDefinitionError", e.what()});
    } catch (const Error &e) {
        return errorResponse({422, "InvalidRequest", e.what()});
    } catch (const std::exception &e) {
        return errorResponse({500, "InternalError", e.what()});
    }
}

// ---------------------------------------------------------------------------
// HTTP transport

HttpServer::HttpServer(Service &service)
    : service_(service), server_(std::make_unique<httplib::Server>()) {
    auto dispatch = [this](const httplib::Request &req, httplib::Response &res) {
        std::map<std::string, std::string> query;
        for (const auto &[k, v] : req.params)
            query.emplace(k, v);
        Response r = service_.handle(req.method, req.path, query, req.body);
        res.status = r.status;
        res.set_content(r.body, r.contentType);
    };
    server_->Get(".*", dispatch);
    server_->Post(".*", dispatch);
    server_->Put(".*", dispatch);
}

HttpServer::~HttpServer() {
    stop();
}

int HttpServer::start(const std::string &host, int port) {
    int bound = port;
    if (port == 0)
        bound = server_->bind_to_any_port(host);
    else if (!server_->bind_to_port(host, port))
        bound = -1;
    if (bound < 0)
        throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
    thread_ = std::thread([this] { server_->listen_after_bind(); });
    server_->wait_until_ready();
    return bound;
}

void HttpServer::run(const std::string &host, int port) {
    if (!server_->listen(host, port))
        throw std::runtime_error("cannot listen on " + host + ":" + std::to_string(port));
}

void HttpServer::stop() {
    server_->stop();
    if (thread_.joinable())
        thread_.join();
}

std::pair<std::string, int> parse_listen_address(std::string_view text) {
    std::string host = "127.0.0.1";
    int port = 8345;
    std::string_view portText;
    auto colon = text.rfind(':');
    if (colon == std::string_view::npos) {
        bool digits = !text.empty() && text.find_first_not_of("0123456789") == std::string_view::npos;
        if (digits)
            portText = text;
        else if (!text.empty())
            host = std::string(text);
    } else {
        if (colon > 0)
            host = std::string(text.substr(0, colon));
        portText = text.substr(colon + 1);
    }
    if (!portText.empty()) {
        if (portText.find_first_not_of("0123456789") != std::string_view::npos ||
            portText.size() > 5)
            throw std::invalid_argument("bad port in listen address '" + std::string(text) + "'");
        port = std::stoi(std::string(portText));
        if (port > 65535)
            throw std::invalid_argument("port out of range in '" + std::string(text) + "'");
    }
    return {host, port};
}

} // namespace adt
