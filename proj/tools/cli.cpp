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

#include "cli.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "adt/document.hpp"
#include "adt/errors.hpp"
#include "adt/io.hpp"
#include "adt/layout.hpp"
#include "adt/service.hpp"
#include "adt/term.hpp"
#include "adt/treediff.hpp"

namespace adt::cli {

namespace {

using nlohmann::json;

/// Bad flag values found after CLI11 parsing; maps to exit code 2.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string readFile(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw FormatError("cannot read '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void writeOutput(const std::string &path, const std::string &bytes, std::ostream &out) {
    if (path.empty() || path == "-") {
        out << bytes;
        return;
    }
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    f << bytes;
    if (!f)
        throw FormatError("cannot write '" + path + "'");
}

Document loadFile(const std::string &path, const DomainRegistry &registry) {
    return load(readFile(path), registry);
}

struct EvalOptions {
    std::string file;
    std::string instance;
    std::string domain;
    std::vector<std::string> params;
    std::vector<std::string> sets;
    bool json = false;
};

int cmdValidate(const std::string &file, const DomainRegistry &registry, std::ostream &out,
                std::ostream &err) {
    Document doc;
    try {
        doc = loadFile(file, registry);
    } catch (const Error &e) {
        err << file << ": " << e.what() << "\n";
        return kInputError;
    }
    std::vector<std::string> problems;
    for (const auto &v : validate_tree(doc.tree))
        problems.push_back("node " + std::to_string(v.node.value) + ": " +
                           std::string(to_string(v.reason)));
    for (auto &p : check_document(doc, registry))
        problems.push_back(std::move(p));
    for (const auto &w : lint_term(tree_to_term(doc.tree).term))
        err << file << ": warning: " << w << "\n";
    if (problems.empty()) {
        out << file << ": ok (" << doc.tree.size() << " nodes, " << doc.domains.size()
            << " domain instances)\n";
        return kOk;
    }
    for (const auto &p : problems)
        out << file << ": " << p << "\n";
    return kInputError;
}

std::pair<std::string, std::string> splitAssignment(const std::string &s, const char *flag) {
    auto eq = s.rfind('=');
    if (eq == std::string::npos || eq == 0)
        throw UsageError(std::string(flag) + " expects key=value, got '" + s + "'");
    return {s.substr(0, eq), s.substr(eq + 1)};
}

int cmdEval(const EvalOptions &o, const DomainRegistry &registry, std::ostream &out) {
    Document doc = loadFile(o.file, registry);
    std::string instanceId = o.instance;
    if (!o.domain.empty()) {
        Params params;
        for (const auto &p : o.params) {
            auto [k, v] = splitAssignment(p, "--param");
            double d = 0;
            auto r = std::from_chars(v.data(), v.data() + v.size(), d);
            if (r.ec != std::errc() || r.ptr != v.data() + v.size())
                throw UsageError("--param " + k + " expects a number, got '" + v + "'");
            params[k] = d;
        }
        instanceId = attach_domain(doc, registry, o.domain, params);
    }
    const DomainInstance &inst = doc.getInstance(instanceId);
    auto domain = registry.get(inst.domainId);
    for (const auto &s : o.sets) {
        auto [k, v] = splitAssignment(s, "--set");
        auto key = parse_action_key(k);
        if (!key)
            throw UsageError("--set key must look like p:label or o:label, got '" + k + "'");
        Value value;
        try {
            value = parse_value(domain->kind, v);
        } catch (const ValueOutOfDomain &e) {
            throw UsageError("--set " + k + ": " + e.what());
        }
        set_document_value(doc, registry, instanceId, *key, value);
    }

    EvaluationResult r = evaluate_instance(doc, registry, instanceId);
    if (o.json) {
        json j = evaluation_to_json(doc.tree, *domain, r);
        j["instanceId"] = instanceId;
        out << j.dump(2) << "\n";
        return kOk;
    }
    std::vector<NodeIndex> order;
    for (NodeIndex v : doc.tree.preorder())
        if (v != AdTree::kRoot)
            order.push_back(v);
    order.push_back(AdTree::kRoot);
    std::size_t width = 5;
    for (NodeIndex v : order)
        width = std::max(width, doc.tree.node(v).label.size());
    out << std::left << std::setw(static_cast<int>(width)) << "label"
        << "  player     value\n";
    for (NodeIndex v : order) {
        const Node &n = doc.tree.node(v);
        out << std::left << std::setw(static_cast<int>(width)) << n.label << "  "
            << std::setw(9) << to_string(n.player) << "  " << format_value(domain->kind, r.at(n.id))
            << "\n";
    }
    if (const bool *b = std::get_if<bool>(&r.rootDisplay))
        out << "root: " << (*b ? "true" : "false") << " ("
            << domain->rootPredicate->description << ")\n";
    else
        out << "root: " << format_value(domain->kind, r.rootValue) << "\n";
    for (const auto &w : r.warnings)
        out << "warning: " << w << "\n";
    return kOk;
}

int cmdRender(const std::string &file, const std::string &format, const std::string &output,
              const std::string &overlayId, bool fold, const DomainRegistry &registry,
              std::ostream &out) {
    Document doc = loadFile(file, registry);
    ExportStyle style;
    style.rootRole = doc.rootRole;
    LayoutResult placement = layout(doc.tree, style.geometry, fold);
    std::optional<EvaluationResult> result;
    std::optional<ExportOverlay> overlay;
    if (!overlayId.empty()) {
        const DomainInstance &inst = doc.getInstance(overlayId);
        result = evaluate_instance(doc, registry, overlayId);
        overlay = ExportOverlay{&*result, registry.get(inst.domainId)->kind};
    }
    writeOutput(output,
                format == "svg" ? export_svg(doc.tree, placement, style, overlay)
                                : export_tikz(doc.tree, placement, style, overlay),
                out);
    return kOk;
}

int cmdTerm(const std::string &file, const std::string &apply, const std::string &output,
            const DomainRegistry &registry, std::ostream &out, std::ostream &err) {
    Document doc = loadFile(file, registry);
    if (apply.empty()) {
        out << print_term(tree_to_term(doc.tree).term) << "\n";
        return kOk;
    }
    const std::string text = readFile(apply);
    Term term = [&] {
        try {
            return parse_term(text);
        } catch (const SpannedError &e) {
            const SourceSpan &s = e.span();
            err << apply << ":" << s.startLine << ":" << s.startCol << ": ";
            throw;
        }
    }();
    ReconcileResult r = reconcile(doc, term, registry);
    const ReconcileSummary &s = r.summary;
    err << "matched " << s.matched << ", inserted " << s.inserted << ", deleted " << s.deleted
        << ", relabeled " << s.relabeled << "\n";
    writeOutput(output, save(r.document, registry), out);
    return kOk;
}

int cmdDiff(const std::string &a, const std::string &b, bool asJson,
            const DomainRegistry &registry, std::ostream &out) {
    Document da = loadFile(a, registry);
    Document db = loadFile(b, registry);
    TreeDiff d = tree_edit_distance(da.tree, db.tree);
    if (asJson) {
        out << to_json(d).dump(2) << "\n";
        return kOk;
    }
    out << "distance: " << d.cost << "\n";
    for (const auto &op : d.script.ops) {
        switch (op.kind) {
        case EditOp::Kind::Relabel:
            out << "relabel " << op.nodeA->value << " '"
                << da.tree.node(da.tree.indexOf(*op.nodeA)).label << "' -> '"
                << db.tree.node(db.tree.indexOf(*op.nodeB)).label << "'\n";
            break;
        case EditOp::Kind::Delete:
            out << "delete " << op.nodeA->value << " '"
                << da.tree.node(da.tree.indexOf(*op.nodeA)).label << "'\n";
            break;
        case EditOp::Kind::Insert:
            out << "insert '" << db.tree.node(db.tree.indexOf(*op.nodeB)).label << "' under ";
            if (op.parentB)
                out << op.parentB->value;
            else
                out << "(root)";
            out << " at " << op.position << "\n";
            break;
        }
    }
    return kOk;
}

int cmdServe(const std::string &listen, const std::string &dir, std::ostream &err) {
    auto [host, port] = parse_listen_address(listen);
    ServiceConfig config;
    if (!dir.empty()) {
        if (!std::filesystem::is_directory(dir))
            throw UsageError("--dir '" + dir + "' is not a directory");
        config.documentDir = dir;
    }
    Service service(config);
    HttpServer server(service);
    err << "listening on " << host << ":" << port << "\n";
    server.run(host, port);
    return kOk;
}

} // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
    CLI::App app{"Attack-defense tree tool", "adtool"};
    app.require_subcommand(1);

    std::string fileA, fileB, format, output, overlay, apply, listen = "127.0.0.1:8345", dir;
    bool asJson = false, fold = false;
    EvalOptions ev;

    auto *validate = app.add_subcommand("validate", "Check a .adt file");
    validate->add_option("file", fileA, ".adt file")->required();

    auto *eval = app.add_subcommand("eval", "Evaluate a domain instance");
    eval->add_option("file", ev.file, ".adt file")->required();
    auto *inst = eval->add_option("--instance", ev.instance, "Instance id stored in the file");
    auto *dom = eval->add_option("--domain", ev.domain, "Attach a fresh instance of this domain");
    inst->excludes(dom);
    eval->add_option("--param", ev.params, "Domain parameter, name=value")->needs(dom);
    eval->add_option("--set", ev.sets, "Basic action value, p:label=value or o:label=value");
    eval->add_flag("--json", ev.json, "JSON output");

    auto *render = app.add_subcommand("render", "Draw the tree as SVG or TikZ");
    render->add_option("file", fileA, ".adt file")->required();
    render->add_option("--format", format, "svg or tikz")
        ->required()
        ->check(CLI::IsMember({"svg", "tikz"}));
    render->add_option("-o,--output", output, "Output file (default stdout)");
    render->add_option("--overlay", overlay, "Annotate nodes with this instance's values");
    render->add_flag("--fold", fold, "Hide the descendants of folded nodes");

    auto *term = app.add_subcommand("term", "Print the ADTerm, or reconcile the file to a term");
    term->add_option("file", fileA, ".adt file")->required();
    term->add_option("--apply", apply, "Term file to reconcile the document with");
    term->add_option("-o,--output", output, "Output .adt file (default stdout)");

    auto *diff = app.add_subcommand("diff", "Tree edit distance and edit script");
    diff->add_option("a", fileA, "First .adt file")->required();
    diff->add_option("b", fileB, "Second .adt file")->required();
    diff->add_flag("--json", asJson, "JSON output");

    auto *serve = app.add_subcommand("serve", "Run the HTTP document service");
    serve->add_option("--listen", listen, "host:port")->envname("ADT_LISTEN");
    serve->add_option("--dir", dir, "Document directory")->envname("ADT_DIR");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    DomainRegistry registry;
    try {
        if (validate->parsed())
            return cmdValidate(fileA, registry, out, err);
        if (eval->parsed()) {
            if (ev.instance.empty() && ev.domain.empty())
                throw UsageError("eval needs --instance or --domain");
            return cmdEval(ev, registry, out);
        }
        if (render->parsed())
            return cmdRender(fileA, format, output, overlay, fold, registry, out);
        if (term->parsed()) {
            if (!output.empty() && apply.empty())
                throw UsageError("-o is only used with --apply");
            return cmdTerm(fileA, apply, output, registry, out, err);
        }
        if (diff->parsed())
            return cmdDiff(fileA, fileB, asJson, registry, out);
        if (serve->parsed())
            return cmdServe(listen, dir, err);
    } catch (const UsageError &e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::invalid_argument &e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const Error &e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const std::exception &e) {
        err << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kUsage;
}

} // namespace adt::cli
