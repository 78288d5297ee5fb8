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

#include "adt/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <variant>

#include "adt/errors.hpp"

namespace adt {

using nlohmann::json;

namespace {

const std::set<std::string> kNodeFields{"id",       "label",   "refinement",
                                        "children", "counter", "folded"};
const std::set<std::string> kDomainFields{"instanceId", "domainId", "params", "valuations",
                                          "userSet"};
const std::set<std::string> kTopFields{"format", "version", "rootRole", "root", "domains"};

json extrasOf(const json &obj, const std::set<std::string> &known) {
    json out = json::object();
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!known.count(it.key()))
            out[it.key()] = it.value();
    return out;
}

void mergeExtras(json &obj, const json &extra) {
    if (!extra.is_object())
        return;
    for (auto it = extra.begin(); it != extra.end(); ++it)
        if (!obj.contains(it.key()))
            obj[it.key()] = it.value();
}

json nodeToJson(const Document &doc, NodeIndex v) {
    const Node &n = doc.tree.node(v);
    json children = json::array();
    for (NodeIndex c : n.children)
        children.push_back(nodeToJson(doc, c));
    json j{{"id", n.id.value},
           {"label", n.label},
           {"refinement", to_string(n.refinement)},
           {"folded", n.folded},
           {"children", std::move(children)},
           {"counter", n.counter() ? nodeToJson(doc, *n.counter()) : json()}};
    if (auto it = doc.nodeExtra.find(n.id); it != doc.nodeExtra.end())
        mergeExtras(j, it->second);
    return j;
}

[[noreturn]] void formatFail(const std::string &msg) {
    throw FormatError(msg);
}

const json &field(const json &obj, const char *key, const std::string &where) {
    if (!obj.contains(key))
        formatFail(where + " is missing field '" + key + "'");
    return obj[key];
}

struct NodeFields {
    NodeId id;
    std::string label;
    Refinement refinement = Refinement::Or;
    bool folded = false;
    json extra;
};

NodeFields readNodeFields(const json &j) {
    if (!j.is_object())
        formatFail("node record must be an object");
    NodeFields f;
    const json &id = field(j, "id", "node record");
    if (!id.is_number_unsigned() && !(id.is_number_integer() && id.get<std::int64_t>() >= 0))
        formatFail("node id must be a non-negative integer");
    f.id = NodeId{id.get<std::uint64_t>()};
    const std::string where = "node " + std::to_string(f.id.value);
    const json &label = field(j, "label", where);
    if (!label.is_string())
        formatFail(where + ": label must be a string");
    f.label = label.get<std::string>();
    if (j.contains("refinement")) {
        const json &r = j["refinement"];
        if (r == "AND")
            f.refinement = Refinement::And;
        else if (r == "OR")
            f.refinement = Refinement::Or;
        else
            formatFail(where + ": refinement must be \"AND\" or \"OR\"");
    }
    if (j.contains("folded")) {
        if (!j["folded"].is_boolean())
            formatFail(where + ": folded must be a boolean");
        f.folded = j["folded"].get<bool>();
    }
    if (j.contains("children") && !j["children"].is_array() && !j["children"].is_null())
        formatFail(where + ": children must be an array");
    if (j.contains("counter") && !j["counter"].is_object() && !j["counter"].is_null())
        formatFail(where + ": counter must be a node record or null");
    f.extra = extrasOf(j, kNodeFields);
    return f;
}

void readSubtree(const json &j, AdTree &tree, NodeIndex self, Document &doc) {
    struct Pending {
        const json *record;
        NodeIndex index;
    };
    std::vector<Pending> stack{{&j, self}};
    while (!stack.empty()) {
        Pending p = stack.back();
        stack.pop_back();
        const json &rec = *p.record;
        auto attach = [&](const json &childRec, bool counter) {
            NodeFields f = readNodeFields(childRec);
            NodeIndex c = counter ? tree.addCounter(p.index, f.label, f.id, std::nullopt,
                                                    f.refinement)
                                  : tree.addChild(p.index, f.label, f.id, std::nullopt,
                                                  f.refinement);
            tree.setFolded(c, f.folded);
            if (!f.extra.empty())
                doc.nodeExtra[f.id] = std::move(f.extra);
            stack.push_back({&childRec, c});
        };
        if (rec.contains("children") && rec["children"].is_array())
            for (const json &c : rec["children"])
                attach(c, false);
        if (rec.contains("counter") && rec["counter"].is_object())
            attach(rec["counter"], true);
    }
}

DomainInstance readInstance(const json &j, const Document &doc, const DomainRegistry &registry) {
    if (!j.is_object())
        formatFail("domain record must be an object");
    DomainInstance inst;
    const json &iid = field(j, "instanceId", "domain record");
    const json &did = field(j, "domainId", "domain record");
    if (!iid.is_string() || !did.is_string())
        formatFail("domain record: instanceId and domainId must be strings");
    inst.instanceId = iid.get<std::string>();
    inst.domainId = did.get<std::string>();
    const std::string where = "domain instance '" + inst.instanceId + "'";

    Params given;
    if (j.contains("params") && !j["params"].is_null()) {
        if (!j["params"].is_object())
            formatFail(where + ": params must be an object");
        for (auto it = j["params"].begin(); it != j["params"].end(); ++it) {
            if (!it.value().is_number())
                formatFail(where + ": parameter '" + it.key() + "' must be a number");
            given[it.key()] = it.value().get<double>();
        }
    }
    const json empty = json::object();
    const json &vals = j.contains("valuations") ? j["valuations"] : empty;
    if (!vals.is_object())
        formatFail(where + ": valuations must be an object");
    std::set<ActionKey> userSet;
    if (j.contains("userSet")) {
        if (!j["userSet"].is_array())
            formatFail(where + ": userSet must be an array");
        for (const json &k : j["userSet"]) {
            auto key = k.is_string() ? parse_action_key(k.get<std::string>()) : std::nullopt;
            if (!key)
                formatFail(where + ": malformed userSet key " + k.dump());
            userSet.insert(*key);
        }
    }
    inst.extra = extrasOf(j, kDomainFields);

    auto domain = registry.find(inst.domainId);
    if (!domain)
        throw IntegrityError(where + " uses unknown domain '" + inst.domainId + "'");
    try {
        inst.params = resolve_params(*domain, given);
    } catch (const DomainDefinitionError &e) {
        throw IntegrityError(where + ": " + e.what());
    }
    inst.valuations = init_valuation(doc.tree, *domain, inst.instanceId);
    for (auto it = vals.begin(); it != vals.end(); ++it) {
        auto key = parse_action_key(it.key());
        if (!key)
            formatFail(where + ": malformed valuation key '" + it.key() + "'");
        auto entry = inst.valuations.entries.find(*key);
        if (entry == inst.valuations.entries.end())
            throw IntegrityError(where + " values " + it.key() +
                                 ", which is not a basic action of the tree");
        try {
            entry->second.value = value_from_json(domain->kind, it.value());
        } catch (const ValueOutOfDomain &e) {
            throw IntegrityError(where + ", " + it.key() + ": " + e.what());
        }
        entry->second.provenance = userSet.count(*key) ? Provenance::UserSet : Provenance::Default;
    }
    for (const auto &key : userSet)
        if (!vals.contains(to_string(key)))
            throw IntegrityError(where + ": userSet names " + to_string(key) +
                                 " without a value");
    return inst;
}

} // namespace

json document_to_json(const Document &doc, const DomainRegistry &registry) {
    json domains = json::array();
    for (const auto &inst : doc.domains) {
        auto domain = registry.get(inst.domainId);
        json vals = json::object();
        json userSet = json::array();
        for (const auto &[key, entry] : inst.valuations.entries) {
            vals[to_string(key)] = value_to_json(domain->kind, entry.value);
            if (entry.provenance == Provenance::UserSet)
                userSet.push_back(to_string(key));
        }
        json params = json::object();
        for (const auto &[k, v] : inst.params)
            params[k] = v;
        json rec{{"instanceId", inst.instanceId},
                 {"domainId", inst.domainId},
                 {"params", std::move(params)},
                 {"valuations", std::move(vals)},
                 {"userSet", std::move(userSet)}};
        mergeExtras(rec, inst.extra);
        domains.push_back(std::move(rec));
    }
    json out{{"format", kFormatTag},
             {"version", kFormatVersion},
             {"rootRole", to_string(doc.rootRole)},
             {"root", nodeToJson(doc, AdTree::kRoot)},
             {"domains", std::move(domains)}};
    mergeExtras(out, doc.extra);
    return out;
}

Document document_from_json(const json &j, const DomainRegistry &registry) {
    if (!j.is_object())
        formatFail("document must be a JSON object");
    const json &format = field(j, "format", "document");
    if (format != kFormatTag)
        formatFail("wrong format tag " + format.dump() + ", expected \"adt-json\"");
    const json &version = field(j, "version", "document");
    if (!version.is_number_integer())
        formatFail("version must be an integer");
    if (version.get<std::int64_t>() > kFormatVersion)
        formatFail("UnsupportedVersion: file version " + version.dump() +
                   " is newer than supported version 1");
    if (version.get<std::int64_t>() < 1)
        formatFail("invalid version " + version.dump());

    Document doc;
    if (j.contains("rootRole")) {
        const json &role = j["rootRole"];
        if (role == "attacker")
            doc.rootRole = RootRole::Attacker;
        else if (role == "defender")
            doc.rootRole = RootRole::Defender;
        else
            formatFail("rootRole must be \"attacker\" or \"defender\"");
    }

    const json &root = field(j, "root", "document");
    NodeFields rf = readNodeFields(root);
    doc.tree = AdTree(rf.label, rf.id, Player::Proponent);
    doc.tree.setRefinement(AdTree::kRoot, rf.refinement);
    doc.tree.setFolded(AdTree::kRoot, rf.folded);
    if (!rf.extra.empty())
        doc.nodeExtra[rf.id] = std::move(rf.extra);
    readSubtree(root, doc.tree, AdTree::kRoot, doc);

    auto violations = validate_tree(doc.tree);
    if (!violations.empty())
        throw IntegrityError("invalid tree: " + std::string(to_string(violations.front().reason)) +
                             " at node " + std::to_string(violations.front().node.value));

    if (j.contains("domains") && !j["domains"].is_null()) {
        if (!j["domains"].is_array())
            formatFail("domains must be an array");
        std::set<std::string> ids;
        for (const json &rec : j["domains"]) {
            DomainInstance inst = readInstance(rec, doc, registry);
            if (!ids.insert(inst.instanceId).second)
                throw IntegrityError("duplicate domain instance id '" + inst.instanceId + "'");
            doc.domains.push_back(std::move(inst));
        }
    }
    doc.extra = extrasOf(j, kTopFields);
    return doc;
}

std::string save(const Document &doc, const DomainRegistry &registry) {
    return document_to_json(doc, registry).dump(2) + "\n";
}

Document load(std::string_view bytes, const DomainRegistry &registry) {
    json j;
    try {
        j = json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error &e) {
        throw FormatError(std::string("invalid JSON: ") + e.what());
    }
    return document_from_json(j, registry);
}

json evaluation_to_json(const AdTree &tree, const AttributeDomain &domain,
                        const EvaluationResult &result) {
    json nodes = json::array();
    for (NodeIndex v : tree.preorder()) {
        const Node &n = tree.node(v);
        auto it = result.perNode.find(n.id);
        if (it == result.perNode.end())
            continue;
        nodes.push_back({{"id", n.id.value},
                         {"label", n.label},
                         {"player", to_string(n.player)},
                         {"value", value_to_json(domain.kind, it->second)}});
    }
    json display;
    if (const bool *b = std::get_if<bool>(&result.rootDisplay))
        display = *b;
    else
        display = value_to_json(domain.kind, std::get<Value>(result.rootDisplay));
    return {{"domainId", domain.id},
            {"valueKind", to_string(domain.kind)},
            {"perNode", std::move(nodes)},
            {"rootValue", value_to_json(domain.kind, result.rootValue)},
            {"rootDisplay", std::move(display)},
            {"warnings", result.warnings}};
}

json layout_to_json(const AdTree &tree, const LayoutResult &placement) {
    json positions = json::array();
    for (NodeIndex v : tree.preorder()) {
        const NodeId id = tree.node(v).id;
        auto it = placement.positions.find(id);
        if (it != placement.positions.end())
            positions.push_back({{"id", id.value}, {"x", it->second.x}, {"y", it->second.y}});
    }
    const Bounds &b = placement.bounds;
    return {{"positions", std::move(positions)},
            {"bounds", {{"minX", b.minX}, {"minY", b.minY}, {"maxX", b.maxX}, {"maxY", b.maxY}}}};
}

// ---------------------------------------------------------------------------
// Export

std::string xml_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        case '\'':
            out += "&apos;";
            break;
        default:
            // XML 1.0 forbids most control characters outright.
            if (static_cast<unsigned char>(c) < 0x20 && c != '\t' && c != '\n' && c != '\r')
                out += ' ';
            else
                out += c;
        }
    }
    return out;
}

std::string latex_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '\\':
            out += "\\textbackslash{}";
            break;
        case '{':
        case '}':
        case '#':
        case '$':
        case '%':
        case '&':
        case '_':
            out += '\\';
            out += c;
            break;
        case '^':
            out += "\\textasciicircum{}";
            break;
        case '~':
            out += "\\textasciitilde{}";
            break;
        case '\n':
        case '\r':
            out += ' ';
            break;
        default:
            out += c;
        }
    }
    return out;
}

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s = buf;
    if (s == "-0.00")
        s = "0.00";
    return s;
}

bool isAttacker(Player p, RootRole role) {
    return (p == Player::Proponent) == (role == RootRole::Attacker);
}

struct EdgeGeometry {
    Point from, to;
};

// Edge from the bottom of the parent to the top of the child.
EdgeGeometry edgeBetween(Point parent, Point child, const LayoutConfig &g) {
    return {{parent.x, parent.y + g.nodeHeight / 2}, {child.x, child.y - g.nodeHeight / 2}};
}

// Endpoints of the AND arc: points on the first and last child edges at a
// fixed distance below the parent.
std::pair<Point, Point> andArc(const EdgeGeometry &first, const EdgeGeometry &last,
                               double radius) {
    auto along = [&](const EdgeGeometry &e) {
        double dx = e.to.x - e.from.x, dy = e.to.y - e.from.y;
        double len = std::hypot(dx, dy);
        if (len == 0)
            return e.from;
        return Point{e.from.x + dx / len * radius, e.from.y + dy / len * radius};
    };
    Point a = along(first), b = along(last);
    if (std::fabs(a.x - b.x) < 1e-9) {
        a.x -= radius / 2;
        b.x += radius / 2;
    }
    return {a, b};
}

std::string valueText(const std::optional<ExportOverlay> &overlay, NodeId id) {
    if (!overlay || !overlay->result)
        return {};
    auto it = overlay->result->perNode.find(id);
    if (it == overlay->result->perNode.end())
        return {};
    return format_value(overlay->kind, it->second);
}

constexpr double kArcRadius = 18;

} // namespace

std::string export_svg(const AdTree &tree, const LayoutResult &placement, const ExportStyle &style,
                       std::optional<ExportOverlay> overlay) {
    const LayoutConfig &g = style.geometry;
    const Bounds &b = placement.bounds;
    const double w = b.maxX - b.minX + 2 * style.margin;
    const double h = b.maxY - b.minY + 2 * style.margin;

    std::string edges, arcs, nodes;
    for (NodeIndex v : tree.preorder()) {
        const Node &n = tree.node(v);
        auto self = placement.positions.find(n.id);
        if (self == placement.positions.end())
            continue;
        const bool attacker = isAttacker(n.player, style.rootRole);
        const std::string cls = std::string("node ") + std::string(to_string(n.player)) +
                                (attacker ? " attacker" : " defender") +
                                (n.folded ? " folded" : "");
        const Point p = self->second;
        if (attacker) {
            nodes += "<ellipse class=\"" + cls + "\" data-id=\"" + std::to_string(n.id.value) +
                     "\" cx=\"" + num(p.x) + "\" cy=\"" + num(p.y) + "\" rx=\"" +
                     num(g.nodeWidth / 2) + "\" ry=\"" + num(g.nodeHeight / 2) + "\"/>\n";
        } else {
            nodes += "<rect class=\"" + cls + "\" data-id=\"" + std::to_string(n.id.value) +
                     "\" x=\"" + num(p.x - g.nodeWidth / 2) + "\" y=\"" +
                     num(p.y - g.nodeHeight / 2) + "\" width=\"" + num(g.nodeWidth) +
                     "\" height=\"" + num(g.nodeHeight) + "\"/>\n";
        }
        const std::string value = valueText(overlay, n.id);
        const double labelY = value.empty() ? p.y : p.y - 6;
        nodes += "<text class=\"label\" x=\"" + num(p.x) + "\" y=\"" + num(labelY) + "\">" +
                 xml_escape(n.label) + "</text>\n";
        if (!value.empty())
            nodes += "<text class=\"value\" x=\"" + num(p.x) + "\" y=\"" + num(p.y + 10) + "\">" +
                     xml_escape(value) + "</text>\n";

        std::vector<EdgeGeometry> refining;
        for (NodeIndex c : n.children) {
            auto cp = placement.positions.find(tree.node(c).id);
            if (cp == placement.positions.end())
                continue;
            EdgeGeometry e = edgeBetween(p, cp->second, g);
            refining.push_back(e);
            edges += "<line class=\"edge refinement\" x1=\"" + num(e.from.x) + "\" y1=\"" +
                     num(e.from.y) + "\" x2=\"" + num(e.to.x) + "\" y2=\"" + num(e.to.y) +
                     "\"/>\n";
        }
        if (n.refinement == Refinement::And && !refining.empty()) {
            auto [a, z] = andArc(refining.front(), refining.back(), kArcRadius);
            arcs += "<path class=\"and-arc\" d=\"M " + num(a.x) + " " + num(a.y) + " A " +
                    num(kArcRadius) + " " + num(kArcRadius) + " 0 0 0 " + num(z.x) + " " +
                    num(z.y) + "\"/>\n";
        }
        if (auto c = n.counter()) {
            auto cp = placement.positions.find(tree.node(*c).id);
            if (cp != placement.positions.end()) {
                EdgeGeometry e = edgeBetween(p, cp->second, g);
                edges += "<line class=\"edge counter\" stroke-dasharray=\"6,4\" x1=\"" +
                         num(e.from.x) + "\" y1=\"" + num(e.from.y) + "\" x2=\"" + num(e.to.x) +
                         "\" y2=\"" + num(e.to.y) + "\"/>\n";
            }
        }
    }

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(w) +
           "\" height=\"" + num(h) + "\" viewBox=\"" + num(b.minX - style.margin) + " " +
           num(b.minY - style.margin) + " " + num(w) + " " + num(h) + "\">\n";
    out += "<style>\n"
           ".attacker { fill: #f8d0d0; stroke: #b00000; stroke-width: 1.5; }\n"
           ".defender { fill: #d0f0d0; stroke: #007000; stroke-width: 1.5; }\n"
           ".folded { stroke-width: 3; }\n"
           ".edge { stroke: #202020; stroke-width: 1.2; }\n"
           ".and-arc { fill: none; stroke: #202020; stroke-width: 1.2; }\n"
           "text { font-family: sans-serif; font-size: 12px; text-anchor: middle; "
           "dominant-baseline: middle; }\n"
           ".value { font-size: 10px; font-style: italic; }\n"
           "</style>\n";
    out += "<g class=\"edges\">\n" + edges + arcs + "</g>\n";
    out += "<g class=\"nodes\">\n" + nodes + "</g>\n";
    out += "</svg>\n";
    return out;
}

std::string export_tikz(const AdTree &tree, const LayoutResult &placement,
                        const ExportStyle &style, std::optional<ExportOverlay> overlay) {
    const LayoutConfig &g = style.geometry;
    std::string body;
    std::string edges;
    auto name = [](NodeId id) { return "n" + std::to_string(id.value); };
    for (NodeIndex v : tree.preorder()) {
        const Node &n = tree.node(v);
        auto self = placement.positions.find(n.id);
        if (self == placement.positions.end())
            continue;
        const Point p = self->second;
        const std::string value = valueText(overlay, n.id);
        std::string text = latex_escape(n.label);
        if (!value.empty())
            text += "\\\\ \\footnotesize " + latex_escape(value);
        body += "  \\node[" +
                std::string(isAttacker(n.player, style.rootRole) ? "attacker" : "defender") +
                (n.folded ? ", folded" : "") + "] (" + name(n.id) + ") at (" + num(p.x) + ", " +
                num(p.y) + ") {" + text + "};\n";

        std::vector<EdgeGeometry> refining;
        for (NodeIndex c : n.children) {
            const NodeId cid = tree.node(c).id;
            auto cp = placement.positions.find(cid);
            if (cp == placement.positions.end())
                continue;
            refining.push_back(edgeBetween(p, cp->second, g));
            edges += "  \\draw[refinement edge] (" + name(n.id) + ".south) -- (" + name(cid) +
                     ".north);\n";
        }
        if (n.refinement == Refinement::And && !refining.empty()) {
            auto [a, z] = andArc(refining.front(), refining.back(), kArcRadius);
            edges += "  \\draw[and arc] (" + num(a.x) + ", " + num(a.y) + ") .. controls (" +
                     num(p.x) + ", " + num(p.y + g.nodeHeight / 2 + kArcRadius * 1.3) +
                     ") .. (" + num(z.x) + ", " + num(z.y) + ");\n";
        }
        if (auto c = n.counter()) {
            const NodeId cid = tree.node(*c).id;
            if (placement.positions.count(cid))
                edges += "  \\draw[counter edge] (" + name(n.id) + ".south) -- (" + name(cid) +
                         ".north);\n";
        }
    }

    std::string out;
    out += "\\documentclass[tikz,border=5pt]{standalone}\n";
    out += "\\usetikzlibrary{shapes.geometric}\n";
    out += "\\begin{document}\n";
    out += "\\begin{tikzpicture}[x=0.01cm, y=-0.01cm,\n";
    out += "  attacker/.style={ellipse, draw=red!70!black, fill=red!15, minimum width=" +
           num(g.nodeWidth / 100) + "cm, minimum height=" + num(g.nodeHeight / 100) +
           "cm, align=center, font=\\small},\n";
    out += "  defender/.style={rectangle, draw=green!50!black, fill=green!15, minimum width=" +
           num(g.nodeWidth / 100) + "cm, minimum height=" + num(g.nodeHeight / 100) +
           "cm, align=center, font=\\small},\n";
    out += "  folded/.style={line width=1.5pt},\n";
    out += "  refinement edge/.style={draw, solid},\n";
    out += "  counter edge/.style={draw, dashed},\n";
    out += "  and arc/.style={draw}]\n";
    out += body;
    out += edges;
    out += "\\end{tikzpicture}\n";
    out += "\\end{document}\n";
    return out;
}

} // namespace adt
