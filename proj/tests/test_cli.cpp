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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "adt/io.hpp"
#include "adt/service.hpp"
#include "adt/term.hpp"
#include "cli.hpp"

namespace adt {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome adtool(std::vector<std::string> args) {
    args.insert(args.begin(), "adtool");
    std::vector<const char *> argv;
    for (const auto &a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path &p) {
    std::ifstream f(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(f), {}};
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("adt-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()) +
                "-" + std::to_string(::getpid()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write(const std::string &name, const std::string &content) {
        fs::path p = dir_ / name;
        std::ofstream(p, std::ios::binary) << content;
        return p.string();
    }

    std::string docFile(const std::string &name, const std::string &term,
                        const std::vector<std::string> &domains = {}) {
        Document d;
        d.tree = term_to_tree(parse_term(term));
        for (const auto &id : domains)
            attach_domain(d, registry_, id);
        return write(name, save(d, registry_));
    }

    fs::path dir_;
    DomainRegistry registry_;
};

TEST_F(Cli, Validate) {
    Outcome r = adtool({"validate", docFile("a.adt", "c_p(or_p(a, b), d)")});
    EXPECT_EQ(r.code, cli::kOk);
    EXPECT_NE(r.out.find("ok (4 nodes"), std::string::npos);
    r = adtool({"validate", write("bad.adt", "{\"format\": \"adt-json\", \"version\": 2}")});
    EXPECT_EQ(r.code, cli::kInputError);
    EXPECT_NE(r.err.find("UnsupportedVersion"), std::string::npos);
    r = adtool({"validate", (dir_ / "missing.adt").string()});
    EXPECT_EQ(r.code, cli::kInputError);
}

TEST_F(Cli, UsageErrors) {
    EXPECT_EQ(adtool({}).code, cli::kUsage);
    EXPECT_EQ(adtool({"frobnicate"}).code, cli::kUsage);
    EXPECT_EQ(adtool({"eval"}).code, cli::kUsage);
    const std::string f = docFile("a.adt", "or_p(a, b)", {"min-cost"});
    EXPECT_EQ(adtool({"eval", f, "--instance", "i1", "--domain", "min-cost"}).code, cli::kUsage);
    EXPECT_EQ(adtool({"render", f, "--format", "png"}).code, cli::kUsage);
    Outcome r = adtool({"eval", f, "--instance", "i1", "--set", "p:a=banana"});
    EXPECT_EQ(r.code, cli::kUsage);
    EXPECT_NE(r.err.find("non-negative"), std::string::npos) << r.err;
    EXPECT_EQ(adtool({"eval", f, "--instance", "i1", "--set", "q:a=1"}).code, cli::kUsage);
    EXPECT_EQ(adtool({"--help"}).code, cli::kOk);
}

TEST_F(Cli, EvalDefaultsAreInfinite) {
    const std::string f = docFile("a.adt", "and_p(a, b)");
    Outcome r = adtool({"eval", f, "--domain", "min-cost"});
    EXPECT_EQ(r.code, cli::kOk);
    EXPECT_NE(r.out.find("root: inf"), std::string::npos) << r.out;
    r = adtool({"eval", f, "--domain", "min-cost", "--json"});
    EXPECT_EQ(json::parse(r.out)["rootValue"], "inf");
}

TEST_F(Cli, EvalWithValues) {
    const std::string f = docFile("a.adt", "c_p(or_p(a, b), d)");
    Outcome r = adtool({"eval", f, "--domain", "min-cost", "--set", "p:a=10", "--set", "p:b=7",
                    "--set", "o:d=5"});
    EXPECT_EQ(r.code, cli::kOk);
    EXPECT_NE(r.out.find("root: 12"), std::string::npos) << r.out;
    r = adtool({"eval", f, "--domain", "reachability-within-k", "--param", "k=3", "--set",
                "p:a=2", "--set", "o:d=0"});
    EXPECT_NE(r.out.find("root: true"), std::string::npos) << r.out;
    r = adtool({"eval", f, "--domain", "satisfiability", "--set", "p:a=true"});
    EXPECT_NE(r.out.find("root: false"), std::string::npos) << r.out;
    EXPECT_EQ(adtool({"eval", f, "--instance", "i4"}).code, cli::kInputError);
}

TEST_F(Cli, EvalJsonMatchesService) {
    const std::string f = docFile("a.adt", "or_p(and_p(x, y), c_p(x, z))", {"min-time-sequential"});
    Outcome r = adtool({"eval", f, "--instance", "i1", "--set", "p:x=2", "--set", "p:y=4", "--json",
                    "--set", "o:z=1"});
    ASSERT_EQ(r.code, cli::kOk) << r.err;
    json cliJson = json::parse(r.out);

    Service s;
    std::string id = json::parse(s.handle("POST", "/documents", {}, slurp(f)).body)["docId"];
    for (auto [player, label, v] : {std::tuple{"p", "x", 2}, {"p", "y", 4}, {"o", "z", 1}}) {
        auto ver = json::parse(s.handle("GET", "/documents/" + id, {}, "").body)["version"];
        s.handle("PUT", "/documents/" + id + "/valuations/i1", {},
                 json{{"baseVersion", ver}, {"player", player}, {"label", label}, {"value", v}}.dump());
    }
    json svc = json::parse(s.handle("GET", "/documents/" + id + "/evaluation/i1", {}, "").body);
    svc.erase("version");
    EXPECT_EQ(cliJson, svc);
}

TEST_F(Cli, RenderFormats) {
    const std::string f = docFile("a.adt", "and_p(a, b, c)", {"min-cost"});
    Outcome r = adtool({"render", f, "--format", "svg"});
    EXPECT_EQ(r.code, cli::kOk);
    EXPECT_NE(r.out.find("<svg"), std::string::npos);
    const std::string out = (dir_ / "x.tex").string();
    r = adtool({"render", f, "--format", "tikz", "-o", out, "--overlay", "i1"});
    EXPECT_EQ(r.code, cli::kOk);
    EXPECT_NE(slurp(out).find("\\begin{tikzpicture}"), std::string::npos);
    EXPECT_NE(slurp(out).find("inf"), std::string::npos);
    EXPECT_EQ(adtool({"render", f, "--format", "svg", "--overlay", "i9"}).code, cli::kInputError);
    EXPECT_EQ(adtool({"render", f}).code, cli::kUsage);
}

TEST_F(Cli, TermPrintAndApply) {
    const std::string f = docFile("a.adt", "c_p(or_p(a, b), d)", {"min-cost"});
    Outcome r = adtool({"term", f});
    EXPECT_EQ(r.out, "c_p(or_p(a, b), d)\n");

    const std::string same = write("same.term", r.out);
    const std::string out = (dir_ / "out.adt").string();
    r = adtool({"term", f, "--apply", same, "-o", out});
    EXPECT_EQ(r.code, cli::kOk) << r.err;
    EXPECT_EQ(slurp(out), slurp(f));

    const std::string grown = write("grown.term", "c_p(or_p(a, b, e), d)");
    r = adtool({"term", f, "--apply", grown});
    EXPECT_EQ(r.code, cli::kOk);
    EXPECT_NE(r.err.find("inserted 1"), std::string::npos);
    Document d = load(r.out, registry_);
    EXPECT_EQ(print_term(tree_to_term(d.tree).term), "c_p(or_p(a, b, e), d)");

    r = adtool({"term", f, "--apply", write("broken.term", "or_p(a,")});
    EXPECT_EQ(r.code, cli::kInputError);
    EXPECT_NE(r.err.find(":1:8:"), std::string::npos) << r.err;
}

TEST_F(Cli, Diff) {
    const std::string a = docFile("a.adt", "or_p(a, b, c)");
    const std::string b = docFile("b.adt", "or_p(a, x, c, d)");
    Outcome r = adtool({"diff", a, a});
    EXPECT_EQ(r.code, cli::kOk);
    EXPECT_EQ(r.out, "distance: 0\n");
    r = adtool({"diff", a, a, "--json"});
    EXPECT_EQ(json::parse(r.out)["distance"], 0);
    EXPECT_TRUE(json::parse(r.out)["script"].empty());
    r = adtool({"diff", a, b});
    EXPECT_NE(r.out.find("distance: 2"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("relabel"), std::string::npos);
    EXPECT_NE(r.out.find("insert 'd'"), std::string::npos);
}

TEST_F(Cli, ExitCodesFromTheBinary) {
    const std::string f = docFile("a.adt", "or_p(a, b)");
    auto status = [](const std::string &cmd) {
        int s = std::system((cmd + " >/dev/null 2>&1").c_str());
        return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
    };
    const std::string exe = ADTOOL_EXE;
    EXPECT_EQ(status(exe + " validate " + f), 0);
    EXPECT_EQ(status(exe + " validate " + (dir_ / "nope.adt").string()), 1);
    EXPECT_EQ(status(exe + " bogus"), 2);
}

} // namespace
} // namespace adt
