#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "document.hpp"
#include "runner.hpp"

using namespace lalg::cli;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string job(const std::string& name) { return slurp(std::filesystem::path(LALG_JOBS_DIR) / (name + ".json")); }

json run_json(const std::string& text, RunOptions opts = {}) {
  opts.json = true;
  RunOutput out = run(text, opts);
  EXPECT_TRUE(out.err.empty()) << out.err;
  return json::parse(out.out);
}

const json& find_op(const json& doc, const std::string& op, std::size_t nth = 0) {
  for (const auto& r : doc["results"])
    if (r["op"] == op && nth-- == 0) return r;
  throw std::runtime_error("no result for " + op);
}

}  // namespace

TEST(Document, PositionsOfValues) {
  Document doc = Document::parse("{\n  \"a\": [1,\n    {\"b\": 2}]\n}");
  EXPECT_EQ(doc.locate("/a/1/b"), std::make_pair(std::size_t{3}, std::size_t{6}));
  EXPECT_EQ(doc.locate("/a/1/missing").first, 3u);
}

TEST(Document, DuplicateKeysRejected) {
  try {
    Document::parse("{\"a\": 1,\n \"a\": 2}");
    FAIL();
  } catch (const SchemaError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Document, FloatsMustBeExactStrings) {
  Document doc = Document::parse("{\"x\": 0.5}");
  Node root(doc, doc.root(), "");
  EXPECT_THROW(root.at("x").scalar_text(), SchemaError);
}

TEST(Runner, Su2ValidatesAndHasExpectedCohomology) {
  RunOptions opts;
  RunOutput out = run(job("su2"), opts);
  EXPECT_EQ(out.exit_code, 0) << out.out << out.err;
  json doc = run_json(job("su2"));
  EXPECT_EQ(doc["status"], "ok");
  EXPECT_EQ(find_op(doc, "validate")["valid"], true);
  EXPECT_EQ(find_op(doc, "cohomology")["betti"], json({1, 0, 0, 1}));
}

TEST(Runner, PerturbedSu2ReportsJacobi) {
  RunOutput out = run(job("su2-perturbed"), {});
  EXPECT_EQ(out.exit_code, 1);
  EXPECT_NE(out.out.find("jacobi"), std::string::npos);
}

TEST(Runner, SphereEulerCharacteristic) {
  json doc = run_json(job("sphere-stereographic"));
  const json& r = find_op(doc, "index");
  EXPECT_NEAR(r["value"].get<double>(), 2.0, 1e-6);
  EXPECT_LT(r["error"].get<double>(), 1e-6);
}

TEST(Runner, TorusEulerCharacteristicIsExactZero) {
  json doc = run_json(job("torus-flat"));
  EXPECT_EQ(find_op(doc, "index")["exact"], "0");
}

TEST(Runner, GroupoidJobs) {
  json pair = run_json(job("pair-groupoid-3"));
  EXPECT_EQ(find_op(pair, "groupoid")["betti"], json({1, 0, 0, 0}));
  json z2 = run_json(job("z2-group"));
  EXPECT_EQ(find_op(z2, "groupoid")["betti"], json({1, 0, 0, 0}));
}

TEST(Runner, EveryBundledJobIsDeterministic) {
  for (const auto& entry : std::filesystem::directory_iterator(LALG_JOBS_DIR)) {
    std::string text = slurp(entry.path());
    for (bool as_json : {false, true}) {
      RunOptions opts;
      opts.json = as_json;
      RunOutput a = run(text, opts), b = run(text, opts);
      EXPECT_EQ(a.out, b.out) << entry.path();
      EXPECT_EQ(a.exit_code, b.exit_code);
    }
    RunOptions par;
    par.parallel = true;
    EXPECT_EQ(run(text, {}).out, run(text, par).out) << entry.path();
  }
}

TEST(Runner, CommandFiltersComputations) {
  RunOptions opts;
  opts.command = "modular";
  json doc = run_json(job("aff1"), opts);
  ASSERT_EQ(doc["results"].size(), 1u);
  EXPECT_EQ(doc["results"][0]["invariant"], false);
  EXPECT_EQ(doc["results"][0]["cocycle"], json::parse(R"([[[1],"1"]])"));
}

TEST(Runner, ValidateWithoutRequestsChecksEveryAlgebroid) {
  RunOptions opts;
  opts.command = "validate";
  json doc = run_json(job("pair-groupoid-3"), opts);
  EXPECT_TRUE(doc["results"].empty());
  doc = run_json(R"({"algebroids": {"a": {"kind": "builtin", "name": "su2"}, "b": {"kind": "tangent", "dim": 2}}})",
                 opts);
  EXPECT_EQ(doc["results"].size(), 2u);
}

TEST(Runner, TruncateFlagOverridesDocument) {
  const char* text = R"({"computations": [{"op": "roots", "identity": "dirac", "half_rank": 1, "truncate": 8}]})";
  RunOptions opts;
  opts.truncate = 4;
  json doc = run_json(text, opts);
  EXPECT_EQ(doc["results"][0]["truncation"], 4);
}

TEST(Runner, SemanticErrorsArePositioned) {
  const char* text = R"({
  "algebroids": {"g": {"kind": "builtin", "name": "aff1"}},
  "metrics": {"m": {"algebroid": "g", "identity": true}},
  "densities": {"w": {"algebroid": "g", "omega": "1"}},
  "domains": {"p": {"kind": "point"}},
  "computations": [
    {"op": "index", "kind": "euler", "metric": "m", "density": "w", "domain": "p"}
  ]
})";
  RunOptions opts;
  opts.json = true;
  RunOutput out = run(text, opts);
  EXPECT_EQ(out.exit_code, 1);
  json doc = json::parse(out.out);
  const json& r = doc["results"][0];
  EXPECT_EQ(r["status"], "error");
  EXPECT_EQ(r["line"], 7);
  EXPECT_NE(r["error"].get<std::string>().find("not invariant"), std::string::npos);
}

TEST(Runner, NonInvariantWeightsGiveCounterexample) {
  const char* text = R"({
  "groupoids": {"p": {"kind": "pair", "n": 3}},
  "computations": [{"op": "groupoid", "groupoid": "p", "weights": ["1", "2", "3"]}]
})";
  RunOutput out = run(text, {});
  EXPECT_EQ(out.exit_code, 1);
  EXPECT_NE(out.out.find("counterexample"), std::string::npos);
}

TEST(Runner, SchemaErrorsExitTwo) {
  struct Case {
    const char* text;
    std::size_t line;
  };
  for (const Case& c : {Case{"{\n  \"computations\": [ {\"op\": \"roots\", }\n]}", 2},
                        Case{"{\n  \"computations\": [\n    {\"op\": \"roots\", \"identity\": \"dirac\", \"half_rank\": -1}]}", 3},
                        Case{"{\n  \"algebroids\": {\"a\": {\"kind\": \"lie_algebra\", \"dim\": 2,\n    \"brackets\": [[1, 2, 2, 0.5]]}},\n  \"computations\": [{\"op\": \"validate\", \"algebroid\": \"a\"}]}", 3},
                        Case{"{\"computations\": [{\"op\": \"integrate\"}]}", 1},
                        Case{"{\"mystery\": 1}", 1},
                        Case{"[1, 2]", 1}}) {
    RunOutput out = run(c.text, {});
    EXPECT_EQ(out.exit_code, 2) << c.text;
    EXPECT_NE(out.err.find("line " + std::to_string(c.line)), std::string::npos) << out.err;
  }
}

TEST(Runner, UnknownReferenceIsSchemaError) {
  RunOutput out = run(R"({"computations": [{"op": "validate", "algebroid": "nope"}]})", {});
  EXPECT_EQ(out.exit_code, 2);
  EXPECT_NE(out.err.find("nope"), std::string::npos);
}

TEST(Runner, ThomCheckAgreesOnBundledExamples) {
  for (const char* name : {"su2", "torus-flat", "sphere-stereographic", "so3-action"}) {
    json doc = run_json(job(name));
    bool seen = false;
    for (const auto& r : doc["results"])
      if (r["op"] == "thom-check") {
        seen = true;
        EXPECT_EQ(r["agree"], true) << name;
        EXPECT_EQ(r["fiber_integral_round_trip"], true) << name;
      }
    EXPECT_TRUE(seen) << name;
  }
}
