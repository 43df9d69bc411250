#include <gtest/gtest.h>

#include <filesystem>

#include "support.hpp"

using namespace futura;
using testing_support::data_path;
using testing_support::four_timelines;

namespace {

std::vector<std::string> violations_of(const Json& j) {
  try {
    (void)model_from_json(j);
  } catch (const ModelError& e) {
    return e.violations();
  }
  return {};
}

} // namespace

TEST(ModelJson, RoundTripsFixtures) {
  for (const char* name : {"four_timelines.json", "sea.json"}) {
    const TreeModel m = load_model(data_path(name));
    EXPECT_EQ(model_from_json(to_json(m)), m) << name;
    EXPECT_EQ(model_from_json(Json::parse(to_json(m).dump())), m) << name;
  }
  EXPECT_EQ(load_model(data_path("sea.json")), sea_battle::model());
}

TEST(ModelJson, RoundTripsEnumeratedModels) {
  const auto models = enumerate_models({"p", "q"}, 2, 2);
  for (std::size_t k = 0; k < models.size(); k += 13)
    ASSERT_EQ(model_from_json(to_json(models[k])), models[k]);
}

TEST(ModelJson, SaveThenLoad) {
  const auto path = std::filesystem::temp_directory_path() / "futura_serialize_test.json";
  save_model(four_timelines(), path.string());
  EXPECT_EQ(load_model(path.string()), four_timelines());
  std::filesystem::remove(path);
}

TEST(ModelJson, NodesAreWrittenBreadthFirst) {
  const Json j = to_json(four_timelines());
  std::vector<std::string> ids;
  for (const auto& [id, node] : j["nodes"].items())
    ids.push_back(id);
  EXPECT_EQ(ids.front(), "w0");
  EXPECT_EQ(ids.size(), four_timelines().size());
  EXPECT_EQ(j["depth"], 3);
}

TEST(ModelJson, LoaderReportsEveryShapeProblem) {
  const Json bad = Json::parse(R"({"root": 3, "nodes": {"a": {"atoms": [1], "children": "b"}}})");
  const auto problems = violations_of(bad);
  EXPECT_EQ(problems.size(), 4u);
  EXPECT_FALSE(violations_of(Json::array()).empty());
}

TEST(ModelJson, LoaderRejectsInvalidModels) {
  // Unequal leaf depth, a dangling child and an uppercase atom.
  const Json bad = Json::parse(R"({"root": "r", "depth": 2, "nodes": {
    "r": {"atoms": ["P"], "children": ["a", "b"]},
    "a": {"atoms": [], "children": ["c", "zz"]},
    "b": {"atoms": [], "children": []},
    "c": {"atoms": [], "children": []}}})");
  EXPECT_GE(violations_of(bad).size(), 2u);
  EXPECT_THROW(load_model(data_path("does-not-exist.json")), Error);
}

TEST(ModelJson, LoaderRejectsMalformedText) {
  const auto path = std::filesystem::temp_directory_path() / "futura_serialize_bad.json";
  {
    std::ofstream out(path);
    out << "{\"root\": ";
  }
  EXPECT_THROW(load_model(path.string()), ModelError);
  std::filesystem::remove(path);
}

TEST(VerdictJson, RoundTripsBothOutcomes) {
  const Verdict refuted = check_entails(sea_battle::premises(), sea_battle::conclusion(), Scale{{"s"}, 2, 2});
  const Json j = to_json(refuted, "entails");
  EXPECT_EQ(j["query"], "entails");
  EXPECT_EQ(j["result"], "counterexample");
  const Verdict back = verdict_from_json(Json::parse(j.dump()));
  EXPECT_EQ(back.scale, refuted.scale);
  EXPECT_EQ(back.models_checked, refuted.models_checked);
  ASSERT_TRUE(back.counterexample);
  EXPECT_EQ(back.counterexample->model, refuted.counterexample->model);
  EXPECT_EQ(back.counterexample->timeline, refuted.counterexample->timeline);
  EXPECT_EQ(back.counterexample->index, refuted.counterexample->index);

  const Verdict valid = check_valid(parse("X p | X ~p"), Scale{{"p"}, 2, 2, Strategy::Exhaustive});
  const Json k = to_json(valid, "valid");
  EXPECT_EQ(k["result"], "no-counterexample-at-scale");
  EXPECT_FALSE(k.contains("counterexample"));
  const Verdict back2 = verdict_from_json(k);
  EXPECT_TRUE(back2.no_counterexample_at_scale());
  EXPECT_EQ(back2.scale.strategy, Strategy::Exhaustive);
}

TEST(VerdictJson, RejectsUnknownResult) {
  Json j = to_json(check_valid(top(), Scale{{"p"}, 1, 1}), "valid");
  j["result"] = "maybe";
  EXPECT_THROW(verdict_from_json(j), Error);
  j = to_json(Scale{{"p"}, 1, 1});
  j["strategy"] = "guess";
  EXPECT_THROW(scale_from_json(j), Error);
}

TEST(TraceJson, RoundTrips) {
  FormulaProfile profile{10, Fragment::XL, {"p", "q"}, 2};
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const Formula f = random_formula(profile, seed);
    const Reduction r = reduce_to_xa(f);
    const Json j = to_json(r, f);
    ASSERT_EQ(parse(j["input"].get<std::string>()), f);
    ASSERT_EQ(parse(j["result"].get<std::string>()), r.result);
    const RewriteTrace back = trace_from_json(Json::parse(j.dump()));
    ASSERT_EQ(back.size(), r.trace.size());
    for (std::size_t k = 0; k < back.size(); ++k) {
      ASSERT_EQ(back[k].rule, r.trace[k].rule);
      ASSERT_EQ(back[k].before, r.trace[k].before);
      ASSERT_EQ(back[k].after, r.trace[k].after);
    }
  }
}
