#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "okd/io.hpp"
#include "test_support.hpp"

namespace okd {
namespace {

TEST(InstanceJson, RoundTripsGeneratedInstances) {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const Instance inst = testing::random_instance(seed, seed, 1 + seed % 3, 12, 0.6);
    const Json j = to_json(inst);
    EXPECT_EQ(instance_from_json(Json::parse(j.dump())), inst);
  }
}

Json tiny() {
  return Json::parse(R"({"horizon": 3,
    "knapsacks": [{"capacity": 2, "theta": 4, "duration_lo": 1, "duration_hi": 2, "size_cap": 1}],
    "items": [{"id": 0, "arrival": 1,
               "options": [{"eligible": true, "size": 1, "value": 2, "start": 1, "duration": 2}]}]})");
}

TEST(InstanceJson, ParsesSchema) {
  const Instance inst = instance_from_json(tiny());
  EXPECT_EQ(inst.horizon, 3);
  EXPECT_EQ(inst.knapsacks[0].density_ratio, 4.0);
  EXPECT_EQ(inst.items[0].options[0].interval, (SlotInterval{1, 2}));
}

TEST(InstanceJson, RejectsUnknownMissingAndMistyped) {
  Json unknown = tiny();
  unknown["items"][0]["options"][0]["colour"] = "red";
  EXPECT_THROW(instance_from_json(unknown), FormatError);

  Json top = tiny();
  top["extra"] = 1;
  EXPECT_THROW(instance_from_json(top), FormatError);

  Json missing = tiny();
  missing["knapsacks"][0].erase("size_cap");
  EXPECT_THROW(instance_from_json(missing), FormatError);

  Json mistyped = tiny();
  mistyped["items"][0]["options"][0]["start"] = 1.5;
  EXPECT_THROW(instance_from_json(mistyped), FormatError);

  EXPECT_THROW(instance_from_json(Json::array()), FormatError);
}

TEST(SuiteJson, AcceptsThreeShapes) {
  EXPECT_EQ(suite_from_json(tiny()).size(), 1u);
  EXPECT_EQ(suite_from_json(Json::array({tiny(), tiny()})).size(), 2u);
  const auto s = suite_from_json(Json{{"instances", Json::array({tiny(), tiny(), tiny()})}});
  ASSERT_EQ(s.size(), 3u);
  EXPECT_EQ(s[2].id, "0002");
  EXPECT_THROW(suite_from_json(Json(3)), FormatError);
}

TEST(ThresholdConfigJson, NumberAutoAndErrors) {
  EXPECT_FALSE(threshold_config_from_json(Json::parse(R"({"kind":"exponential","gamma":"auto"})"))
                   .gamma.has_value());
  EXPECT_EQ(threshold_config_from_json(Json::parse(R"({"gamma": 2.5})")).gamma, 2.5);
  EXPECT_THROW(threshold_config_from_json(Json::parse(R"({"gamma": "fast"})")), FormatError);
  EXPECT_THROW(threshold_config_from_json(Json::parse(R"({"gamma": -1})")), FormatError);
  EXPECT_THROW(threshold_config_from_json(Json::parse(R"({"kind": "linear"})")), FormatError);
  EXPECT_EQ(to_json(ThresholdConfig{}).dump(), R"({"gamma":"auto","kind":"exponential"})");
}

TEST(RunResultJson, CarriesDecisionsProfitAndPhi) {
  const Instance inst = instance_from_json(tiny());
  const RunResult r = run(inst, make_thresholds(inst, {}));
  const Json j = to_json(r);
  EXPECT_EQ(j["profit"], 2.0);
  EXPECT_EQ(j["decisions"][0]["knapsack"], 0);
  EXPECT_EQ(j["items"][0]["phi"][0], 0.0);
  EXPECT_EQ(j["items"][0]["admitted"], true);
  EXPECT_EQ(j["final_utilization"][0].size(), 2u);
}

TEST(OfflineSolutionJson, Fields) {
  const Instance inst = instance_from_json(tiny());
  const Json j = to_json(solve_exact(inst));
  EXPECT_EQ(j["objective"], 2.0);
  EXPECT_EQ(j["proof"], "exact");
  EXPECT_EQ(j["assignment"], Json::array({0}));
}

TEST(ExperimentJson, GeneratesAndReadsFiles) {
  const auto dir = std::filesystem::temp_directory_path() / "okd_io_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "one.json") << tiny().dump();
  const Json config = Json::parse(R"({
    "instances": ["one.json",
                  {"generate": {"family": "uniform", "n": 4, "k": 2, "seed": 9}, "count": 3},
                  {"generate": {"family": "staircase", "theta": 8, "alpha": 1, "capacity": 1,
                                "duration_lo": 1, "t": 1, "levels": 3}}],
    "thresholds": {"kind": "exponential", "gamma": 1.25},
    "oracle": {"exact_cutoff": 30, "cross_check": false},
    "tuner": {"delta": 0.25, "grid_points": 5}})");
  const auto exp = experiment_from_json(config, dir);
  ASSERT_EQ(exp.instances.size(), 1u + 3u + 3u);
  EXPECT_EQ(exp.instances[6].id, "0006");
  EXPECT_EQ(exp.bench.thresholds.gamma, 1.25);
  EXPECT_EQ(exp.bench.oracle.exact_cutoff, 30u);
  EXPECT_FALSE(exp.bench.oracle.cross_check);
  EXPECT_EQ(exp.tuner_delta, 0.25);
  EXPECT_EQ(exp.tuner_grid_points, 5u);
  EXPECT_NE(exp.instances[1].instance, exp.instances[2].instance);  // seeds 9, 10

  EXPECT_THROW(experiment_from_json(Json::parse(R"({"instances": [], "bogus": 1})"), dir),
               FormatError);
  std::filesystem::remove_all(dir);
}

TEST(ReadJson, ErrorsNameThePath) {
  try {
    read_json("/nonexistent/x.json");
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/x.json"), std::string::npos);
  }
}

}  // namespace
}  // namespace okd
