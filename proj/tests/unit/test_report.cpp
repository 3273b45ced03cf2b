#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "parabolic/report.hpp"

using namespace parabolic;
using namespace parabolic::report;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("parabolic_test_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

} // namespace

TEST(Config, ParsesPresetsAndCustomFamilies) {
  const auto cfg = parse_config_text(R"({
    "schema": "parabolic-config/1",
    "seed": 5,
    "maps": [
      {"id": "g", "family": "poly-displacement", "coeff": 1.0, "roots": [[0, 2], [1, 2]]},
      {"id": "h", "preset": "F2", "reflect": true}
    ],
    "analyses": [
      {"type": "analyze", "map": "g"},
      {"type": "growth", "map": "F3", "N": 20}
    ]
  })");
  EXPECT_EQ(cfg.seed, 5u);
  ASSERT_EQ(cfg.analyses.size(), 2u);
  ASSERT_EQ(cfg.maps.size(), 3u); // F3 pulled in from the catalogue
  const auto g = build_map(cfg.maps[0]);
  EXPECT_DOUBLE_EQ(g.eval(0.5), 0.5625);
  const auto h = build_map(cfg.maps[1]);
  EXPECT_DOUBLE_EQ(h.eval(0.5), 0.4375);
}

TEST(Config, ErrorsNameTheField) {
  auto message = [](const std::string& text) {
    try {
      parse_config_text(text);
    } catch (const ConfigError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  EXPECT_NE(message(R"({"analyses": [{"type": "growth", "map": "F1", "N": "x"}]})").find("analyses[0].N"),
            std::string::npos);
  EXPECT_NE(message(R"({"analyses": [{"type": "dance", "map": "F1"}]})").find("analyses[0].type"),
            std::string::npos);
  EXPECT_NE(message(R"({"analyses": [{"type": "growth", "map": "nope"}]})").find("not defined"), std::string::npos);
  EXPECT_NE(message(R"({"schema": "other/2"})").find("schema"), std::string::npos);
  EXPECT_NE(message("{ broken").find("parse error"), std::string::npos);
  EXPECT_NE(message(R"({"analyses": [{"type": "growth", "map": "F1", "N": 0}]})").find("analyses[0].N"),
            std::string::npos);
}

TEST(Config, HashIsStable) {
  const std::string text = R"({"seed": 3, "analyses": []})";
  EXPECT_EQ(parse_config_text(text).hash(), parse_config_text(text).hash());
  EXPECT_NE(parse_config_text(text).hash(), parse_config_text(R"({"seed": 4, "analyses": []})").hash());
  EXPECT_EQ(hex64(fnv1a("")), "cbf29ce484222325");
}

TEST(Run, GrowthWritesCsvAndReport) {
  const auto dir = scratch("growth");
  const auto cfg = parse_config_text(R"({"analyses": [{"type": "growth", "name": "g2", "map": "F2", "N": 30}]})");
  const auto rep = run(cfg, {dir, {}});
  ASSERT_EQ(rep.results.size(), 1u);
  const auto& r = rep.results[0];
  EXPECT_EQ(r.status, "ok") << r.error;
  EXPECT_TRUE(r.passed());
  ASSERT_FALSE(r.files.empty());
  const std::string csv = slurp(r.files.front());
  std::istringstream lines(csv);
  std::string header;
  std::getline(lines, header);
  EXPECT_EQ(header.rfind("n,", 0), 0u);
  int count = 0;
  for (std::string l; std::getline(lines, l);) ++count;
  EXPECT_EQ(count, 30);
  const auto j = json::parse(slurp(dir / "report.json"));
  EXPECT_EQ(j.at("schema"), kReportSchema);
  EXPECT_EQ(j.at("config_hash"), cfg.hash());
  EXPECT_EQ(j.at("analyses").size(), 1u);
}

TEST(Run, FailuresAreIsolated) {
  const auto cfg = parse_config_text(R"({"analyses": [
    {"type": "limit", "map": "F2", "N": 50},
    {"type": "analyze", "map": "F5"}
  ]})");
  const auto rep = run(cfg);
  ASSERT_EQ(rep.results.size(), 2u);
  EXPECT_EQ(rep.results[0].status, "error");
  EXPECT_FALSE(rep.results[0].error.empty());
  EXPECT_EQ(rep.results[1].status, "ok");
  EXPECT_FALSE(rep.all_pass());
}

TEST(Run, Deterministic) {
  const auto cfg = parse_config_text(R"({"analyses": [{"type": "growth", "map": "F3", "N": 25}]})");
  const auto a = to_json(run(cfg)), b = to_json(run(cfg));
  EXPECT_EQ(a.at("analyses").dump(), b.at("analyses").dump());
}

TEST(PlotData, EmptySeriesIsRejected) {
  const auto dir = scratch("plot");
  Series s;
  EXPECT_THROW(emit_plot_data(s, dir / "x.dat"), UsageError);
  emit_plot_data(s, dir / "x.dat", true);
  s.quantity = "gamma";
  s.push(1, 1.5);
  s.push(2, 2.25);
  emit_plot_data(s, dir / "y.dat");
  EXPECT_EQ(slurp(dir / "y.dat"), "# n gamma\n1 1.5\n2 2.25\n");
}

TEST(Json, LogNumberSerialization) {
  const auto j = to_json(LogNumber::nested(-1, 1, 2.5, {-1, 1}));
  EXPECT_EQ(j.at("sign"), -1);
  EXPECT_EQ(j.at("level"), 1);
  EXPECT_DOUBLE_EQ(j.at("mag").get<double>(), 2.5);
  EXPECT_EQ(j.at("inner_signs").size(), 1u);
}
