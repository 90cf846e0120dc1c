#include <doctest.h>

#include "runner.hpp"

using namespace pchaos::cli;

namespace {

ExperimentConfig config(const std::string& experiment) {
  ExperimentConfig c;
  c.experiment = experiment;
  c.n = 4;
  c.samples = 20;
  return c;
}

}  // namespace

TEST_CASE("settings parse and diagnose") {
  ExperimentConfig c;
  apply_setting(c, "--n", "5");
  apply_setting(c, "t_grid", "0:4:9");
  apply_setting(c, "cut", "0, 2");
  apply_setting(c, "kwise", "4");
  CHECK(c.n == 5);
  REQUIRE(c.t_grid);
  CHECK(c.t_grid->points().size() == 9);
  CHECK(c.t_grid->points().back() == 4.0);
  CHECK(c.cut == std::vector<unsigned>{0, 2});
  CHECK(c.kwise == 4u);
  CHECK_THROWS_AS(apply_setting(c, "n", "five"), UsageError);
  CHECK_THROWS_AS(apply_setting(c, "n", "-1"), UsageError);
  CHECK_THROWS_AS(apply_setting(c, "colour", "red"), UsageError);
  CHECK_THROWS_AS(apply_setting(c, "t-grid", "0:4"), UsageError);
}

TEST_CASE("config text") {
  const auto kv = parse_config_text("# comment\nn = 6\n\nensemble=pseudo # trailing\n");
  CHECK(kv.at("n") == "6");
  CHECK(kv.at("ensemble") == "pseudo");
  CHECK_THROWS_AS(parse_config_text("n 6\n"), UsageError);
}

TEST_CASE("validation") {
  auto c = config("spacing");
  CHECK_NOTHROW(validate(c));
  c.ensemble = "goe";
  CHECK_THROWS_AS(validate(c), UsageError);
  c = config("nope");
  CHECK_THROWS_AS(validate(c), UsageError);
  c = config("spacing");
  c.dtilde = 3;
  CHECK_THROWS_AS(validate(c), UsageError);
  c = config("spacing");
  c.cut = {4};
  CHECK_THROWS_AS(validate(c), UsageError);
}

TEST_CASE("every experiment runs and is reproducible") {
  for (const auto& name : experiment_names()) {
    auto c = config(name);
    c.t = 0.5;
    c.t_grid = TimeGrid{0.0, 2.0, 3};
    c.n = name == "marginals" ? 3 : (name == "gibbs" ? 3 : 4);
    c.dtilde = 4;
    c.threads = 1;
    const auto a = compute_experiment(c);
    c.threads = 3;
    const auto b = compute_experiment(c);
    CAPTURE(name);
    CHECK(!a.table.header.empty());
    CHECK(!a.table.rows.empty());
    CHECK(table_csv(a.table) == table_csv(b.table));
    CHECK(a.converged);
  }
}

TEST_CASE("config hash ignores threads and paths") {
  auto c = config("sign");
  const auto h = config_hash(c);
  c.threads = 7;
  c.out = "x.csv";
  CHECK(config_hash(c) == h);
  c.seed = 2;
  CHECK(config_hash(c) != h);
  RunRecord rec;
  rec.config = c;
  const auto m = manifest_json(rec);
  CHECK(m.find("\"schema\": 1") != std::string::npos);
}

TEST_CASE("svg output") {
  PlotSeries one;
  one.kind = PlotSeries::Kind::Histogram;
  one.x = {0.0};
  one.y = {3.0};
  one.bin_width = 1.0;
  const auto svg = emit_svg(one, "abc");
  std::size_t rects = 0;
  for (auto p = svg.find("<rect"); p != std::string::npos; p = svg.find("<rect", p + 1)) ++rects;
  CHECK(rects == 2);  // background plus the single bin
  CHECK(svg.find("config-hash:abc") != std::string::npos);
  CHECK(emit_svg(one, "abc") == svg);
  CHECK_THROWS_AS(emit_svg(PlotSeries{}, "abc"), std::invalid_argument);

  PlotSeries line;
  line.x = {0.0, 1.0, 2.0, 4.0};
  line.y = {1.0, 0.5, 0.2, 0.1};
  const auto l = emit_svg(line, "h");
  const auto pts = l.substr(l.find("points=\"") + 8);
  std::istringstream is(pts.substr(0, pts.find('"')));
  double prev = -1, x, y;
  char comma;
  while (is >> x >> comma >> y) {
    CHECK(x > prev);
    prev = x;
  }
}

TEST_CASE("exit codes") {
  auto c = config("spacing");
  c.ensemble = "nope";
  CHECK(run_experiment(c) == kExitUsage);
  auto g = config("gibbs");
  g.n = 1;
  g.beta = 8.0;
  g.samples = 1;
  g.ensemble = "diag-iid";
  g.dtilde = 0;
  // Both levels of this draw sit well above -1, so acceptance per attempt is
  // far below the inverse budget.
  g.seed = 3;
  CHECK(run_experiment(g) == kExitBudget);
}
