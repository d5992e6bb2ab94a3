#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "pigp/stats.hpp"
#include "pigp/stats_impl.hpp"
#include "pigp/trace_io.hpp"

using namespace pigp;

TEST_CASE("cumulative sums") {
  const std::vector<double> v{1.0, 2.5, -0.5};
  const auto c = cumulative_sum(v);
  REQUIRE(c.size() == 3);
  CHECK(c[0] == 1.0);
  CHECK(c[1] == 3.5);
  CHECK(c[2] == 3.0);
  CHECK(cumulative_sum(std::vector<double>{}).empty());
}

TEST_CASE("top hat smoothing") {
  // constants are fixed points regardless of window
  const std::vector<double> flat(50, 2.0);
  for (std::size_t w : {1u, 5u, 200u}) {
    const auto s = top_hat_smooth(flat, w);
    REQUIRE(s.size() == flat.size());
    for (double x : s) CHECK(x == doctest::Approx(2.0).epsilon(1e-14));
  }

  // hand example: window 3 truncates at the edges
  const std::vector<double> v{1.0, 2.0, 3.0};
  const auto s = top_hat_smooth(v, 3);
  CHECK(s[0] == doctest::Approx(1.5));
  CHECK(s[1] == doctest::Approx(2.0));
  CHECK(s[2] == doctest::Approx(2.5));

  // window 1 is the identity
  const auto id = top_hat_smooth(v, 1);
  CHECK(id == v);
}

TEST_CASE("percentiles interpolate linearly") {
  std::vector<double> v{4.0, 1.0, 3.0, 2.0};
  CHECK(percentile(v, 0.0) == 1.0);
  CHECK(percentile(v, 100.0) == 4.0);
  CHECK(percentile(v, 50.0) == doctest::Approx(2.5));
  CHECK(percentile(v, 25.0) == doctest::Approx(1.75));
  CHECK(median(std::vector<double>{3.0, 1.0, 2.0}) == 2.0);
  CHECK(median(std::vector<double>{1.0, 2.0}) == doctest::Approx(1.5));
  CHECK_THROWS(median(std::vector<double>{}));
}

TEST_CASE("log-log slope recovers exact power laws") {
  std::vector<double> x, y;
  for (int t = 1; t <= 100; ++t) {
    x.push_back(t);
    y.push_back(3.0 * std::pow(t, 0.7));
  }
  CHECK(loglog_slope(x, y) == doctest::Approx(0.7).epsilon(1e-12));
  std::vector<double> bad{0.0, 1.0};
  CHECK_THROWS(loglog_slope(bad, bad));
}

TEST_CASE("parallel map preserves order and propagates failures") {
  std::vector<int> items(100);
  for (int i = 0; i < 100; ++i) items[i] = i;
  const auto out =
      parallel_map(items, [](int v) { return v * v; }, 4);
  REQUIRE(out.size() == 100);
  for (int i = 0; i < 100; ++i) CHECK(out[i] == i * i);

  CHECK_THROWS_AS(parallel_map(
                      items,
                      [](int v) -> int {
                        if (v == 41) throw std::runtime_error("boom");
                        return v;
                      },
                      3),
                  std::runtime_error);
}

TEST_CASE("shortest round-trip double formatting") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 3.141592653589793, -0.0, 1e17}) {
    const std::string s = format_double(v);
    CHECK(parse_double(s) == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(2.0) == "2");
  CHECK_THROWS(parse_double("abc"));
  CHECK_THROWS(parse_double("1.5x"));
}

namespace {

RunTrace tiny_trace() {
  RunTrace tr;
  tr.algorithm = "pi-gp-ucb";
  tr.dim = 2;
  for (int t = 1; t <= 3; ++t) {
    StepRecord r;
    r.t = t;
    r.arm = static_cast<std::size_t>(10 * t);
    r.x = {0.1 * t, 1.0 / (3.0 * t)};
    r.y = 0.25 * t - 0.4;
    r.regret = 0.125 / t;
    r.ucb = 2.5 + t;
    r.element_id = t == 2 ? 7 : 3;
    r.n_splits = t == 3 ? 1 : 0;
    r.wall_clock_s = 1e-4 * t;
    tr.steps.push_back(std::move(r));
  }
  return tr;
}

}  // namespace

TEST_CASE("trace files round-trip bit for bit") {
  const RunTrace tr = tiny_trace();
  std::ostringstream out;
  write_trace_csv(out, tr, false);

  const std::string text = out.str();
  CHECK(text.substr(0, text.find('\n')) ==
        "t,x0,x1,y,regret,ucb,element_id,n_splits,wall_clock_s");

  std::istringstream in(text);
  const RunTrace back = read_trace_csv(in);
  CHECK(back.dim == 2);
  REQUIRE(back.steps.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back.steps[i].t == tr.steps[i].t);
    CHECK(back.steps[i].x == tr.steps[i].x);
    CHECK(back.steps[i].y == tr.steps[i].y);
    CHECK(back.steps[i].regret == tr.steps[i].regret);
    CHECK(back.steps[i].ucb == tr.steps[i].ucb);
    CHECK(back.steps[i].element_id == tr.steps[i].element_id);
    CHECK(back.steps[i].n_splits == tr.steps[i].n_splits);
    CHECK(back.steps[i].wall_clock_s == tr.steps[i].wall_clock_s);
  }
}

TEST_CASE("frozen timing zeroes exactly the last column") {
  const RunTrace tr = tiny_trace();
  std::ostringstream live, frozen;
  write_trace_csv(live, tr, false);
  write_trace_csv(frozen, tr, true);
  CHECK(live.str() != frozen.str());

  std::istringstream in(frozen.str());
  const RunTrace back = read_trace_csv(in);
  for (std::size_t i = 0; i < back.steps.size(); ++i) {
    CHECK(back.steps[i].wall_clock_s == 0.0);
    CHECK(back.steps[i].y == tr.steps[i].y);  // everything else untouched
  }
}

TEST_CASE("instance manifests round-trip exactly") {
  const KernelSpec k(1.5, 0.2, 2);
  const Problem p = Problem::synthetic(2, k, 9, 4242, 1.0);
  std::ostringstream out;
  write_problem_manifest(out, p);
  std::istringstream in(out.str());
  const Problem back = read_problem_manifest(in);

  CHECK(back.name() == p.name());
  CHECK(back.dim() == 2);
  CHECK(back.grid_per_axis() == 9);
  CHECK(back.noise().half_width == 1.0);
  REQUIRE(back.arm_count() == p.arm_count());
  for (std::size_t i = 0; i < p.arm_count(); ++i)
    CHECK(back.reward(i) == p.reward(i));
  REQUIRE(back.rkhs_norm().has_value());
  CHECK(*back.rkhs_norm() == *p.rkhs_norm());

  // a raw-reward instance takes the other branch
  const Problem bench = benchmark_problem("branin", 8, 0.1);
  std::ostringstream out2;
  write_problem_manifest(out2, bench);
  std::istringstream in2(out2.str());
  const Problem bench_back = read_problem_manifest(in2);
  CHECK(bench_back.name() == "branin");
  CHECK_FALSE(bench_back.rkhs_norm().has_value());
  for (std::size_t i = 0; i < bench.arm_count(); ++i)
    CHECK(bench_back.reward(i) == bench.reward(i));
}

TEST_CASE("run summaries serialise with flagged undefined fractions") {
  CHECK_FALSE(regret_fraction(1.0, 0.0).defined);
  CHECK_FALSE(regret_fraction(1.0, -2.0).defined);
  const FractionStat f = regret_fraction(2.0, 8.0);
  CHECK(f.defined);
  CHECK(f.value == 0.25);

  RunSummary s;
  s.problem = "synthetic-d1";
  s.dim = 1;
  s.horizon = 100;
  s.grid_per_axis = 30;
  s.nu = 1.5;
  s.ell = 0.2;
  s.delta = 0.1;
  s.alpha = 1.0;
  s.reference_algorithm = "uniform";
  AlgoSummary a;
  a.algorithm = "pi-gp-ucb";
  SeedOutcome o;
  o.seed = 3;
  o.total_regret = 12.5;
  a.seeds.push_back(o);
  a.median_regret = 12.5;
  a.fraction_vs_reference.push_back(regret_fraction(12.5, 50.0));
  a.median_fraction = regret_fraction(12.5, 50.0);
  s.algos.push_back(a);

  std::ostringstream out;
  write_summary_json(out, s);
  const std::string text = out.str();
  CHECK(text.find("\"pi-gp-ucb\"") != std::string::npos);
  CHECK(text.find("\"median_fraction_vs_reference\": 0.25") !=
        std::string::npos);
  CHECK(text.find("\"total_regret\": 12.5") != std::string::npos);

  // undefined fraction appears as null, never as a number
  a.median_fraction = regret_fraction(1.0, 0.0);
  s.algos[0] = a;
  std::ostringstream out2;
  write_summary_json(out2, s);
  CHECK(out2.str().find("\"median_fraction_vs_reference\": null") !=
        std::string::npos);
}

TEST_CASE("cover snapshots list every active element") {
  Cover c = Cover::initial(500, 1, 1.0 / 3.0);
  c.split(2, 5);
  std::ostringstream out;
  write_cover_snapshot(out, c.active());
  const std::string text = out.str();

  std::size_t lines = 0;
  std::istringstream in(text);
  std::string line;
  bool saw_child = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    ++lines;
    if (line.rfind("8 1 5 ", 0) == 0) saw_child = true;  // id level created_at
  }
  CHECK(lines == c.active().size());
  CHECK(saw_child);
}
