#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <set>
#include <vector>

#include "pigp/testbed.hpp"

using namespace pigp;

TEST_CASE("grid layout and indexing") {
  const PointSet g1 = make_grid(1, 5);
  REQUIRE(g1.size() == 5);
  for (int j = 0; j < 5; ++j) CHECK(g1[j][0] == doctest::Approx(j * 0.25));
  CHECK(g1[0][0] == 0.0);
  CHECK(g1[4][0] == 1.0);

  // first axis slowest
  const PointSet g2 = make_grid(2, 3);
  REQUIRE(g2.size() == 9);
  CHECK(g2[0][0] == 0.0);
  CHECK(g2[0][1] == 0.0);
  CHECK(g2[1][0] == 0.0);
  CHECK(g2[1][1] == 0.5);
  CHECK(g2[3][0] == 0.5);
  CHECK(g2[3][1] == 0.0);
  CHECK(g2[8][0] == 1.0);
  CHECK(g2[8][1] == 1.0);

  for (std::size_t arm = 0; arm < 9; ++arm) {
    const auto idx = arm_axis_indices(arm, 2, 3);
    CHECK(g2[arm][0] == doctest::Approx(idx[0] * 0.5));
    CHECK(g2[arm][1] == doctest::Approx(idx[1] * 0.5));
  }

  CHECK_THROWS(make_grid(0, 5));
  CHECK_THROWS(make_grid(1, 1));
  CHECK_THROWS(make_grid(4, 1000));  // too many arms
}

TEST_CASE("synthetic expansions are reproducible with an exact norm") {
  for (int dim : {1, 2}) {
    const KernelSpec k(1.5, 0.2, dim);
    const SyntheticRkhsFunction f = gen_synthetic(dim, k, 99);
    const SyntheticRkhsFunction f2 = gen_synthetic(dim, k, 99);
    const SyntheticRkhsFunction g = gen_synthetic(dim, k, 100);

    CHECK(f.centers.size() == static_cast<std::size_t>(30 * dim));
    CHECK(f.coeffs.size() == f.centers.size());
    for (std::size_t i = 0; i < f.centers.size(); ++i) {
      for (int a = 0; a < dim; ++a) {
        CHECK(f.centers[i][a] >= 0.0);
        CHECK(f.centers[i][a] <= 1.0);
        CHECK(f.centers[i][a] == f2.centers[i][a]);
      }
      CHECK(std::abs(f.coeffs[i]) <= 1.0);
      CHECK(f.coeffs[i] == f2.coeffs[i]);
    }
    CHECK(f.norm == f2.norm);
    CHECK(f.norm != g.norm);

    // norm matches the quadratic form through an independent dense path
    const Eigen::MatrixXd K = gram_matrix(k, f.centers);
    const Eigen::Map<const Eigen::VectorXd> a(f.coeffs.data(),
                                              static_cast<long>(f.coeffs.size()));
    CHECK(f.norm == doctest::Approx(std::sqrt(a.dot(K * a))).epsilon(1e-10));

    // eval agrees with the expansion written out longhand
    const std::vector<double> probe(dim, 0.35);
    double direct = 0.0;
    for (std::size_t i = 0; i < f.centers.size(); ++i)
      direct += f.coeffs[i] * matern_eval(k, f.centers[i], probe);
    CHECK(f.eval(probe) == doctest::Approx(direct).epsilon(1e-12));
  }
}

TEST_CASE("synthetic problem wires rewards to the expansion") {
  const KernelSpec k(1.5, 0.2, 2);
  const Problem p = Problem::synthetic(2, k, 10, 7, 1.0);
  CHECK(p.dim() == 2);
  CHECK(p.grid_per_axis() == 10);
  CHECK(p.arm_count() == 100);
  REQUIRE(p.source().has_value());
  REQUIRE(p.rkhs_norm().has_value());
  CHECK(*p.rkhs_norm() == p.source()->norm);

  double best = -1e300;
  for (std::size_t i = 0; i < p.arm_count(); ++i) {
    CHECK(p.reward(i) == doctest::Approx(p.source()->eval(p.arm(i))).epsilon(1e-12));
    CHECK(p.gap(i) >= 0.0);
    best = std::max(best, p.reward(i));
  }
  CHECK(p.fstar() == best);
}

TEST_CASE("noise is bounded and centred") {
  const NoiseModel nm{0.3};
  CHECK(nm.sub_gaussian_scale() == 0.3);
  Rng rng(5);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double e = nm.sample(rng);
    CHECK(e >= -0.3);
    CHECK(e <= 0.3);
    sum += e;
  }
  // mean of U[-hw,hw] has sd hw/sqrt(3n)
  CHECK(std::abs(sum / n) <= 3.0 * 0.3 / std::sqrt(3.0 * n));
}

TEST_CASE("classic surfaces hit their known optima") {
  // branin's three global minimisers share the value 0.397887
  CHECK(branin(-3.14159265358979, 12.275) ==
        doctest::Approx(0.39788735772973816).epsilon(1e-8));
  CHECK(branin(3.14159265358979, 2.275) ==
        doctest::Approx(0.39788735772973816).epsilon(1e-8));
  CHECK(branin(9.42478, 2.475) ==
        doctest::Approx(0.39788735772973816).epsilon(1e-7));

  CHECK(six_hump_camel(0.0898, -0.7126) ==
        doctest::Approx(-1.0316).epsilon(1e-4));
  CHECK(six_hump_camel(-0.0898, 0.7126) ==
        doctest::Approx(-1.0316).epsilon(1e-4));
  CHECK(goldstein_price(0.0, -1.0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(beale(3.0, 0.5) == doctest::Approx(0.0).scale(1).epsilon(1e-12));
}

TEST_CASE("benchmark instances are rescaled so the best arm scores one") {
  for (const BenchmarkFunction& bf : benchmark_functions()) {
    const Problem p = benchmark_problem(bf.name, 30, 0.1);
    CHECK(p.dim() == 2);
    CHECK(p.grid_per_axis() == 30);
    CHECK(p.arm_count() == 900);
    CHECK(p.noise().half_width == 0.1);
    CHECK_FALSE(p.rkhs_norm().has_value());

    double lo = 1e300, hi = -1e300;
    for (std::size_t i = 0; i < p.arm_count(); ++i) {
      lo = std::min(lo, p.reward(i));
      hi = std::max(hi, p.reward(i));
    }
    CHECK(lo == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(hi == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.fstar() == hi);

    // scaling flipped the sign: the best arm attains the raw minimum (a
    // surface with symmetric minimisers may hold it at several arms, so
    // compare values rather than indices)
    std::size_t best_arm = 0;
    double best = -1e300;
    for (std::size_t i = 0; i < p.arm_count(); ++i)
      if (p.reward(i) > best) {
        best = p.reward(i);
        best_arm = i;
      }
    auto raw_at = [&](std::size_t i) {
      const auto x = p.arm(i);
      return bf.fn(bf.lo0 + x[0] * (bf.hi0 - bf.lo0),
                   bf.lo1 + x[1] * (bf.hi1 - bf.lo1));
    };
    double raw_min = 1e300;
    for (std::size_t i = 0; i < p.arm_count(); ++i)
      raw_min = std::min(raw_min, raw_at(i));
    CHECK(std::abs(raw_at(best_arm) - raw_min) <=
          1e-9 * std::max(1.0, std::abs(raw_min)));
  }

  const auto suite = benchmark_suite(30, 0.1);
  CHECK(suite.size() == 4);
  std::set<std::string> names;
  for (const Problem& p : suite) names.insert(p.name());
  CHECK(names ==
        std::set<std::string>{"beale", "branin", "camel", "goldstein-price"});

  CHECK_THROWS(benchmark_problem("nonesuch", 30, 0.1));
}

TEST_CASE("instance validation") {
  CHECK_THROWS(Problem::from_rewards("x", make_grid(1, 4), 4,
                                     std::vector<double>{1.0}, 0.1));
  CHECK_THROWS(Problem::from_rewards("x", make_grid(1, 4), 4,
                                     std::vector<double>(4, 0.0), -0.1));
}
