#include <doctest.h>

#include <atomic>
#include <cmath>
#include <random>

#include "stochhom/montecarlo.hpp"
#include "stochhom/oned.hpp"

using namespace stochhom;

namespace {

// Cheap sampler: a 1D problem on n cells, exact via the semi-analytic route.
Sampler oned_sampler(int cells, std::atomic<int>* calls = nullptr,
                     Distribution dist_c = Distribution::bernoulli(1, 3)) {
  return [cells, calls, dist_c](const UniformDraws& draws, SolveLog& log) {
    if (calls) ++*calls;
    const auto field = realize_field(Distribution::bernoulli(3, 23), dist_c, draws, cells, 1);
    const auto line = OneDProblem::from_field(field, 4);
    QuantityValues q{};
    q[0] = oned_value_wstar(line, 1.0);
    q[1] = oned_grad_wstar(line, 1.0);
    q[3] = oned_hess_wstar(line, 1.0).value;
    q[6] = q[1];
    q[7] = q[3];
    log.newton_iterations = 0;
    return q;
  };
}

RunOptions options(std::uint64_t seed, std::size_t cells, int threads = 1) {
  RunOptions o;
  o.seed = seed;
  o.n_cells = cells;
  o.threads = threads;
  return o;
}

}  // namespace

TEST_CASE("estimate: unbiased variance and CI") {
  const auto s = estimate({1, 2, 3, 4});
  CHECK(s.n_samples == 4);
  CHECK(s.mean == 2.5);
  CHECK(s.variance == doctest::Approx(5.0 / 3.0));
  CHECK(s.ci_halfwidth == doctest::Approx(1.96 * std::sqrt(5.0 / 12.0)));
}

TEST_CASE("compare: arithmetic and degenerate cases") {
  // Var {-1, 1} = 2, Var {-s, s} = 2 s^2 = 0.1.
  const double s = std::sqrt(0.05);
  const auto r = compare_samples({-1, 1}, {-s, s});
  CHECK(r.v_mc == doctest::Approx(1.0));
  CHECK(r.v_av == doctest::Approx(0.1));
  CHECK(r.ratio == doctest::Approx(10.0));
  CHECK(r.ratio_defined);

  const auto flat = compare_samples({2, 2, 2}, {2, 2});
  CHECK(std::isnan(flat.ratio));
  CHECK_FALSE(flat.ratio_defined);
  const auto inf = compare_samples({1, 2, 3}, {2, 2});
  CHECK(std::isinf(inf.ratio));
  CHECK_FALSE(inf.ratio_defined);

  CHECK_THROWS_AS(compare_samples({1}, {1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(compare_samples({1, 2}, {1}), std::invalid_argument);
}

TEST_CASE("compare: bootstrap interval brackets the point estimate") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  std::vector<double> mc(200), av(100);
  for (auto& v : mc) v = 2.0 * g(rng);
  for (auto& v : av) v = 0.5 * g(rng);
  const auto r = compare_samples(mc, av, 1000, 7);
  CHECK(r.ratio_ci_low < r.ratio);
  CHECK(r.ratio < r.ratio_ci_high);
  const auto again = compare_samples(mc, av, 1000, 7);
  CHECK(again.ratio_ci_low == r.ratio_ci_low);
  CHECK(again.ratio_ci_high == r.ratio_ci_high);
}

TEST_CASE("degenerate distribution: identical samples and undefined ratio") {
  FieldSetup setup;
  setup.dist_a = Distribution::constant(5);
  setup.half_width = 2;
  setup.mesh_h = 0.5;
  const Sampler sampler = make_field_sampler(setup);
  const auto mc = run_mc(sampler, 6, options(1, field_cell_count(setup)));
  const auto av = run_av(sampler, 3, options(1, field_cell_count(setup)));
  for (std::size_t k = 0; k < kQuantityCount; ++k) {
    for (double v : mc.samples[k]) CHECK(v == mc.samples[k][0]);
    for (std::size_t i = 0; i < av.size(); ++i) {
      CHECK(av.first[k][i] == av.second[k][i]);
      CHECK(av.samples[k][i] == mc.samples[k][0]);
    }
  }
  CHECK(mc.samples[0][0] == doctest::Approx(5.0));
  const auto report = compare(mc, av);
  for (Quantity q : kAllQuantities) {
    CHECK(report[q].mc.variance == 0.0);
    CHECK_FALSE(report[q].ratio_defined);
  }
}

TEST_CASE("two-point support: every pair averages the two phases") {
  const Sampler sampler = oned_sampler(1, nullptr, Distribution::constant(1));
  SolveLog log;
  UniformDraws u;
  u.a_channel = {0.2};
  u.c_channel = {0.2};
  const auto lo = sampler(u, log);
  const auto hi = sampler(antithetic(u), log);
  const double expected = 0.5 * (lo[0] + hi[0]);
  CHECK(lo[0] == doctest::Approx(3.0 / 4 + 0.5).epsilon(1e-12));
  CHECK(hi[0] == doctest::Approx(23.0 / 4 + 0.5).epsilon(1e-12));
  const auto av = run_av(sampler, 50, options(3, 1));
  for (double v : av.samples[0]) CHECK(v == expected);
}

TEST_CASE("determinism, thread independence and cost parity") {
  std::atomic<int> calls{0};
  const Sampler sampler = oned_sampler(12, &calls);
  const auto mc1 = run_mc(sampler, 40, options(9, 12, 1));
  CHECK(calls.load() == 40);
  calls = 0;
  const auto av1 = run_av(sampler, 20, options(9, 12, 1));
  CHECK(calls.load() == 40);
  CHECK(mc1.solve_count() == av1.solve_count());

  const auto mc4 = run_mc(sampler, 40, options(9, 12, 4));
  const auto av4 = run_av(sampler, 20, options(9, 12, 3));
  for (std::size_t k = 0; k < kQuantityCount; ++k) {
    CHECK(mc1.samples[k] == mc4.samples[k]);
    CHECK(av1.samples[k] == av4.samples[k]);
    CHECK(av1.first[k] == av4.first[k]);
  }
  for (std::size_t i = 0; i < av1.solve_count(); ++i) {
    CHECK(av1.solves[i].antithetic == (i % 2 == 1));
    CHECK(av1.solves[i].realization == stream_index(Arm::antithetic, i / 2));
  }
  // The arms read disjoint streams.
  CHECK(stream_index(Arm::monte_carlo, 0) != stream_index(Arm::antithetic, 0));
  CHECK(mc1.samples[0][0] != av1.first[0][0]);
}

TEST_CASE("failures carry the lowest failing realization") {
  Sampler failing = [](const UniformDraws& draws, SolveLog&) -> QuantityValues {
    if (draws.realization == 5 || draws.realization == 11) throw std::runtime_error("boom");
    return {};
  };
  for (int threads : {1, 4}) {
    try {
      run_mc(failing, 20, options(0, 4, threads));
      FAIL("expected RealizationError");
    } catch (const RealizationError& e) {
      CHECK(e.realization() == 5);
      CHECK_FALSE(e.antithetic());
    }
  }
  CHECK_THROWS_AS(run_mc(failing, 2, options(0, 0)), std::invalid_argument);
}

TEST_CASE("antithetic halves are negatively correlated on Test Case 1") {
  // Bootstrap over M = 50 pairs at 2N = 10; Cov must not exceed +3 sigma.
  FieldSetup setup;
  const auto av = run_av(make_field_sampler(setup), 50, options(2024, field_cell_count(setup), 4));
  std::mt19937_64 rng(1);
  std::uniform_int_distribution<std::size_t> pick(0, 49);
  for (Quantity q : kAllQuantities) {
    const auto k = static_cast<std::size_t>(q);
    const double cov = sample_covariance(av.first[k], av.second[k]);
    std::vector<double> boot;
    for (int b = 0; b < 1000; ++b) {
      std::vector<double> x(50), y(50);
      for (std::size_t i = 0; i < 50; ++i) {
        const std::size_t j = pick(rng);
        x[i] = av.first[k][j];
        y[i] = av.second[k][j];
      }
      boot.push_back(sample_covariance(x, y));
    }
    double mean = 0.0, sq = 0.0;
    for (double v : boot) mean += v;
    mean /= static_cast<double>(boot.size());
    for (double v : boot) sq += (v - mean) * (v - mean);
    const double sd = std::sqrt(sq / static_cast<double>(boot.size() - 1));
    CAPTURE(to_string(q));
    CAPTURE(cov);
    CHECK(cov <= 3.0 * sd);
  }
}

TEST_CASE("log_log_slope") {
  CHECK(log_log_slope({1, 10, 100}, {5, 0.5, 0.05}) == doctest::Approx(-1.0));
  CHECK(log_log_slope({100, 400, 1600}, {1, 2, 4}) == doctest::Approx(0.5));
  CHECK_THROWS(log_log_slope({1}, {1}));
  CHECK_THROWS(log_log_slope({1, 2}, {1, 0}));
}
