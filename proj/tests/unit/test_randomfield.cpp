#include <doctest.h>

#include <cmath>
#include <sstream>
#include <thread>

#include "stochhom/randomfield.hpp"

using namespace stochhom;

TEST_CASE("inverse cdf") {
  const auto bern = Distribution::bernoulli(3, 23);
  CHECK(bern.inverse_cdf(0.25) == 3.0);
  CHECK(bern.inverse_cdf(0.75) == 23.0);
  CHECK(bern.inverse_cdf(0.5) == 23.0);
  CHECK(bern.inverse_cdf(0.0) == 3.0);
  CHECK(bern.inverse_cdf(1.0) == 23.0);
  CHECK(Distribution::constant(1).inverse_cdf(0.99) == 1.0);
  CHECK_THROWS_AS(bern.inverse_cdf(-0.1), std::domain_error);
  CHECK_THROWS_AS(bern.inverse_cdf(1.5), std::domain_error);
  CHECK_THROWS_AS(bern.inverse_cdf(std::nan("")), std::domain_error);

  // Non-decreasing on a grid.
  for (const auto& d : {bern, Distribution::bernoulli(1, 3), Distribution::constant(0)}) {
    double prev = d.inverse_cdf(0.0);
    for (int i = 1; i <= 1000; ++i) {
      const double v = d.inverse_cdf(i / 1000.0);
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("distribution construction and parsing") {
  CHECK_THROWS(Distribution::bernoulli(3, 3));
  CHECK_THROWS(Distribution::bernoulli(5, 3));
  CHECK_THROWS(Distribution::bernoulli(-1, 3));
  CHECK_THROWS(Distribution::constant(-1));
  CHECK(Distribution::parse("bernoulli(3, 23)") == Distribution::bernoulli(3, 23));
  CHECK(Distribution::parse(" constant( 1 ) ") == Distribution::constant(1));
  CHECK(Distribution::parse(Distribution::bernoulli(0.1, 2.5).to_string()) == Distribution::bernoulli(0.1, 2.5));
  CHECK_THROWS(Distribution::parse("uniform(0, 1)"));
  CHECK_THROWS(Distribution::parse("bernoulli(3)"));
  CHECK_THROWS(Distribution::parse("constant(x)"));
}

TEST_CASE("draw_uniforms: determinism, distinctness, range") {
  const auto a = draw_uniforms(1, 0, 500);
  const auto b = draw_uniforms(1, 0, 500);
  const auto c = draw_uniforms(1, 1, 500);
  const auto d = draw_uniforms(2, 0, 500);
  CHECK(a.a_channel == b.a_channel);
  CHECK(a.c_channel == b.c_channel);
  CHECK(a.a_channel != c.a_channel);
  CHECK(a.a_channel != d.a_channel);
  CHECK(a.a_channel != a.c_channel);
  for (double v : a.a_channel) {
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
  CHECK_THROWS(draw_uniforms(1, 0, 0));
  // No sequential state: a prefix is a prefix.
  const auto small = draw_uniforms(1, 0, 10);
  for (int k = 0; k < 10; ++k) CHECK(small.a_channel[k] == a.a_channel[k]);
}

TEST_CASE("draw_uniforms: empirical mean of 1e6 draws") {
  const auto draws = draw_uniforms(2024, 3, 500000);
  double sum = 0.0;
  for (double v : draws.a_channel) sum += v;
  for (double v : draws.c_channel) sum += v;
  // 3 sigma / sqrt(n) with sigma^2 = 1/12.
  const double mean = sum / 1e6;
  CHECK(std::abs(mean - 0.5) <= 0.002);
}

TEST_CASE("draw_uniforms: independent of thread layout") {
  std::vector<double> serial(4000), threaded(4000);
  for (std::size_t k = 0; k < serial.size(); ++k) serial[k] = counter_uniform(5, 9, k, 0);
  std::vector<std::thread> pool;
  for (int w = 0; w < 4; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t k = w; k < threaded.size(); k += 4) threaded[k] = counter_uniform(5, 9, k, 0);
    });
  for (auto& t : pool) t.join();
  CHECK(serial == threaded);
}

TEST_CASE("antithetic draws") {
  UniformDraws u;
  u.a_channel = {0.25, 0.75};
  u.c_channel = {0.5, 0.5};
  const auto v = antithetic(u);
  CHECK(v.a_channel == std::vector<double>{0.75, 0.25});
  CHECK(v.c_channel == std::vector<double>{0.5, 0.5});
  CHECK(v.antithetic);
  CHECK_FALSE(antithetic(v).antithetic);

  // Generated draws are exact dyadics: the map is an exact involution.
  const auto g = draw_uniforms(77, 4, 2000);
  const auto gg = antithetic(antithetic(g));
  CHECK(gg.a_channel == g.a_channel);
  CHECK(gg.c_channel == g.c_channel);
  for (double x : antithetic(g).a_channel) {
    CHECK(x > 0.0);
    CHECK(x < 1.0);
  }
}

TEST_CASE("realize_field") {
  const auto bern = Distribution::bernoulli(3, 23);
  const int n = 4;
  UniformDraws u;
  u.a_channel.assign(n * n, 0.1);
  u.c_channel.assign(n * n, 0.1);
  const auto f = realize_field(bern, Distribution::constant(0), u, n);
  CHECK(f.n_cells() == 16u);
  for (std::size_t k = 0; k < f.n_cells(); ++k) {
    CHECK(f.a_cells[k] == 3.0);
    CHECK(f.c_cells[k] == 0.0);
  }
  const auto g = realize_field(bern, Distribution::constant(0), antithetic(u), n);
  for (double a : g.a_cells) CHECK(a == 23.0);

  UniformDraws wrong;
  wrong.a_channel.assign(5, 0.1);
  wrong.c_channel.assign(5, 0.1);
  CHECK_THROWS_AS(realize_field(bern, Distribution::constant(0), wrong, n), std::invalid_argument);
  CHECK_THROWS_AS(realize_field(Distribution::bernoulli(0, 1), Distribution::constant(0), u, n),
                  std::invalid_argument);
}

TEST_CASE("realize_field: fraction of upper values over 1e4 cells") {
  const auto draws = draw_uniforms(11, 0, 10000);
  const auto f = realize_field(Distribution::bernoulli(3, 23), Distribution::bernoulli(1, 3), draws, 100);
  int upper = 0;
  for (double a : f.a_cells) upper += a == 23.0;
  // 3 sigma binomial bound: 3 * 0.5 / sqrt(1e4) = 0.015.
  CHECK(std::abs(upper / 1e4 - 0.5) <= 0.015);
}

TEST_CASE("antithetic fields of doubly-reflected draws coincide") {
  for (std::uint64_t r = 0; r < 20; ++r) {
    const auto draws = draw_uniforms(3, r, 64);
    const auto f1 = realize_field(Distribution::bernoulli(3, 23), Distribution::bernoulli(1, 3), draws, 8);
    const auto f2 =
        realize_field(Distribution::bernoulli(3, 23), Distribution::bernoulli(1, 3), antithetic(antithetic(draws)), 8);
    CHECK(f1.a_cells == f2.a_cells);
    CHECK(f1.c_cells == f2.c_cells);
  }
}

TEST_CASE("property: equal law of plain and antithetic fields") {
  // Per cell, count upper values over M realizations in both arms; a
  // two-sided binomial z-test at level 1e-3 (|z| < 3.29).
  const int cells = 9, m = 10000;
  std::vector<int> plain(cells, 0), anti(cells, 0);
  for (int r = 0; r < m; ++r) {
    const auto draws = draw_uniforms(42, r, cells);
    const auto f = realize_field(Distribution::bernoulli(3, 23), Distribution::constant(0), draws, 3);
    const auto g = realize_field(Distribution::bernoulli(3, 23), Distribution::constant(0), antithetic(draws), 3);
    for (int k = 0; k < cells; ++k) {
      plain[k] += f.a_cells[k] == 23.0;
      anti[k] += g.a_cells[k] == 23.0;
    }
  }
  const double sd = std::sqrt(m * 0.25);
  for (int k = 0; k < cells; ++k) {
    CHECK(std::abs(plain[k] - 0.5 * m) / sd < 3.29);
    CHECK(std::abs(anti[k] - 0.5 * m) / sd < 3.29);
  }
}

TEST_CASE("property: monotone in each coordinate of the draws") {
  const auto base = draw_uniforms(8, 0, 25);
  const auto dist_a = Distribution::bernoulli(3, 23), dist_c = Distribution::bernoulli(1, 3);
  const auto f0 = realize_field(dist_a, dist_c, base, 5);
  for (std::size_t k = 0; k < base.n_cells(); ++k) {
    for (int channel = 0; channel < 2; ++channel) {
      auto up = base;
      auto& v = channel == 0 ? up.a_channel[k] : up.c_channel[k];
      v = std::min(1.0, v + 0.3);
      const auto f1 = realize_field(dist_a, dist_c, up, 5);
      for (std::size_t j = 0; j < f0.n_cells(); ++j) {
        CHECK(f1.a_cells[j] >= f0.a_cells[j]);
        CHECK(f1.c_cells[j] >= f0.c_cells[j]);
      }
    }
  }
}

TEST_CASE("field dump format") {
  auto f = CoefficientField::uniform(2, 3.0, 0.5);
  f.a_cells[f.index(1, 0)] = 23.0;
  std::ostringstream out;
  f.dump(out);
  CHECK(out.str() == "0 0 3 0.5\n0 1 3 0.5\n1 0 23 0.5\n1 1 3 0.5\n");
}

TEST_CASE("periodic shift") {
  auto f = CoefficientField::uniform(3, 1.0, 0.0);
  f.a_cells[f.index(2, 2)] = 5.0;
  const auto g = f.shifted(1, 1);
  CHECK(g.a_cells[g.index(0, 0)] == 5.0);
  CHECK(g.a_cells[g.index(2, 2)] == 1.0);
}
