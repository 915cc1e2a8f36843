#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "lmg/action.hpp"
#include "lmg/classical.hpp"
#include "lmg/errors.hpp"
#include "lmg/spectrum.hpp"

using namespace lmg;
using std::numbers::pi;

TEST_CASE("cell_fraction_below") {
  CHECK(cell_fraction_below(0, 0, 0, 0, 1.0) == 1.0);
  CHECK(cell_fraction_below(2, 2, 2, 2, 1.0) == 0.0);
  // plane K = x: the half cell x <= 0.5
  CHECK(cell_fraction_below(0, 1, 1, 0, 0.5) == doctest::Approx(0.5));
  CHECK(cell_fraction_below(0, 1, 1, 0, 0.25) == doctest::Approx(0.25));
  // plane K = x + y: triangle below 0.5 has area 1/8
  CHECK(cell_fraction_below(0, 1, 2, 1, 0.5) == doctest::Approx(0.125));
  CHECK(cell_fraction_below(0, 1, 2, 1, 1.5) == doctest::Approx(0.875));
  // complementary levels sum to one, saddle cells included
  for (double v11 : {0.3, 0.6}) {
    for (double k : {0.2, 0.5, 0.65}) {
      CHECK(cell_fraction_below(0.1, 0.7, v11, 0.95, k) + cell_fraction_below(-0.1, -0.7, -v11, -0.95, -k) ==
            doctest::Approx(1.0));
    }
  }
}

TEST_CASE("area_below limits and cap formula") {
  for (double lambda : {0.0, 0.5, 1.5, 2.0}) {
    for (AreaMethod method : {AreaMethod::grid, AreaMethod::strip}) {
      Resolution res{256, method};
      CHECK(area_below(k_max(lambda) + 1e-9, lambda, res) == doctest::Approx(4 * pi).epsilon(1e-9));
      CHECK(area_below(k_max(lambda) + 1.0, lambda, res) == 4 * pi);
      CHECK(area_below(k_min(lambda) - 1e-9, lambda, res) == 0.0);
    }
  }
  CHECK(std::abs(area_below(0.0, 0.0) - 2 * pi) <= 1e-3);
  for (double k = -0.95; k < 1.0; k += 0.1) {
    CHECK(std::abs(area_below(k, 0.0, {256, AreaMethod::grid}) - 2 * pi * (1 + k)) <= 2e-3);
    CHECK(std::abs(area_below(k, 0.0, {256, AreaMethod::strip}) - 2 * pi * (1 + k)) <= 1e-10);
  }
  CHECK_THROWS_AS(area_below(0.0, 0.5, {32, AreaMethod::grid}), DomainError);
}

TEST_CASE("grid converges to second order toward the strip route") {
  for (double lambda : {0.5, 1.5}) {
    for (double k : {-0.9, -0.76, -0.26, -0.2, 0.1, 0.4, 0.9}) {
      const double exact = strip_area(k, lambda);
      const double e1 = std::abs(area_below(k, lambda, {128, AreaMethod::grid}) - exact);
      const double e2 = std::abs(area_below(k, lambda, {512, AreaMethod::grid}) - exact);
      CHECK(e2 <= 3e-4);
      CHECK(e2 < e1 / 8.0);
    }
  }
}

TEST_CASE("area monotone and K-mirror") {
  for (double lambda : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    ActionFunction grid(lambda, {256, AreaMethod::grid});
    ActionFunction strip(lambda, {256, AreaMethod::strip});
    double prev_g = -1.0, prev_s = -1.0;
    for (double k = k_min(lambda) - 0.05; k <= k_max(lambda) + 0.05; k += 0.0173) {
      const double g = grid(k), s = strip(k);
      CHECK(g >= prev_g);
      CHECK(s >= prev_s - 1e-12);
      prev_g = g;
      prev_s = s;
    }
  }
  for (double lambda : {0.5, 1.5}) {
    for (double k : {-0.95, -0.5, 0.0, 0.3, 0.8}) {
      CHECK(strip_area(k, lambda) + strip_area(-k - 1e-12, lambda) == doctest::Approx(4 * pi).epsilon(1e-9));
      const double g = area_below(k, lambda, {512, AreaMethod::grid}) +
                       area_below(-k - 1e-9, lambda, {512, AreaMethod::grid});
      CHECK(std::abs(g - 4 * pi) <= 1e-3);
    }
  }
}

TEST_CASE("grid area independent of worker count") {
  PhaseSpaceGrid one(1.5, 300, 1), many(1.5, 300, 4);
  for (double k : {-1.1, -0.7, 0.0, 0.9}) CHECK(one.area_below(k) == many.area_below(k));
}

TEST_CASE("counting_function") {
  CHECK(std::abs(counting_function(0.0, ModelParams(0.0, 100)) - 50.0) <= 0.1);
  CHECK(std::abs(counting_function(k_max(1.5) - 1e-9, ModelParams(1.5, 200)) - 200.0) <= 1.0);
  ModelParams p(0.7, 300);
  ActionFunction s(0.7, {256, AreaMethod::strip});
  CHECK(counting_function(-0.3, p, s) == doctest::Approx(300 * s(-0.3) / (4 * pi)));
}

TEST_CASE("period") {
  for (double k : {-0.85, -0.3, 0.0, 0.5, 0.85}) CHECK(std::abs(period(k, 0.0) - 2 * pi) <= 1e-2);

  const double weak = period(k_min(0.5) + 1e-3, 0.5);
  CHECK(weak == doctest::Approx(2 * pi / std::sqrt(0.75)).epsilon(0.02));

  const double well = 0.5 * period(k_min(2.0) + 1e-3, 2.0);
  CHECK(well == doctest::Approx(2 * pi / std::sqrt(6.0)).epsilon(0.02));

  CHECK_THROWS_AS(period(-1.0 + 5e-7, 2.0), DomainError);
  CHECK_THROWS_AS(period(k_min(2.0) - 0.01, 2.0), DomainError);
  CHECK_THROWS_AS(period(2.0, 2.0), DomainError);
  CHECK(period(-0.5, 1.5) > 0.0);

  // the grid route agrees away from critical values
  ActionFunction grid(0.5, {1024, AreaMethod::grid});
  CHECK(period(0.2, grid) == doctest::Approx(period(0.2, 0.5)).epsilon(0.01));
}

TEST_CASE("period diverges logarithmically at the saddle") {
  for (int side : {-1, 1}) {
    const double t2 = period(-1.0 + side * 1e-2, 2.0);
    const double t5 = period(-1.0 + side * 1e-5, 2.0);
    CHECK(t5 > t2);
    CHECK((t5 - t2) / 3.0 == doctest::Approx(2.0 * std::log(10.0) / std::sqrt(3.0)).epsilon(0.1));
  }
}

TEST_CASE("wkb_levels") {
  auto free = wkb_levels(ModelParams(0.0, 100), 10);
  REQUIRE(free.size() == 10);
  for (std::size_t i = 1; i < free.size(); ++i) {
    CHECK(std::abs(free[i].energy - free[i - 1].energy - 1.0) <= 1e-3);
    CHECK(!free[i].doublet);
    CHECK(free[i].index == i);
  }

  auto weak = wkb_levels(ModelParams(0.5, 1000), 10, {1024, AreaMethod::grid});
  for (std::size_t i = 1; i < weak.size(); ++i)
    CHECK((weak[i].energy - weak[i - 1].energy) == doctest::Approx(std::sqrt(0.75)).epsilon(0.02));
  for (const auto& l : weak) CHECK(l.energy == doctest::Approx(500.0 * l.k_value));

  ModelParams strong(2.0, 1000);
  auto levels = wkb_levels(strong, 80, {1024, AreaMethod::grid});
  std::size_t below = 0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i].k_value < -1.0) {
      ++below;
      CHECK(levels[i].doublet);
      if (i % 2 == 1) CHECK(levels[i].energy == levels[i - 1].energy);
    }
  }
  CHECK(below % 2 == 0);
  CHECK(below > 0);

  CHECK_THROWS_AS(wkb_levels(ModelParams(0.5, 10), 11), DomainError);
}

TEST_CASE("WKB levels match exact levels after one offset") {
  ModelParams p(0.5, 1000);
  const std::size_t count = 40;
  auto wkb = wkb_levels(p, count, {2048, AreaMethod::grid});
  auto exact = merged_spectrum(p);
  const double spacing = std::sqrt(0.75);
  int best = 0;
  double best_err = 1e300;
  for (int offset = -2; offset <= 2; ++offset) {
    double err = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
      const long idx = static_cast<long>(i) + offset;
      if (idx < 0) continue;
      err = std::max(err, std::abs(wkb[i].energy - exact.levels[idx].energy));
    }
    if (err < best_err) {
      best_err = err;
      best = offset;
    }
  }
  MESSAGE("offset " << best << ", worst mismatch " << best_err);
  CHECK(best_err <= 0.5 * spacing);
}

TEST_CASE("action_table") {
  auto t = action_table(1.5, 25, {256, AreaMethod::grid});
  CHECK(t.lambda == 1.5);
  CHECK(t.resolution.cells == 256);
  REQUIRE(t.samples.size() == 25);
  for (std::size_t i = 1; i < t.samples.size(); ++i) {
    CHECK(t.samples[i].k > t.samples[i - 1].k);
    CHECK(t.samples[i].action >= t.samples[i - 1].action);
  }
  CHECK(t.samples.front().k > k_min(1.5));
  CHECK(t.samples.back().k < k_max(1.5));
}
