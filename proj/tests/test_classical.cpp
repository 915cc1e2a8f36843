#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "lmg/classical.hpp"
#include "lmg/errors.hpp"

using namespace lmg;
using std::numbers::pi;

TEST_CASE("ClassicalPoint") {
  ClassicalPoint p(0.3, pi);
  CHECK(p.phi() == doctest::Approx(-pi));
  CHECK(ClassicalPoint(0.0, 3.0 * pi + 0.5).phi() == doctest::Approx(-pi + 0.5));
  CHECK(ClassicalPoint(1.0, 0.0).mu() == 1.0);
  CHECK_THROWS_AS(ClassicalPoint(1.0001, 0.0), DomainError);
  CHECK_THROWS_AS(ClassicalPoint(0.0, INFINITY), DomainError);
}

TEST_CASE("k_energy") {
  for (double lambda : {0.0, 0.5, 2.0}) {
    CHECK(k_energy(ClassicalPoint(0.0, 0.0), lambda) == doctest::Approx(-1.0));
    CHECK(k_energy(ClassicalPoint(0.0, pi), lambda) == doctest::Approx(1.0));
    CHECK(k_energy(ClassicalPoint(1.0, 0.3), lambda) == doctest::Approx(-lambda / 2.0));
  }
  CHECK(k_energy(ClassicalPoint(0.866025, 0.0), 2.0) == doctest::Approx(-1.25).epsilon(1e-6));

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> mu(-1.0, 1.0), phi(-pi, pi);
  for (double lambda : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    const double lo = k_min(lambda), hi = k_max(lambda);
    for (int i = 0; i < 20000; ++i) {
      const double k = k_energy(ClassicalPoint(mu(rng), phi(rng)), lambda);
      CHECK(k >= lo - 1e-12);
      CHECK(k <= hi + 1e-12);
    }
  }
}

TEST_CASE("grad_k") {
  auto g = grad_k(ClassicalPoint(0.0, pi / 2), 1.0);
  CHECK(g.first == doctest::Approx(0.0));
  CHECK(g.second == doctest::Approx(1.0));
  CHECK_THROWS_AS(grad_k(ClassicalPoint(1.0, 0.0), 1.0), DomainError);
  CHECK_THROWS_AS(grad_k(ClassicalPoint(-1.0, 0.0), 1.0), DomainError);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> mu(-0.95, 0.95), phi(-pi + 1e-3, pi - 1e-3);
  const double h = 1e-6;
  for (double lambda : {0.0, 0.5, 1.0, 1.5, 2.0}) {
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
      const double m = mu(rng), f = phi(rng);
      auto [gm, gf] = grad_k(ClassicalPoint(m, f), lambda);
      const double fd_m =
          (k_energy(ClassicalPoint(m + h, f), lambda) - k_energy(ClassicalPoint(m - h, f), lambda)) / (2 * h);
      const double fd_f =
          (k_energy(ClassicalPoint(m, f + h), lambda) - k_energy(ClassicalPoint(m, f - h), lambda)) / (2 * h);
      worst = std::max({worst, std::abs(gm - fd_m), std::abs(gf - fd_f)});
    }
    CHECK(worst <= 1e-6);
  }
}

TEST_CASE("hessian_k matches differences of the gradient") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> mu(-0.9, 0.9), phi(-3.0, 3.0);
  const double h = 1e-6;
  for (double lambda : {0.5, 1.5}) {
    for (int i = 0; i < 200; ++i) {
      const double m = mu(rng), f = phi(rng);
      auto hs = hessian_k(ClassicalPoint(m, f), lambda);
      auto gp = grad_k(ClassicalPoint(m + h, f), lambda), gm = grad_k(ClassicalPoint(m - h, f), lambda);
      auto fp = grad_k(ClassicalPoint(m, f + h), lambda), fm = grad_k(ClassicalPoint(m, f - h), lambda);
      CHECK(hs.mumu == doctest::Approx((gp.first - gm.first) / (2 * h)).epsilon(1e-5));
      CHECK(hs.muphi == doctest::Approx((fp.first - fm.first) / (2 * h)).epsilon(1e-5));
      CHECK(hs.phiphi == doctest::Approx((fp.second - fm.second) / (2 * h)).epsilon(1e-5));
    }
  }
}

TEST_CASE("stationary_points") {
  auto weak = stationary_points(0.5);
  REQUIRE(weak.size() == 2);
  CHECK(weak[0].kind == StationaryKind::minimum);
  CHECK(weak[0].k_value == doctest::Approx(-1.0));
  CHECK(weak[0].point.mu() == doctest::Approx(0.0));
  CHECK(weak[0].point.phi() == doctest::Approx(0.0));
  CHECK(weak[1].kind == StationaryKind::maximum);
  CHECK(weak[1].k_value == doctest::Approx(1.0));
  CHECK(std::abs(weak[1].point.phi()) == doctest::Approx(pi));

  auto strong = stationary_points(2.0);
  REQUIRE(strong.size() == 6);
  int minima = 0, saddles = 0, maxima = 0;
  for (const auto& sp : strong) {
    switch (sp.kind) {
      case StationaryKind::minimum:
        ++minima;
        CHECK(std::abs(sp.point.mu()) == doctest::Approx(0.866025).epsilon(1e-6));
        CHECK(sp.point.phi() == doctest::Approx(0.0));
        CHECK(sp.k_value == doctest::Approx(-1.25));
        break;
      case StationaryKind::saddle:
        ++saddles;
        CHECK(sp.point.mu() == doctest::Approx(0.0));
        CHECK(std::abs(sp.k_value) == doctest::Approx(1.0));
        break;
      case StationaryKind::maximum:
        ++maxima;
        CHECK(std::abs(sp.point.phi()) == doctest::Approx(2.0 * pi / 3.0));
        CHECK(sp.k_value == doctest::Approx(1.25));
        break;
    }
  }
  CHECK(minima == 2);
  CHECK(saddles == 2);
  CHECK(maxima == 2);

  auto critical = stationary_points(1.0);
  REQUIRE(!critical.empty());
  CHECK(critical.front().kind == StationaryKind::minimum);
  CHECK(critical.front().degenerate);
  CHECK(critical.front().point.mu() == doctest::Approx(0.0));
  CHECK(critical.front().k_value == doctest::Approx(-1.0));

  for (double lambda : {0.0, 0.3, 0.9, 1.2, 1.5, 2.0}) {
    for (const auto& sp : stationary_points(lambda)) {
      if (std::abs(sp.point.mu()) < 1.0) {
        auto [gm, gf] = grad_k(sp.point, lambda);
        CHECK(std::hypot(gm, gf) <= 1e-10);
      }
      CHECK(!sp.degenerate);
      auto h = hessian_k(sp.point, lambda);
      const double det = h.determinant();
      if (sp.kind == StationaryKind::saddle) CHECK(det < 0.0);
      if (sp.kind == StationaryKind::minimum) CHECK((det > 0.0 && h.mumu > 0.0));
      if (sp.kind == StationaryKind::maximum) CHECK((det > 0.0 && h.mumu < 0.0));
    }
  }
}

TEST_CASE("separatrix and excitation") {
  CHECK(!separatrix_energy(0.5));
  CHECK(!separatrix_energy(1.0));
  CHECK(separatrix_energy(1.5).value() == -1.0);
  CHECK(separatrix_energy(2.0).value() == -1.0);
  CHECK(critical_excitation(1.0) == 0.0);
  CHECK(critical_excitation(2.0) == doctest::Approx(0.25));
  CHECK(critical_excitation(1.1) == doctest::Approx(0.0045455).epsilon(1e-4));
  CHECK_THROWS_AS(critical_excitation(0.9), DomainError);
  for (double lambda : {1.1, 1.5, 2.0}) {
    CHECK(critical_excitation(lambda) == doctest::Approx(separatrix_energy(lambda).value() - k_min(lambda)));
  }
}

TEST_CASE("phi_branches") {
  auto a = phi_branches(0.0, -1.0, 0.0);
  REQUIRE(a.size() == 1);
  CHECK(a[0] == doctest::Approx(0.0));
  auto b = phi_branches(0.0, 0.0, 0.0);
  REQUIRE(b.size() == 1);
  CHECK(b[0] == doctest::Approx(pi / 2));

  // x^2 + x - 2 = 0: the second root x = -2 lies outside [-1, 1]
  auto c = phi_branches(0.0, -1.0, 2.0);
  REQUIRE(c.size() == 1);
  CHECK(c[0] == doctest::Approx(0.0));
  auto two = phi_branches(0.0, 1.1, 2.0);
  CHECK(two.size() == 2);
  for (double phi : c) CHECK(std::abs(k_energy(ClassicalPoint(0.0, phi), 2.0) + 1.0) <= 1e-12);

  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> mu(-0.99, 0.99), kk(-1.3, 1.3);
  for (double lambda : {0.0, 0.5, 1.5, 2.0}) {
    for (int i = 0; i < 2000; ++i) {
      const double m = mu(rng), k = kk(rng);
      for (double phi : phi_branches(m, k, lambda)) {
        CHECK(phi >= 0.0);
        CHECK(phi <= pi);
        CHECK(std::abs(k_energy(ClassicalPoint(m, phi), lambda) - k) <= 1e-9);
      }
    }
  }
  CHECK(phi_branches(0.0, -2.0, 0.5).empty());
}

TEST_CASE("frequencies and spacings") {
  CHECK(harmonic_frequency(0.0) == 1.0);
  CHECK(harmonic_frequency(0.6) == doctest::Approx(0.8));
  CHECK(harmonic_frequency(std::sqrt(2.0)) == doctest::Approx(std::sqrt(2.0)));
  CHECK_THROWS_AS(harmonic_frequency(1.0), DomainError);

  CHECK(predicted_spacing_separatrix(2.0, 1000) == doctest::Approx(1.57536).epsilon(1e-4));
  CHECK(predicted_spacing_separatrix(1.5, 1000) == doctest::Approx(1.01694).epsilon(1e-5));
  CHECK(predicted_spacing_separatrix(1.0 + 1e-12, 1000) < 1e-4);
  CHECK_THROWS_AS(predicted_spacing_separatrix(1.0, 1000), DomainError);
  CHECK_THROWS_AS(predicted_spacing_separatrix(1.5, 2), DomainError);

  CHECK(quartic_spacing(0.0, 100) == 0.0);
  CHECK(quartic_spacing(16.0 * 3.7, 100) / quartic_spacing(3.7, 100) == doctest::Approx(2.0));
  CHECK_THROWS_AS(quartic_spacing(-1.0, 100), DomainError);
}
