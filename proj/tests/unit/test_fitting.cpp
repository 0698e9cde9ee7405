#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kerrlab/errors.hpp"
#include "kerrlab/fitting.hpp"

using namespace kerrlab;

TEST_CASE("exponential fit recovers T from noisy data") {
  std::mt19937_64 rng(42);
  std::normal_distribution<double> noise(0.0, 0.05);  // 1% of the amplitude
  std::vector<double> t, y;
  for (int k = 0; k < 80; ++k) {
    t.push_back(0.4 * k);
    y.push_back(5.0 * std::exp(-t.back() / 7.0) + noise(rng));
  }
  const auto f = fit_exponential(t, y);
  CHECK(f.T == doctest::Approx(7.0).epsilon(0.03));
  CHECK(f.amplitude == doctest::Approx(5.0).epsilon(0.03));
  CHECK(std::abs(f.offset) < 0.05);
  CHECK(f.residual < 0.07);
}

TEST_CASE("exponential fit with an offset and few decay times") {
  std::vector<double> t, y;
  for (int k = 0; k < 40; ++k) {
    t.push_back(0.05 * k);
    y.push_back(-0.8 * std::exp(-t.back() / 3.0) + 0.3);
  }
  const auto f = fit_exponential(t, y);
  CHECK(f.T == doctest::Approx(3.0).epsilon(1e-6));
  CHECK(f.amplitude == doctest::Approx(-0.8).epsilon(1e-6));
  CHECK(f.offset == doctest::Approx(0.3).epsilon(1e-6));
}

TEST_CASE("exponential fit failure modes") {
  std::vector<double> t, flat, grow;
  for (int k = 0; k < 20; ++k) {
    t.push_back(k);
    flat.push_back(1.5);
    grow.push_back(std::exp(0.1 * k));
  }
  CHECK_THROWS_AS(fit_exponential(t, flat), FitError);
  CHECK_THROWS_AS(fit_exponential(t, std::vector<double>(20, 0.0)), FitError);
  CHECK_THROWS_AS(fit_exponential(t, grow), FitError);
  CHECK_THROWS_AS(fit_exponential({0, 1, 2}, {1, 0.5, 0.25}), FitError);
  auto bad = grow;
  bad[3] = std::nan("");
  CHECK_THROWS_AS(fit_exponential(t, bad), FitError);
}

TEST_CASE("damped cosine fit") {
  std::vector<double> t, y;
  for (int k = 0; k < 200; ++k) {
    t.push_back(0.05 * k);
    y.push_back(0.9 * std::exp(-t.back() / 4.0) * std::cos(3.1 * t.back() + 0.4) +
                0.1);
  }
  const auto f = fit_damped_cosine(t, y);
  CHECK(f.omega == doctest::Approx(3.1).epsilon(1e-6));
  CHECK(f.T == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(f.amplitude == doctest::Approx(0.9).epsilon(1e-6));
  CHECK(f.offset == doctest::Approx(0.1).epsilon(1e-6));
  CHECK(std::remainder(f.phase - 0.4, 2 * std::numbers::pi) == doctest::Approx(0.0).epsilon(1e-6));
}
