#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "relzeta/common.hpp"
#include "relzeta/quadrature.hpp"
#include "relzeta/specfun.hpp"

using namespace relzeta;

namespace {

// ln I0 by direct quadrature of the defining angular average, in scaled form
// so the integrand stays in [0,1]
double log_i0_quad(double x) {
  QuadSpec spec;
  spec.relTol = 1e-13;
  auto f = [&](double phi) { return std::exp(x * (std::cos(phi) - 1.0)); };
  return std::log(integrate_adaptive(f, 0.0, M_PI, spec).value / M_PI) + x;
}

double j2_quad(double l, double j) {
  QuadSpec spec;
  spec.relTol = 1e-11;
  auto f = [&](double y) {
    double w = std::hypot(y, 1.0);
    return y * std::exp(-l * w + log_i0(j * y)) / w;
  };
  return integrate_singular_semiinf(f, 1.0, std::max(l - j, 1e-8), spec).value;
}

double k2tilde_quad(double l, double j) {
  QuadSpec spec;
  spec.relTol = 1e-11;
  auto f = [&](double y) {
    double w = std::hypot(y, 1.0);
    return y * w * std::exp(-l * w + log_i0(j * y));
  };
  return integrate_singular_semiinf(f, 1.0, std::max(l - j, 1e-8), spec).value;
}

}  // namespace

TEST_CASE("log_i0 explicit values") {
  CHECK(log_i0(0.0) == 0.0);
  CHECK(log_i0(1.0) == doctest::Approx(0.2359143585071786).epsilon(1e-12));
  // leading asymptotic: I0(x) ~ e^x/sqrt(2 pi x), remainder positive and
  // bounded by the next-order term
  double excess = log_i0(100.0) - (100.0 - 0.5 * std::log(200.0 * M_PI));
  CHECK(excess >= 0.0);
  CHECK(excess <= 0.002);
  CHECK_THROWS_AS(log_i0(-0.5), DomainError);
}

TEST_CASE("log_i0 matches quadrature across the branch point") {
  for (int i = 0; i <= 60; ++i) {
    double x = 30.0 * i / 60.0;
    double ref = log_i0_quad(x);
    double v = log_i0(x);
    CHECK(std::abs(v - ref) <=
          1e-10 * std::max({std::abs(v), std::abs(ref), 1e-3}));
  }
  // tiny arguments: I0(x) - 1 ~ x^2/4 must survive in log space
  for (double x : {1e-20, 1e-12, 1e-8, 1e-4}) {
    CHECK(log_i0(x) == doctest::Approx(x * x / 4.0).epsilon(1e-10));
  }
  // huge arguments: finite, close to x - log sqrt(2 pi x)
  double big = log_i0(1e6);
  CHECK(std::isfinite(big));
  CHECK(big == doctest::Approx(1e6 - 0.5 * std::log(2.0 * M_PI * 1e6))
                   .epsilon(1e-9));
}

TEST_CASE("profile integral closed form j2") {
  CHECK(j2_closed(1.0, 0.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-13));
  CHECK(j2_closed(2.0, 1.0) ==
        doctest::Approx(std::exp(-std::sqrt(3.0)) / std::sqrt(3.0))
            .epsilon(1e-10));
  // depends on (l, j) only through sqrt(l^2 - j^2)
  CHECK(j2_closed(5.0, 3.0) == doctest::Approx(j2_closed(4.0, 0.0)).epsilon(1e-12));
  CHECK_THROWS_AS(j2_closed(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(j2_closed(1.0, 2.0), DomainError);
}

TEST_CASE("j2 closed form against direct quadrature on a grid") {
  for (int il = 0; il < 10; ++il) {
    double l = 1.0 + 49.0 * il / 9.0;
    for (int ij = 0; ij < 10; ++ij) {
      double j = l * (0.95 * ij / 9.0);
      double ref = j2_quad(l, j);
      CHECK(j2_closed(l, j) == doctest::Approx(ref).epsilon(1e-8));
    }
  }
}

TEST_CASE("k2tilde closed form explicit values") {
  CHECK(k2tilde_closed(2.0, 0.0) ==
        doctest::Approx(1.25 * std::exp(-2.0)).epsilon(1e-12));
  for (double l : {1.0, 5.0, 10.0}) {
    double want = std::exp(-l) * (1.0 / l + 2.0 / (l * l) + 2.0 / (l * l * l));
    CHECK(k2tilde_closed(l, 0.0) == doctest::Approx(want).epsilon(1e-10));
  }
  CHECK_THROWS_AS(k2tilde_closed(1.0, 1.5), DomainError);
}

TEST_CASE("k2tilde against quadrature and against d2/dl2 of j2") {
  for (int il = 0; il < 10; ++il) {
    double l = 1.0 + 49.0 * il / 9.0;
    for (int ij = 0; ij < 10; ij += 3) {
      double j = l * (0.95 * ij / 9.0);
      double ref = k2tilde_quad(l, j);
      CHECK(k2tilde_closed(l, j) == doctest::Approx(ref).epsilon(1e-6));
    }
  }
  RandomStream rng(21);
  for (int i = 0; i < 30; ++i) {
    double l = rng.uniform(2.0, 30.0);
    double j = l * rng.uniform(0.0, 0.9);
    double h = 1e-4 * l;
    double fd =
        (j2_closed(l + h, j) - 2.0 * j2_closed(l, j) + j2_closed(l - h, j)) /
        (h * h);
    CHECK(k2tilde_closed(l, j) == doctest::Approx(fd).epsilon(1e-5));
  }
}

TEST_CASE("truncated singular profile integral") {
  // (l,j)=(1,0), gamma=1: integrand e^{-sqrt(y^2+1)} is monotone on [0,1]
  double v = kbar_gamma_num(1.0, 0.0, 1.0);
  CHECK(v > std::exp(-std::sqrt(2.0)));
  CHECK(v < std::exp(-1.0));

  for (double l : {1.0, 5.0, 20.0}) {
    double j = 0.9 * l;
    for (double gamma : {0.5, 1.5}) {
      double w = std::sqrt((l - j) * (l + j));
      CHECK(kbar_gamma_num(l, j, gamma) <= 10.0 * std::exp(-w));
    }
  }

  // y^{1-gamma} grows pointwise with gamma on (0,1), so kbar does too
  double g05 = kbar_gamma_num(3.0, 1.0, 0.5);
  double g10 = kbar_gamma_num(3.0, 1.0, 1.0);
  double g15 = kbar_gamma_num(3.0, 1.0, 1.5);
  CHECK(g05 < g10);
  CHECK(g10 < g15);
}

TEST_CASE("profile maximum bound with constant 3") {
  RandomStream rng(22);
  for (int i = 0; i < 200; ++i) {
    double l = rng.uniform(0.5, 40.0);
    double j = l * rng.uniform(0.0, 0.999);
    double w = std::sqrt((l - j) * (l + j));
    double m = exp_profile_max(l, j);
    CHECK(m <= 3.0 * std::exp(-w));
    // grid check of the same statement, matching the analytic maximum
    double gridMax = 0.0;
    for (int k = 0; k <= 1000; ++k) {
      double x = k / 1000.0;
      gridMax = std::max(gridMax,
                         std::exp(-l * std::sqrt(x * x + 1.0) + j * x));
    }
    CHECK(gridMax <= m * (1.0 + 1e-12));
    CHECK(gridMax <= 3.0 * std::exp(-w));
  }
}
