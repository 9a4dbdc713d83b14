#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <sstream>
#include <vector>

#include "doctest.h"
#include "relzeta/asymptotics.hpp"

using namespace relzeta;

namespace {

std::vector<double> log_grid(double lo, double hi, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i)
    g[i] = lo * std::pow(hi / lo, double(i) / double(n - 1));
  return g;
}

KernelConfig hard_kernel() {
  KernelConfig cfg;
  cfg.a = 1.0;
  cfg.gamma = 0.5;
  return cfg;
}

// breakdown rows following exact power laws, for exercising the fit and
// bound logic without quadrature
std::vector<MultiplierBreakdown> synthetic_rows(double zetaSlope) {
  std::vector<MultiplierBreakdown> rows;
  KernelConfig cfg = hard_kernel();  // rho = 1, gamma = 0.5, target 0.75
  for (double p0 : log_grid(10.0, 400.0, 10)) {
    MultiplierBreakdown b;
    b.p0 = p0;
    b.absP = std::sqrt(p0 * p0 - 1.0);
    b.m = 45.0;
    b.cfg = cfg;
    b.zeta = std::pow(p0, zetaSlope);
    b.zetaK = std::pow(p0, 0.5);
    b.zeta0Full = 2.0 * std::pow(p0, 0.7);
    b.zetaLFull = -0.5 * std::pow(p0, 0.3);
    b.tildeZeta = std::pow(p0, 0.6);
    b.tildeZeta0m = std::pow(p0, 0.55);
    b.tildeZetaLm = -std::pow(p0, 0.1);
    b.tildeZeta1 = 3.0 * std::exp(-2.0 * std::pow(p0, 1.0 / 45.0));
    rows.push_back(b);
  }
  return rows;
}

}  // namespace

TEST_CASE("power-law fitting") {
  std::vector<std::pair<double, double>> pts;
  for (double p0 : log_grid(2.0, 500.0, 12))
    pts.push_back({p0, 7.0 * std::pow(p0, 0.75)});
  ExponentFit f = fit_exponent(pts);
  CHECK(f.slope == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(f.intercept == doctest::Approx(std::log(7.0)).epsilon(1e-10));
  CHECK(f.stdErr <= 1e-12);
  CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.n == 12);

  // bounded multiplicative ripple moves the slope by less than 0.1
  pts.clear();
  for (double p0 : log_grid(2.0, 500.0, 40))
    pts.push_back(
        {p0, std::pow(p0, 0.75) * (1.0 + 0.1 * std::sin(std::log(p0)))});
  f = fit_exponent(pts);
  CHECK(std::abs(f.slope - 0.75) <= 0.1);
  CHECK(f.r2 >= 0.99);

  pts.clear();
  for (double p0 : log_grid(2.0, 500.0, 9)) pts.push_back({p0, 4.2});
  f = fit_exponent(pts);
  CHECK(std::abs(f.slope) <= 1e-12);

  // sign is ignored, magnitudes fitted
  pts.clear();
  for (double p0 : log_grid(2.0, 500.0, 9))
    pts.push_back({p0, -3.0 * std::pow(p0, -0.4)});
  f = fit_exponent(pts);
  CHECK(f.slope == doctest::Approx(-0.4).epsilon(1e-10));

  // underflowed samples are dropped; too few survivors is an error
  pts = {{2.0, 1.0}, {4.0, 1e-310}, {8.0, 2.0}, {16.0, 1e-305}};
  CHECK_THROWS_AS(fit_exponent(pts), DomainError);
  pts = {{2.0, 1.0}, {4.0, 1.5}};
  CHECK_THROWS_AS(fit_exponent(pts), DomainError);
}

TEST_CASE("linear fitting") {
  std::vector<std::pair<double, double>> pts;
  for (double x = 0.0; x < 10.0; x += 1.0) pts.push_back({x, 3.0 - 2.0 * x});
  ExponentFit f = fit_linear(pts);
  CHECK(f.slope == doctest::Approx(-2.0).epsilon(1e-13));
  CHECK(f.intercept == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(f.r2 == doctest::Approx(1.0));
  CHECK_THROWS_AS(fit_linear({{0.0, 1.0}, {1.0, 2.0}}), DomainError);
}

TEST_CASE("scan grid validation") {
  KernelConfig cfg = hard_kernel();
  QuadSpec spec;
  spec.relTol = 1e-4;
  CHECK_THROWS_AS(scan({}, {0, 0, 1}, cfg, 6.0, spec), DomainError);
  CHECK_THROWS_AS(scan({2.0, 2.0}, {0, 0, 1}, cfg, 6.0, spec), DomainError);
  CHECK_THROWS_AS(scan({2.0, 1.5}, {0, 0, 1}, cfg, 6.0, spec), DomainError);
  CHECK_THROWS_AS(scan({0.5}, {0, 0, 1}, cfg, 6.0, spec), DomainError);
  CHECK_THROWS_AS(scan({2.0}, {0, 0, 0}, cfg, 6.0, spec), DomainError);
}

TEST_CASE("scan matches pointwise evaluation and is isotropic") {
  KernelConfig cfg = hard_kernel();
  QuadSpec spec;
  spec.relTol = 1e-6;

  std::vector<ScanPoint> pts = scan({2.0}, {0, 0, 1}, cfg, 6.0, spec);
  REQUIRE(pts.size() == 1);
  REQUIRE(pts[0].ok());
  double absP = std::sqrt(3.0);
  MultiplierBreakdown direct = evaluate_multiplier(
      Momentum::from({0, 0, absP}), cfg, 6.0, spec);
  CHECK(pts[0].breakdown.zeta == direct.zeta);
  CHECK(pts[0].breakdown.zetaK == direct.zetaK);
  CHECK(pts[0].breakdown.tildeZeta == direct.tildeZeta);
  CHECK(pts[0].breakdown.p0 == doctest::Approx(2.0).epsilon(1e-14));

  // the multiplier depends on p only through p0
  std::vector<ScanPoint> other = scan({2.0}, {1, 0, 0}, cfg, 6.0, spec);
  REQUIRE(other[0].ok());
  CHECK(other[0].breakdown.tildeZeta ==
        doctest::Approx(pts[0].breakdown.tildeZeta).epsilon(1e-6));
  CHECK(other[0].breakdown.zeta ==
        doctest::Approx(pts[0].breakdown.zeta).epsilon(1e-6));

  // direction normalization is an input convenience, not a value change
  std::vector<ScanPoint> scaled = scan({2.0}, {0, 0, 7.5}, cfg, 6.0, spec);
  CHECK(scaled[0].breakdown.zeta == pts[0].breakdown.zeta);
}

TEST_CASE("scan worker count does not change values") {
  KernelConfig cfg = hard_kernel();
  QuadSpec spec;
  spec.relTol = 1e-4;
  std::vector<double> grid = {1.5, 2.0, 3.0, 5.0};
  std::vector<ScanPoint> one = scan(grid, {0, 0, 1}, cfg, 6.0, spec, 1);
  std::vector<ScanPoint> three = scan(grid, {0, 0, 1}, cfg, 6.0, spec, 3);
  REQUIRE(one.size() == three.size());
  for (size_t i = 0; i < one.size(); ++i) {
    REQUIRE(one[i].ok());
    REQUIRE(three[i].ok());
    CHECK(one[i].breakdown.zeta == three[i].breakdown.zeta);
    CHECK(one[i].breakdown.zetaK == three[i].breakdown.zetaK);
    CHECK(one[i].breakdown.tildeZeta == three[i].breakdown.tildeZeta);
    CHECK(one[i].breakdown.tildeZeta1 == three[i].breakdown.tildeZeta1);
  }
}

TEST_CASE("quantity extraction and the asymptotic fit window") {
  std::vector<MultiplierBreakdown> rows = synthetic_rows(0.75);
  CHECK(breakdown_quantity(rows[0], FitQuantity::Zeta) == rows[0].zeta);
  CHECK(breakdown_quantity(rows[0], FitQuantity::ZetaL) == rows[0].zetaLFull);
  CHECK(breakdown_quantity(rows[0], FitQuantity::Zeta0) == rows[0].zeta0Full);
  CHECK(breakdown_quantity(rows[0], FitQuantity::TildeZeta1) ==
        rows[0].tildeZeta1);

  ExponentFit f = fit_quantity(rows, FitQuantity::Zeta);
  CHECK(f.slope == doctest::Approx(0.75).epsilon(1e-10));
  CHECK(f.n == 10);
  CHECK(fit_quantity(rows, FitQuantity::ZetaL).slope ==
        doctest::Approx(0.3).epsilon(1e-10));

  // points below the p0 >= 10 window are excluded from fits
  MultiplierBreakdown low = rows[0];
  low.p0 = 3.0;
  low.zeta = 1e6;  // would wreck the fit if included
  std::vector<MultiplierBreakdown> withLow = rows;
  withLow.insert(withLow.begin(), low);
  ExponentFit f2 = fit_quantity(withLow, FitQuantity::Zeta);
  CHECK(f2.n == 10);
  CHECK(f2.slope == doctest::Approx(0.75).epsilon(1e-10));

  // the large-ball remainder regresses against (p0)^(1/m)
  ExponentFit t1 = fit_quantity(rows, FitQuantity::TildeZeta1);
  CHECK(t1.slope == doctest::Approx(-2.0).epsilon(1e-10));
  CHECK(t1.r2 == doctest::Approx(1.0));
}

TEST_CASE("bound report on synthetic power laws") {
  KernelConfig cfg = hard_kernel();
  BoundReport rep = check_bounds(synthetic_rows(0.75), cfg);
  CHECK(rep.zetaTarget == doctest::Approx(0.75));
  CHECK(rep.zetaSlopePass);
  CHECK(rep.zetaPositive);
  CHECK(rep.zeta0.pass);
  CHECK(rep.zeta0.bound == doctest::Approx(0.85));
  CHECK(rep.zetaL.pass);
  CHECK(rep.zetaL.bound == doctest::Approx(0.6));
  CHECK(rep.zetaK.pass);
  CHECK(rep.zetaK.bound == doctest::Approx(0.7));
  CHECK(rep.tildeZetaLm.pass);
  CHECK(rep.tildeZetaLm.bound == doctest::Approx(0.8));
  CHECK(rep.tildeZeta1Pass);
  CHECK(rep.m == doctest::Approx(45.0));

  // a wrong zeta exponent fails the slope gate but nothing else
  BoundReport bad = check_bounds(synthetic_rows(0.9), cfg);
  CHECK_FALSE(bad.zetaSlopePass);
  CHECK(bad.zeta0.pass);

  // negative zeta anywhere fails positivity
  std::vector<MultiplierBreakdown> rows = synthetic_rows(0.75);
  rows[4].zeta = -1.0;
  CHECK_FALSE(check_bounds(rows, cfg).zetaPositive);

  // preconditions: enough points, far enough out, wide enough span
  rows = synthetic_rows(0.75);
  rows.resize(6);
  CHECK_THROWS_AS(check_bounds(rows, cfg), DomainError);
  rows = synthetic_rows(0.75);
  for (auto& b : rows) b.p0 *= 0.1;  // everything below the window
  CHECK_THROWS_AS(check_bounds(rows, cfg), DomainError);
  rows = synthetic_rows(0.75);
  for (auto& b : rows) b.p0 = 10.0 + 0.1 * b.p0 / 10.0;  // narrow span
  CHECK_THROWS_AS(check_bounds(rows, cfg), DomainError);
}

TEST_CASE("csv round trip") {
  std::vector<MultiplierBreakdown> rows = synthetic_rows(0.75);
  std::vector<ScanPoint> pts;
  for (const auto& b : rows) pts.push_back({b, ""});
  pts[3].error = "quadrature failure";  // failed points are skipped on write

  std::ostringstream os;
  write_scan_csv(os, pts);
  std::string text = os.str();
  CHECK(text.rfind(kScanCsvHeader, 0) == 0);
  CHECK(text.find("\"hard:a=1,gamma=0.5\"") != std::string::npos);

  std::istringstream is(text);
  std::vector<ScanCsvRow> back = read_scan_csv(is);
  REQUIRE(back.size() == rows.size() - 1);
  size_t j = 0;
  for (size_t i = 0; i < rows.size(); ++i) {
    if (i == 3) continue;
    CHECK(back[j].p0 == rows[i].p0);
    CHECK(back[j].zeta == rows[i].zeta);
    CHECK(back[j].zetaK == rows[i].zetaK);
    CHECK(back[j].zeta0 == rows[i].zeta0Full);
    CHECK(back[j].zetaL == rows[i].zetaLFull);
    CHECK(back[j].tildeZeta == rows[i].tildeZeta);
    CHECK(back[j].tildeZeta0m == rows[i].tildeZeta0m);
    CHECK(back[j].tildeZetaLm == rows[i].tildeZetaLm);
    CHECK(back[j].tildeZeta1 == rows[i].tildeZeta1);
    CHECK(back[j].m == rows[i].m);
    CHECK(back[j].kernel == rows[i].cfg.format());
    ++j;
  }

  std::istringstream bad("p0,zeta\n1,2\n");
  CHECK_THROWS_AS(read_scan_csv(bad), DomainError);
}

TEST_CASE("decimal formatting survives the round trip") {
  for (double v : {1.0 / 3.0, 0.1, 1e-300, 123456.789, -2.5e17}) {
    CHECK(std::stod(format_sig17(v)) == v);
  }
}
