#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "relzeta/multiplier.hpp"

namespace relzeta {

// ordinary least squares y = slope*x + intercept with the usual slope
// standard error and coefficient of determination
struct ExponentFit {
  double slope = 0;
  double intercept = 0;
  double stdErr = 0;
  double r2 = 1;
  int n = 0;
};

// power-law fit: OLS on (log p0, log |value|); samples with |value| below
// the 1e-300 floor are dropped; requires >= 3 surviving samples
ExponentFit fit_exponent(const std::vector<std::pair<double, double>>& samples);

// plain linear fit on raw (x, y); used for stretched-exponential decay
// checks where x = (p0)^{1/m} and y = log |value|
ExponentFit fit_linear(const std::vector<std::pair<double, double>>& samples);

// one momentum-grid evaluation; failures are recorded, not fatal
struct ScanPoint {
  MultiplierBreakdown breakdown;
  std::string error;  // empty on success
  bool ok() const { return error.empty(); }
};

// evaluates the full breakdown at p = sqrt(p0^2-1) * direction for each grid
// point.  p0Grid must be strictly increasing with every entry >= 1.  Points
// are distributed over `threads` workers; the output order and every value
// are independent of the worker count.
std::vector<ScanPoint> scan(const std::vector<double>& p0Grid, Vec3 direction,
                            const KernelConfig& cfg, double m,
                            const QuadSpec& spec = {}, int threads = 1);

// quantities that can be pulled out of a breakdown for fitting
enum class FitQuantity {
  Zeta,
  ZetaK,
  Zeta0,
  ZetaL,
  TildeZeta,
  TildeZetaLm,
  TildeZeta1,
};

double breakdown_quantity(const MultiplierBreakdown& b, FitQuantity q);

// power-law fit of |quantity| over the points with p0 >= 10 (asymptotic
// window; smaller p0 is preasymptotic).  TildeZeta1 instead regresses
// log |value| against (p0)^{1/m}.
ExponentFit fit_quantity(const std::vector<MultiplierBreakdown>& rows,
                         FitQuantity q);

struct BoundCheck {
  ExponentFit fit;
  double bound = 0;
  bool pass = false;
};

// numerical verification report for the large-p0 growth/decay statements:
//   slope(zeta)            == (rho+gamma)/2 within 0.05
//   slope(|zeta0|)         <= (rho+gamma)/2 + 0.1
//   slope(|zetaL|)         <= rho/2 + 0.1
//   slope(|zetaK|)         <= rho/2 + 0.2
//   slope(|tildeZetaLm|)   <= rho/2 + 0.3
//   log|tildeZeta1| decreasing in (p0)^{1/m} with r^2 >= 0.9
//   zeta > 0 at every point
struct BoundReport {
  ExponentFit zetaFit;
  double zetaTarget = 0;
  bool zetaSlopePass = false;
  bool zetaPositive = false;
  BoundCheck zeta0;
  BoundCheck zetaL;
  BoundCheck zetaK;
  BoundCheck tildeZetaLm;
  ExponentFit tildeZeta1Fit;
  bool tildeZeta1Pass = false;
  double m = 1;
};

// requires >= 8 points with p0 >= 10 spanning >= 1.5 decades
BoundReport check_bounds(const std::vector<MultiplierBreakdown>& rows,
                         const KernelConfig& cfg);

// CSV row schema shared by scan output and the fit/plot readers; the kernel
// field is written quoted because kernel specs contain commas
extern const char* const kScanCsvHeader;

void write_scan_csv(std::ostream& os, const std::vector<ScanPoint>& points);

struct ScanCsvRow {
  double p0 = 0;
  double zeta = 0, zetaErr = 0;
  double zetaK = 0, zetaKErr = 0;
  double zeta0 = 0, zetaL = 0;
  double tildeZeta = 0;
  double tildeZeta0m = 0, tildeZetaLm = 0;
  double tildeZeta1 = 0;
  double m = 1;
  std::string kernel;
};

std::vector<ScanCsvRow> read_scan_csv(std::istream& is);

// 17-significant-digit decimal formatting used for all file output
std::string format_sig17(double v);

}  // namespace relzeta
