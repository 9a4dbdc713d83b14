#include "relzeta/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>

namespace relzeta {

namespace {

ExponentFit ols(const std::vector<std::pair<double, double>>& xy) {
  if (xy.size() < 3)
    throw DomainError("fit: needs at least 3 usable samples");
  int n = int(xy.size());
  double sx = 0, sy = 0;
  for (auto& [x, y] : xy) {
    sx += x;
    sy += y;
  }
  double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (auto& [x, y] : xy) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (!(sxx > 0)) throw DomainError("fit: degenerate abscissae");
  ExponentFit f;
  f.n = n;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssRes = 0;
  for (auto& [x, y] : xy) {
    double r = y - (f.slope * x + f.intercept);
    ssRes += r * r;
  }
  f.stdErr = std::sqrt(std::max(ssRes, 0.0) / (n - 2) / sxx);
  f.r2 = syy > 0 ? std::max(0.0, 1.0 - ssRes / syy) : 1.0;
  return f;
}

}  // namespace

ExponentFit fit_exponent(
    const std::vector<std::pair<double, double>>& samples) {
  std::vector<std::pair<double, double>> xy;
  for (auto& [p0, v] : samples) {
    if (!(p0 > 0) || !std::isfinite(v)) continue;
    double av = std::abs(v);
    if (av < 1e-300) continue;
    xy.emplace_back(std::log(p0), std::log(av));
  }
  return ols(xy);
}

ExponentFit fit_linear(const std::vector<std::pair<double, double>>& samples) {
  std::vector<std::pair<double, double>> xy;
  for (auto& [x, y] : samples)
    if (std::isfinite(x) && std::isfinite(y)) xy.emplace_back(x, y);
  return ols(xy);
}

std::vector<ScanPoint> scan(const std::vector<double>& p0Grid, Vec3 direction,
                            const KernelConfig& cfg, double m,
                            const QuadSpec& spec, int threads) {
  if (p0Grid.empty()) throw DomainError("scan: empty grid");
  for (std::size_t i = 0; i < p0Grid.size(); ++i) {
    if (!(p0Grid[i] >= 1.0))
      throw DomainError("scan: grid values must be >= 1");
    if (i > 0 && !(p0Grid[i] > p0Grid[i - 1]))
      throw DomainError("scan: grid must be strictly increasing");
  }
  double dn = norm(direction);
  if (!(dn > 0)) throw DomainError("scan: zero direction");
  direction = (1.0 / dn) * direction;
  cfg.validate();

  std::vector<ScanPoint> out(p0Grid.size());
  auto runOne = [&](std::size_t i) {
    double p0 = p0Grid[i];
    double absP = std::sqrt(std::max(p0 * p0 - 1.0, 0.0));
    try {
      out[i].breakdown =
          evaluate_multiplier(Momentum::from(absP * direction), cfg, m, spec);
    } catch (const std::exception& e) {
      out[i].error = e.what();
      out[i].breakdown.p0 = p0;
      out[i].breakdown.absP = absP;
      out[i].breakdown.m = m;
      out[i].breakdown.cfg = cfg;
    }
  };

  int nw = std::clamp<int>(threads, 1, int(p0Grid.size()));
  if (nw <= 1) {
    for (std::size_t i = 0; i < p0Grid.size(); ++i) runOne(i);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < nw; ++t)
      pool.emplace_back([&, t] {
        for (std::size_t i = t; i < p0Grid.size(); i += nw) runOne(i);
      });
    for (auto& th : pool) th.join();
  }
  return out;
}

double breakdown_quantity(const MultiplierBreakdown& b, FitQuantity q) {
  switch (q) {
    case FitQuantity::Zeta: return b.zeta;
    case FitQuantity::ZetaK: return b.zetaK;
    case FitQuantity::Zeta0: return b.zeta0Full;
    case FitQuantity::ZetaL: return b.zetaLFull;
    case FitQuantity::TildeZeta: return b.tildeZeta;
    case FitQuantity::TildeZetaLm: return b.tildeZetaLm;
    case FitQuantity::TildeZeta1: return b.tildeZeta1;
  }
  return 0;
}

ExponentFit fit_quantity(const std::vector<MultiplierBreakdown>& rows,
                         FitQuantity q) {
  std::vector<std::pair<double, double>> samples;
  for (const auto& b : rows) {
    if (b.p0 < 10.0) continue;
    double v = breakdown_quantity(b, q);
    if (q == FitQuantity::TildeZeta1) {
      double av = std::abs(v);
      if (av < 1e-300 || !std::isfinite(av)) continue;
      samples.emplace_back(std::pow(b.p0, 1.0 / b.m), std::log(av));
    } else {
      samples.emplace_back(b.p0, v);
    }
  }
  return q == FitQuantity::TildeZeta1 ? fit_linear(samples)
                                      : fit_exponent(samples);
}

BoundReport check_bounds(const std::vector<MultiplierBreakdown>& rows,
                         const KernelConfig& cfg) {
  std::vector<MultiplierBreakdown> usable;
  for (const auto& b : rows)
    if (b.p0 >= 10.0) usable.push_back(b);
  if (usable.size() < 8)
    throw DomainError("check_bounds: needs >= 8 points with p0 >= 10");
  double lo = usable.front().p0, hi = usable.front().p0;
  for (const auto& b : usable) {
    lo = std::min(lo, b.p0);
    hi = std::max(hi, b.p0);
  }
  if (std::log10(hi / lo) < 1.5)
    throw DomainError("check_bounds: grid must span >= 1.5 decades");

  double rho = cfg.rho();
  BoundReport rep;
  rep.m = usable.front().m;
  rep.zetaTarget = 0.5 * (rho + cfg.gamma);
  rep.zetaFit = fit_quantity(usable, FitQuantity::Zeta);
  rep.zetaSlopePass = std::abs(rep.zetaFit.slope - rep.zetaTarget) <= 0.05;
  rep.zetaPositive = true;
  for (const auto& b : usable)
    if (!(b.zeta > 0)) rep.zetaPositive = false;

  auto boundCheck = [&](FitQuantity q, double bound) {
    BoundCheck c;
    c.fit = fit_quantity(usable, q);
    c.bound = bound;
    c.pass = c.fit.slope <= bound;
    return c;
  };
  rep.zeta0 = boundCheck(FitQuantity::Zeta0, rep.zetaTarget + 0.1);
  rep.zetaL = boundCheck(FitQuantity::ZetaL, 0.5 * rho + 0.1);
  rep.zetaK = boundCheck(FitQuantity::ZetaK, 0.5 * rho + 0.2);
  rep.tildeZetaLm = boundCheck(FitQuantity::TildeZetaLm, 0.5 * rho + 0.3);

  rep.tildeZeta1Fit = fit_quantity(usable, FitQuantity::TildeZeta1);
  rep.tildeZeta1Pass =
      rep.tildeZeta1Fit.slope < 0.0 && rep.tildeZeta1Fit.r2 >= 0.9;
  return rep;
}

const char* const kScanCsvHeader =
    "p0,zeta,zeta_err,zetaK,zetaK_err,zeta0,zetaL,tildeZeta,tildeZeta0m,"
    "tildeZetaLm,tildeZeta1,m,kernel";

std::string format_sig17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_scan_csv(std::ostream& os, const std::vector<ScanPoint>& points) {
  os << kScanCsvHeader << "\n";
  for (const auto& pt : points) {
    if (!pt.ok()) continue;
    const MultiplierBreakdown& b = pt.breakdown;
    os << format_sig17(b.p0) << ',' << format_sig17(b.zeta) << ','
       << format_sig17(b.zetaErr) << ',' << format_sig17(b.zetaK) << ','
       << format_sig17(b.zetaKErr) << ',' << format_sig17(b.zeta0Full) << ','
       << format_sig17(b.zetaLFull) << ',' << format_sig17(b.tildeZeta) << ','
       << format_sig17(b.tildeZeta0m) << ',' << format_sig17(b.tildeZetaLm)
       << ',' << format_sig17(b.tildeZeta1) << ',' << format_sig17(b.m)
       << ",\"" << b.cfg.format() << "\"\n";
  }
}

std::vector<ScanCsvRow> read_scan_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line))
    throw DomainError("csv: empty input");
  if (line.size() && line.back() == '\r') line.pop_back();
  if (line != kScanCsvHeader)
    throw DomainError("csv: unexpected header: " + line);
  std::vector<ScanCsvRow> rows;
  while (std::getline(is, line)) {
    if (line.size() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::size_t pos = 0;
    for (int k = 0; k < 12; ++k) {
      std::size_t c = line.find(',', pos);
      if (c == std::string::npos)
        throw DomainError("csv: malformed row: " + line);
      fields.push_back(line.substr(pos, c - pos));
      pos = c + 1;
    }
    std::string kernel = line.substr(pos);
    if (kernel.size() >= 2 && kernel.front() == '"' && kernel.back() == '"')
      kernel = kernel.substr(1, kernel.size() - 2);
    auto num = [&](int i) {
      try {
        std::size_t used = 0;
        double v = std::stod(fields[i], &used);
        if (used != fields[i].size()) throw std::invalid_argument(fields[i]);
        return v;
      } catch (const std::exception&) {
        throw DomainError("csv: bad number '" + fields[i] + "'");
      }
    };
    ScanCsvRow r;
    r.p0 = num(0);
    r.zeta = num(1);
    r.zetaErr = num(2);
    r.zetaK = num(3);
    r.zetaKErr = num(4);
    r.zeta0 = num(5);
    r.zetaL = num(6);
    r.tildeZeta = num(7);
    r.tildeZeta0m = num(8);
    r.tildeZetaLm = num(9);
    r.tildeZeta1 = num(10);
    r.m = num(11);
    r.kernel = kernel;
    rows.push_back(std::move(r));
  }
  if (rows.empty()) throw DomainError("csv: no data rows");
  return rows;
}

}  // namespace relzeta
