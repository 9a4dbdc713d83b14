#include "relzeta/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>

namespace relzeta {

namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1,1] (positive half; node 7 is 0)
constexpr double kNode[8] = {
    0.9914553711208126392068547, 0.9491079123427585245261897,
    0.8648644233597690727897128, 0.7415311855993944398638648,
    0.5860872354676911302941448, 0.4058451513773971669066064,
    0.2077849550078984676006894, 0.0};
constexpr double kWK[8] = {
    0.0229353220105292249637320, 0.0630920926299785532907007,
    0.1047900103222501838398763, 0.1406532597155259187451896,
    0.1690047266392679028265834, 0.1903505780647854099132564,
    0.2044329400752988924141620, 0.2094821410847278280129992};
constexpr double kWG[4] = {
    0.1294849661688696932706114, 0.2797053914892766679014678,
    0.3818300505051189449503698, 0.4179591836734693877551020};

struct Panel {
  double a = 0, b = 0;
  int depth = 0;
  std::array<double, kQuadMaxComp> val{}, err{};
  double priority = 0;
};

struct PanelOrder {
  bool operator()(const Panel& x, const Panel& y) const {
    if (x.priority != y.priority) return x.priority < y.priority;
    if (x.a != y.a) return x.a > y.a;  // ties: leftmost panel first
    return x.b > y.b;
  }
};

void eval_panel(const IntegrandN& f, int n, Panel& p, long& evals) {
  double c = 0.5 * (p.a + p.b), h = 0.5 * (p.b - p.a);
  std::array<double, kQuadMaxComp> kron{}, gauss{};
  std::array<double, kQuadMaxComp> fx{};
  for (int i = 0; i < 15; ++i) {
    int k = i < 8 ? i : 14 - i;
    double x = c + (i < 8 ? -h : h) * kNode[k];
    for (int j = 0; j < n; ++j) fx[j] = 0.0;
    f(x, fx.data());
    ++evals;
    for (int j = 0; j < n; ++j) {
      if (!std::isfinite(fx[j])) {
        std::ostringstream os;
        os << "integrand component " << j << " non-finite at x = " << x;
        throw QuadratureError(os.str());
      }
      kron[j] += kWK[k] * fx[j];
      // Gauss nodes sit at the odd Kronrod indices (midpoint included)
      if (k % 2 == 1) gauss[j] += kWG[k / 2] * fx[j];
    }
  }
  for (int j = 0; j < n; ++j) {
    p.val[j] = h * kron[j];
    p.err[j] = h * std::abs(kron[j] - gauss[j]);
  }
}

}  // namespace

QuadResultN integrate_adaptive_n(const IntegrandN& f, int n, double a, double b,
                                 const std::vector<double>& seeds,
                                 const QuadSpec& spec) {
  if (n < 1 || n > kQuadMaxComp)
    throw DomainError("integrate_adaptive_n: bad component count");
  if (!(spec.relTol > 0.0) || !(spec.absTol > 0.0))
    throw DomainError("integrate_adaptive_n: tolerances must be positive");
  if (spec.scaleComp >= n)
    throw DomainError("integrate_adaptive_n: scaleComp out of range");
  QuadResultN res;
  if (a == b) return res;
  if (!(a < b)) throw DomainError("integrate_adaptive_n: need a <= b");

  std::vector<double> cuts{a, b};
  for (double s : seeds)
    if (s > a && s < b) cuts.push_back(s);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::array<double, kQuadMaxComp> total{}, totalErr{};
  std::priority_queue<Panel, std::vector<Panel>, PanelOrder> active;
  std::vector<Panel> retired;
  long evals = 0;
  int panels = 0;

  auto errFloor = [&]() {
    return spec.scaleComp >= 0 ? kScaleFloorFactor * spec.relTol *
                                     std::abs(total[spec.scaleComp])
                               : 0.0;
  };

  auto push = [&](Panel&& p) {
    double pr = 0.0;
    double floor = errFloor();
    for (int j = 0; j < n; ++j) {
      double scale = std::max({spec.absTol, spec.relTol * std::abs(total[j]),
                               floor, 1e-300});
      pr = std::max(pr, p.err[j] / scale);
    }
    p.priority = pr;
    if (p.depth >= spec.maxDepth)
      retired.push_back(p);
    else
      active.push(p);
  };

  for (size_t i = 0; i + 1 < cuts.size(); ++i) {
    Panel p{cuts[i], cuts[i + 1], 0};
    eval_panel(f, n, p, evals);
    ++panels;
    for (int j = 0; j < n; ++j) {
      total[j] += p.val[j];
      totalErr[j] += p.err[j];
    }
    push(std::move(p));
  }

  auto converged = [&]() {
    double floor = errFloor();
    for (int j = 0; j < n; ++j)
      if (totalErr[j] > std::max({spec.absTol,
                                  spec.relTol * std::abs(total[j]), floor}))
        return false;
    return true;
  };

  while (!converged() && !active.empty() && panels < spec.maxPanels) {
    Panel worst = active.top();
    active.pop();
    double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b)) {  // interval at double resolution
      retired.push_back(worst);
      continue;
    }
    Panel left{worst.a, mid, worst.depth + 1};
    Panel right{mid, worst.b, worst.depth + 1};
    eval_panel(f, n, left, evals);
    eval_panel(f, n, right, evals);
    ++panels;
    for (int j = 0; j < n; ++j) {
      total[j] += left.val[j] + right.val[j] - worst.val[j];
      totalErr[j] += left.err[j] + right.err[j] - worst.err[j];
    }
    push(std::move(left));
    push(std::move(right));
  }

  bool ok = converged();
  if (!ok && !spec.softFail) {
    std::ostringstream os;
    os << "integrate_adaptive_n: tolerance not reached on [" << a << ", " << b
       << "] after " << panels << " panels";
    throw QuadratureError(os.str());
  }

  // deterministic final reduction: sum leaves left to right
  while (!active.empty()) {
    retired.push_back(active.top());
    active.pop();
  }
  std::sort(retired.begin(), retired.end(), [](const Panel& x, const Panel& y) {
    return x.a < y.a || (x.a == y.a && x.b < y.b);
  });
  for (const Panel& p : retired)
    for (int j = 0; j < n; ++j) {
      res.value[j] += p.val[j];
      res.errEstimate[j] += p.err[j];
    }
  res.evals = evals;
  res.converged = ok;
  return res;
}

QuadResult integrate_adaptive(const Integrand& f, double a, double b,
                              const std::vector<double>& seeds,
                              const QuadSpec& spec) {
  auto fn = [&f](double x, double* out) { out[0] = f(x); };
  QuadResultN rn = integrate_adaptive_n(fn, 1, a, b, seeds, spec);
  return {rn.value[0], rn.errEstimate[0], rn.evals, rn.converged};
}

QuadResult integrate_adaptive(const Integrand& f, double a, double b,
                              const QuadSpec& spec) {
  return integrate_adaptive(f, a, b, {}, spec);
}

QuadResultN integrate_singular_semiinf_n(const IntegrandN& f, int n,
                                         double singularExponent,
                                         double decayRate, double scale,
                                         const QuadSpec& spec) {
  if (!(singularExponent > -1.0))
    throw DomainError("integrate_singular_semiinf: exponent must be > -1");
  if (!(scale > 0.0))
    throw DomainError("integrate_singular_semiinf: scale must be > 0");
  // grade the origin so u^kappa soaks up the algebraic singularity; exponents
  // >= 1 need no grading
  double kappa = 2.0 / (1.0 + std::min(singularExponent, 1.0));

  auto head = [&](double u, double* out) {
    double y = scale * std::pow(u, kappa);
    double jac = scale * kappa * std::pow(u, kappa - 1.0);
    f(y, out);
    for (int j = 0; j < n; ++j) out[j] *= jac;
  };
  auto tail = [&](double t, double* out) {
    double y = scale / t;
    double jac = scale / (t * t);
    f(y, out);
    for (int j = 0; j < n; ++j) out[j] *= jac;
  };

  std::vector<double> tailSeeds;
  if (decayRate > 0.0) {
    // below this t the integrand is smaller than the peak by e^{-tailLog}
    double tCut = 1.0 / (1.0 + spec.tailLogThreshold / (decayRate * scale));
    tailSeeds = {tCut, std::min(0.5 * (1.0 + tCut), 1.0 - 1e-12)};
  }

  QuadResultN h = integrate_adaptive_n(head, n, 0.0, 1.0, {}, spec);
  QuadResultN t = integrate_adaptive_n(tail, n, 0.0, 1.0, tailSeeds, spec);
  QuadResultN res;
  for (int j = 0; j < n; ++j) {
    res.value[j] = h.value[j] + t.value[j];
    res.errEstimate[j] = h.errEstimate[j] + t.errEstimate[j];
  }
  res.evals = h.evals + t.evals;
  res.converged = h.converged && t.converged;
  return res;
}

QuadResult integrate_singular_semiinf(const Integrand& f,
                                      double singularExponent,
                                      double decayRate, const QuadSpec& spec) {
  auto fn = [&f](double x, double* out) { out[0] = f(x); };
  QuadResultN rn =
      integrate_singular_semiinf_n(fn, 1, singularExponent, decayRate, 1.0, spec);
  return {rn.value[0], rn.errEstimate[0], rn.evals, rn.converged};
}

double RegionSpec::splitRadius(double absP) const {
  if (!(m >= 1.0)) throw DomainError("RegionSpec: ball exponent m must be >= 1");
  return 0.5 * std::pow(absP, 1.0 / m);
}

QuadResultN integrate_q_region_n(const IntegrandQN& F, int n,
                                 const Momentum& p, const RegionSpec& region,
                                 const QuadSpec& spec) {
  double rp = norm(p.v);
  double L = spec.tailLogThreshold;
  // radius where e^{-q0} alone is down by e^{-1-L}
  double rmax = std::sqrt(sqr(1.0 + L) - 1.0);
  if (region.kind != RegionSpec::SmallQ) {
    // integrands with a q ~ p ridge (weight e^{-|p-q|/2} and slower) need the
    // cutoff pushed well past |p|
    rmax = std::max(rmax, rp + 2.0 * L);
  }
  if (spec.qMaxOverride) rmax = *spec.qMaxOverride;

  double rlo = 0.0, rhi = rmax;
  double T = region.splitRadius(rp);
  if (region.kind == RegionSpec::SmallQ) rhi = std::min(T, rmax);
  if (region.kind == RegionSpec::LargeQ) rlo = std::min(T, rmax);
  QuadResultN res;
  if (!(rlo < rhi)) return res;  // empty region (|p| = 0 small ball)

  QuadSpec muSpec = spec;
  muSpec.softFail = true;
  muSpec.relTol = 0.5 * spec.relTol;
  muSpec.maxPanels = std::min(spec.maxPanels, 20000);
  const std::vector<double> muSeeds{0.0, 0.5, 0.9, 0.99};

  auto outer = [&](double r, double* out) {
    auto inner = [&](double mu, double* v) {
      for (int j = 0; j < n; ++j) v[j] = 0.0;
      F(r, mu, v);
    };
    QuadResultN mi = integrate_adaptive_n(inner, n, -1.0, 1.0, muSeeds, muSpec);
    for (int j = 0; j < n; ++j) out[j] = r * r * mi.value[j];
  };

  std::vector<double> rSeeds;
  for (int k = 1; k <= 7; ++k) {
    rSeeds.push_back(rp * (1.0 - std::ldexp(1.0, -k)));
    rSeeds.push_back(rp * (1.0 + std::ldexp(1.0, -k)));
  }
  if (rp > 0.0) rSeeds.push_back(rp);
  for (double f8 : {0.25, 0.5, 0.75}) rSeeds.push_back(rlo + f8 * (rhi - rlo));

  QuadResultN ro = integrate_adaptive_n(outer, n, rlo, rhi, rSeeds, spec);
  for (int j = 0; j < n; ++j) res.value[j] = 2.0 * M_PI * ro.value[j];
  double envBase = spec.scaleComp >= 0
                       ? kScaleFloorFactor * std::abs(res.value[spec.scaleComp])
                       : 0.0;
  for (int j = 0; j < n; ++j) {
    // nested inner tolerances enter multiplicatively; fold them into the
    // reported estimate (against the error-floor scale when one is active)
    double base = std::max(std::abs(res.value[j]), envBase);
    res.errEstimate[j] = 2.0 * M_PI * ro.errEstimate[j] + base * muSpec.relTol;
  }
  res.evals = ro.evals;
  res.converged = ro.converged;
  return res;
}

QuadResult integrate_q_region(const std::function<double(double, double)>& F,
                              const Momentum& p, const RegionSpec& region,
                              const QuadSpec& spec) {
  auto fn = [&F](double r, double mu, double* out) { out[0] = F(r, mu); };
  QuadResultN rn = integrate_q_region_n(fn, 1, p, region, spec);
  return {rn.value[0], rn.errEstimate[0], rn.evals, rn.converged};
}

double juttner_weight_norm() {
  static const double z = [] {
    QuadSpec s;
    s.relTol = 1e-13;
    auto f = [](double r) { return r * r * std::exp(-std::sqrt(1.0 + r * r)); };
    return 4.0 * M_PI * integrate_adaptive(f, 0.0, 120.0, s).value;
  }();
  return z;
}

McSampler juttner_sampler() {
  double z = juttner_weight_norm();
  return [z](RandomStream& rng) -> McSample {
    // Gamma(3) proposal for r = |q| (pdf r^2 e^{-r} / 2), thinned by
    // e^{r - sqrt(1+r^2)} to the equilibrium radial law
    double r = 0.0;
    for (;;) {
      double u1 = rng.uniform(), u2 = rng.uniform(), u3 = rng.uniform();
      r = -std::log(u1 * u2 * u3);
      double acc = std::exp(-1.0 / (r + std::sqrt(1.0 + r * r)));
      if (rng.uniform() < acc) break;
    }
    double mu = rng.uniform(-1.0, 1.0);
    double phi = rng.uniform(0.0, 2.0 * M_PI);
    double st = std::sqrt(std::max(0.0, 1.0 - mu * mu));
    Vec3 q{r * st * std::cos(phi), r * st * std::sin(phi), r * mu};
    return {q, std::exp(-std::sqrt(1.0 + r * r)) / z};
  };
}

McResult mc_integrate(const std::function<double(const Vec3&)>& F,
                      const McSampler& sampler, long n, std::uint64_t seed) {
  if (n < 2) throw DomainError("mc_integrate: need at least 2 samples");
  RandomStream rng(seed);
  double sum = 0.0, sum2 = 0.0;
  for (long i = 0; i < n; ++i) {
    McSample s = sampler(rng);
    if (!(s.density > 0.0))
      throw DomainError("mc_integrate: sampler returned non-positive density");
    double w = F(s.q) / s.density;
    sum += w;
    sum2 += w * w;
  }
  double mean = sum / double(n);
  double var = std::max(0.0, sum2 / double(n) - mean * mean);
  return {mean, std::sqrt(var / double(n - 1)), n};
}

}  // namespace relzeta
