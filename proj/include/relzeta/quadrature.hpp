#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "relzeta/common.hpp"
#include "relzeta/kinematics.hpp"

namespace relzeta {

// hard cap on simultaneously-integrated components in the vector engine
inline constexpr int kQuadMaxComp = 10;

// fraction of the scale component's total (see QuadSpec::scaleComp) that sets
// the shared absolute error floor at each nesting level
inline constexpr double kScaleFloorFactor = 0.05;

struct QuadSpec {
  double relTol = 1e-8;
  double absTol = 1e-300;
  int maxDepth = 60;          // bisection depth per initial panel
  int maxPanels = 400000;     // global panel budget
  double tailLogThreshold = 40.0;
  std::optional<double> qMaxOverride;  // override for the |q| cutoff radius
  // on tolerance failure: false -> throw QuadratureError, true -> return the
  // achieved estimate with converged = false (used by nested integrals whose
  // error is absorbed into the outer estimate)
  bool softFail = false;
  // index of a sign-definite companion component whose running total sets an
  // absolute error floor kScaleFloorFactor * relTol * |total[scaleComp]| for
  // every component; -1 disables.  Components dominated by cancellation (whose
  // own total passes through zero) then converge against that floor instead of
  // chasing an unreachable relative target.
  int scaleComp = -1;
};

struct QuadResult {
  double value = 0;
  double errEstimate = 0;
  long evals = 0;
  bool converged = true;
};

struct QuadResultN {
  std::array<double, kQuadMaxComp> value{};
  std::array<double, kQuadMaxComp> errEstimate{};
  long evals = 0;
  bool converged = true;
};

using Integrand = std::function<double(double)>;
using IntegrandN = std::function<void(double, double*)>;  // writes n components

// globally adaptive Gauss-Kronrod 7/15 on [a,b]; refinement order and the
// final left-to-right summation are deterministic, so results are
// reproducible bit-for-bit
QuadResult integrate_adaptive(const Integrand& f, double a, double b,
                              const QuadSpec& spec = {});
QuadResult integrate_adaptive(const Integrand& f, double a, double b,
                              const std::vector<double>& seeds,
                              const QuadSpec& spec);
QuadResultN integrate_adaptive_n(const IntegrandN& f, int n, double a, double b,
                                 const std::vector<double>& seeds,
                                 const QuadSpec& spec);

// integral over [0, inf) of an integrand behaving like y^singularExponent as
// y -> 0 (singularExponent > -1) and decaying at rate >= decayRate (plus any
// algebraic tail, which the 1/y change of variables captures exactly).
// `scale` is the y size of the structure near the origin; the graded map
// covers [0, scale] and the inverted map covers [scale, inf).
QuadResult integrate_singular_semiinf(const Integrand& f,
                                      double singularExponent,
                                      double decayRate,
                                      const QuadSpec& spec = {});
QuadResultN integrate_singular_semiinf_n(const IntegrandN& f, int n,
                                         double singularExponent,
                                         double decayRate, double scale,
                                         const QuadSpec& spec);

struct RegionSpec {
  enum Kind { Full, SmallQ, LargeQ } kind = Full;
  double m = 1.0;  // ball exponent: the split radius is |p|^(1/m) / 2

  double splitRadius(double absP) const;
};

// integral over the momentum region of F(|q|, mu), mu = cos angle(p, q),
// assembled as 2 pi * int r^2 dr int dmu F; valid for any F that depends on
// q only through (|q|, mu).  The radial cutoff follows tailLogThreshold (or
// qMaxOverride) and is pushed past the q ~ p ridge for Full/LargeQ regions.
QuadResult integrate_q_region(const std::function<double(double, double)>& F,
                              const Momentum& p, const RegionSpec& region,
                              const QuadSpec& spec = {});
using IntegrandQN = std::function<void(double, double, double*)>;
QuadResultN integrate_q_region_n(const IntegrandQN& F, int n,
                                 const Momentum& p, const RegionSpec& region,
                                 const QuadSpec& spec);

// importance-sampled Monte Carlo over q in R^3
struct McSample {
  Vec3 q;
  double density = 0;  // value of the sampling pdf at q
};
using McSampler = std::function<McSample(RandomStream&)>;

// equilibrium-weight sampler: pdf proportional to e^{-q0}
McSampler juttner_sampler();
double juttner_weight_norm();  // int e^{-sqrt(1+|q|^2)} d^3q

struct McResult {
  double value = 0;
  double stdErr = 0;
  long n = 0;
};

McResult mc_integrate(const std::function<double(const Vec3&)>& F,
                      const McSampler& sampler, long n, std::uint64_t seed);

}  // namespace relzeta
