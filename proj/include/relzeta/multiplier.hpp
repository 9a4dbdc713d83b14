#pragma once

#include <vector>

#include "relzeta/kernels.hpp"
#include "relzeta/kinematics.hpp"
#include "relzeta/quadrature.hpp"

namespace relzeta {

// -------------------------------------------------------------------------
// pointwise reduced integrands at fixed pair invariants and angular family
// parameter y >= 0.  All evaluators share the measure convention
//   value = (1/p0) int_region dq/q0 e^{-q0} (sqrt(s)/g)
//           int_0^inf (y dy / sqrt(y^2+1)) * inner(y)
// and exponentials are handled in log space so the y -> 0 cancellations and
// large-(l,j) underflows cost no accuracy.
// -------------------------------------------------------------------------

// every pointwise term at one node, sharing the expensive pieces; logScale
// folds a log-space weight (typically -q0) into all exponentials so nothing
// overflows at large l, j
struct InnerTermSet {
  double zeta0 = 0, zetaL = 0, tilde0 = 0, tildeL = 0, square = 0;
  double rep1 = 0, rep2 = 0;
  double gain = 0, loss = 0;  // the two positive pieces of rep2
};
InnerTermSet inner_term_set(const PairInvariants& pi, const KernelConfig& cfg,
                            const LambdaVars& lv, double logScale);

// gain-type piece: s_L sigma * ratio * [1 - E1 I0(jy)]
double inner_zeta0(const PairInvariants& pi, const KernelConfig& cfg, double y);
// difference piece: s_L sigma * E1 I0(jy) * (ratio - 1), always <= 0
double inner_zetaL(const PairInvariants& pi, const KernelConfig& cfg, double y);
// tilde pieces built on E2 I0(2jy) - E1 I0(jy)
double inner_tilde0(const PairInvariants& pi, const KernelConfig& cfg, double y);
double inner_tildeL(const PairInvariants& pi, const KernelConfig& cfg, double y);
// perfect-square form: s_L sigma * ratio * [E2 I0(2jy) - 2 E1 I0(jy) + 1] >= 0
double inner_zeta_square(const PairInvariants& pi, const KernelConfig& cfg,
                         double y);
// combined one-bracket integrands of the two full representations
double inner_rep1(const PairInvariants& pi, const KernelConfig& cfg, double y);
double inner_rep2(const PairInvariants& pi, const KernelConfig& cfg, double y);

// phi-quadrature cross-check forms of the tilde pieces (the I0 identity
// replaced by explicit integration over the azimuth)
double inner_tilde0_phi(const PairInvariants& pi, const KernelConfig& cfg,
                        double y, const QuadSpec& spec = {});
double inner_tildeL_phi(const PairInvariants& pi, const KernelConfig& cfg,
                        double y, const QuadSpec& spec = {});

// critical points of h(y) = l(1 - sqrt(y^2+1)) + j y c on y > 0:
// h'(yM) = 0 (the maximum) and h(yS) = 0 (the sign change)
struct BracketCriticalPoints {
  double yM = 0, yS = 0;
};
BracketCriticalPoints bracket_critical_points(double l, double j, double c);

// -------------------------------------------------------------------------
// q-integrated evaluators
// -------------------------------------------------------------------------

QuadResult zeta0(const Momentum& p, const KernelConfig& cfg,
                 const RegionSpec& region, const QuadSpec& spec);
QuadResult zetaL(const Momentum& p, const KernelConfig& cfg,
                 const RegionSpec& region, const QuadSpec& spec);
QuadResult tilde_zeta0(const Momentum& p, const KernelConfig& cfg,
                       const RegionSpec& region, const QuadSpec& spec);
QuadResult tilde_zetaL(const Momentum& p, const KernelConfig& cfg,
                       const RegionSpec& region, const QuadSpec& spec);

enum class InnerForm { YForm, RForm, KForm };

// zeta0 in the selected integration variable (y, r = sqrt(s) y, or
// k = g_Lambda^2 - g^2); the three agree analytically
QuadResult zeta0_alt_forms(const Momentum& p, const KernelConfig& cfg,
                           const QuadSpec& spec, InnerForm form);

enum class TildeRep { Rep1, Rep2 };

// full multiplier: Rep1 integrand s_L sigma [ratio - E1 I0(jy)],
// Rep2 integrand s_L sigma [E2 I0(2jy) - E1 I0(jy)]
QuadResult tilde_zeta(const Momentum& p, const KernelConfig& cfg,
                      const QuadSpec& spec, TildeRep rep,
                      const RegionSpec& region = {});
// same in the r / k variables (Rep1 or Rep2)
QuadResult tilde_zeta_form(const Momentum& p, const KernelConfig& cfg,
                           const QuadSpec& spec, TildeRep rep, InnerForm form);

// coercive part: (1/2) [zeta_{0,m} + tilde_zeta_{0,m}] over the small ball
// (as the square-form integrand) for |p| >= 1, plus (p0)^{(rho+gamma)/2}
// for |p| <= 1 (both terms at |p| = 1)
QuadResult zeta(const Momentum& p, const KernelConfig& cfg, double m,
                const QuadSpec& spec);

// remainder part: tildeZeta 1_{|p|<=1} + tildeZeta1 + (1/2)(zetaL_m +
// tilde_zetaL_m) - (p0)^{(rho+gamma)/2} 1_{|p|<=1}
QuadResult zetaK(const Momentum& p, const KernelConfig& cfg, double m,
                 const QuadSpec& spec);

// smallest integer ball exponent with (|rho|+8)/(2m) <= 0.1
double default_ball_m(const KernelConfig& cfg);

// everything needed for one CSV row / bound check, sharing quadrature passes
struct MultiplierBreakdown {
  double p0 = 1, absP = 0;
  double m = 1;
  KernelConfig cfg;
  double calibrationConstant = 1;

  double zeta = 0, zetaErr = 0;
  double zetaK = 0, zetaKErr = 0;
  double tildeZeta = 0, tildeZetaErr = 0;       // Rep1, full region
  double zeta0Full = 0, zeta0FullErr = 0;
  double zetaLFull = 0, zetaLFullErr = 0;
  double zeta0m = 0, zeta0mErr = 0;             // small-ball pieces
  double zetaLm = 0, zetaLmErr = 0;
  double tildeZeta0m = 0, tildeZeta0mErr = 0;
  double tildeZetaLm = 0, tildeZetaLmErr = 0;
  double squareM = 0, squareMErr = 0;           // small-ball square form
  double tildeZeta1 = 0, tildeZeta1Err = 0;     // large-ball remainder
};

MultiplierBreakdown evaluate_multiplier(const Momentum& p,
                                        const KernelConfig& cfg, double m,
                                        const QuadSpec& spec);

}  // namespace relzeta
