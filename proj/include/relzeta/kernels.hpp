#pragma once

#include <string>

#include "relzeta/common.hpp"
#include "relzeta/kinematics.hpp"

namespace relzeta {

// collision kernel sigma(g, theta) = Phi(g) sigma0(theta) with
//   Hard:        Phi = cPhi g^a,   a in [-gamma, 2)
//   Soft:        Phi = cPhi g^-b,  b in (gamma, 2)
//   BoundedDemo: Phi = cPhi g^a and sigma0 capped at `bound`
// sigma0(theta) = (sin^2(theta/2))^{-1-gamma/2}, gamma in (0,2); an optional
// angular cutoff delta zeroes sigma0 where sin^2(theta/2) < delta.
enum class InteractionKind { Hard, Soft, BoundedDemo };

struct KernelConfig {
  InteractionKind kind = InteractionKind::Hard;
  double gamma = 0.5;
  double a = 1.0;       // Hard / BoundedDemo exponent
  double b = 1.5;       // Soft exponent
  double bound = 1.0;   // BoundedDemo cap on sigma0
  double cPhi = 1.0;
  double delta = 0.0;   // angular cutoff on sin^2(theta/2)

  double rho() const { return kind == InteractionKind::Soft ? -b : a; }
  void validate() const;

  // "hard:a=1,gamma=0.5[,delta=...][,cphi=...]", "soft:b=1.5,gamma=1.2",
  // "demo:a=0,bound=1[,gamma=...]"
  static KernelConfig parse(const std::string& text);
  std::string format() const;
};

// momentum prefactor Phi(g)
double phi(double g, const KernelConfig& cfg);

// angular factor as a function of sin^2(theta/2)
double sigma0_from_sin2half(double sin2Half, const KernelConfig& cfg);

// post-collision invariants along the angular family y >= 0:
//   deltaG2   = gLambda^2 - g^2   (exact, no cancellation)
//   gLambda2  = g^2 + deltaG2
//   sLambda   = gLambda2 + 4
//   sin2Half  = deltaG2 / gLambda2,  cosThetaLambda = 1 - 2 sin2Half
// plus the profile variables w = sqrt(y^2+1) and y itself
struct LambdaVars {
  double y = 0, w = 1;
  double wMinus1 = 0;  // w - 1 without cancellation (y^2/(w+1), resp. 2k/s)
  double deltaG2 = 0;
  double gLambda2 = 0, sLambda = 4;
  double sin2Half = 0, cosThetaLambda = 1;
};

LambdaVars lambda_vars(const PairInvariants& pi, double y);

// same family parametrized by k = deltaG2 directly
LambdaVars k_variable_vars(const PairInvariants& pi, double k);

// sigma(g, theta) / sigma(gLambda, thetaLambda) times the s g^4 / sLambda
// gLambda^4 Jacobian factor, evaluated in log space:
//   exp( -log1p(deltaG2/s) - (4+rho)/2 * log1p(deltaG2/g^2) )
double kernel_ratio(const PairInvariants& pi, const LambdaVars& lv,
                    const KernelConfig& cfg);

}  // namespace relzeta
