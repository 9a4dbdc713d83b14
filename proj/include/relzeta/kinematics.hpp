#pragma once

#include <array>
#include <utility>

#include "relzeta/common.hpp"

namespace relzeta {

// units c = m = kB = T = 1 throughout; energies are on-shell, p0 = sqrt(1+|p|^2)

double energy(const Vec3& p);

struct Momentum {
  Vec3 v;
  double p0 = 1;

  static Momentum from(const Vec3& v) { return {v, energy(v)}; }
  FourVec four() const { return {p0, v}; }
};

// scalar invariants of a momentum pair.
//   s        = 2(p0 q0 - p.q + 1)          total energy squared in the CoM frame
//   g        = sqrt(s - 4)                  relative momentum
//   l        = (p0 + q0)/4
//   j        = |p x q| / (2 g)
//   sqrtl2j2 = sqrt(l^2 - j^2), evaluated as |p-q| sqrt(s) / (4 g)
// g and sqrtl2j2 use cancellation-free forms, so they stay accurate for p ~ q.
struct PairInvariants {
  double p0 = 1, q0 = 1;
  double pq = 0;        // p.q
  double cross = 0;     // |p x q|
  double diff2 = 0;     // |p - q|^2
  double s = 4, g = 0, l = 0.5, j = 0, sqrtl2j2 = 0.5;
};

PairInvariants pair_invariants(const Momentum& p, const Momentum& q);

// same invariants from polar data: |p|, |q| and mu = cos of the angle between
PairInvariants pair_invariants_polar(double rp, double rq, double mu);

// outgoing pair for incoming (p, q) and unit collision direction omega
std::pair<Momentum, Momentum> post_collision(const Momentum& p,
                                             const Momentum& q,
                                             const Vec3& omega);

// cosine of the scattering angle for p -> pPrime against partner q,
// computed through the post-collision relative momentum gbar = g(pPrime, p)
double scattering_cos(const Momentum& p, const Momentum& q,
                      const Momentum& pPrime);

// Moller velocity g sqrt(s) / (p0 q0)
double moller_velocity(const Momentum& p, const Momentum& q);

// rows of the Lorentz matrix taking lab-frame vectors to the frame where
// p + q is at rest and p - q points along the final axis
struct ComFrame {
  std::array<std::array<double, 4>, 4> lambda{};

  FourVec apply(const FourVec& v) const;
};

ComFrame com_frame(const Momentum& p, const Momentum& q);

// equilibrium weight e^{-p0} / (4 pi)
double juttner(const Momentum& p);

// residual of the identity g^2 = gtilde^2 - (1/2)(p+q')^mu (p'+q-p-q')_mu
// for a conserving collision (p, q) -> (pPrime, qPrime); zero up to rounding
double claim_gg_residual(const Momentum& p, const Momentum& q,
                         const Momentum& pPrime, const Momentum& qPrime);

}  // namespace relzeta
