#pragma once

#include <vector>

#include "relzeta/kernels.hpp"
#include "relzeta/multiplier.hpp"
#include "relzeta/quadrature.hpp"

namespace relzeta {

// ground-truth evaluations that bypass the reduced representations entirely:
// direct sphere quadrature of
//   int dq int dOmega  v_moller Phi(g) sigma0(theta(omega))
//                      (sqrt(J(q)) - sqrt(J(q'))) sqrt(J(q))
// requires either an angular cutoff delta > 0, or gamma < 1 (the O(theta)
// difference factor restores absolute integrability)
QuadResult direct_tilde_zeta(const Momentum& p, const KernelConfig& cfg,
                             const QuadSpec& spec);

// Monte Carlo fallback for the q integral (sphere part stays adaptive)
McResult direct_tilde_zeta_mc(const Momentum& p, const KernelConfig& cfg,
                              long n, std::uint64_t seed,
                              const QuadSpec& spec);

// gain term alone by direct sphere quadrature, weight sqrt(J(q) J(q'));
// requires an integrable angular kernel (cutoff or cap)
QuadResult direct_gain(const Momentum& p, const KernelConfig& cfg,
                       const QuadSpec& spec);

// gain and loss pieces in reduced r-integral form (cutoff kernels only;
// gain - loss = -tilde_zeta up to the global calibration constant)
struct GainLoss {
  double gain = 0, gainErr = 0;
  double loss = 0, lossErr = 0;
};
GainLoss reduced_gain_loss(const Momentum& p, const KernelConfig& cfg,
                           const QuadSpec& spec);

// pins the overall constant between the direct and reduced forms:
// mean of direct/Rep1 over the (p, kernel) grid.  Throws
// CalibrationError when the relative spread exceeds 0.5%.
struct Calibration {
  double constant = 1;
  double spread = 0;  // (max-min)/mean of the ratios
  std::vector<double> ratios;
};
Calibration calibrate_constant(const std::vector<Momentum>& pList,
                               const std::vector<KernelConfig>& cfgList,
                               const QuadSpec& spec);

// truncated loss-type integrals against increasing radial cutoffs R:
//   divergence_demo:  no exponential/Bessel weight -> grows without bound
//   loss_partials:    full weights                 -> Cauchy-converges
std::vector<double> divergence_demo(const Momentum& p, const KernelConfig& cfg,
                                    const std::vector<double>& rList,
                                    const QuadSpec& spec);
std::vector<double> loss_partials(const Momentum& p, const KernelConfig& cfg,
                                  const std::vector<double>& rList,
                                  const QuadSpec& spec);

}  // namespace relzeta
