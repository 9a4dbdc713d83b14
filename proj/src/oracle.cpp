#include "relzeta/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "relzeta/specfun.hpp"

namespace relzeta {

namespace {

// unit vector along the sphere direction with zero scattering angle
// (the omega for which p' = p): [(p-q)_perp + (p-q)_par / xi] / g with
// components taken relative to p+q, xi = (p0+q0)/sqrt(s)
Vec3 zero_angle_axis(const Momentum& p, const Momentum& q,
                     const PairInvariants& pi) {
  Vec3 P = p.v + q.v, d = p.v - q.v;
  double P2 = norm2(P);
  Vec3 w;
  if (P2 > 0.0) {
    double xi = (pi.p0 + pi.q0) / std::sqrt(pi.s);
    Vec3 dPar = (dot(d, P) / P2) * P;
    w = (d - dPar) + (1.0 / xi) * dPar;
  } else {
    w = d;
  }
  double n = norm(w);
  if (!(n > 0.0)) throw DegeneratePairError("zero_angle_axis: p = q");
  return (1.0 / n) * w;
}

// deterministic orthonormal completion of the axis
void axis_frame(const Vec3& w, Vec3& e1, Vec3& e2) {
  Vec3 seed = std::abs(w.x) < 0.9 ? Vec3{1, 0, 0} : Vec3{0, 1, 0};
  e1 = seed - dot(seed, w) * w;
  e1 = (1.0 / norm(e1)) * e1;
  e2 = cross(w, e1);
}

// integral over the collision sphere of sigma0(theta(omega)) times either
// (-expm1(-dE/2)) (difference weight) or exp(-dE/2) (gain weight), graded
// toward the zero-angle axis; value[1] carries the same integral with the
// weight replaced by its absolute value, used as the error-floor envelope at
// every level (the difference weight changes sign across the sphere, so a
// bare relative target can be unreachable)
struct SphereResult {
  double value = 0;
  double envelope = 0;
};

SphereResult sphere_integral(const Momentum& p, const Momentum& q,
                             const PairInvariants& pi, const KernelConfig& cfg,
                             bool gainWeight, const QuadSpec& spec) {
  Vec3 w0 = zero_angle_axis(p, q, pi);
  Vec3 e1, e2;
  axis_frame(w0, e1, e2);

  Vec3 P = p.v + q.v;
  double P0 = pi.p0 + pi.q0;
  double rs = std::sqrt(pi.s);
  double g2 = sqr(pi.g);
  double pw0 = dot(P, w0), pe1 = dot(P, e1), pe2 = dot(P, e2);
  double cshift = 1.0 / (rs * (P0 + rs));  // (xi-1)/|P|^2, finite at P = 0

  QuadSpec betaSpec = spec;
  betaSpec.softFail = true;
  betaSpec.maxPanels = 2000;
  betaSpec.relTol = 0.5 * spec.relTol;
  betaSpec.scaleComp = 1;

  // sigma0 thresholds in sin^2(theta/2): support edge at delta, cap kink for
  // the demo kernel; the ratio gbar^2/g^2 is affine in omega, so on a fixed-
  // alpha circle it is u0 + u1 cos(beta) + u2 sin(beta) and the crossings are
  // known in closed form -- seeding panels there keeps the quadrature fast
  double thresholds[2];
  int nThresh = 0;
  if (cfg.delta > 0.0) thresholds[nThresh++] = cfg.delta;
  if (cfg.kind == InteractionKind::BoundedDemo) {
    double kink = std::pow(cfg.bound, -1.0 / (1.0 + 0.5 * cfg.gamma));
    if (kink > 0.0 && kink < 1.0) thresholds[nThresh++] = kink;
  }

  auto alphaPair = [&](double alpha, double* out) {
    double ca = std::cos(alpha), sa = std::sin(alpha);
    auto ratioRaw = [&](double beta) {
      Vec3 omega = ca * w0 + (sa * std::cos(beta)) * e1 +
                   (sa * std::sin(beta)) * e2;
      double Pw = ca * pw0 + sa * (std::cos(beta) * pe1 + std::sin(beta) * pe2);
      Vec3 pp = 0.5 * (P + pi.g * (omega + (Pw * cshift) * P));
      Vec3 dpp = pp - p.v;
      if (!(norm2(dpp) > 0.0)) return 0.0;
      Momentum ppm = Momentum::from(pp);
      return sqr(pair_invariants(ppm, p).g) / g2;
    };
    auto betaIntegrand = [&](double beta, double* v) {
      double sin2h = std::min(ratioRaw(beta), 1.0);
      double sig = sigma0_from_sin2half(sin2h, cfg);
      if (sig == 0.0) return;
      // dE = q'0 - q0 with q'0 = (p0+q0)/2 - g P.omega / (2 sqrt(s))
      double Pw = ca * pw0 + sa * (std::cos(beta) * pe1 + std::sin(beta) * pe2);
      double dE = 0.5 * (pi.p0 - pi.q0) - 0.5 * pi.g * Pw / rs;
      double w = gainWeight ? std::exp(-0.5 * dE) : -std::expm1(-0.5 * dE);
      v[0] = sig * w;
      v[1] = sig * std::abs(w);
    };
    std::vector<double> seeds;
    if (nThresh > 0) {
      double s0 = ratioRaw(0.0), s90 = ratioRaw(0.5 * M_PI),
             s180 = ratioRaw(M_PI);
      double u0 = 0.5 * (s0 + s180), u1 = 0.5 * (s0 - s180), u2 = s90 - u0;
      double R = std::hypot(u1, u2);
      if (cfg.delta > 0.0 && u0 + R < cfg.delta * (1.0 - 1e-9)) {
        out[0] = out[1] = 0.0;  // circle entirely below the support edge
        return;
      }
      double phi0 = std::atan2(u2, u1);
      for (int k = 0; k < nThresh; ++k) {
        if (!(R > 0.0)) break;
        double d = (thresholds[k] - u0) / R;
        if (!(std::abs(d) < 1.0)) continue;
        double ac = std::acos(d);
        for (double b : {phi0 - ac, phi0 + ac}) {
          b = std::fmod(b, 2.0 * M_PI);
          if (b < 0.0) b += 2.0 * M_PI;
          if (b > 1e-12 && b < 2.0 * M_PI - 1e-12) seeds.push_back(b);
        }
      }
      std::sort(seeds.begin(), seeds.end());
    }
    QuadResultN b = integrate_adaptive_n(betaIntegrand, 2, 0.0, 2.0 * M_PI,
                                         seeds, betaSpec);
    out[0] = sa * b.value[0];
    out[1] = sa * b.value[1];
  };

  QuadSpec aSpec = spec;
  aSpec.softFail = true;
  aSpec.scaleComp = 1;
  QuadResultN r;
  if (cfg.delta > 0.0 || cfg.kind == InteractionKind::BoundedDemo) {
    r = integrate_adaptive_n(alphaPair, 2, 0.0, M_PI, {0.1, 0.5, 1.5}, aSpec);
  } else {
    // no cutoff: integrand ~ alpha^{-gamma} at the axis; grade it away
    double kappa = 2.0 / (1.0 - cfg.gamma);
    auto graded = [&](double v, double* out) {
      double alpha = M_PI * std::pow(v, kappa);
      double jac = M_PI * kappa * std::pow(v, kappa - 1.0);
      alphaPair(alpha, out);
      out[0] *= jac;
      out[1] *= jac;
    };
    r = integrate_adaptive_n(graded, 2, 0.0, 1.0, {}, aSpec);
  }
  return {r.value[0], r.value[1]};
}

void direct_q_integrand(const Momentum& pz, double rq, double mu,
                        const KernelConfig& cfg, bool gainWeight,
                        const QuadSpec& sphSpec, double* out) {
  out[0] = out[1] = 0.0;
  Vec3 qv{rq * std::sqrt(std::max(0.0, 1.0 - mu * mu)), 0.0, rq * mu};
  Momentum q = Momentum::from(qv);
  PairInvariants pi = pair_invariants(pz, q);
  if (pi.g == 0.0) return;  // measure-zero corner q = p
  double vmoller = pi.g * std::sqrt(pi.s) / (pi.p0 * pi.q0);
  double pref = vmoller * phi(pi.g, cfg) * std::exp(-pi.q0) / (4.0 * M_PI);
  SphereResult s = sphere_integral(pz, q, pi, cfg, gainWeight, sphSpec);
  out[0] = pref * s.value;
  out[1] = pref * s.envelope;
}

void check_direct_pre(const KernelConfig& cfg) {
  cfg.validate();
  if (cfg.delta == 0.0 && cfg.gamma >= 1.0 &&
      cfg.kind != InteractionKind::BoundedDemo)
    throw DomainError(
        "direct_tilde_zeta: gamma >= 1 requires an angular cutoff");
}

}  // namespace

QuadResult direct_tilde_zeta(const Momentum& p, const KernelConfig& cfg,
                             const QuadSpec& spec) {
  check_direct_pre(cfg);
  if (cfg.cPhi == 0.0) return {0.0, 0.0, 0, true};
  Momentum pz = Momentum::from({0.0, 0.0, norm(p.v)});

  QuadSpec sphSpec = spec;
  sphSpec.relTol = std::max(0.3 * spec.relTol, 1e-12);
  auto F = [&](double rq, double mu, double* out) {
    direct_q_integrand(pz, rq, mu, cfg, false, sphSpec, out);
  };
  QuadSpec qSpec = spec;
  qSpec.scaleComp = 1;
  QuadResultN rn = integrate_q_region_n(F, 2, pz, RegionSpec{}, qSpec);
  QuadResult r{rn.value[0], rn.errEstimate[0], rn.evals, rn.converged};
  double base =
      std::max(std::abs(rn.value[0]), kScaleFloorFactor * rn.value[1]);
  r.errEstimate += base * 2.0 * sphSpec.relTol;
  return r;
}

McResult direct_tilde_zeta_mc(const Momentum& p, const KernelConfig& cfg,
                              long n, std::uint64_t seed,
                              const QuadSpec& spec) {
  check_direct_pre(cfg);
  Momentum pz = Momentum::from({0.0, 0.0, norm(p.v)});
  QuadSpec sphSpec = spec;
  sphSpec.relTol = std::max(0.3 * spec.relTol, 1e-10);
  auto F = [&](const Vec3& qv) {
    double rq = norm(qv);
    double mu = rq > 0.0 ? qv.z / rq : 1.0;
    double out[2];
    direct_q_integrand(pz, rq, mu, cfg, false, sphSpec, out);
    return out[0];
  };
  // sampler draws isotropically, but the integrand only depends on (rq, mu),
  // so fold each sample onto the reduced coordinates
  auto sampler = juttner_sampler();
  return mc_integrate(F, sampler, n, seed);
}

namespace {

// shared driver for the reduced gain/loss family: inner r-integral of
// s_L sigma(g_L, theta_L) with optional exponential/Bessel weights, outer
// q-integral with the same measure as the multiplier evaluators
enum class LossKind { Gain, Loss, Bare };

QuadResult loss_like(const Momentum& p, const KernelConfig& cfg,
                     LossKind kind, double rCut, const QuadSpec& spec) {
  cfg.validate();
  double rp = norm(p.v);

  QuadSpec innerSpec = spec;
  innerSpec.softFail = true;
  innerSpec.relTol = std::max(0.2 * spec.relTol, 5e-14);
  innerSpec.maxPanels = 6000;

  auto F = [&](double rq, double mu) -> double {
    PairInvariants pi = pair_invariants_polar(rp, rq, mu);
    if (pi.g == 0.0) return 0.0;  // measure-zero corner q = p
    double rs = std::sqrt(pi.s);
    auto f = [&](double r) -> double {
      LambdaVars lv = lambda_vars(pi, r / rs);
      InnerTermSet t = inner_term_set(pi, cfg, lv, -pi.q0);
      double meas = r / (rs * std::hypot(r, rs));
      switch (kind) {
        case LossKind::Gain: return t.gain * meas;
        case LossKind::Loss: return t.loss * meas;
        case LossKind::Bare: {
          double sig = sigma0_from_sin2half(lv.sin2Half, cfg);
          double K = lv.sLambda * cfg.cPhi *
                     std::pow(lv.gLambda2, 0.5 * cfg.rho()) * sig;
          return K * std::exp(-pi.q0) * meas;
        }
      }
      return 0.0;
    };
    QuadResult in;
    if (rCut > 0.0) {
      in = integrate_adaptive(f, 0.0, rCut, {0.5 * rs, rs, 2.0 * rs},
                              innerSpec);
    } else {
      auto fn = [&](double r, double* out) { out[0] = f(r); };
      QuadResultN rn = integrate_singular_semiinf_n(
          fn, 1, 1.0 - cfg.gamma, std::max((pi.l - pi.j) / rs, 1e-8),
          rs, innerSpec);
      in = {rn.value[0], rn.errEstimate[0], rn.evals, rn.converged};
    }
    return in.value * std::sqrt(pi.s) / (pi.g * pi.q0);
  };

  QuadResult r = integrate_q_region(F, p, RegionSpec{}, spec);
  r.value /= p.p0;
  r.errEstimate =
      r.errEstimate / p.p0 + std::abs(r.value) * 2.0 * innerSpec.relTol;
  return r;
}

void check_cutoff(const KernelConfig& cfg, const char* who) {
  if (cfg.delta == 0.0 && cfg.kind != InteractionKind::BoundedDemo)
    throw DomainError(std::string(who) +
                      ": needs an integrable angular kernel (cutoff or cap)");
}

}  // namespace

GainLoss reduced_gain_loss(const Momentum& p, const KernelConfig& cfg,
                           const QuadSpec& spec) {
  check_cutoff(cfg, "reduced_gain_loss");
  QuadResult g = loss_like(p, cfg, LossKind::Gain, 0.0, spec);
  QuadResult l = loss_like(p, cfg, LossKind::Loss, 0.0, spec);
  return {g.value, g.errEstimate, l.value, l.errEstimate};
}

QuadResult direct_gain(const Momentum& p, const KernelConfig& cfg,
                       const QuadSpec& spec) {
  cfg.validate();
  check_cutoff(cfg, "direct_gain");
  if (cfg.cPhi == 0.0) return {0.0, 0.0, 0, true};
  Momentum pz = Momentum::from({0.0, 0.0, norm(p.v)});

  QuadSpec sphSpec = spec;
  sphSpec.relTol = std::max(0.3 * spec.relTol, 1e-12);
  auto F = [&](double rq, double mu, double* out) {
    direct_q_integrand(pz, rq, mu, cfg, true, sphSpec, out);
  };
  QuadResultN rn = integrate_q_region_n(F, 2, pz, RegionSpec{}, spec);
  QuadResult r{rn.value[0], rn.errEstimate[0], rn.evals, rn.converged};
  r.errEstimate += std::abs(r.value) * 2.0 * sphSpec.relTol;
  return r;
}

Calibration calibrate_constant(const std::vector<Momentum>& pList,
                               const std::vector<KernelConfig>& cfgList,
                               const QuadSpec& spec) {
  if (pList.empty() || cfgList.empty())
    throw DomainError("calibrate_constant: empty grid");
  Calibration cal;
  for (const KernelConfig& cfg : cfgList) {
    check_cutoff(cfg, "calibrate_constant");
    for (const Momentum& p : pList) {
      double direct = direct_tilde_zeta(p, cfg, spec).value;
      double rep1 = tilde_zeta(p, cfg, spec, TildeRep::Rep1).value;
      if (!(rep1 != 0.0))
        throw CalibrationError("calibrate_constant: vanishing reduced value");
      cal.ratios.push_back(direct / rep1);
    }
  }
  double lo = cal.ratios[0], hi = cal.ratios[0], sum = 0.0;
  for (double r : cal.ratios) {
    lo = std::min(lo, r);
    hi = std::max(hi, r);
    sum += r;
  }
  cal.constant = sum / double(cal.ratios.size());
  cal.spread = (hi - lo) / std::abs(cal.constant);
  if (!(cal.constant > 0.0) || cal.spread > 0.005) {
    std::ostringstream os;
    os << "calibrate_constant: ratio spread " << cal.spread
       << " exceeds 0.5% (constant " << cal.constant << ")";
    throw CalibrationError(os.str());
  }
  return cal;
}

std::vector<double> divergence_demo(const Momentum& p, const KernelConfig& cfg,
                                    const std::vector<double>& rList,
                                    const QuadSpec& spec) {
  check_cutoff(cfg, "divergence_demo");
  if (cfg.rho() < 0.0)
    throw DomainError("divergence_demo: needs a >= 0");
  std::vector<double> out;
  for (double R : rList) {
    if (!(R > 0.0)) throw DomainError("divergence_demo: cutoffs must be > 0");
    out.push_back(loss_like(p, cfg, LossKind::Bare, R, spec).value);
  }
  return out;
}

std::vector<double> loss_partials(const Momentum& p, const KernelConfig& cfg,
                                  const std::vector<double>& rList,
                                  const QuadSpec& spec) {
  check_cutoff(cfg, "loss_partials");
  std::vector<double> out;
  for (double R : rList) {
    if (!(R > 0.0)) throw DomainError("loss_partials: cutoffs must be > 0");
    out.push_back(loss_like(p, cfg, LossKind::Loss, R, spec).value);
  }
  return out;
}

}  // namespace relzeta
