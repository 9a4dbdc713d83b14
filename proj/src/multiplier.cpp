#include "relzeta/multiplier.hpp"

#include <cmath>

#include "relzeta/specfun.hpp"

namespace relzeta {

namespace {

// e^u - 1 - u with the u -> 0 cancellation removed
double hfun(double u) {
  if (std::abs(u) < 0.01) {
    double c = 1.0 +
               u * (1.0 / 3 +
                    u * (1.0 / 12 + u * (1.0 / 60 + u * (1.0 / 360 + u / 2520))));
    return 0.5 * u * u * c;
  }
  return std::expm1(u) - u;
}

// log I0(2b) - 2 log I0(b) >= 0, stable for small b
double dfun(double b) {
  if (b < 1e-3) return b * b * (0.5 - b * b * (7.0 / 32.0));
  return log_i0(2.0 * b) - 2.0 * log_i0(b);
}

// with logScale = -q0 every folded exponent is <= -q0^2/(p0+q0) <= 0, so the
// exponentials below can never overflow
void eval_terms(const PairInvariants& pi, const KernelConfig& cfg,
                const LambdaVars& lv, double logScale, InnerTermSet& t) {
  t = InnerTermSet{};
  if (!(lv.deltaG2 > 0.0)) return;  // y = 0 limit: every bracket vanishes
  double sig = sigma0_from_sin2half(lv.sin2Half, cfg);
  if (sig == 0.0) return;  // inside the angular cutoff

  double K = lv.sLambda * cfg.cPhi *
             std::pow(lv.gLambda2, 0.5 * cfg.rho()) * sig;
  double g2 = sqr(pi.g);
  double nu = 0.5 * (4.0 + cfg.rho());
  double lr = std::log1p(lv.deltaG2 / pi.s) + nu * std::log1p(lv.deltaG2 / g2);

  double b = pi.j * lv.y;
  double L1 = log_i0(b), L2 = log_i0(2.0 * b);
  double lw = pi.l * lv.wMinus1;
  double u1 = -lw + L1;
  double u2 = -2.0 * lw + L2;
  double du = -lw + (L2 - L1);  // u2 - u1 without cancellation

  double S = std::exp(logScale);
  double Rf = std::exp(logScale - lr);
  double E1f = std::exp(u1 + logScale);
  double E2f = std::exp(u2 + logScale);
  double em = std::expm1(-lr);  // ratio - 1 in [-1, 0]

  t.gain = K * E1f;
  t.loss = K * E2f;
  t.zetaL = K * E1f * em;

  if (std::max({lr, lw, L2}) <= 30.0) {
    // all intermediates are moderate: assemble the brackets from exact small
    // quantities so their leading y^2 terms survive the y -> 0 cancellation
    double h1 = hfun(u1), h2 = hfun(u2), hr = hfun(-lr);
    double brep1 = (-lr + lw - L1) + hr - h1;
    double brep2 = du + h2 - h1;
    double bsq = dfun(b) + h2 - 2.0 * h1;
    t.zeta0 = K * Rf * (-std::expm1(u1));
    t.rep1 = K * S * brep1;
    t.rep2 = K * S * brep2;
    t.tilde0 = K * Rf * brep2;
    t.tildeL = K * (-em) * S * brep2;
    t.square = K * Rf * bsq;
  } else {
    // some intermediate is large: the additive assembly above would drown the
    // result in rounding noise scaled by the intermediates, while the bracket
    // is now a difference of well-separated (or negligible) exponentials, so
    // multiplicative forms are exact to a few ulps of the largest term; the
    // folded exp arguments stay <= 0 by the q0 folding bound
    double rU1 = std::exp(u1 - lr + logScale);  // ratio e^{u1} folded
    if (du > 700.0) {
      // e^{du} alone would overflow while E1f underflows; anchor on E2f
      double e2r = std::exp(u2 - lr + logScale);
      double md = -std::expm1(-du);
      t.rep2 = K * E2f * md;
      t.tilde0 = K * e2r * md;
      t.tildeL = K * (-em) * E2f * md;
      t.square = K * (e2r - 2.0 * rU1 + Rf);
    } else {
      double edu = std::expm1(du);
      t.rep2 = K * E1f * edu;
      t.tilde0 = K * rU1 * edu;
      t.tildeL = K * (-em) * E1f * edu;
      t.square = K * (std::exp(du + u1 - lr + logScale) - 2.0 * rU1 + Rf);
    }
    t.rep1 = K * (Rf - E1f);
    t.zeta0 = u1 > 500.0 ? K * (Rf - rU1) : K * Rf * (-std::expm1(u1));
  }
}

enum Comp { cZ0 = 0, cZL, cT0, cTL, cSQ, cR1, cR2, cGAIN, cLOSS, cENV };

double comp_of(const InnerTermSet& t, int c) {
  switch (c) {
    case cZ0: return t.zeta0;
    case cZL: return t.zetaL;
    case cT0: return t.tilde0;
    case cTL: return t.tildeL;
    case cSQ: return t.square;
    case cR1: return t.rep1;
    case cR2: return t.rep2;
    case cGAIN: return t.gain;
    case cLOSS: return t.loss;
    // positive integrable envelope dominating every integrated bracket
    // pointwise (|rep1| <= zeta0 - zetaL; |tilde0|, |tildeL| <= |rep2|;
    // |square| <= zeta0 + |rep2|); integrated alongside the requested
    // components so nested tolerances can fall back to an absolute floor
    // where a bracket integral passes through zero
    case cENV: return t.zeta0 - t.zetaL + std::abs(t.rep2);
  }
  throw DomainError("unknown inner component");
}

// inner integral over the angular family for one pair, vector over comps;
// includes the y dy / w measure (in whichever variable) but not the
// per-q prefactor
QuadResultN inner_pass(const PairInvariants& pi, const KernelConfig& cfg,
                       const std::vector<int>& comps, InnerForm form,
                       double logScale, const QuadSpec& spec) {
  int n = int(comps.size());
  double decay = std::max(pi.l - pi.j, 1e-8);
  InnerTermSet t;

  switch (form) {
    case InnerForm::YForm: {
      auto f = [&](double y, double* out) {
        LambdaVars lv = lambda_vars(pi, y);
        eval_terms(pi, cfg, lv, logScale, t);
        double meas = y / lv.w;
        for (int i = 0; i < n; ++i) out[i] = comp_of(t, comps[i]) * meas;
      };
      return integrate_singular_semiinf_n(f, n, 1.0 - cfg.gamma, decay, 1.0,
                                          spec);
    }
    case InnerForm::RForm: {
      double rs = std::sqrt(pi.s);
      auto f = [&](double r, double* out) {
        LambdaVars lv = lambda_vars(pi, r / rs);
        eval_terms(pi, cfg, lv, logScale, t);
        double meas = r / (rs * std::hypot(r, rs));
        for (int i = 0; i < n; ++i) out[i] = comp_of(t, comps[i]) * meas;
      };
      return integrate_singular_semiinf_n(f, n, 1.0 - cfg.gamma, decay / rs,
                                          rs, spec);
    }
    case InnerForm::KForm: {
      double meas = 2.0 / pi.s;
      auto f = [&](double k, double* out) {
        LambdaVars lv = k_variable_vars(pi, k);
        eval_terms(pi, cfg, lv, logScale, t);
        for (int i = 0; i < n; ++i) out[i] = comp_of(t, comps[i]) * meas;
      };
      return integrate_singular_semiinf_n(f, n, -0.5 * cfg.gamma,
                                          2.0 * decay / pi.s, pi.s, spec);
    }
  }
  throw DomainError("unknown inner form");
}

// outer q-integration of selected components; returns values already scaled
// by the 1/p0 prefactor
QuadResultN q_pass(const Momentum& p, const KernelConfig& cfg,
                   const std::vector<int>& comps, const RegionSpec& region,
                   InnerForm form, const QuadSpec& spec) {
  cfg.validate();
  int n = int(comps.size());
  double rp = norm(p.v);

  // integrate the positive envelope alongside the requested components and
  // let every nesting level use it as an absolute error floor; without it,
  // sign-indefinite brackets whose inner integral crosses zero can never meet
  // a relative target and the adaptive refinement explodes
  std::vector<int> ext = comps;
  ext.push_back(cENV);

  QuadSpec innerSpec = spec;
  innerSpec.softFail = true;
  innerSpec.relTol = std::max(0.2 * spec.relTol, 5e-14);
  innerSpec.maxPanels = 6000;
  innerSpec.scaleComp = n;

  QuadSpec outerSpec = spec;
  outerSpec.scaleComp = n;

  auto F = [&](double rq, double mu, double* out) {
    PairInvariants pi = pair_invariants_polar(rp, rq, mu);
    if (pi.g == 0.0) return;  // measure-zero corner q = p
    QuadResultN in = inner_pass(pi, cfg, ext, form, -pi.q0, innerSpec);
    double pref = std::sqrt(pi.s) / (pi.g * pi.q0);
    for (int i = 0; i <= n; ++i) out[i] = pref * in.value[i];
  };

  QuadResultN r = integrate_q_region_n(F, n + 1, p, region, outerSpec);
  double env = std::abs(r.value[n]) / p.p0;
  for (int i = 0; i < n; ++i) {
    r.value[i] /= p.p0;
    double base = std::max(std::abs(r.value[i]), kScaleFloorFactor * env);
    r.errEstimate[i] = r.errEstimate[i] / p.p0 +
                       base * 2.0 * innerSpec.relTol;
  }
  r.value[n] = 0.0;
  r.errEstimate[n] = 0.0;
  return r;
}

QuadResult pick(const QuadResultN& rn, int i) {
  return {rn.value[i], rn.errEstimate[i], rn.evals, rn.converged};
}

QuadResult single_q_pass(const Momentum& p, const KernelConfig& cfg, int comp,
                         const RegionSpec& region, InnerForm form,
                         const QuadSpec& spec) {
  return pick(q_pass(p, cfg, {comp}, region, form, spec), 0);
}

double inner_scalar(const PairInvariants& pi, const KernelConfig& cfg,
                    double y, int comp) {
  InnerTermSet t;
  eval_terms(pi, cfg, lambda_vars(pi, y), 0.0, t);
  return comp_of(t, comp);
}

}  // namespace

InnerTermSet inner_term_set(const PairInvariants& pi, const KernelConfig& cfg,
                            const LambdaVars& lv, double logScale) {
  InnerTermSet t;
  eval_terms(pi, cfg, lv, logScale, t);
  return t;
}

double inner_zeta0(const PairInvariants& pi, const KernelConfig& cfg,
                   double y) {
  return inner_scalar(pi, cfg, y, cZ0);
}
double inner_zetaL(const PairInvariants& pi, const KernelConfig& cfg,
                   double y) {
  return inner_scalar(pi, cfg, y, cZL);
}
double inner_tilde0(const PairInvariants& pi, const KernelConfig& cfg,
                    double y) {
  return inner_scalar(pi, cfg, y, cT0);
}
double inner_tildeL(const PairInvariants& pi, const KernelConfig& cfg,
                    double y) {
  return inner_scalar(pi, cfg, y, cTL);
}
double inner_zeta_square(const PairInvariants& pi, const KernelConfig& cfg,
                         double y) {
  return inner_scalar(pi, cfg, y, cSQ);
}
double inner_rep1(const PairInvariants& pi, const KernelConfig& cfg,
                  double y) {
  return inner_scalar(pi, cfg, y, cR1);
}
double inner_rep2(const PairInvariants& pi, const KernelConfig& cfg,
                  double y) {
  return inner_scalar(pi, cfg, y, cR2);
}

static double tilde_phi_bracket(const PairInvariants& pi, double y,
                                const QuadSpec& spec) {
  LambdaVars lv = lambda_vars(pi, y);
  double lw = pi.l * lv.wMinus1;
  auto f = [&](double phiAng) {
    double c = pi.j * y * std::cos(phiAng);
    return std::exp(-2.0 * lw + 2.0 * c) - std::exp(-lw + c);
  };
  return integrate_adaptive(f, 0.0, M_PI, spec).value / M_PI;
}

double inner_tilde0_phi(const PairInvariants& pi, const KernelConfig& cfg,
                        double y, const QuadSpec& spec) {
  LambdaVars lv = lambda_vars(pi, y);
  double sig = sigma0_from_sin2half(lv.sin2Half, cfg);
  if (sig == 0.0) return 0.0;
  double K = lv.sLambda * cfg.cPhi * std::pow(lv.gLambda2, 0.5 * cfg.rho()) * sig;
  return K * kernel_ratio(pi, lv, cfg) * tilde_phi_bracket(pi, y, spec);
}

double inner_tildeL_phi(const PairInvariants& pi, const KernelConfig& cfg,
                        double y, const QuadSpec& spec) {
  LambdaVars lv = lambda_vars(pi, y);
  double sig = sigma0_from_sin2half(lv.sin2Half, cfg);
  if (sig == 0.0) return 0.0;
  double K = lv.sLambda * cfg.cPhi * std::pow(lv.gLambda2, 0.5 * cfg.rho()) * sig;
  return K * (1.0 - kernel_ratio(pi, lv, cfg)) * tilde_phi_bracket(pi, y, spec);
}

BracketCriticalPoints bracket_critical_points(double l, double j, double c) {
  if (!(c > 0.0) || !(c <= 1.0))
    throw DomainError("bracket_critical_points: cos(phi) must lie in (0,1]");
  if (!(j >= 0.0) || !(l > 0.0))
    throw DomainError("bracket_critical_points: need l > 0, j >= 0");
  double jc = j * c;
  if (jc >= l)
    throw DomainError("bracket_critical_points: need j cos(phi) < l");
  if (jc == 0.0) return {0.0, 0.0};
  double den = (l - jc) * (l + jc);
  return {jc / std::sqrt(den), 2.0 * l * jc / den};
}

QuadResult zeta0(const Momentum& p, const KernelConfig& cfg,
                 const RegionSpec& region, const QuadSpec& spec) {
  return single_q_pass(p, cfg, cZ0, region, InnerForm::YForm, spec);
}
QuadResult zetaL(const Momentum& p, const KernelConfig& cfg,
                 const RegionSpec& region, const QuadSpec& spec) {
  return single_q_pass(p, cfg, cZL, region, InnerForm::YForm, spec);
}
QuadResult tilde_zeta0(const Momentum& p, const KernelConfig& cfg,
                       const RegionSpec& region, const QuadSpec& spec) {
  return single_q_pass(p, cfg, cT0, region, InnerForm::YForm, spec);
}
QuadResult tilde_zetaL(const Momentum& p, const KernelConfig& cfg,
                       const RegionSpec& region, const QuadSpec& spec) {
  return single_q_pass(p, cfg, cTL, region, InnerForm::YForm, spec);
}

QuadResult zeta0_alt_forms(const Momentum& p, const KernelConfig& cfg,
                           const QuadSpec& spec, InnerForm form) {
  return single_q_pass(p, cfg, cZ0, RegionSpec{}, form, spec);
}

QuadResult tilde_zeta(const Momentum& p, const KernelConfig& cfg,
                      const QuadSpec& spec, TildeRep rep,
                      const RegionSpec& region) {
  int comp = rep == TildeRep::Rep1 ? cR1 : cR2;
  return single_q_pass(p, cfg, comp, region, InnerForm::YForm, spec);
}

QuadResult tilde_zeta_form(const Momentum& p, const KernelConfig& cfg,
                           const QuadSpec& spec, TildeRep rep,
                           InnerForm form) {
  int comp = rep == TildeRep::Rep1 ? cR1 : cR2;
  return single_q_pass(p, cfg, comp, RegionSpec{}, form, spec);
}

double default_ball_m(const KernelConfig& cfg) {
  return std::ceil(5.0 * (std::abs(cfg.rho()) + 8.0));
}

QuadResult zeta(const Momentum& p, const KernelConfig& cfg, double m,
                const QuadSpec& spec) {
  MultiplierBreakdown bd = evaluate_multiplier(p, cfg, m, spec);
  return {bd.zeta, bd.zetaErr, 0, true};
}

QuadResult zetaK(const Momentum& p, const KernelConfig& cfg, double m,
                 const QuadSpec& spec) {
  MultiplierBreakdown bd = evaluate_multiplier(p, cfg, m, spec);
  return {bd.zetaK, bd.zetaKErr, 0, true};
}

MultiplierBreakdown evaluate_multiplier(const Momentum& p,
                                        const KernelConfig& cfg, double m,
                                        const QuadSpec& spec) {
  cfg.validate();
  MultiplierBreakdown bd;
  bd.p0 = p.p0;
  bd.absP = norm(p.v);
  bd.m = m > 0.0 ? m : default_ball_m(cfg);
  bd.cfg = cfg;
  if (!(bd.m > 1.0)) throw DomainError("evaluate_multiplier: need m > 1");

  RegionSpec small{RegionSpec::SmallQ, bd.m};
  RegionSpec large{RegionSpec::LargeQ, bd.m};
  RegionSpec full{RegionSpec::Full, bd.m};

  // the small-ball pieces carry an |p| >= 1 indicator in their definition;
  // below that threshold they are identically zero and zeta/zetaK reduce to
  // the leading power and tildeZeta minus that power
  if (bd.absP >= 1.0) {
    QuadResultN rs = q_pass(p, cfg, {cZ0, cZL, cT0, cTL, cSQ}, small,
                            InnerForm::YForm, spec);
    bd.zeta0m = rs.value[0];
    bd.zeta0mErr = rs.errEstimate[0];
    bd.zetaLm = rs.value[1];
    bd.zetaLmErr = rs.errEstimate[1];
    bd.tildeZeta0m = rs.value[2];
    bd.tildeZeta0mErr = rs.errEstimate[2];
    bd.tildeZetaLm = rs.value[3];
    bd.tildeZetaLmErr = rs.errEstimate[3];
    bd.squareM = rs.value[4];
    bd.squareMErr = rs.errEstimate[4];
  }

  QuadResultN rf =
      q_pass(p, cfg, {cZ0, cZL, cR1}, full, InnerForm::YForm, spec);
  bd.zeta0Full = rf.value[0];
  bd.zeta0FullErr = rf.errEstimate[0];
  bd.zetaLFull = rf.value[1];
  bd.zetaLFullErr = rf.errEstimate[1];
  bd.tildeZeta = rf.value[2];
  bd.tildeZetaErr = rf.errEstimate[2];

  if (bd.absP >= 1.0) {
    QuadResult r1 =
        single_q_pass(p, cfg, cR1, large, InnerForm::YForm, spec);
    bd.tildeZeta1 = r1.value;
    bd.tildeZeta1Err = r1.errEstimate;
  }

  double lead = std::pow(bd.p0, 0.5 * (cfg.rho() + cfg.gamma));
  bd.zeta = 0.0;
  bd.zetaErr = 0.0;
  if (bd.absP >= 1.0) {
    bd.zeta += 0.5 * bd.squareM;
    bd.zetaErr += 0.5 * bd.squareMErr;
  }
  bd.zetaK = bd.tildeZeta1 + 0.5 * (bd.zetaLm + bd.tildeZetaLm);
  bd.zetaKErr =
      bd.tildeZeta1Err + 0.5 * (bd.zetaLmErr + bd.tildeZetaLmErr);
  if (bd.absP <= 1.0) {
    bd.zeta += lead;
    bd.zetaK += bd.tildeZeta - lead;
    bd.zetaKErr += bd.tildeZetaErr;
  }
  return bd;
}

}  // namespace relzeta
