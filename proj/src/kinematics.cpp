#include "relzeta/kinematics.hpp"

#include <algorithm>
#include <cmath>

namespace relzeta {

double energy(const Vec3& p) { return std::sqrt(1.0 + norm2(p)); }

static PairInvariants finish_invariants(PairInvariants r) {
  // s via the defining form; fine since p0 q0 - p.q >= 1 (no cancellation below 1)
  r.s = 2.0 * (r.p0 * r.q0 - r.pq + 1.0);
  // g^2 = s - 4 loses digits for p ~ q; the equivalent ratio form
  // g^2 = 2 (|p-q|^2 + |p x q|^2) / (p0 q0 + p.q + 1) does not
  double g2 = 2.0 * (r.diff2 + sqr(r.cross)) / (r.p0 * r.q0 + r.pq + 1.0);
  r.g = std::sqrt(g2);
  r.l = 0.25 * (r.p0 + r.q0);
  if (r.g == 0.0) {
    // coincident momenta: j and the stable sqrt(l^2-j^2) surrogate are
    // defined as 0 by convention
    r.j = 0.0;
    r.sqrtl2j2 = 0.0;
    return r;
  }
  r.j = 0.5 * r.cross / r.g;
  r.sqrtl2j2 = 0.25 * std::sqrt(r.diff2 * r.s) / r.g;
  return r;
}

PairInvariants pair_invariants(const Momentum& p, const Momentum& q) {
  PairInvariants r;
  r.p0 = p.p0;
  r.q0 = q.p0;
  r.pq = dot(p.v, q.v);
  r.cross = norm(cross(p.v, q.v));
  r.diff2 = norm2(p.v - q.v);
  return finish_invariants(r);
}

PairInvariants pair_invariants_polar(double rp, double rq, double mu) {
  if (mu < -1.0 || mu > 1.0)
    throw DomainError("pair_invariants_polar: mu outside [-1,1]");
  PairInvariants r;
  r.p0 = std::sqrt(1.0 + rp * rp);
  r.q0 = std::sqrt(1.0 + rq * rq);
  r.pq = rp * rq * mu;
  r.cross = rp * rq * std::sqrt(std::max(0.0, (1.0 - mu) * (1.0 + mu)));
  // |p-q|^2 without the mu -> 1 cancellation
  r.diff2 = sqr(rp - rq) + 2.0 * rp * rq * (1.0 - mu);
  return finish_invariants(r);
}

std::pair<Momentum, Momentum> post_collision(const Momentum& p,
                                             const Momentum& q,
                                             const Vec3& omega) {
  PairInvariants inv = pair_invariants(p, q);
  double rs = std::sqrt(inv.s);
  Vec3 P = p.v + q.v;
  double P0 = p.p0 + q.p0;
  // (xi - 1)/|P|^2 = 1 / (sqrt(s) (p0 + q0 + sqrt(s))), finite as |P| -> 0
  double c = dot(P, omega) / (rs * (P0 + rs));
  Vec3 half = 0.5 * inv.g * (omega + P * c);
  Momentum pp = Momentum::from(0.5 * P + half);
  Momentum qp = Momentum::from(0.5 * P - half);
  return {pp, qp};
}

double scattering_cos(const Momentum& p, const Momentum& q,
                      const Momentum& pPrime) {
  PairInvariants inv = pair_invariants(p, q);
  if (inv.g == 0.0)
    throw DegeneratePairError("scattering_cos: coincident momenta (g = 0)");
  double gbar2 = 0.0;
  if (norm2(pPrime.v - p.v) > 0.0) {
    PairInvariants bar = pair_invariants(pPrime, p);
    gbar2 = sqr(bar.g);
  }
  double c = 1.0 - 2.0 * gbar2 / sqr(inv.g);
  // clamp pure roundoff overshoot; anything larger stays visible
  if (c < -1.0 && c >= -1.0 - 1e-12) c = -1.0;
  return c;
}

double moller_velocity(const Momentum& p, const Momentum& q) {
  PairInvariants inv = pair_invariants(p, q);
  return inv.g * std::sqrt(inv.s) / (inv.p0 * inv.q0);
}

FourVec ComFrame::apply(const FourVec& v) const {
  std::array<double, 4> in{v.t, v.sp.x, v.sp.y, v.sp.z}, out{};
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out[r] += lambda[r][c] * in[c];
  return {out[0], {out[1], out[2], out[3]}};
}

// eta-orthonormalize candidate row v against the already-built rows in `done`
// (metric signs in `sign`), returning false if v degenerates
static bool gram_schmidt_row(std::array<double, 4>& v,
                             const std::array<std::array<double, 4>, 4>& rows,
                             const bool* used, const double* sign) {
  auto mdot = [](const std::array<double, 4>& a, const std::array<double, 4>& b) {
    return -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3];
  };
  for (int r = 0; r < 4; ++r) {
    if (!used[r]) continue;
    double c = sign[r] * mdot(v, rows[r]);
    for (int k = 0; k < 4; ++k) v[k] -= c * rows[r][k];
  }
  double n2 = mdot(v, v);
  if (n2 < 1e-16) return false;
  double inv = 1.0 / std::sqrt(n2);
  for (int k = 0; k < 4; ++k) v[k] *= inv;
  return true;
}

ComFrame com_frame(const Momentum& p, const Momentum& q) {
  PairInvariants inv = pair_invariants(p, q);
  if (inv.g == 0.0)
    throw DegeneratePairError("com_frame: coincident momenta (g = 0)");
  double rs = std::sqrt(inv.s);
  Vec3 P = p.v + q.v, D = p.v - q.v, X = cross(p.v, q.v);
  double xn = norm(X);

  ComFrame f;
  bool used[4] = {false, false, false, false};
  double sign[4] = {-1.0, 1.0, 1.0, 1.0};

  f.lambda[0] = {(p.p0 + q.p0) / rs, -P.x / rs, -P.y / rs, -P.z / rs};
  f.lambda[3] = {(p.p0 - q.p0) / inv.g, -D.x / inv.g, -D.y / inv.g,
                 -D.z / inv.g};
  used[0] = used[3] = true;

  double scale = xn / std::max(1.0, inv.p0 * inv.q0);
  if (scale > 1e-10) {
    f.lambda[2] = {0.0, X.x / xn, X.y / xn, X.z / xn};
    double mdotpq = inv.pq - inv.p0 * inv.q0;
    double den = inv.g * rs * xn;
    double cp = 2.0 * (inv.p0 + inv.q0 * mdotpq) / den;
    double cq = 2.0 * (inv.q0 + inv.p0 * mdotpq) / den;
    f.lambda[1] = {2.0 * xn / (inv.g * rs), cp * p.v.x + cq * q.v.x,
                   cp * p.v.y + cq * q.v.y, cp * p.v.z + cq * q.v.z};
  } else {
    // collinear pair: rows 1-2 are any eta-orthonormal completion; build one
    // deterministically from the coordinate axes
    used[1] = used[2] = false;
    const std::array<std::array<double, 4>, 3> axes{
        {{0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}};
    int next = 0;
    for (int row : {1, 2}) {
      for (; next < 3; ++next) {
        std::array<double, 4> v = axes[next];
        if (gram_schmidt_row(v, f.lambda, used, sign)) {
          f.lambda[row] = v;
          used[row] = true;
          ++next;
          break;
        }
      }
      if (!used[row])
        throw DegeneratePairError("com_frame: failed to complete basis");
    }
  }
  return f;
}

double juttner(const Momentum& p) {
  return std::exp(-p.p0) / (4.0 * M_PI);
}

double claim_gg_residual(const Momentum& p, const Momentum& q,
                         const Momentum& pPrime, const Momentum& qPrime) {
  PairInvariants inv = pair_invariants(p, q);
  PairInvariants tl = pair_invariants(pPrime, q);
  FourVec a = p.four() + qPrime.four();
  FourVec b = pPrime.four() + q.four() - p.four() - qPrime.four();
  return sqr(inv.g) - (sqr(tl.g) - 0.5 * mink_dot(a, b));
}

}  // namespace relzeta
