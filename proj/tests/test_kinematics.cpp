#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "relzeta/kinematics.hpp"

using namespace relzeta;

namespace {

Vec3 random_ball(RandomStream& rng, double maxNorm) {
  for (;;) {
    Vec3 v{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    if (norm2(v) <= 1.0) return maxNorm * v;
  }
}

Vec3 random_unit(RandomStream& rng) {
  for (;;) {
    Vec3 v{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    double n2 = norm2(v);
    if (n2 > 1e-4 && n2 <= 1.0) return (1.0 / std::sqrt(n2)) * v;
  }
}

}  // namespace

TEST_CASE("energy of explicit momenta") {
  CHECK(energy({0, 0, 0}) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(energy({1, 0, 0}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(energy({3, 4, 0}) == doctest::Approx(std::sqrt(26.0)).epsilon(1e-14));
}

TEST_CASE("pair invariants at hand-computed points") {
  Momentum p = Momentum::from({1, 0, 0});
  Momentum q = Momentum::from({0, 1, 0});
  PairInvariants pi = pair_invariants(p, q);
  CHECK(pi.s == doctest::Approx(6.0).epsilon(1e-14));
  CHECK(pi.g == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  CHECK(pi.cross == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(pi.l == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-14));
  CHECK(pi.j == doctest::Approx(1.0 / (2.0 * std::sqrt(2.0))).epsilon(1e-14));
  CHECK(sqr(pi.l) - sqr(pi.j) == doctest::Approx(0.375).epsilon(1e-13));
  // cross-check the stable surrogate against s |p-q|^2 / (16 g^2)
  CHECK(sqr(pi.sqrtl2j2) ==
        doctest::Approx(pi.s * pi.diff2 / (16.0 * sqr(pi.g))).epsilon(1e-13));

  PairInvariants anti =
      pair_invariants(Momentum::from({1, 0, 0}), Momentum::from({-1, 0, 0}));
  CHECK(anti.s == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(anti.g == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(anti.l == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-14));
  CHECK(anti.j == 0.0);
}

TEST_CASE("coincident momenta are total, not an error") {
  Momentum z = Momentum::from({0, 0, 0});
  PairInvariants pi = pair_invariants(z, z);
  CHECK(pi.s == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(pi.g == 0.0);
  CHECK(pi.l == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(pi.j == 0.0);
  CHECK(pi.sqrtl2j2 == 0.0);

  Momentum w = Momentum::from({0.3, -1.2, 2.0});
  PairInvariants pw = pair_invariants(w, w);
  CHECK(pw.s == doctest::Approx(4.0).epsilon(1e-13));
  CHECK(pw.g == 0.0);

  // operations that genuinely need g > 0 signal the typed error
  CHECK_THROWS_AS(com_frame(w, w), DegeneratePairError);
  CHECK_THROWS_AS(scattering_cos(w, w, w), DegeneratePairError);
  CHECK(moller_velocity(w, w) == 0.0);
}

TEST_CASE("polar invariants match vector invariants") {
  RandomStream rng(11);
  for (int i = 0; i < 200; ++i) {
    double rp = rng.uniform(1e-3, 40.0);
    double rq = rng.uniform(1e-3, 40.0);
    double mu = rng.uniform(-1.0, 1.0);
    Momentum p = Momentum::from({0, 0, rp});
    double smu = std::sqrt(1.0 - mu * mu);
    Momentum q = Momentum::from({rq * smu, 0, rq * mu});
    PairInvariants a = pair_invariants(p, q);
    PairInvariants b = pair_invariants_polar(rp, rq, mu);
    CHECK(a.s == doctest::Approx(b.s).epsilon(1e-12));
    CHECK(a.g == doctest::Approx(b.g).epsilon(1e-11));
    CHECK(a.l == doctest::Approx(b.l).epsilon(1e-13));
    CHECK(a.j == doctest::Approx(b.j).epsilon(1e-10));
  }
  CHECK_THROWS_AS(pair_invariants_polar(1.0, 1.0, 1.5), DomainError);
}

TEST_CASE("post-collision map at explicit points") {
  Momentum z = Momentum::from({0, 0, 0});
  auto [zp, zq] = post_collision(z, z, {0, 0, 1});
  CHECK(norm(zp.v) == 0.0);
  CHECK(norm(zq.v) == 0.0);

  auto [pp, qp] = post_collision(Momentum::from({1, 0, 0}),
                                 Momentum::from({-1, 0, 0}), {0, 0, 1});
  CHECK(pp.v.x == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(pp.v.z == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(qp.v.z == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("post-collision conservation and scattering cosine range") {
  RandomStream rng(12);
  for (int i = 0; i < 2000; ++i) {
    Momentum p = Momentum::from(random_ball(rng, 50.0));
    Momentum q = Momentum::from(random_ball(rng, 50.0));
    Vec3 omega = random_unit(rng);
    auto [pp, qp] = post_collision(p, q, omega);
    double e0 = p.p0 + q.p0;
    CHECK(pp.p0 + qp.p0 == doctest::Approx(e0).epsilon(1e-12));
    Vec3 d = (pp.v + qp.v) - (p.v + q.v);
    CHECK(norm(d) <= 1e-12 * e0);
    PairInvariants pi = pair_invariants(p, q);
    if (pi.g > 1e-8) {
      double c = scattering_cos(p, q, pp);
      CHECK(c >= -1.0);
      CHECK(c <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("scattering cosine at hand-computed point") {
  Momentum p = Momentum::from({1, 0, 0});
  Momentum q = Momentum::from({-1, 0, 0});
  CHECK(scattering_cos(p, q, Momentum::from({0, 0, 1})) ==
        doctest::Approx(0.0).epsilon(1e-13));
  CHECK(scattering_cos(p, q, p) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("scattering cosine is 1 only at the identity collision") {
  RandomStream rng(13);
  for (int i = 0; i < 500; ++i) {
    Momentum p = Momentum::from(random_ball(rng, 20.0));
    Momentum q = Momentum::from(random_ball(rng, 20.0));
    PairInvariants pi = pair_invariants(p, q);
    if (pi.g < 1e-6) continue;
    auto [pp, qp] = post_collision(p, q, random_unit(rng));
    (void)qp;
    if (scattering_cos(p, q, pp) >= 1.0 - 1e-12)
      CHECK(norm(pp.v - p.v) <= 1e-5 * (1.0 + norm(p.v)));
  }
}

TEST_CASE("moller velocity closed form and alternative formula") {
  CHECK(moller_velocity(Momentum::from({1, 0, 0}),
                        Momentum::from({0, 1, 0})) ==
        doctest::Approx(std::sqrt(3.0)).epsilon(1e-13));
  RandomStream rng(14);
  for (int i = 0; i < 500; ++i) {
    Momentum p = Momentum::from(random_ball(rng, 30.0));
    Momentum q = Momentum::from(random_ball(rng, 30.0));
    Vec3 vp = (1.0 / p.p0) * p.v, vq = (1.0 / q.p0) * q.v;
    double alt2 = norm2(vp - vq) - norm2(cross(vp, vq));
    // flux convention g sqrt(s) = 2 sqrt((p.q)^2 - 1): twice the
    // |v1 - v2|-based expression
    double alt = 2.0 * std::sqrt(std::max(alt2, 0.0));
    CHECK(moller_velocity(p, q) == doctest::Approx(alt).epsilon(1e-10));
  }
}

TEST_CASE("center-of-momentum frame properties") {
  RandomStream rng(15);
  int done = 0;
  for (int i = 0; done < 400; ++i) {
    REQUIRE(i < 10000);
    Momentum p = Momentum::from(random_ball(rng, 50.0));
    Momentum q = Momentum::from(random_ball(rng, 50.0));
    PairInvariants pi = pair_invariants(p, q);
    if (pi.g < 1e-8) continue;
    ++done;
    ComFrame f = com_frame(p, q);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        double acc = -f.lambda[0][a] * f.lambda[0][b];
        for (int k = 1; k < 4; ++k) acc += f.lambda[k][a] * f.lambda[k][b];
        double want = a != b ? 0.0 : (a == 0 ? -1.0 : 1.0);
        CHECK(std::abs(acc - want) <= 1e-10);
      }
    FourVec sum = f.apply({p.p0 + q.p0, p.v + q.v});
    CHECK(std::abs(sum.t - std::sqrt(pi.s)) <= 1e-10);
    CHECK(std::abs(sum.sp.x) <= 1e-10);
    CHECK(std::abs(sum.sp.y) <= 1e-10);
    CHECK(std::abs(sum.sp.z) <= 1e-10);
    FourVec diff = f.apply({-(p.p0 - q.p0), -(p.v - q.v)});
    CHECK(std::abs(diff.t) <= 1e-10);
    CHECK(std::abs(diff.sp.x) <= 1e-10);
    CHECK(std::abs(diff.sp.y) <= 1e-10);
    CHECK(std::abs(diff.sp.z - pi.g) <= 1e-10);
  }
}

TEST_CASE("center-of-momentum frame handles collinear pairs") {
  // p x q = 0 exercises the deterministic axis completion
  Momentum p = Momentum::from({1, 0, 0});
  Momentum q = Momentum::from({-1, 0, 0});
  PairInvariants pi = pair_invariants(p, q);
  ComFrame f = com_frame(p, q);
  CHECK(f.lambda[0][0] == doctest::Approx(1.0).epsilon(1e-14));
  FourVec sum = f.apply({p.p0 + q.p0, p.v + q.v});
  CHECK(std::abs(sum.t - std::sqrt(pi.s)) <= 1e-12);
  FourVec diff = f.apply({-(p.p0 - q.p0), -(p.v - q.v)});
  CHECK(std::abs(diff.sp.z - pi.g) <= 1e-12);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      double acc = -f.lambda[0][a] * f.lambda[0][b];
      for (int k = 1; k < 4; ++k) acc += f.lambda[k][a] * f.lambda[k][b];
      double want = a != b ? 0.0 : (a == 0 ? -1.0 : 1.0);
      CHECK(std::abs(acc - want) <= 1e-12);
    }

  // parallel same-direction pair (also collinear)
  Momentum p2 = Momentum::from({0, 0, 3});
  Momentum q2 = Momentum::from({0, 0, 1});
  ComFrame f2 = com_frame(p2, q2);
  PairInvariants pi2 = pair_invariants(p2, q2);
  FourVec d2 = f2.apply({-(p2.p0 - q2.p0), -(p2.v - q2.v)});
  CHECK(std::abs(d2.sp.z - pi2.g) <= 1e-12);
}

TEST_CASE("equilibrium weight") {
  CHECK(juttner(Momentum::from({0, 0, 0})) ==
        doctest::Approx(0.0292749157).epsilon(1e-8));
  RandomStream rng(16);
  for (int i = 0; i < 100; ++i) {
    Momentum p = Momentum::from(random_ball(rng, 10.0));
    Momentum q = Momentum::from(random_ball(rng, 10.0));
    CHECK(juttner(p) / juttner(q) ==
          doctest::Approx(std::exp(q.p0 - p.p0)).epsilon(1e-12));
  }
  CHECK(juttner(Momentum::from({0, 0, 5})) <
        juttner(Momentum::from({0, 0, 4})));
}

TEST_CASE("relative-momentum transfer identity residual") {
  auto [pp, qp] = post_collision(Momentum::from({1, 0, 0}),
                                 Momentum::from({-1, 0, 0}), {0, 0, 1});
  CHECK(std::abs(claim_gg_residual(Momentum::from({1, 0, 0}),
                                   Momentum::from({-1, 0, 0}), pp, qp)) <=
        1e-12);
  RandomStream rng(17);
  for (int i = 0; i < 2000; ++i) {
    Momentum p = Momentum::from(random_ball(rng, 50.0));
    Momentum q = Momentum::from(random_ball(rng, 50.0));
    PairInvariants pi = pair_invariants(p, q);
    auto [a, b] = post_collision(p, q, random_unit(rng));
    CHECK(std::abs(claim_gg_residual(p, q, a, b)) <= 1e-10 * pi.s);
  }
}

TEST_CASE("pointwise invariant inequalities on a seeded sample") {
  RandomStream rng(18);
  for (int i = 0; i < 5000; ++i) {
    Momentum p = Momentum::from(random_ball(rng, 50.0));
    Momentum q = Momentum::from(random_ball(rng, 50.0));
    PairInvariants pi = pair_invariants(p, q);
    double diffNorm = std::sqrt(pi.diff2);
    CHECK(pi.s == doctest::Approx(sqr(pi.g) + 4.0).epsilon(1e-12));
    CHECK(pi.g <= diffNorm * (1.0 + 1e-12) + 1e-300);
    double lower =
        std::sqrt((pi.diff2 + sqr(pi.cross)) / (pi.p0 * pi.q0));
    CHECK(lower <= pi.g * (1.0 + 1e-12) + 1e-300);
    CHECK(std::abs(pi.p0 - pi.q0) <= diffNorm * (1.0 + 1e-12) + 1e-300);
    CHECK(pi.s <= 4.0 * pi.p0 * pi.q0 * (1.0 + 1e-12));
    CHECK(pi.p0 + pi.q0 <= 2.0 * pi.p0 * pi.q0 * (1.0 + 1e-12));
    CHECK(pi.j <= pi.l * (1.0 + 1e-12));
    CHECK(pi.l <= 0.5 * pi.p0 * pi.q0 * (1.0 + 1e-12));
    if (pi.g >= 1e-6)
      CHECK(sqr(pi.sqrtl2j2) ==
            doctest::Approx(pi.s * pi.diff2 / (16.0 * sqr(pi.g)))
                .epsilon(1e-10));
  }
}
