#pragma once

namespace relzeta {

// ln I0(x) for x >= 0, accurate in absolute and relative terms over the whole
// range (including x ~ 1e-20 where I0(x) - 1 ~ x^2/4, and x ~ 1e6 where I0
// itself overflows)
double log_i0(double x);

// closed forms of the two exponential-Bessel profiles at w = sqrt(l^2 - j^2):
//   j2_closed      = e^{-w} / w
//   k2tilde_closed = second l-derivative of j2_closed
// defined for l > j >= 0
double j2_closed(double l, double j);
double k2tilde_closed(double l, double j);

// truncated profile integral over [0,1] with an integrable endpoint power:
//   int_0^1 y^{1-gamma} e^{-l sqrt(y^2+1)} I0(j y) dy,   gamma in (0,2)
double kbar_gamma_num(double l, double j, double gamma);

// max over x in [0,1] of exp(-l sqrt(x^2+1) + j x), for l > j >= 0;
// bounded by e^{-sqrt(l^2-j^2)}
double exp_profile_max(double l, double j);

}  // namespace relzeta
