#include "relzeta/kernels.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace relzeta {

void KernelConfig::validate() const {
  if (!(gamma > 0.0) || !(gamma < 2.0))
    throw DomainError("kernel: gamma must lie in (0,2)");
  if (kind == InteractionKind::Soft) {
    if (!(b > gamma) || !(b < 2.0))
      throw DomainError("kernel: soft exponent b must lie in (gamma, 2)");
  } else {
    if (!(a >= -gamma) || !(a < 2.0))
      throw DomainError("kernel: hard exponent a must lie in [-gamma, 2)");
  }
  if (kind == InteractionKind::BoundedDemo && !(bound > 0.0))
    throw DomainError("kernel: demo bound must be positive");
  if (!(cPhi >= 0.0)) throw DomainError("kernel: cPhi must be >= 0");
  if (!(delta >= 0.0) || !(delta < 1.0))
    throw DomainError("kernel: delta must lie in [0,1)");
}

KernelConfig KernelConfig::parse(const std::string& text) {
  auto colon = text.find(':');
  std::string head = text.substr(0, colon);
  KernelConfig cfg;
  if (head == "hard")
    cfg.kind = InteractionKind::Hard;
  else if (head == "soft")
    cfg.kind = InteractionKind::Soft;
  else if (head == "demo")
    cfg.kind = InteractionKind::BoundedDemo;
  else
    throw DomainError("kernel: unknown kind '" + head + "'");

  std::map<std::string, double> kv;
  if (colon != std::string::npos) {
    std::stringstream ss(text.substr(colon + 1));
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto eq = item.find('=');
      if (eq == std::string::npos)
        throw DomainError("kernel: expected key=value, got '" + item + "'");
      std::string key = item.substr(0, eq);
      size_t used = 0;
      double val = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1)
        throw DomainError("kernel: bad number in '" + item + "'");
      kv[key] = val;
    }
  }

  std::map<std::string, double*> fields{{"a", &cfg.a},
                                        {"b", &cfg.b},
                                        {"gamma", &cfg.gamma},
                                        {"bound", &cfg.bound},
                                        {"cphi", &cfg.cPhi},
                                        {"delta", &cfg.delta}};
  for (auto& [key, val] : kv) {
    auto it = fields.find(key);
    if (it == fields.end())
      throw DomainError("kernel: unknown parameter '" + key + "'");
    *it->second = val;
  }

  auto require = [&](const char* key) {
    if (!kv.count(key))
      throw DomainError(std::string("kernel: missing parameter '") + key +
                        "' for kind '" + head + "'");
  };
  if (cfg.kind == InteractionKind::Hard) {
    require("a");
    require("gamma");
  } else if (cfg.kind == InteractionKind::Soft) {
    require("b");
    require("gamma");
  } else {
    require("a");
    require("bound");
  }
  cfg.validate();
  return cfg;
}

std::string KernelConfig::format() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind) {
    case InteractionKind::Hard:
      os << "hard:a=" << a << ",gamma=" << gamma;
      break;
    case InteractionKind::Soft:
      os << "soft:b=" << b << ",gamma=" << gamma;
      break;
    case InteractionKind::BoundedDemo:
      os << "demo:a=" << a << ",bound=" << bound << ",gamma=" << gamma;
      break;
  }
  if (delta > 0.0) os << ",delta=" << delta;
  if (cPhi != 1.0) os << ",cphi=" << cPhi;
  return os.str();
}

double phi(double g, const KernelConfig& cfg) {
  if (!(g >= 0.0)) throw DomainError("phi: need g >= 0");
  if (g == 0.0 && cfg.rho() < 0.0)
    throw DomainError("phi: g = 0 is singular for negative-exponent kernels");
  return cfg.cPhi * std::pow(g, cfg.rho());
}

double sigma0_from_sin2half(double sin2Half, const KernelConfig& cfg) {
  if (!(sin2Half >= 0.0) || !(sin2Half <= 1.0))
    throw DomainError("sigma0: sin^2(theta/2) must lie in [0,1]");
  if (sin2Half < cfg.delta) return 0.0;
  if (sin2Half == 0.0) {
    // grazing limit: the cap makes the demo kernel continuous there
    if (cfg.kind == InteractionKind::BoundedDemo) return cfg.bound;
    throw DomainError("sigma0: grazing angle is non-integrable without cutoff");
  }
  double v = std::pow(sin2Half, -1.0 - 0.5 * cfg.gamma);
  if (cfg.kind == InteractionKind::BoundedDemo) v = std::min(v, cfg.bound);
  return v;
}

LambdaVars lambda_vars(const PairInvariants& pi, double y) {
  if (!(y >= 0.0)) throw DomainError("lambda_vars: need y >= 0");
  LambdaVars lv;
  lv.y = y;
  lv.w = std::hypot(y, 1.0);
  lv.wMinus1 = y * (y / (lv.w + 1.0));
  // s (w-1) / 2 without the w ~ 1 cancellation
  lv.deltaG2 = 0.5 * pi.s * lv.wMinus1;
  lv.gLambda2 = sqr(pi.g) + lv.deltaG2;
  lv.sLambda = lv.gLambda2 + 4.0;
  lv.sin2Half = lv.deltaG2 / lv.gLambda2;
  lv.cosThetaLambda = 1.0 - 2.0 * lv.sin2Half;
  return lv;
}

LambdaVars k_variable_vars(const PairInvariants& pi, double k) {
  if (!(k >= 0.0)) throw DomainError("k_variable_vars: need k >= 0");
  LambdaVars lv;
  lv.deltaG2 = k;
  lv.wMinus1 = 2.0 * k / pi.s;
  lv.w = 1.0 + lv.wMinus1;
  double ks = k / pi.s;
  lv.y = 2.0 * std::sqrt(ks * (1.0 + ks));
  lv.gLambda2 = sqr(pi.g) + k;
  lv.sLambda = lv.gLambda2 + 4.0;
  lv.sin2Half = k / lv.gLambda2;
  lv.cosThetaLambda = 1.0 - 2.0 * lv.sin2Half;
  return lv;
}

double kernel_ratio(const PairInvariants& pi, const LambdaVars& lv,
                    const KernelConfig& cfg) {
  if (!(pi.g > 0.0)) throw DegeneratePairError("kernel_ratio: need g > 0");
  double nu = 0.5 * (4.0 + cfg.rho());
  double lr = std::log1p(lv.deltaG2 / pi.s) +
              nu * std::log1p(lv.deltaG2 / sqr(pi.g));
  return std::exp(-lr);
}

}  // namespace relzeta
