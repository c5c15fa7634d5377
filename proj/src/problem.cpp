#include "pdcert/problem.hpp"

#include <cmath>
#include <cstdio>

namespace pdcert {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw ValidationError(std::string(name) + " must be finite");
  }
}

}  // namespace

ProblemClass validate_problem_class(double m, double L, double sigma_lo, double sigma_hi) {
  require_finite(m, "m");
  require_finite(L, "L");
  require_finite(sigma_lo, "sigma_lo");
  require_finite(sigma_hi, "sigma_hi");
  if (!(m > 0)) throw ValidationError("m <= 0: strong convexity modulus must be positive");
  if (!(L >= m)) throw ValidationError("L < m: Lipschitz constant must dominate strong convexity");
  if (!(sigma_lo > 0)) throw ValidationError("sigma_lo <= 0: singular values must be positive");
  if (!(sigma_hi >= sigma_lo)) throw ValidationError("sigma_hi < sigma_lo: singular value interval is empty");
  return ProblemClass{m, L, sigma_lo, sigma_hi};
}

AlgorithmParams validate_algorithm_params(double alpha_x, double alpha_lambda, double mu,
                                          double gamma) {
  require_finite(alpha_x, "alpha_x");
  require_finite(alpha_lambda, "alpha_lambda");
  require_finite(mu, "mu");
  require_finite(gamma, "gamma");
  if (!(alpha_x > 0)) throw ValidationError("alpha_x <= 0: primal step size must be positive");
  if (!(alpha_lambda > 0)) throw ValidationError("alpha_lambda <= 0: dual step size must be positive");
  if (!(mu >= 0)) throw ValidationError("mu < 0: augmentation parameter must be nonnegative");
  if (!(gamma >= 0 && gamma <= 2)) throw ValidationError("gamma outside [0,2]");
  return AlgorithmParams{alpha_x, alpha_lambda, mu, gamma};
}

LiftingConfig validate_lifting_config(int ell, bool include_fixed_point) {
  if (ell < 1) throw ValidationError("ell < 1: lifting dimension must be a positive integer");
  return LiftingConfig{ell, include_fixed_point};
}

ConditionNumbers condition_numbers(const ProblemClass& pc) {
  return ConditionNumbers{pc.L / pc.m, pc.sigma_hi / pc.sigma_lo};
}

Config config_from_json(const nlohmann::json& j) {
  for (const char* key :
       {"m", "L", "sigma_lo", "sigma_hi", "alpha_x", "alpha_lambda", "mu", "gamma", "ell"}) {
    if (!j.contains(key)) {
      throw ValidationError(std::string("config missing key \"") + key + "\"");
    }
  }
  Config cfg;
  cfg.pc = validate_problem_class(j.at("m").get<double>(), j.at("L").get<double>(),
                                  j.at("sigma_lo").get<double>(), j.at("sigma_hi").get<double>());
  cfg.params =
      validate_algorithm_params(j.at("alpha_x").get<double>(), j.at("alpha_lambda").get<double>(),
                                j.at("mu").get<double>(), j.at("gamma").get<double>());
  cfg.lifting = validate_lifting_config(j.at("ell").get<int>(),
                                        j.value("include_fixed_point", true));
  return cfg;
}

std::string fmt_g12(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

nlohmann::json config_to_json(const Config& cfg) {
  return nlohmann::json{{"m", cfg.pc.m},
                        {"L", cfg.pc.L},
                        {"sigma_lo", cfg.pc.sigma_lo},
                        {"sigma_hi", cfg.pc.sigma_hi},
                        {"alpha_x", cfg.params.alpha_x},
                        {"alpha_lambda", cfg.params.alpha_lambda},
                        {"mu", cfg.params.mu},
                        {"gamma", cfg.params.gamma},
                        {"ell", cfg.lifting.ell},
                        {"include_fixed_point", cfg.lifting.include_fixed_point}};
}

}  // namespace pdcert
