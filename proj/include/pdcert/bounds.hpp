#pragma once

#include <string>

#include "pdcert/problem.hpp"

namespace pdcert {

/// A closed-form step-size rule together with its guaranteed convergence
/// factor, used as a comparison baseline.
struct LiteratureBound {
  std::string name;      // "duhu" | "alghunaim"
  double alpha_x;
  double alpha_lambda;
  double rho;            // guaranteed per-step factor, in (0,1)
  double gamma;          // extrapolation value the bound assumes
  double mu;             // augmentation value the bound assumes
};

/// Descent-ascent rule (gamma = 0, mu = 0):
///   alpha_x = 2/(m+L),
///   alpha_lambda = m / ((m+L)(sigma_hi^2/m + c*sigma_hi)),
///     c = 2 (L/m^2)(sigma_hi^3/sigma_lo^2),
///   rho = 1 - 1/(12 kappa_f^3 kappa_A^4).
LiteratureBound duhu_bound(const ProblemClass& pc);

/// Extrapolated rule (gamma = 1, mu = 0). Branches on kappa_A^2 <= 2
/// (exact comparison on the square to avoid rounding at the split):
///   kappa_A^2 <= 2: alpha_x = 1/(2L), alpha_lambda = (m/4)(2/sigma_hi^2 + 1/sigma_lo^2),
///                   rho^2 = 1 - 1/(4 kappa_f)
///   otherwise:      alpha_x = (1 - kappa_A^-2)/L, alpha_lambda = m/sigma_hi^2,
///                   rho^2 = 1 - (1/kappa_f)(kappa_A^-2 - kappa_A^-4)
LiteratureBound alghunaim_bound(const ProblemClass& pc);

}  // namespace pdcert
