#include "pdcert/bounds.hpp"

#include <cmath>

namespace pdcert {

LiteratureBound duhu_bound(const ProblemClass& pc) {
  const double m = pc.m, L = pc.L, slo = pc.sigma_lo, shi = pc.sigma_hi;
  const auto [kf, kA] = condition_numbers(pc);
  LiteratureBound b;
  b.name = "duhu";
  b.gamma = 0.0;
  b.mu = 0.0;
  b.alpha_x = 2.0 / (m + L);
  const double c = 2.0 * (L / (m * m)) * (shi * shi * shi) / (slo * slo);
  b.alpha_lambda = m / ((m + L) * (shi * shi / m + c * shi));
  b.rho = 1.0 - 1.0 / (12.0 * kf * kf * kf * kA * kA * kA * kA);
  return b;
}

LiteratureBound alghunaim_bound(const ProblemClass& pc) {
  const double m = pc.m, L = pc.L, slo = pc.sigma_lo, shi = pc.sigma_hi;
  const auto [kf, kA] = condition_numbers(pc);
  const double kA2 = kA * kA;
  LiteratureBound b;
  b.name = "alghunaim";
  b.gamma = 1.0;
  b.mu = 0.0;
  double rho2;
  if (kA2 <= 2.0) {
    b.alpha_x = 1.0 / (2.0 * L);
    b.alpha_lambda = (m / 4.0) * (2.0 / (shi * shi) + 1.0 / (slo * slo));
    rho2 = 1.0 - 1.0 / (4.0 * kf);
  } else {
    b.alpha_x = (1.0 - 1.0 / kA2) / L;
    b.alpha_lambda = m / (shi * shi);
    rho2 = 1.0 - (1.0 / kf) * (1.0 / kA2 - 1.0 / (kA2 * kA2));
  }
  b.rho = std::sqrt(rho2);
  return b;
}

}  // namespace pdcert
