#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <utility>
#include <vector>

#include "pdcert/certifier.hpp"
#include "pdcert/lfr.hpp"
#include "pdcert/problem.hpp"

namespace pdcert {

/// Thrown when the iteration produces a non-finite iterate.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, int step) : std::runtime_error(what), step(step) {}
  int step;
};

/// A concrete quadratic instance in the declared classes:
/// f(x) = 0.5 x^T Q x + c^T x subject to A x = b.
struct Instance {
  Matrix Q;
  Vector c;
  Matrix A;
  Vector b;
  SvdFrame svd;  // exact factors used to build A
  std::uint64_t seed = 0;
  int n = 0;
  int r = 0;
};

/// Samples an instance: Q with Haar-random eigenvectors and eigenvalues
/// uniform in [m,L], A with Haar-random factors and singular values uniform
/// in [sigma_lo, sigma_hi]; force_extremes pins the spectrum endpoints.
/// Deterministic in the seed.
Instance generate_instance(const ProblemClass& pc, int n, int r, std::uint64_t seed,
                           bool force_extremes);

/// Solves the KKT system Q x + c + A^T lambda = 0, A x = b.
std::pair<Vector, Vector> fixed_point(const Instance& inst);

struct Trajectory {
  std::vector<Vector> x;       // x_0 .. x_K
  std::vector<Vector> lambda;  // lambda_0 .. lambda_K
  std::vector<Vector> x_ext;   // extrapolated iterates, x_ext[k] for k = 0 .. K-1
  int K = 0;
};

/// Runs the primal-dual iteration for K steps from (x0, lambda0).
Trajectory run_iterations(const Instance& inst, const AlgorithmParams& params, const Vector& x0,
                          const Vector& lambda0, int K);

/// Transformed coordinates (p, q, nu) = (V1^T x, V2^T x, -Sigma U^T lambda)
/// of each trajectory point.
struct TransformedTrajectory {
  std::vector<Vector> p, q, nu;
};
TransformedTrajectory transform_trajectory(const Instance& inst, const Trajectory& traj);

/// Replays the iteration directly in transformed coordinates (blockwise
/// form of the scalar-channel realization, constants from b included);
/// returns the max deviation from transform_trajectory over all steps.
double replay_deviation(const Instance& inst, const AlgorithmParams& params,
                        const Trajectory& traj);

/// Least-squares geometric rate of ||(x_k,lambda_k) - (x*,lambda*)|| over
/// the window [K/2, K_cut], where K_cut excludes steps below the floor
/// 1e2 * machine epsilon relative to the initial distance. Returns nullopt
/// when the window is empty (trajectory below the measurable floor).
std::optional<double> empirical_rate(const Trajectory& traj, const Vector& x_star,
                                     const Vector& lambda_star);

struct LyapunovReport {
  int first_k = 0;               // first index with a fully populated window
  double v_first = 0;            // V at first_k
  double max_decrease_violation = 0;  // max_k (V_{k+1} - rho^2 V_k)
  double max_lower_violation = 0;     // max_k (||xi_k||^2 - V_k)
  double max_ratio = 0;               // max_k V_{k+1}/V_k over positive V_k
  double min_lower_ratio = 0;         // min_k V_k/||xi_k||^2 over nonzero states
  bool decrease_ok = false;
  bool lower_ok = false;
};

/// Evaluates the certificate's Lyapunov chain along a trajectory of a
/// scalar-channel instance (r = 1 and n = 2, so every channel is
/// one-dimensional). Violations are compared against tol_rel * V(first).
LyapunovReport lyapunov_check(const Trajectory& traj, const Certificate& cert,
                              const Instance& inst, double tol_rel = 1e-8);

/// CSV with columns k, ||x - x*||, ||lambda - lambda*|| and, when a
/// certificate is supplied, V_k (empty for the first ell-1 rows).
void export_trajectory_csv(std::ostream& os, const Trajectory& traj, const Instance& inst,
                           const Certificate* cert = nullptr);

}  // namespace pdcert
