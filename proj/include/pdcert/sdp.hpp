#pragma once

#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "pdcert/problem.hpp"

namespace pdcert {

/// One affine PSD constraint: C + sum_i w[vars[i]] * coef[i] must be
/// positive semidefinite. coef entries are symmetric.
struct SdfBlock {
  std::string name;
  Matrix C;
  std::vector<int> vars;
  std::vector<Matrix> coef;

  Matrix eval(const Vector& w) const;
};

/// A semidefinite feasibility problem over free variables w: find w such
/// that every block is PSD. Linear inequalities enter as 1x1 blocks and
/// linear equalities are expected to be eliminated by the caller's
/// parameterization.
struct SdfProblem {
  int num_vars = 0;
  std::vector<SdfBlock> blocks;

  /// max(1, largest |entry| of any constant term); used to scale tolerances.
  double scale() const;
  /// min over blocks of lambda_min(block(w)).
  double min_eigenvalue(const Vector& w) const;
};

enum class SdfStatus { feasible, infeasible, numerical_failure };

struct SdfResult {
  SdfStatus status = SdfStatus::numerical_failure;
  Vector w;
  /// Final common slack t: every block satisfies block(w) + t*I > 0, so t
  /// bounds the worst constraint violation from above.
  double slack = std::numeric_limits<double>::quiet_NaN();
  double min_eig = std::numeric_limits<double>::quiet_NaN();
  int newton_iters = 0;
  std::string message;
};

struct SdfOptions {
  double mu_init = 1.0;
  double mu_shrink = 0.2;
  double mu_min = 1e-12;
  /// mu that must be reached before a positive slack is reported as
  /// proven infeasibility rather than a numerical failure.
  double mu_confident = 1e-8;
  double tikhonov = 1e-10;   // pins the analytic-center drift in w
  double feas_tol = 1e-8;    // slack threshold, times problem scale
  int max_newton_per_stage = 50;
  int max_newton_total = 4000;
  bool verbose = false;
};

/// Abstract semidefinite feasibility backend. Implementations must be
/// deterministic for identical inputs; a single instance is not assumed
/// safe to share across threads.
class SdfBackend {
 public:
  virtual ~SdfBackend() = default;
  virtual std::string name() const = 0;
  virtual SdfResult solve(const SdfProblem& problem) const = 0;
};

/// Log-det barrier path-following on (w, t): minimizes the common slack t
/// subject to block(w) + t*I > 0 for every block, driving the barrier
/// parameter to mu_min. A problem is reported feasible when the final
/// slack is below feas_tol * scale; infeasible when the slack converged
/// to a positive value with mu <= mu_confident.
class BarrierBackend final : public SdfBackend {
 public:
  explicit BarrierBackend(SdfOptions opts = {}, std::string name = "barrier")
      : opts_(opts), name_(std::move(name)) {}
  std::string name() const override { return name_; }
  SdfResult solve(const SdfProblem& problem) const override;

 private:
  SdfOptions opts_;
  std::string name_;
};

/// Backend factory. Empty name consults the PDCERT_SOLVER environment
/// variable, then falls back to "barrier". Unknown names throw.
std::unique_ptr<SdfBackend> make_backend(const std::string& name = "");
std::vector<std::string> backend_names();

}  // namespace pdcert
