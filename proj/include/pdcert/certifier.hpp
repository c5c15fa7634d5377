#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pdcert/lifting.hpp"
#include "pdcert/multipliers.hpp"
#include "pdcert/problem.hpp"
#include "pdcert/sdp.hpp"

namespace pdcert {

/// Layout of the decision vector w for the feasibility problem at a fixed
/// rate: P (symmetric, packed upper triangle), the two objective
/// multipliers (Laplacian edge weights >= 0 plus skew-basis coordinates)
/// and the two constraint multipliers (packed symmetric R plus skew
/// coordinates). Multiplier memberships are enforced by this
/// parameterization: equalities structurally, cone conditions as extra
/// PSD/nonnegativity blocks.
struct VariableLayout {
  int ell = 1;
  int ellp = 1;   // objective parameter size (ell, or ell+1 with the extension)
  int n = 3;      // lifted state dimension

  int p_offset = 0, p_count = 0;
  int m1_w_offset = 0, m1_w_count = 0;
  int m1_s_offset = 0, m1_s_count = 0;
  int m2_w_offset = 0, m2_w_count = 0;
  int m2_s_offset = 0, m2_s_count = 0;
  int m3_r_offset = 0, m3_r_count = 0;
  int m3_s_offset = 0, m3_s_count = 0;
  int m4_r_offset = 0, m4_r_count = 0;
  int m4_s_offset = 0, m4_s_count = 0;
  int total = 0;

  static VariableLayout create(const LiftingConfig& lifting);

  Matrix unpack_P(const Vector& w) const;
  /// which: 1 or 2. Nonnegative weights are clamped at zero so the result
  /// is an exact class member (solver slack can leave them epsilon-negative).
  ObjectiveMultiplierParams unpack_objective(const Vector& w, int which) const;
  /// which: 3 or 4. R is projected onto the PSD cone for the same reason.
  ConstraintMultiplierParams unpack_constraint(const Vector& w, int which) const;
};

/// The two affine LMI forms of the rate test at a fixed rho, as explicit
/// matrix functions of the decision variables. F1 must be negative
/// semidefinite and F2 positive semidefinite.
struct LmiForms {
  double rho;
  Matrix SAB;  // [bA bB], n x (n+4)
  Matrix Kf;   // rows (Y1;Y2;U1;U2) of [bC bD]
  Matrix KA;   // rows (Y3;Y4;U3;U4) of [bC bD]
  int n = 3;

  Matrix F1(const Matrix& P, const Matrix& M1, const Matrix& M3) const;
  Matrix F2(const Matrix& P, const Matrix& M2, const Matrix& M4) const;
};

LmiForms assemble_lmi(double rho, const LiftedSystem& lifted, const ChannelSelectors& sel);

/// Feasibility problem fed to the semidefinite backend: F1 <= -eps*I,
/// F2 >= 0, multiplier cone memberships.
SdfProblem build_feasibility_problem(double rho, const LiftedSystem& lifted,
                                     const ChannelSelectors& sel, const ProblemClass& pc,
                                     const LiftingConfig& lifting, double* eps_feas_out = nullptr);

struct VerifyCheck {
  std::string name;
  double value = 0;       // measured residual
  double threshold = 0;   // value must be <= threshold
  bool pass = false;
};

struct VerifyReport {
  double lmi1_max_eig = 0;   // lambda_max(F1), must be <= 1e-7 * scale
  double lmi2_min_eig = 0;   // lambda_min(F2), must be >= -1e-7 * scale
  double scale = 1;
  std::vector<VerifyCheck> checks;
  bool pass = false;
};

/// A rate certificate: the rate, Lyapunov matrix, multiplier parameters and
/// verification residuals.
struct Certificate {
  double rho = 1.0;
  Config config;
  Matrix P;
  ObjectiveMultiplierParams M1, M2;
  ConstraintMultiplierParams M3, M4;
  std::string solver;
  double solver_slack = 0;
  VerifyReport residuals;
};

/// Independently reassembles the LMIs from the certificate's variables and
/// checks eigenvalue residuals and multiplier memberships.
VerifyReport verify_certificate(const Certificate& cert);

enum class FeasibleStatus { feasible, infeasible, backend_failure };

struct FeasibleResult {
  FeasibleStatus status = FeasibleStatus::backend_failure;
  std::optional<Certificate> cert;  // populated when feasible
  double slack = 0;
  std::string message;
};

/// Single feasibility test at a fixed rate.
FeasibleResult feasible(double rho, const Config& cfg, const SdfBackend& backend);

struct BisectOptions {
  double rho_lo = 0.0;
  double rho_hi = 1.0;
  double tol = 1e-4;
};

enum class CertifyStatus { certified, not_certified, backend_failure };

struct ProbeRecord {
  double rho;
  FeasibleStatus status;
  double slack;
};

struct CertifiedRate {
  CertifyStatus status = CertifyStatus::not_certified;
  double rho = std::numeric_limits<double>::quiet_NaN();
  int ell_used = 0;
  std::optional<Certificate> cert;
  std::vector<ProbeRecord> probes;
  std::string message;
};

/// Bisection for the smallest certifiable rate, to within opts.tol. Probes
/// that fail numerically are treated as not-certified-at-that-rate (which
/// can only make the answer conservative); a numerical failure at the
/// initial upper probe is reported as backend_failure.
CertifiedRate bisect_rate(const Config& cfg, const SdfBackend& backend,
                          const BisectOptions& opts = {});

/// Runs bisect_rate for each lifting dimension in `ells` (extension flag
/// taken from cfg) and returns the best certificate found, using each
/// certified rate to tighten the next bracket.
CertifiedRate certify_over_ells(const Config& cfg, const std::vector<int>& ells,
                                const SdfBackend& backend, const BisectOptions& opts = {});

nlohmann::json certificate_to_json(const Certificate& cert);
Certificate certificate_from_json(const nlohmann::json& j);

}  // namespace pdcert
