#pragma once

#include <cstdint>
#include <string>

#include <Eigen/Core>
#include <json.hpp>

namespace pdcert {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Thrown when inputs violate the standing assumptions on the problem data
/// or algorithm parameters. The message names the violated condition.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Function/matrix class description: f is m-strongly convex with
/// L-Lipschitz gradient, and the constraint matrix has all singular
/// values in [sigma_lo, sigma_hi].
struct ProblemClass {
  double m = 1.0;
  double L = 1.0;
  double sigma_lo = 1.0;
  double sigma_hi = 1.0;
};

/// Step sizes and structural parameters of the primal-dual iteration.
struct AlgorithmParams {
  double alpha_x = 0.0;       // primal step size, > 0
  double alpha_lambda = 0.0;  // dual step size, > 0
  double mu = 0.0;            // augmentation parameter, >= 0
  double gamma = 0.0;         // extrapolation parameter, in [0, 2]
};

/// Lifting dimension and the fixed-point extension switch for the
/// objective multiplier class.
struct LiftingConfig {
  int ell = 1;
  bool include_fixed_point = true;
};

/// Everything a certification run needs; maps 1:1 onto the JSON config.
struct Config {
  ProblemClass pc;
  AlgorithmParams params;
  LiftingConfig lifting;
};

ProblemClass validate_problem_class(double m, double L, double sigma_lo, double sigma_hi);
AlgorithmParams validate_algorithm_params(double alpha_x, double alpha_lambda, double mu,
                                          double gamma);
LiftingConfig validate_lifting_config(int ell, bool include_fixed_point);

struct ConditionNumbers {
  double kappa_f;
  double kappa_A;
};

ConditionNumbers condition_numbers(const ProblemClass& pc);

/// JSON record with keys {"m","L","sigma_lo","sigma_hi","alpha_x",
/// "alpha_lambda","mu","gamma","ell","include_fixed_point"}.
Config config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const Config& cfg);

/// Fixed 12-significant-digit formatting ("%.12g", C locale) used by every
/// CSV writer so outputs are byte-deterministic.
std::string fmt_g12(double v);

}  // namespace pdcert
