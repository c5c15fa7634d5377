#include <doctest.h>

#include <random>

#include "pdcert/problem.hpp"

using namespace pdcert;

TEST_CASE("problem class validation") {
  const ProblemClass pc = validate_problem_class(1, 2, 1, 1);
  CHECK(pc.m == 1.0);
  CHECK(pc.L == 2.0);
  CHECK(pc.sigma_lo == 1.0);
  CHECK(pc.sigma_hi == 1.0);

  CHECK_NOTHROW(validate_problem_class(1, 1, 1, 1));  // m = L boundary
  CHECK_THROWS_AS(validate_problem_class(2, 1, 1, 1), ValidationError);
  CHECK_THROWS_AS(validate_problem_class(0, 1, 1, 1), ValidationError);
  CHECK_THROWS_AS(validate_problem_class(1, 2, 0, 1), ValidationError);
  CHECK_THROWS_AS(validate_problem_class(1, 2, 2, 1), ValidationError);
  CHECK_THROWS_AS(validate_problem_class(1, std::numeric_limits<double>::infinity(), 1, 1),
                  ValidationError);
}

TEST_CASE("condition numbers") {
  auto k1 = condition_numbers({1, 2, 1, 1});
  CHECK(k1.kappa_f == doctest::Approx(2).epsilon(1e-15));
  CHECK(k1.kappa_A == doctest::Approx(1).epsilon(1e-15));
  auto k2 = condition_numbers({3, 3, 5, 5});
  CHECK(k2.kappa_f == doctest::Approx(1).epsilon(1e-15));
  CHECK(k2.kappa_A == doctest::Approx(1).epsilon(1e-15));
  auto k3 = condition_numbers({1, 2, 1, 2});
  CHECK(k3.kappa_f == doctest::Approx(2).epsilon(1e-15));
  CHECK(k3.kappa_A == doctest::Approx(2).epsilon(1e-15));
}

TEST_CASE("condition numbers are scale invariant") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(0.1, 10.0);
  for (int i = 0; i < 200; ++i) {
    const double m = unif(rng);
    const double L = m + unif(rng);
    const double lo = unif(rng);
    const double hi = lo + unif(rng);
    const double t = unif(rng);
    auto a = condition_numbers(validate_problem_class(m, L, lo, hi));
    auto b = condition_numbers(validate_problem_class(t * m, t * L, lo, hi));
    auto c = condition_numbers(validate_problem_class(m, L, t * lo, t * hi));
    CHECK(a.kappa_f == doctest::Approx(b.kappa_f).epsilon(1e-12));
    CHECK(a.kappa_A == doctest::Approx(c.kappa_A).epsilon(1e-12));
  }
}

TEST_CASE("validation accepts exactly the invariant set") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(-2.0, 4.0);
  for (int i = 0; i < 2000; ++i) {
    const double m = unif(rng), L = unif(rng), lo = unif(rng), hi = unif(rng);
    const bool valid = m > 0 && L >= m && lo > 0 && hi >= lo;
    if (valid) {
      CHECK_NOTHROW(validate_problem_class(m, L, lo, hi));
    } else {
      CHECK_THROWS_AS(validate_problem_class(m, L, lo, hi), ValidationError);
    }
  }
}

TEST_CASE("algorithm params validation") {
  CHECK_NOTHROW(validate_algorithm_params(0.1, 0.1, 0.0, 0.0));
  CHECK_NOTHROW(validate_algorithm_params(0.1, 0.1, 3.0, 2.0));
  CHECK_THROWS_AS(validate_algorithm_params(0.0, 0.1, 0, 0), ValidationError);
  CHECK_THROWS_AS(validate_algorithm_params(0.1, -0.1, 0, 0), ValidationError);
  CHECK_THROWS_AS(validate_algorithm_params(0.1, 0.1, -1, 0), ValidationError);
  CHECK_THROWS_AS(validate_algorithm_params(0.1, 0.1, 0, 2.5), ValidationError);
  CHECK_THROWS_AS(validate_lifting_config(0, true), ValidationError);
}

TEST_CASE("config JSON round trip") {
  Config cfg;
  cfg.pc = validate_problem_class(1, 2, 1, 4);
  cfg.params = validate_algorithm_params(0.25, 0.75, 0.5, 1.0);
  cfg.lifting = {2, false};
  const auto j = config_to_json(cfg);
  const Config back = config_from_json(j);
  CHECK(back.pc.L == cfg.pc.L);
  CHECK(back.params.alpha_lambda == cfg.params.alpha_lambda);
  CHECK(back.lifting.ell == 2);
  CHECK(back.lifting.include_fixed_point == false);

  auto missing = j;
  missing.erase("m");
  CHECK_THROWS_AS(config_from_json(missing), ValidationError);
}
