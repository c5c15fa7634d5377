#include <doctest.h>

#include <cstdlib>

#include "pdcert/sdp.hpp"

using namespace pdcert;

namespace {

SdfBlock scalar_block(std::string name, double c, int var, double coef) {
  SdfBlock b;
  b.name = std::move(name);
  b.C = Matrix::Constant(1, 1, c);
  b.vars.push_back(var);
  b.coef.push_back(Matrix::Constant(1, 1, coef));
  return b;
}

}  // namespace

TEST_CASE("barrier solves a scalar feasibility problem") {
  SdfProblem prob;
  prob.num_vars = 1;
  prob.blocks.push_back(scalar_block("w >= 1", -1.0, 0, 1.0));
  BarrierBackend backend;
  const SdfResult r = backend.solve(prob);
  CHECK(r.status == SdfStatus::feasible);
  CHECK(r.w[0] >= 1.0 - 1e-7);
}

TEST_CASE("barrier detects scalar infeasibility") {
  SdfProblem prob;
  prob.num_vars = 1;
  prob.blocks.push_back(scalar_block("w >= 1", -1.0, 0, 1.0));
  prob.blocks.push_back(scalar_block("w <= 0", 0.0, 0, -1.0));
  BarrierBackend backend;
  const SdfResult r = backend.solve(prob);
  CHECK(r.status == SdfStatus::infeasible);
  // Optimal common slack is 0.5 at w = 0.5.
  CHECK(r.slack == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("barrier solves a 2x2 PSD interval problem") {
  // [[1, w],[w, 1]] PSD requires |w| <= 1; combined with w >= 0.5.
  SdfProblem prob;
  prob.num_vars = 1;
  SdfBlock psd;
  psd.name = "gram";
  psd.C = Matrix::Identity(2, 2);
  Matrix off = Matrix::Zero(2, 2);
  off(0, 1) = off(1, 0) = 1.0;
  psd.vars.push_back(0);
  psd.coef.push_back(off);
  prob.blocks.push_back(psd);
  prob.blocks.push_back(scalar_block("w >= 0.5", -0.5, 0, 1.0));
  BarrierBackend backend;
  const SdfResult r = backend.solve(prob);
  CHECK(r.status == SdfStatus::feasible);
  CHECK(r.w[0] >= 0.5 - 1e-7);
  CHECK(r.w[0] <= 1.0 + 1e-7);
  CHECK(prob.min_eigenvalue(r.w) >= -1e-8);
}

TEST_CASE("barrier handles feasible sets with empty interior") {
  // diag(w, -w) PSD forces w = 0 exactly; the extra block keeps a strictly
  // feasible direction elsewhere.
  SdfProblem prob;
  prob.num_vars = 1;
  SdfBlock face;
  face.name = "face";
  face.C = Matrix::Zero(2, 2);
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = -1.0;
  face.vars.push_back(0);
  face.coef.push_back(d);
  prob.blocks.push_back(face);
  prob.blocks.push_back(scalar_block("w + 1 >= 0", 1.0, 0, 1.0));
  BarrierBackend backend;
  const SdfResult r = backend.solve(prob);
  CHECK(r.status == SdfStatus::feasible);
  CHECK(std::abs(r.w[0]) < 1e-6);
  CHECK(r.min_eig > -1e-7);
}

TEST_CASE("barrier certifies PSD matrix completion style problems") {
  // Find X = [[2, w0],[w0, 2]] with w0 pinned near 3 by w0 >= 3: infeasible
  // since PSD requires |w0| <= 2.
  SdfProblem prob;
  prob.num_vars = 1;
  SdfBlock psd;
  psd.name = "X";
  psd.C = 2.0 * Matrix::Identity(2, 2);
  Matrix off = Matrix::Zero(2, 2);
  off(0, 1) = off(1, 0) = 1.0;
  psd.vars.push_back(0);
  psd.coef.push_back(off);
  prob.blocks.push_back(psd);
  prob.blocks.push_back(scalar_block("w >= 3", -3.0, 0, 1.0));
  BarrierBackend backend;
  const SdfResult r = backend.solve(prob);
  CHECK(r.status == SdfStatus::infeasible);
}

TEST_CASE("backend registry") {
  CHECK(make_backend("barrier")->name() == "barrier");
  CHECK(make_backend("barrier-tight")->name() == "barrier-tight");
  CHECK_THROWS_AS(make_backend("no-such-solver"), ValidationError);
#ifdef _WIN32
#else
  setenv("PDCERT_SOLVER", "barrier", 1);
  CHECK(make_backend("")->name() == "barrier");
  setenv("PDCERT_SOLVER", "bogus", 1);
  CHECK_THROWS_AS(make_backend(""), ValidationError);
  unsetenv("PDCERT_SOLVER");
#endif
  CHECK(!backend_names().empty());
}
