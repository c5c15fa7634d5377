#include "pdcert/lfr.hpp"

namespace pdcert {

Matrix StateSpace::B() const {
  Matrix b(3, 4);
  b << B1, B2;
  return b;
}

Matrix StateSpace::C() const {
  Matrix c(4, 3);
  c << C1, C2;
  return c;
}

Matrix StateSpace::D() const {
  Matrix d(4, 4);
  d << D11, D12, D21, D22;
  return d;
}

StateSpace build_lfr(const AlgorithmParams& params) {
  const double ax = params.alpha_x;
  const double al = params.alpha_lambda;
  const double mu = params.mu;
  const double g = params.gamma;

  StateSpace ss;
  ss.A = Matrix::Identity(3, 3);
  ss.A(0, 2) = ax;

  ss.B1 = Matrix::Zero(3, 2);
  ss.B1(0, 0) = -ax;
  ss.B1(1, 1) = -ax;

  ss.B2 = Matrix::Zero(3, 2);
  ss.B2(0, 0) = -ax * mu;
  ss.B2(2, 1) = -al;

  ss.C1 = Matrix::Zero(2, 3);
  ss.C1(0, 0) = 1.0;
  ss.C1(1, 1) = 1.0;

  // y3 = p (no feedthrough); y4 = p + gamma*alpha_x*nu - gamma*alpha_x*u1
  //      - gamma*alpha_x*mu*u3, the extrapolated iterate.
  ss.C2 = Matrix::Zero(2, 3);
  ss.C2(0, 0) = 1.0;
  ss.C2(1, 0) = 1.0;
  ss.C2(1, 2) = g * ax;

  ss.D11 = Matrix::Zero(2, 2);
  ss.D12 = Matrix::Zero(2, 2);
  ss.D21 = Matrix::Zero(2, 2);
  ss.D21(1, 0) = -g * ax;
  ss.D22 = Matrix::Zero(2, 2);
  ss.D22(1, 0) = -g * ax * mu;
  return ss;
}

std::pair<Vector, Vector> step_lfr(const StateSpace& ss, const Vector& state,
                                   const Vector& inputs) {
  if (state.size() != 3) throw ValidationError("step_lfr: state must have dimension 3");
  if (inputs.size() != 4) throw ValidationError("step_lfr: inputs must have dimension 4");
  Vector next = ss.A * state + ss.B() * inputs;
  Vector out = ss.C() * state + ss.D() * inputs;
  return {std::move(next), std::move(out)};
}

}  // namespace pdcert
