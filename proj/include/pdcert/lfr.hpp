#pragma once

#include <utility>

#include "pdcert/problem.hpp"

namespace pdcert {

/// Scalar-channel state-space realization of the primal-dual iteration
/// after the SVD-based change of state. State xi = (p, q, nu), four scalar
/// inputs (u1,u2 feed the gradient block, u3,u4 feed the squared-singular-
/// value block) and four scalar outputs (y1,y2,y3,y4) = (p, q, p, p_ext),
/// where p_ext is the extrapolated p fed to the dual update.
struct StateSpace {
  Matrix A;    // 3x3
  Matrix B1;   // 3x2, inputs (u1,u2)
  Matrix B2;   // 3x2, inputs (u3,u4)
  Matrix C1;   // 2x3, outputs (y1,y2)
  Matrix C2;   // 2x3, outputs (y3,y4)
  Matrix D11;  // 2x2
  Matrix D12;  // 2x2
  Matrix D21;  // 2x2
  Matrix D22;  // 2x2

  Matrix B() const;  // 3x4, [B1 B2]
  Matrix C() const;  // 4x3, [C1; C2]
  Matrix D() const;  // 4x4, [D11 D12; D21 D22]
};

/// Compact SVD frame of a concrete constraint matrix A = U * diag(sigma) * V1^T,
/// with V2 the orthogonal completion of V1. Carried by simulator instances.
struct SvdFrame {
  Matrix U;       // r x r orthogonal
  Vector sigma;   // r singular values
  Matrix V1;      // n x r, orthonormal columns
  Matrix V2;      // n x (n-r), orthonormal columns
};

/// Realization blocks of the iteration as a linear system in feedback with
/// the gradient and Sigma^2 blocks.
StateSpace build_lfr(const AlgorithmParams& params);

/// One step of the open-loop realization: returns (next_state, outputs).
/// state is (p,q,nu), inputs are (u1,u2,u3,u4), outputs (y1,y2,y3,y4).
std::pair<Vector, Vector> step_lfr(const StateSpace& ss, const Vector& state,
                                   const Vector& inputs);

}  // namespace pdcert
