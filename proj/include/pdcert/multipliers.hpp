#pragma once

#include <string>
#include <vector>

#include "pdcert/lifting.hpp"
#include "pdcert/problem.hpp"

namespace pdcert {

/// Parameters (R, S) generating an objective multiplier: R symmetric,
/// diagonally hyperdominant with zero excess (R*1 = 0, off-diagonals <= 0),
/// S skew-symmetric with S*1 = 0. Size is ell, or ell+1 when the
/// fixed-point extension is active (the extra index is a virtual
/// interpolation point at the origin of the shifted function).
struct ObjectiveMultiplierParams {
  Matrix R;
  Matrix S;
};

/// Parameters (R, S) generating a constraint multiplier: R symmetric
/// positive semidefinite, S skew-symmetric, both of size 2*ell.
struct ConstraintMultiplierParams {
  Matrix R;
  Matrix S;
};

enum class MultiplierKind { objective, constraint };

/// Assembled symmetric multiplier acting on the stacked 4*ell-vector of its
/// channel pair: (Y1;Y2;U1;U2) for objective, (Y3;Y4;U3;U4) for constraint.
struct Multiplier {
  Matrix M;
  MultiplierKind kind;
};

/// Residuals of the structural conditions on (R, S); member iff all
/// violations are <= 1e-9 * scale.
struct MembershipReport {
  double symmetry = 0;       // max |R - R^T|
  double row_sum = 0;        // max |R*1|
  double off_diag_sign = 0;  // max positive off-diagonal of R
  double psd = 0;            // constraint class only: max(0, -lambda_min(R))
  double skewness = 0;       // max |S + S^T|
  double skew_row_sum = 0;   // objective class only: max |S*1|
  double scale = 1;
  bool member = false;
  std::string failure;       // name of the first failed condition, empty if member
};

MembershipReport mf_membership(const Matrix& R, const Matrix& S);
MembershipReport ma_membership(const Matrix& R, const Matrix& S);

/// Builds the objective multiplier for inequality data ordered
/// (Y1;Y2;U1;U2). When params carry the fixed-point extension
/// (size ell+1), the virtual row/column is dropped after assembly.
Multiplier mf_build(const ObjectiveMultiplierParams& params, const ProblemClass& pc,
                    const ChannelSelectors& ordering);

/// Builds the constraint multiplier acting on (Y3;Y4;U3;U4).
Multiplier ma_build(const ConstraintMultiplierParams& params, const ProblemClass& pc,
                    const ChannelSelectors& ordering);

/// Value of the multiplier's quadratic form on stacked data. Each row of
/// `stacked` is one scalar channel/lag entry; multiple columns carry
/// vector-valued channels, contracted through inner products.
double evaluate_inequality(const Multiplier& mult, const Matrix& stacked);

/// One interpolation point: position y, gradient u, function value f.
struct InterpolationPoint {
  Vector y;
  Vector u;
  double f = 0;
};

struct InterpolationData {
  std::vector<InterpolationPoint> points;
};

/// Pairwise interpolation residuals q_ij for the class F(m,L); the data is
/// interpolable iff min over i != j of q_ij >= 0 (up to tolerance).
Matrix interpolation_residuals(const InterpolationData& data, const ProblemClass& pc);

/// Basis machinery for the multiplier parameter cones, shared with the
/// certifier's decision-variable layout.
///
/// Edge Laplacians (e_i - e_j)(e_i - e_j)^T, i < j lexicographic: the
/// extreme rays of the hyperdominant-with-zero-excess cone.
std::vector<Matrix> laplacian_basis(int k);
/// Basis of { S skew-symmetric : S*1 = 0 }, dimension C(k,2) - (k-1).
std::vector<Matrix> skew_zero_rowsum_basis(int k);

}  // namespace pdcert
