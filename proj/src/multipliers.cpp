#include "pdcert/multipliers.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace pdcert {

namespace {

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

constexpr double kMembershipTol = 1e-9;

MembershipReport check_common(const Matrix& R, const Matrix& S) {
  MembershipReport rep;
  if (R.rows() != R.cols() || S.rows() != S.cols() || R.rows() != S.rows()) {
    throw ValidationError("multiplier params must be square matrices of equal size");
  }
  rep.scale = std::max({1.0, max_abs(R), max_abs(S)});
  rep.symmetry = max_abs(R - R.transpose());
  rep.skewness = max_abs(S + S.transpose());
  return rep;
}

void finalize(MembershipReport& rep, std::initializer_list<std::pair<const char*, double>> checks) {
  rep.member = true;
  const double tol = kMembershipTol * rep.scale;
  for (const auto& [name, value] : checks) {
    if (value > tol) {
      rep.member = false;
      rep.failure = name;
      break;
    }
  }
}

}  // namespace

MembershipReport mf_membership(const Matrix& R, const Matrix& S) {
  MembershipReport rep = check_common(R, S);
  rep.row_sum = max_abs(R.rowwise().sum());
  rep.off_diag_sign = 0;
  for (int i = 0; i < R.rows(); ++i) {
    for (int j = 0; j < R.cols(); ++j) {
      if (i != j) rep.off_diag_sign = std::max(rep.off_diag_sign, R(i, j));
    }
  }
  rep.skew_row_sum = max_abs(S.rowwise().sum());
  finalize(rep, {{"R symmetry", rep.symmetry},
                 {"R row sums", rep.row_sum},
                 {"R off-diagonal sign", rep.off_diag_sign},
                 {"S skewness", rep.skewness},
                 {"S row sums", rep.skew_row_sum}});
  return rep;
}

MembershipReport ma_membership(const Matrix& R, const Matrix& S) {
  MembershipReport rep = check_common(R, S);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (R + R.transpose()));
  rep.psd = std::max(0.0, -eig.eigenvalues().minCoeff());
  finalize(rep, {{"R symmetry", rep.symmetry},
                 {"R positive semidefiniteness", rep.psd},
                 {"S skewness", rep.skewness}});
  return rep;
}

Multiplier mf_build(const ObjectiveMultiplierParams& params, const ProblemClass& pc,
                    const ChannelSelectors& ordering) {
  const int ell = ordering.ell;
  const int k = static_cast<int>(params.R.rows());
  if (k != ell && k != ell + 1) {
    throw ValidationError("objective multiplier params must have size ell or ell+1");
  }
  MembershipReport rep = mf_membership(params.R, params.S);
  if (!rep.member) {
    throw ValidationError("objective multiplier membership failed: " + rep.failure);
  }
  // With the fixed-point extension the virtual index sits last and its data
  // channel is identically zero, so its row/column is dropped after assembly.
  const Matrix R = params.R.topLeftCorner(ell, ell);
  const Matrix S = params.S.topLeftCorner(ell, ell);

  const Matrix Myy = -2.0 * pc.m * pc.L * R;
  const Matrix Myu = (pc.L + pc.m) * R + S;
  const Matrix Muu = -2.0 * R;

  Multiplier mult;
  mult.kind = MultiplierKind::objective;
  mult.M = Matrix::Zero(4 * ell, 4 * ell);
  for (int ch = 0; ch < 2; ++ch) {
    const int y0 = ch * ell;
    const int u0 = 2 * ell + ch * ell;
    mult.M.block(y0, y0, ell, ell) = Myy;
    mult.M.block(y0, u0, ell, ell) = Myu;
    mult.M.block(u0, y0, ell, ell) = Myu.transpose();
    mult.M.block(u0, u0, ell, ell) = Muu;
  }
  return mult;
}

Multiplier ma_build(const ConstraintMultiplierParams& params, const ProblemClass& pc,
                    const ChannelSelectors& ordering) {
  const int two_ell = 2 * ordering.ell;
  if (params.R.rows() != two_ell) {
    throw ValidationError("constraint multiplier params must have size 2*ell");
  }
  MembershipReport rep = ma_membership(params.R, params.S);
  if (!rep.member) {
    throw ValidationError("constraint multiplier membership failed: " + rep.failure);
  }
  const double lo2 = pc.sigma_lo * pc.sigma_lo;
  const double hi2 = pc.sigma_hi * pc.sigma_hi;

  Multiplier mult;
  mult.kind = MultiplierKind::constraint;
  mult.M = Matrix::Zero(2 * two_ell, 2 * two_ell);
  mult.M.topLeftCorner(two_ell, two_ell) = -2.0 * lo2 * hi2 * params.R;
  mult.M.topRightCorner(two_ell, two_ell) = (hi2 + lo2) * params.R + params.S;
  mult.M.bottomLeftCorner(two_ell, two_ell) = (hi2 + lo2) * params.R + params.S.transpose();
  mult.M.bottomRightCorner(two_ell, two_ell) = -2.0 * params.R;
  return mult;
}

double evaluate_inequality(const Multiplier& mult, const Matrix& stacked) {
  if (stacked.rows() != mult.M.rows()) {
    throw ValidationError("evaluate_inequality: data rows must match multiplier size");
  }
  return (stacked.transpose() * mult.M * stacked).trace();
}

Matrix interpolation_residuals(const InterpolationData& data, const ProblemClass& pc) {
  const int np = static_cast<int>(data.points.size());
  if (np < 1) throw ValidationError("interpolation_residuals: need at least one point");
  const double m = pc.m, L = pc.L;
  Matrix q = Matrix::Zero(np, np);
  for (int i = 0; i < np; ++i) {
    for (int j = 0; j < np; ++j) {
      if (i == j) continue;  // q_ii cancels identically
      const auto& pi = data.points[i];
      const auto& pj = data.points[j];
      q(i, j) = -m * L * (pi.y - pj.y).squaredNorm() - (pi.u - pj.u).squaredNorm() +
                2.0 * m * pi.y.dot(pi.u) - 2.0 * L * pi.y.dot(pj.u) - 2.0 * m * pj.y.dot(pi.u) +
                2.0 * L * pj.y.dot(pj.u) + 2.0 * (L - m) * (pi.f - pj.f);
    }
  }
  return q;
}

std::vector<Matrix> laplacian_basis(int k) {
  std::vector<Matrix> basis;
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) {
      Matrix e = Matrix::Zero(k, k);
      e(i, i) = 1.0;
      e(j, j) = 1.0;
      e(i, j) = -1.0;
      e(j, i) = -1.0;
      basis.push_back(std::move(e));
    }
  }
  return basis;
}

std::vector<Matrix> skew_zero_rowsum_basis(int k) {
  // Coordinates: s_pq for p < q, S = sum s_pq (e_p e_q^T - e_q e_p^T).
  // Row-sum map T: (S*1)_i as a linear function of the coordinates; the
  // basis spans its kernel.
  const int ncoord = k * (k - 1) / 2;
  if (ncoord == 0) return {};
  std::vector<std::pair<int, int>> edges;
  edges.reserve(ncoord);
  for (int p = 0; p < k; ++p) {
    for (int q = p + 1; q < k; ++q) edges.emplace_back(p, q);
  }
  Matrix T = Matrix::Zero(k, ncoord);
  for (int c = 0; c < ncoord; ++c) {
    T(edges[c].first, c) = 1.0;
    T(edges[c].second, c) = -1.0;
  }
  Eigen::FullPivLU<Matrix> lu(T);
  lu.setThreshold(1e-12);
  const Matrix kernel = lu.kernel();  // ncoord x dim
  std::vector<Matrix> basis;
  if (kernel.cols() == 1 && kernel.isZero(0)) return basis;  // trivial kernel
  for (int b = 0; b < kernel.cols(); ++b) {
    Matrix S = Matrix::Zero(k, k);
    for (int c = 0; c < ncoord; ++c) {
      S(edges[c].first, edges[c].second) += kernel(c, b);
      S(edges[c].second, edges[c].first) -= kernel(c, b);
    }
    const double scale = max_abs(S);
    if (scale > 1e-12) basis.push_back(S / scale);
  }
  return basis;
}

}  // namespace pdcert
