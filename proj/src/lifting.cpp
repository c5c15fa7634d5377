#include "pdcert/lifting.hpp"

#include <Eigen/SVD>

namespace pdcert {

ChannelSelectors channel_selectors(const LiftingConfig& cfg) {
  const int ell = validate_lifting_config(cfg.ell, cfg.include_fixed_point).ell;
  ChannelSelectors sel;
  sel.ell = ell;
  auto block = [ell](int index) {
    std::vector<int> rows(ell);
    for (int j = 0; j < ell; ++j) rows[j] = index * ell + j;
    return rows;
  };
  auto append = [](std::vector<int>& dst, const std::vector<int>& src) {
    dst.insert(dst.end(), src.begin(), src.end());
  };
  // Output block order: Y1,Y2,Y3,Y4,U1,U2,U3,U4.
  append(sel.Yf_rows, block(0));
  append(sel.Yf_rows, block(1));
  append(sel.YA_rows, block(2));
  append(sel.YA_rows, block(3));
  append(sel.Uf_rows, block(4));
  append(sel.Uf_rows, block(5));
  append(sel.UA_rows, block(6));
  append(sel.UA_rows, block(7));
  return sel;
}

LiftedSystem lift_realization(const StateSpace& ss, const LiftingConfig& cfg) {
  const int ell = validate_lifting_config(cfg.ell, cfg.include_fixed_point).ell;
  const int n = 3 + 4 * (ell - 1);
  const Matrix B = ss.B();
  const Matrix C = ss.C();
  const Matrix D = ss.D();

  LiftedSystem sys;
  sys.ell = ell;
  sys.n = n;
  sys.A = Matrix::Zero(n, n);
  sys.B = Matrix::Zero(n, 4);
  sys.C = Matrix::Zero(8 * ell, n);
  sys.D = Matrix::Zero(8 * ell, 4);

  // State layout: (xi_{k-ell+1}, u_{k-1}, ..., u_{k-ell+1}).
  auto ustore = [](int j) { return 3 + 4 * (j - 1); };  // offset of stored u_{k-j}, j >= 1

  sys.A.topLeftCorner(3, 3) = ss.A;
  if (ell == 1) {
    sys.B = B;
  } else {
    sys.A.block(0, ustore(ell - 1), 3, 4) = B;   // oldest stored input advances the plant
    sys.B.block(3, 0, 4, 4) = Matrix::Identity(4, 4);
    for (int j = 2; j <= ell - 1; ++j) {
      sys.A.block(ustore(j), ustore(j - 1), 4, 4) = Matrix::Identity(4, 4);
    }
  }

  // Powers of A up to ell-1 for reconstructing intermediate plant states.
  std::vector<Matrix> Apow(ell);
  Apow[0] = Matrix::Identity(3, 3);
  for (int k = 1; k < ell; ++k) Apow[k] = ss.A * Apow[k - 1];

  for (int c = 0; c < 4; ++c) {
    for (int j = 0; j < ell; ++j) {
      // y_{k-j} = C_c * xi_{k-j} + D_c * u_{k-j}, with
      // xi_{k-j} = A^(ell-1-j) xi_old + sum_{i=j+1}^{ell-1} A^(i-j-1) B u_{k-i}.
      const int yrow = c * ell + j;
      sys.C.block(yrow, 0, 1, 3) = C.row(c) * Apow[ell - 1 - j];
      for (int i = j + 1; i <= ell - 1; ++i) {
        sys.C.block(yrow, ustore(i), 1, 4) = C.row(c) * Apow[i - j - 1] * B;
      }
      if (j == 0) {
        sys.D.row(yrow) = D.row(c);
      } else {
        sys.C.block(yrow, ustore(j), 1, 4) += D.row(c);
      }

      const int urow = (4 + c) * ell + j;
      if (j == 0) {
        sys.D(urow, c) = 1.0;
      } else {
        sys.C(urow, ustore(j) + c) = 1.0;
      }
    }
  }
  return sys;
}

std::vector<Matrix> impulse_response(const LiftedSystem& sys, int count) {
  std::vector<Matrix> h;
  h.reserve(count);
  if (count <= 0) return h;
  h.push_back(sys.D);
  Matrix AkB = sys.B;
  for (int k = 1; k < count; ++k) {
    h.push_back(sys.C * AkB);
    AkB = sys.A * AkB;
  }
  return h;
}

std::vector<Matrix> markov_oracle(const StateSpace& ss, const LiftingConfig& cfg, int count) {
  const int ell = validate_lifting_config(cfg.ell, cfg.include_fixed_point).ell;
  if (count < 1) throw ValidationError("markov_oracle: count must be >= 1");
  const Matrix B = ss.B();
  const Matrix C = ss.C();
  const Matrix D = ss.D();

  // Impulse response of the unlifted realization.
  std::vector<Matrix> hG(count);
  hG[0] = D;
  Matrix AkB = B;
  for (int k = 1; k < count; ++k) {
    hG[k] = C * AkB;
    AkB = ss.A * AkB;
  }

  std::vector<Matrix> out(count, Matrix::Zero(8 * ell, 4));
  for (int k = 0; k < count; ++k) {
    for (int c = 0; c < 4; ++c) {
      for (int j = 0; j < ell; ++j) {
        if (k - j >= 0) out[k].row(c * ell + j) = hG[k - j].row(c);
        if (k == j) out[k]((4 + c) * ell + j, c) = 1.0;
      }
    }
  }
  return out;
}

namespace {

Matrix column_space_basis(const Matrix& M, double tol) {
  if (M.rows() == 0 || M.cols() == 0) return Matrix::Zero(M.rows(), 0);
  Eigen::BDCSVD<Matrix> svd(M, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  const double cutoff = tol * std::max(1.0, s.size() > 0 ? s[0] : 0.0);
  int rank = 0;
  for (int i = 0; i < s.size(); ++i) rank += s[i] > cutoff;
  return svd.matrixU().leftCols(rank);
}

}  // namespace

LiftedSystem reduce_realization(const LiftedSystem& sys, double tol) {
  LiftedSystem out = sys;
  {
    Matrix reach(sys.n, 4 * sys.n);
    Matrix AkB = sys.B;
    for (int k = 0; k < sys.n; ++k) {
      reach.block(0, 4 * k, sys.n, 4) = AkB;
      AkB = sys.A * AkB;
    }
    const Matrix Q = column_space_basis(reach, tol);
    out.A = Q.transpose() * sys.A * Q;
    out.B = Q.transpose() * sys.B;
    out.C = sys.C * Q;
    out.n = static_cast<int>(Q.cols());
  }
  {
    const int rows = static_cast<int>(out.C.rows());
    Matrix obs(rows * out.n, out.n);
    Matrix CAk = out.C;
    for (int k = 0; k < out.n; ++k) {
      obs.block(rows * k, 0, rows, out.n) = CAk;
      CAk = CAk * out.A;
    }
    const Matrix Q = column_space_basis(obs.transpose(), tol);
    out.A = (Q.transpose() * out.A * Q).eval();
    out.B = (Q.transpose() * out.B).eval();
    out.C = (out.C * Q).eval();
    out.n = static_cast<int>(Q.cols());
  }
  return out;
}

Matrix selected_rows(const LiftedSystem& sys, const std::vector<int>& rows) {
  Matrix cd(static_cast<int>(rows.size()), sys.n + 4);
  for (int i = 0; i < static_cast<int>(rows.size()); ++i) {
    cd.block(i, 0, 1, sys.n) = sys.C.row(rows[i]);
    cd.block(i, sys.n, 1, 4) = sys.D.row(rows[i]);
  }
  return cd;
}

}  // namespace pdcert
