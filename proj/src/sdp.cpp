#include "pdcert/sdp.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdlib>
#include <sstream>

namespace pdcert {

Matrix SdfBlock::eval(const Vector& w) const {
  Matrix S = C;
  for (std::size_t i = 0; i < vars.size(); ++i) S += w[vars[i]] * coef[i];
  return S;
}

double SdfProblem::scale() const {
  double s = 1.0;
  for (const auto& b : blocks) {
    if (b.C.size() > 0) s = std::max(s, b.C.cwiseAbs().maxCoeff());
  }
  return s;
}

double SdfProblem::min_eigenvalue(const Vector& w) const {
  double me = std::numeric_limits<double>::infinity();
  for (const auto& b : blocks) {
    Matrix S = b.eval(w);
    if (S.rows() == 1) {
      me = std::min(me, S(0, 0));
    } else {
      Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (S + S.transpose()),
                                                Eigen::EigenvaluesOnly);
      me = std::min(me, eig.eigenvalues().minCoeff());
    }
  }
  return me;
}

namespace {

// Packs a symmetric matrix so that dot products of packed vectors equal
// Frobenius inner products.
void svec_into(const Matrix& A, Eigen::Ref<Vector> dst) {
  const int n = static_cast<int>(A.rows());
  const double rt2 = std::sqrt(2.0);
  int k = 0;
  for (int i = 0; i < n; ++i) {
    dst[k++] = A(i, i);
    for (int j = i + 1; j < n; ++j) dst[k++] = rt2 * 0.5 * (A(i, j) + A(j, i));
  }
}

struct BarrierState {
  Vector z;      // (w, t)
  double mu = 1.0;
  int newton_iters = 0;
  bool stalled = false;
  bool nonfinite = false;
};

// Evaluates t + 0.5*tik*|z|^2 + mu * sum(-logdet S_k); returns false if any
// block fails to be positive definite at (w, t).
bool barrier_value(const SdfProblem& prob, const Vector& z, double mu, double tik,
                   double* value) {
  const int d = prob.num_vars;
  const double t = z[d];
  double logdet = 0.0;
  for (const auto& b : prob.blocks) {
    Matrix S = b.eval(z.head(d));
    S.diagonal().array() += t;
    if (S.rows() == 1) {
      if (!(S(0, 0) > 0)) return false;
      logdet += std::log(S(0, 0));
    } else {
      Eigen::LLT<Matrix> llt(S);
      if (llt.info() != Eigen::Success) return false;
      logdet += 2.0 * Matrix(llt.matrixL()).diagonal().array().log().sum();
    }
  }
  *value = t + 0.5 * tik * z.squaredNorm() - mu * logdet;
  return std::isfinite(*value);
}

}  // namespace

SdfResult BarrierBackend::solve(const SdfProblem& prob) const {
  const int d = prob.num_vars;
  const double tik = opts_.tikhonov;
  SdfResult res;

  // Strictly feasible start for the slack formulation: w = 0 and t above the
  // most negative eigenvalue across blocks.
  double t0 = 0.0;
  for (const auto& b : prob.blocks) {
    if (b.C.rows() == 1) {
      t0 = std::max(t0, -b.C(0, 0));
    } else {
      Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (b.C + b.C.transpose()),
                                                Eigen::EigenvaluesOnly);
      t0 = std::max(t0, -eig.eigenvalues().minCoeff());
    }
  }
  BarrierState st;
  st.z = Vector::Zero(d + 1);
  st.z[d] = t0 + 1.0;
  st.mu = opts_.mu_init;

  Vector g(d + 1);
  Matrix H(d + 1, d + 1);
  double mu_reached = st.mu;

  while (true) {
    // Center at the current barrier parameter.
    for (int it = 0; it < opts_.max_newton_per_stage; ++it) {
      if (st.newton_iters >= opts_.max_newton_total) break;
      ++st.newton_iters;

      g.setZero();
      H.setZero();
      g = tik * st.z;
      g[d] += 1.0;
      H.diagonal().array() += tik;

      const double t = st.z[d];
      bool assembly_ok = true;
      for (const auto& b : prob.blocks) {
        const int n = static_cast<int>(b.C.rows());
        const int nv = static_cast<int>(b.vars.size());
        Matrix S = b.eval(st.z.head(d));
        S.diagonal().array() += t;
        if (n == 1) {
          const double s = S(0, 0);
          if (!(s > 0)) { assembly_ok = false; break; }
          // var coefficients plus the slack column
          Vector a(nv + 1);
          for (int i = 0; i < nv; ++i) a[i] = b.coef[i](0, 0);
          a[nv] = 1.0;
          for (int i = 0; i < nv; ++i) g[b.vars[i]] += -st.mu * a[i] / s;
          g[d] += -st.mu * a[nv] / s;
          for (int i = 0; i <= nv; ++i) {
            const int gi = (i == nv) ? d : b.vars[i];
            for (int j = i; j <= nv; ++j) {
              const int gj = (j == nv) ? d : b.vars[j];
              const double v = st.mu * a[i] * a[j] / (s * s);
              H(gi, gj) += v;
              if (gi != gj) H(gj, gi) += v;
            }
          }
          continue;
        }
        Eigen::LLT<Matrix> llt(S);
        if (llt.info() != Eigen::Success) { assembly_ok = false; break; }
        const auto L = llt.matrixL();
        const int sv = n * (n + 1) / 2;
        Matrix V(sv, nv + 1);
        for (int i = 0; i <= nv; ++i) {
          Matrix A = (i == nv) ? Matrix(Matrix::Identity(n, n)) : b.coef[i];
          Matrix X = L.solve(A);
          Matrix At = L.solve(Matrix(X.transpose()));
          const int gi = (i == nv) ? d : b.vars[i];
          g[gi] += -st.mu * At.trace();
          svec_into(At, V.col(i));
        }
        Matrix Hloc = st.mu * (V.transpose() * V);
        for (int i = 0; i <= nv; ++i) {
          const int gi = (i == nv) ? d : b.vars[i];
          for (int j = 0; j <= nv; ++j) {
            const int gj = (j == nv) ? d : b.vars[j];
            H(gi, gj) += Hloc(i, j);
          }
        }
      }
      if (!assembly_ok || !g.allFinite() || !H.allFinite()) {
        st.nonfinite = true;
        break;
      }

      // Newton step with a regularization fallback.
      Vector dz;
      double dec2 = -1.0;
      double extra_reg = 0.0;
      for (int attempt = 0; attempt < 3; ++attempt) {
        Matrix Hr = H;
        if (extra_reg > 0) Hr.diagonal().array() += extra_reg;
        Eigen::LDLT<Matrix> ldlt(Hr);
        dz = -ldlt.solve(g);
        dec2 = -g.dot(dz);
        if (std::isfinite(dec2) && dec2 >= 0) break;
        extra_reg = (extra_reg == 0) ? 1e-10 : extra_reg * 100;
      }
      if (!std::isfinite(dec2) || !dz.allFinite()) {
        st.nonfinite = true;
        break;
      }
      const double stage_tol = 1e-10 + 1e-4 * st.mu;
      if (dec2 <= stage_tol) break;

      double f0;
      if (!barrier_value(prob, st.z, st.mu, tik, &f0)) {
        st.nonfinite = true;
        break;
      }
      const double slope = g.dot(dz);
      double alpha = 1.0;
      bool accepted = false;
      for (int ls = 0; ls < 60; ++ls) {
        Vector z_try = st.z + alpha * dz;
        double f_try;
        if (barrier_value(prob, z_try, st.mu, tik, &f_try) &&
            f_try <= f0 + 1e-4 * alpha * slope) {
          st.z = std::move(z_try);
          accepted = true;
          break;
        }
        alpha *= 0.5;
      }
      if (!accepted) {
        st.stalled = true;
        break;
      }
    }
    if (st.nonfinite) break;
    mu_reached = st.mu;
    if (st.stalled || st.mu <= opts_.mu_min || st.newton_iters >= opts_.max_newton_total) break;
    st.mu *= opts_.mu_shrink;
  }

  res.newton_iters = st.newton_iters;
  res.w = st.z.head(d);
  res.slack = st.z[d];
  if (st.nonfinite || !st.z.allFinite()) {
    res.status = SdfStatus::numerical_failure;
    res.message = "non-finite values during barrier iteration";
    return res;
  }
  res.min_eig = prob.min_eigenvalue(res.w);
  const double feas_abs = opts_.feas_tol * prob.scale();
  std::ostringstream msg;
  msg << "slack=" << res.slack << " min_eig=" << res.min_eig << " mu=" << mu_reached
      << " newton=" << res.newton_iters;
  if (res.slack <= feas_abs || res.min_eig >= -feas_abs) {
    res.status = SdfStatus::feasible;
  } else if (mu_reached <= opts_.mu_confident && !st.stalled) {
    res.status = SdfStatus::infeasible;
  } else if (mu_reached <= opts_.mu_confident && st.stalled) {
    // Stalls this deep on the central path still pin the optimal slack well
    // above the feasibility tolerance.
    res.status = SdfStatus::infeasible;
    msg << " (stalled)";
  } else {
    res.status = SdfStatus::numerical_failure;
    msg << " (stalled early)";
  }
  res.message = msg.str();
  return res;
}

std::unique_ptr<SdfBackend> make_backend(const std::string& name) {
  std::string n = name;
  if (n.empty()) {
    if (const char* env = std::getenv("PDCERT_SOLVER")) n = env;
  }
  if (n.empty()) n = "barrier";
  if (n == "barrier") return std::make_unique<BarrierBackend>();
  if (n == "barrier-tight") {
    SdfOptions opts;
    opts.mu_min = 1e-13;
    opts.feas_tol = 1e-9;
    return std::make_unique<BarrierBackend>(opts, "barrier-tight");
  }
  throw ValidationError("unknown semidefinite backend \"" + n + "\"");
}

std::vector<std::string> backend_names() { return {"barrier", "barrier-tight"}; }

}  // namespace pdcert
