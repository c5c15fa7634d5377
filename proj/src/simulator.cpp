#include "pdcert/simulator.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

namespace pdcert {

namespace {

Matrix haar_orthogonal(int k, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix G(k, k);
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) G(i, j) = gauss(rng);
  }
  Eigen::HouseholderQR<Matrix> qr(G);
  Matrix Q = qr.householderQ();
  Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < k; ++i) {
    if (R(i, i) < 0) Q.col(i) *= -1.0;
  }
  return Q;
}

double pair_distance(const Vector& x, const Vector& l, const Vector& xs, const Vector& ls) {
  return std::sqrt((x - xs).squaredNorm() + (l - ls).squaredNorm());
}

}  // namespace

Instance generate_instance(const ProblemClass& pc, int n, int r, std::uint64_t seed,
                           bool force_extremes) {
  if (r < 1 || r > n) throw ValidationError("generate_instance: need 1 <= r <= n");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif_mL(pc.m, pc.L);
  std::uniform_real_distribution<double> unif_sigma(pc.sigma_lo, pc.sigma_hi);
  std::normal_distribution<double> gauss(0.0, 1.0);

  Instance inst;
  inst.seed = seed;
  inst.n = n;
  inst.r = r;

  Matrix O = haar_orthogonal(n, rng);
  Vector d(n);
  for (int i = 0; i < n; ++i) d[i] = unif_mL(rng);
  if (force_extremes && n >= 2) {
    d[0] = pc.m;
    d[1] = pc.L;
  }
  inst.Q = O * d.asDiagonal() * O.transpose();
  inst.Q = (0.5 * (inst.Q + inst.Q.transpose())).eval();

  Matrix U = haar_orthogonal(r, rng);
  Matrix V = haar_orthogonal(n, rng);
  Vector sigma(r);
  for (int i = 0; i < r; ++i) sigma[i] = unif_sigma(rng);
  std::sort(sigma.data(), sigma.data() + r, std::greater<double>());
  if (force_extremes) {
    sigma[0] = pc.sigma_hi;
    if (r >= 2) sigma[r - 1] = pc.sigma_lo;
  }
  inst.svd.U = U;
  inst.svd.sigma = sigma;
  inst.svd.V1 = V.leftCols(r);
  inst.svd.V2 = V.rightCols(n - r);
  inst.A = U * sigma.asDiagonal() * inst.svd.V1.transpose();

  inst.b = Vector(r);
  for (int i = 0; i < r; ++i) inst.b[i] = gauss(rng);
  inst.c = Vector(n);
  for (int i = 0; i < n; ++i) inst.c[i] = gauss(rng);
  return inst;
}

std::pair<Vector, Vector> fixed_point(const Instance& inst) {
  const int n = inst.n, r = inst.r;
  Matrix kkt = Matrix::Zero(n + r, n + r);
  kkt.topLeftCorner(n, n) = inst.Q;
  kkt.topRightCorner(n, r) = inst.A.transpose();
  kkt.bottomLeftCorner(r, n) = inst.A;
  Vector rhs(n + r);
  rhs.head(n) = -inst.c;
  rhs.tail(r) = inst.b;
  Eigen::FullPivLU<Matrix> lu(kkt);
  if (!lu.isInvertible()) {
    throw std::runtime_error("fixed_point: singular KKT system");
  }
  Vector sol = lu.solve(rhs);
  Vector xs = sol.head(n);
  Vector ls = sol.tail(r);
  const double scale = std::max({1.0, inst.Q.norm(), inst.A.norm(), rhs.norm()});
  const double resid = std::max((inst.Q * xs + inst.c + inst.A.transpose() * ls).norm(),
                                (inst.A * xs - inst.b).norm());
  if (resid > 1e-10 * scale) {
    throw std::runtime_error("fixed_point: KKT residual above tolerance");
  }
  return {xs, ls};
}

Trajectory run_iterations(const Instance& inst, const AlgorithmParams& params, const Vector& x0,
                          const Vector& lambda0, int K) {
  if (K < 1) throw ValidationError("run_iterations: K must be >= 1");
  if (x0.size() != inst.n || lambda0.size() != inst.r) {
    throw ValidationError("run_iterations: initial point dimensions mismatch");
  }
  Trajectory traj;
  traj.K = K;
  traj.x.reserve(K + 1);
  traj.lambda.reserve(K + 1);
  traj.x_ext.reserve(K);
  traj.x.push_back(x0);
  traj.lambda.push_back(lambda0);
  for (int k = 0; k < K; ++k) {
    const Vector& x = traj.x.back();
    const Vector& l = traj.lambda.back();
    const Vector grad = inst.Q * x + inst.c;
    const Vector ax_b = inst.A * x - inst.b;
    Vector x_next = x - params.alpha_x *
                            (grad + inst.A.transpose() * l +
                             params.mu * (inst.A.transpose() * ax_b));
    Vector x_tilde = x + params.gamma * (x_next - x);
    Vector l_next = l + params.alpha_lambda * (inst.A * x_tilde - inst.b);
    if (!x_next.allFinite() || !l_next.allFinite()) {
      throw DivergenceError("run_iterations: non-finite iterate at step " + std::to_string(k + 1),
                            k + 1);
    }
    traj.x_ext.push_back(std::move(x_tilde));
    traj.x.push_back(std::move(x_next));
    traj.lambda.push_back(std::move(l_next));
  }
  return traj;
}

TransformedTrajectory transform_trajectory(const Instance& inst, const Trajectory& traj) {
  TransformedTrajectory tt;
  const Matrix sigma_ut = inst.svd.sigma.asDiagonal() * inst.svd.U.transpose();
  for (std::size_t k = 0; k < traj.x.size(); ++k) {
    tt.p.push_back(inst.svd.V1.transpose() * traj.x[k]);
    tt.q.push_back(inst.svd.V2.transpose() * traj.x[k]);
    tt.nu.push_back(-sigma_ut * traj.lambda[k]);
  }
  return tt;
}

double replay_deviation(const Instance& inst, const AlgorithmParams& params,
                        const Trajectory& traj) {
  const TransformedTrajectory tt = transform_trajectory(inst, traj);
  const Matrix& V1 = inst.svd.V1;
  const Matrix& V2 = inst.svd.V2;
  const Vector s2 = inst.svd.sigma.array().square();
  const Vector sUtb = inst.svd.sigma.asDiagonal() * (inst.svd.U.transpose() * inst.b);

  Vector p = tt.p[0], q = tt.q[0], nu = tt.nu[0];
  double dev = 0.0;
  for (int k = 0; k < traj.K; ++k) {
    const Vector x = V1 * p + V2 * q;
    const Vector grad = inst.Q * x + inst.c;
    const Vector gp = V1.transpose() * grad;
    const Vector gq = V2.transpose() * grad;
    Vector p_next = p - params.alpha_x * gp + params.alpha_x * nu -
                    params.alpha_x * params.mu * (s2.asDiagonal() * p) +
                    params.alpha_x * params.mu * sUtb;
    Vector q_next = q - params.alpha_x * gq;
    Vector p_tilde = p + params.gamma * (p_next - p);
    Vector nu_next = nu - params.alpha_lambda * (s2.asDiagonal() * p_tilde) +
                     params.alpha_lambda * sUtb;
    p = p_next;
    q = q_next;
    nu = nu_next;
    dev = std::max(dev, (p - tt.p[k + 1]).cwiseAbs().maxCoeff());
    if (q.size() > 0) dev = std::max(dev, (q - tt.q[k + 1]).cwiseAbs().maxCoeff());
    dev = std::max(dev, (nu - tt.nu[k + 1]).cwiseAbs().maxCoeff());
  }
  return dev;
}

std::optional<double> empirical_rate(const Trajectory& traj, const Vector& x_star,
                                     const Vector& lambda_star) {
  const int K = traj.K;
  if (K < 50) throw ValidationError("empirical_rate: trajectory length must be >= 50");
  std::vector<double> dist(K + 1);
  for (int k = 0; k <= K; ++k) {
    dist[k] = pair_distance(traj.x[k], traj.lambda[k], x_star, lambda_star);
  }
  const double floor = 1e2 * std::numeric_limits<double>::epsilon() * dist[0];
  int k_cut = -1;
  for (int k = K; k >= 0; --k) {
    if (dist[k] > floor) {
      k_cut = k;
      break;
    }
  }
  // Fit over [K/2, K_cut]; when the floor is reached before K/2 the window
  // shrinks to the second half of the measurable range.
  const int k0 = std::min(K / 2, k_cut / 2);
  std::vector<std::pair<double, double>> pts;
  for (int k = std::max(0, k0); k <= k_cut; ++k) {
    if (dist[k] > floor) pts.emplace_back(static_cast<double>(k), std::log(dist[k]));
  }
  if (pts.size() < 2) return std::nullopt;  // below measurable floor
  double mean_k = 0, mean_v = 0;
  for (const auto& [k, v] : pts) {
    mean_k += k;
    mean_v += v;
  }
  mean_k /= pts.size();
  mean_v /= pts.size();
  double num = 0, den = 0;
  for (const auto& [k, v] : pts) {
    num += (k - mean_k) * (v - mean_v);
    den += (k - mean_k) * (k - mean_k);
  }
  return std::exp(num / den);
}

namespace {

struct LiftedSeries {
  int first_k = 0;
  std::vector<double> V;     // indexed by k; valid for k >= first_k
  std::vector<double> nrm2;  // squared norms of the lifted deviation state
};

// Lifted deviation states (oldest transformed plant state plus lagged
// inputs, matching the lifting realization) along a scalar-channel
// trajectory, and the certificate's quadratic form on them.
LiftedSeries lifted_lyapunov_series(const Trajectory& traj, const Certificate& cert,
                                    const Instance& inst) {
  if (inst.r != 1 || inst.n != 2) {
    throw ValidationError("lyapunov_check: requires a scalar-channel instance (n=2, r=1)");
  }
  const int ell = cert.config.lifting.ell;
  if (traj.K <= ell) throw ValidationError("lyapunov_check: trajectory shorter than the lift");

  auto [xs, ls] = fixed_point(inst);
  const Matrix& V1 = inst.svd.V1;
  const Matrix& V2 = inst.svd.V2;
  const double sigma = inst.svd.sigma[0];
  const double s2 = sigma * sigma;
  const double u_fac = sigma * inst.svd.U(0, 0);

  const int K = traj.K;
  std::vector<Eigen::Vector3d> xi(K + 1);
  std::vector<Eigen::Vector4d> u(K);  // u[k] defined for k = 0..K-1
  for (int k = 0; k <= K; ++k) {
    const Vector dx = traj.x[k] - xs;
    const double p = (V1.transpose() * dx)(0);
    const double q = (V2.transpose() * dx)(0);
    const double nu = -u_fac * (traj.lambda[k][0] - ls[0]);
    xi[k] = Eigen::Vector3d(p, q, nu);
    if (k < K) {
      const Vector g = inst.Q * dx;
      const double y4 = (V1.transpose() * (traj.x_ext[k] - xs))(0);
      u[k] = Eigen::Vector4d((V1.transpose() * g)(0), (V2.transpose() * g)(0), s2 * p, s2 * y4);
    }
  }

  const int nlift = 3 + 4 * (ell - 1);
  LiftedSeries out;
  out.first_k = ell - 1;
  out.V.assign(K + 1, std::numeric_limits<double>::quiet_NaN());
  out.nrm2.assign(K + 1, std::numeric_limits<double>::quiet_NaN());
  Vector z(nlift);
  for (int k = ell - 1; k <= K; ++k) {
    z.head(3) = xi[k - ell + 1];
    for (int j = 1; j <= ell - 1; ++j) z.segment(3 + 4 * (j - 1), 4) = u[k - j];
    out.V[k] = z.dot(cert.P * z);
    out.nrm2[k] = z.squaredNorm();
  }
  return out;
}

}  // namespace

LyapunovReport lyapunov_check(const Trajectory& traj, const Certificate& cert,
                              const Instance& inst, double tol_rel) {
  const LiftedSeries s = lifted_lyapunov_series(traj, cert, inst);
  const int K = traj.K;

  LyapunovReport rep;
  rep.first_k = s.first_k;
  rep.v_first = s.V[s.first_k];
  const double rho2 = cert.rho * cert.rho;
  rep.max_ratio = 0;
  rep.min_lower_ratio = std::numeric_limits<double>::infinity();
  // Ratios are reported only while V stays above the numerical floor; the
  // additive violations below cover the fully decayed tail.
  const double v_floor = 1e-12 * std::max(rep.v_first, 0.0);
  for (int k = s.first_k; k <= K; ++k) {
    if (k < K) {
      rep.max_decrease_violation =
          std::max(rep.max_decrease_violation, s.V[k + 1] - rho2 * s.V[k]);
      if (s.V[k] > v_floor) rep.max_ratio = std::max(rep.max_ratio, s.V[k + 1] / s.V[k]);
    }
    rep.max_lower_violation = std::max(rep.max_lower_violation, s.nrm2[k] - s.V[k]);
    if (s.nrm2[k] > v_floor && s.nrm2[k] > 0) {
      rep.min_lower_ratio = std::min(rep.min_lower_ratio, s.V[k] / s.nrm2[k]);
    }
  }
  const double tol = tol_rel * std::max(rep.v_first, 0.0);
  rep.decrease_ok = rep.max_decrease_violation <= tol;
  rep.lower_ok = rep.max_lower_violation <= tol;
  return rep;
}

void export_trajectory_csv(std::ostream& os, const Trajectory& traj, const Instance& inst,
                           const Certificate* cert) {
  auto [xs, ls] = fixed_point(inst);
  std::optional<LiftedSeries> series;
  if (cert && inst.r == 1 && inst.n == 2) {
    series = lifted_lyapunov_series(traj, *cert, inst);
  }
  os << "k,dist_x,dist_lambda" << (cert ? ",V\n" : "\n");
  for (int k = 0; k <= traj.K; ++k) {
    os << k << ',' << fmt_g12((traj.x[k] - xs).norm()) << ','
       << fmt_g12((traj.lambda[k] - ls).norm());
    if (cert) {
      os << ',';
      if (series && k >= series->first_k) os << fmt_g12(series->V[k]);
    }
    os << '\n';
  }
}

}  // namespace pdcert
