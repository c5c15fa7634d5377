#include "pdcert/certifier.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "pdcert/lfr.hpp"

namespace pdcert {

namespace {

double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

std::vector<std::pair<int, int>> sym_coords(int k) {
  std::vector<std::pair<int, int>> c;
  c.reserve(k * (k + 1) / 2);
  for (int a = 0; a < k; ++a) {
    for (int b = a; b < k; ++b) c.emplace_back(a, b);
  }
  return c;
}

std::vector<std::pair<int, int>> skew_coords(int k) {
  std::vector<std::pair<int, int>> c;
  c.reserve(k * (k - 1) / 2);
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) c.emplace_back(a, b);
  }
  return c;
}

Matrix sym_unit(int k, int a, int b) {
  Matrix e = Matrix::Zero(k, k);
  e(a, b) += 1.0;
  e(b, a) += 1.0;
  if (a == b) e(a, a) = 1.0;
  return e;
}

Matrix skew_unit(int k, int a, int b) {
  Matrix e = Matrix::Zero(k, k);
  e(a, b) = 1.0;
  e(b, a) = -1.0;
  return e;
}

// Unchecked block assembly of the objective multiplier (top-left ell block
// of the parameters, matching mf_build's convention).
Matrix objective_expand(const Matrix& R_full, const Matrix& S_full, const ProblemClass& pc,
                        int ell) {
  const Matrix R = R_full.topLeftCorner(ell, ell);
  const Matrix S = S_full.topLeftCorner(ell, ell);
  const Matrix Myy = -2.0 * pc.m * pc.L * R;
  const Matrix Myu = (pc.L + pc.m) * R + S;
  const Matrix Muu = -2.0 * R;
  Matrix M = Matrix::Zero(4 * ell, 4 * ell);
  for (int ch = 0; ch < 2; ++ch) {
    const int y0 = ch * ell;
    const int u0 = 2 * ell + ch * ell;
    M.block(y0, y0, ell, ell) = Myy;
    M.block(y0, u0, ell, ell) = Myu;
    M.block(u0, y0, ell, ell) = Myu.transpose();
    M.block(u0, u0, ell, ell) = Muu;
  }
  return M;
}

Matrix constraint_expand(const Matrix& R, const Matrix& S, const ProblemClass& pc) {
  const int k = static_cast<int>(R.rows());
  const double lo2 = pc.sigma_lo * pc.sigma_lo;
  const double hi2 = pc.sigma_hi * pc.sigma_hi;
  Matrix M = Matrix::Zero(2 * k, 2 * k);
  M.topLeftCorner(k, k) = -2.0 * lo2 * hi2 * R;
  M.topRightCorner(k, k) = (hi2 + lo2) * R + S;
  M.bottomLeftCorner(k, k) = (hi2 + lo2) * R + S.transpose();
  M.bottomRightCorner(k, k) = -2.0 * R;
  return M;
}

Matrix psd_project(const Matrix& R) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (R + R.transpose()));
  Vector d = eig.eigenvalues().cwiseMax(0.0);
  return eig.eigenvectors() * d.asDiagonal() * eig.eigenvectors().transpose();
}

nlohmann::json matrix_to_json(const Matrix& m) {
  std::vector<double> data;
  data.reserve(m.size());
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  }
  return nlohmann::json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

Matrix matrix_from_json(const nlohmann::json& j) {
  const int rows = j.at("rows").get<int>();
  const int cols = j.at("cols").get<int>();
  const auto data = j.at("data").get<std::vector<double>>();
  if (static_cast<int>(data.size()) != rows * cols) {
    throw ValidationError("matrix JSON: data length does not match dimensions");
  }
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int jj = 0; jj < cols; ++jj) m(i, jj) = data[i * cols + jj];
  }
  return m;
}

}  // namespace

VariableLayout VariableLayout::create(const LiftingConfig& lifting) {
  const LiftingConfig cfg = validate_lifting_config(lifting.ell, lifting.include_fixed_point);
  VariableLayout lay;
  lay.ell = cfg.ell;
  lay.ellp = cfg.ell + (cfg.include_fixed_point ? 1 : 0);
  lay.n = 3 + 4 * (cfg.ell - 1);

  const int n_edges = lay.ellp * (lay.ellp - 1) / 2;
  const int n_skewf = static_cast<int>(skew_zero_rowsum_basis(lay.ellp).size());
  const int two_ell = 2 * lay.ell;
  const int n_rsym = two_ell * (two_ell + 1) / 2;
  const int n_skewa = two_ell * (two_ell - 1) / 2;

  int off = 0;
  lay.p_offset = off;
  lay.p_count = lay.n * (lay.n + 1) / 2;
  off += lay.p_count;
  lay.m1_w_offset = off; lay.m1_w_count = n_edges; off += n_edges;
  lay.m1_s_offset = off; lay.m1_s_count = n_skewf; off += n_skewf;
  lay.m2_w_offset = off; lay.m2_w_count = n_edges; off += n_edges;
  lay.m2_s_offset = off; lay.m2_s_count = n_skewf; off += n_skewf;
  lay.m3_r_offset = off; lay.m3_r_count = n_rsym; off += n_rsym;
  lay.m3_s_offset = off; lay.m3_s_count = n_skewa; off += n_skewa;
  lay.m4_r_offset = off; lay.m4_r_count = n_rsym; off += n_rsym;
  lay.m4_s_offset = off; lay.m4_s_count = n_skewa; off += n_skewa;
  lay.total = off;
  return lay;
}

Matrix VariableLayout::unpack_P(const Vector& w) const {
  Matrix P = Matrix::Zero(n, n);
  int k = p_offset;
  for (const auto& [a, b] : sym_coords(n)) {
    P(a, b) = w[k];
    P(b, a) = w[k];
    ++k;
  }
  return P;
}

ObjectiveMultiplierParams VariableLayout::unpack_objective(const Vector& w, int which) const {
  const int w_off = (which == 1) ? m1_w_offset : m2_w_offset;
  const int s_off = (which == 1) ? m1_s_offset : m2_s_offset;
  const auto edges = laplacian_basis(ellp);
  const auto skew = skew_zero_rowsum_basis(ellp);
  ObjectiveMultiplierParams p;
  p.R = Matrix::Zero(ellp, ellp);
  p.S = Matrix::Zero(ellp, ellp);
  for (std::size_t e = 0; e < edges.size(); ++e) {
    p.R += std::max(0.0, w[w_off + static_cast<int>(e)]) * edges[e];
  }
  for (std::size_t b = 0; b < skew.size(); ++b) {
    p.S += w[s_off + static_cast<int>(b)] * skew[b];
  }
  return p;
}

ConstraintMultiplierParams VariableLayout::unpack_constraint(const Vector& w, int which) const {
  const int r_off = (which == 3) ? m3_r_offset : m4_r_offset;
  const int s_off = (which == 3) ? m3_s_offset : m4_s_offset;
  const int k = 2 * ell;
  ConstraintMultiplierParams p;
  p.R = Matrix::Zero(k, k);
  int idx = r_off;
  for (const auto& [a, b] : sym_coords(k)) {
    p.R(a, b) = w[idx];
    p.R(b, a) = w[idx];
    ++idx;
  }
  p.R = psd_project(p.R);
  p.S = Matrix::Zero(k, k);
  idx = s_off;
  for (const auto& [a, b] : skew_coords(k)) {
    p.S(a, b) = w[idx];
    p.S(b, a) = -w[idx];
    ++idx;
  }
  return p;
}

Matrix LmiForms::F1(const Matrix& P, const Matrix& M1, const Matrix& M3) const {
  const int N = n + 4;
  Matrix F = SAB.transpose() * P * SAB;
  F.topLeftCorner(n, n) -= rho * rho * P;
  F += Kf.transpose() * M1 * Kf;
  F += KA.transpose() * M3 * KA;
  Matrix sym = 0.5 * (F + F.transpose());
  if (sym.rows() != N) throw ValidationError("assemble_lmi: dimension mismatch");
  return sym;
}

Matrix LmiForms::F2(const Matrix& P, const Matrix& M2, const Matrix& M4) const {
  const int N = n + 4;
  Matrix F = Matrix::Zero(N, N);
  F.topLeftCorner(n, n) = P - Matrix::Identity(n, n);
  F += Kf.transpose() * M2 * Kf;
  F += KA.transpose() * M4 * KA;
  return 0.5 * (F + F.transpose());
}

LmiForms assemble_lmi(double rho, const LiftedSystem& lifted, const ChannelSelectors& sel) {
  if (!(rho > 0.0) || !(rho < 1.0)) {
    throw ValidationError("assemble_lmi: rho must lie in (0,1)");
  }
  LmiForms forms;
  forms.rho = rho;
  forms.n = lifted.n;
  forms.SAB = Matrix(lifted.n, lifted.n + 4);
  forms.SAB << lifted.A, lifted.B;
  std::vector<int> f_rows = sel.Yf_rows;
  f_rows.insert(f_rows.end(), sel.Uf_rows.begin(), sel.Uf_rows.end());
  std::vector<int> a_rows = sel.YA_rows;
  a_rows.insert(a_rows.end(), sel.UA_rows.begin(), sel.UA_rows.end());
  forms.Kf = selected_rows(lifted, f_rows);
  forms.KA = selected_rows(lifted, a_rows);
  return forms;
}

SdfProblem build_feasibility_problem(double rho, const LiftedSystem& lifted,
                                     const ChannelSelectors& sel, const ProblemClass& pc,
                                     const LiftingConfig& lifting, double* eps_feas_out) {
  const LmiForms forms = assemble_lmi(rho, lifted, sel);
  const VariableLayout lay = VariableLayout::create(lifting);
  const int n = lay.n;
  const int N = n + 4;
  const int ell = lay.ell;

  const double scale_base =
      std::max({1.0, max_abs(forms.SAB), max_abs(forms.Kf), max_abs(forms.KA)});
  const double eps_feas = 1e-8 * scale_base * scale_base;
  if (eps_feas_out) *eps_feas_out = eps_feas;

  SdfProblem prob;
  prob.num_vars = lay.total;

  SdfBlock f1;
  f1.name = "lmi1";
  f1.C = -eps_feas * Matrix::Identity(N, N);
  SdfBlock f2;
  f2.name = "lmi2";
  f2.C = Matrix::Zero(N, N);
  f2.C.topLeftCorner(n, n) = -Matrix::Identity(n, n);

  // P entries enter lmi1 through [A B]^T P [A B] - rho^2 * blkdiag(P, 0) and
  // lmi2 through blkdiag(P, 0).
  {
    int idx = lay.p_offset;
    for (const auto& [a, b] : sym_coords(n)) {
      Matrix cf1 = Matrix::Zero(N, N);
      cf1 += forms.SAB.row(a).transpose() * forms.SAB.row(b);
      if (a != b) cf1 += forms.SAB.row(b).transpose() * forms.SAB.row(a);
      cf1(a, b) -= rho * rho;
      if (a != b) cf1(b, a) -= rho * rho;
      f1.vars.push_back(idx);
      f1.coef.push_back(-0.5 * (cf1 + cf1.transpose()));

      Matrix cf2 = Matrix::Zero(N, N);
      cf2(a, b) += 1.0;
      cf2(b, a) = cf2(a, b);
      f2.vars.push_back(idx);
      f2.coef.push_back(cf2);
      ++idx;
    }
  }

  // Objective multiplier directions, shared by M1 (lmi1) and M2 (lmi2).
  const auto edges = laplacian_basis(lay.ellp);
  const auto skewf = skew_zero_rowsum_basis(lay.ellp);
  const Matrix Zp = Matrix::Zero(lay.ellp, lay.ellp);
  std::vector<Matrix> obj_dirs;
  for (const auto& e : edges) obj_dirs.push_back(objective_expand(e, Zp, pc, ell));
  for (const auto& s : skewf) obj_dirs.push_back(objective_expand(Zp, s, pc, ell));
  for (std::size_t i = 0; i < obj_dirs.size(); ++i) {
    const Matrix kmk = forms.Kf.transpose() * obj_dirs[i] * forms.Kf;
    const int i1 = (i < edges.size())
                       ? lay.m1_w_offset + static_cast<int>(i)
                       : lay.m1_s_offset + static_cast<int>(i - edges.size());
    const int i2 = (i < edges.size())
                       ? lay.m2_w_offset + static_cast<int>(i)
                       : lay.m2_s_offset + static_cast<int>(i - edges.size());
    f1.vars.push_back(i1);
    f1.coef.push_back(-0.5 * (kmk + kmk.transpose()));
    f2.vars.push_back(i2);
    f2.coef.push_back(0.5 * (kmk + kmk.transpose()));
  }

  // Constraint multiplier directions, shared by M3 (lmi1) and M4 (lmi2).
  const int two_ell = 2 * ell;
  const Matrix Zc = Matrix::Zero(two_ell, two_ell);
  std::vector<Matrix> con_dirs;
  const auto rsym = sym_coords(two_ell);
  const auto sskew = skew_coords(two_ell);
  for (const auto& [a, b] : rsym) con_dirs.push_back(constraint_expand(sym_unit(two_ell, a, b), Zc, pc));
  for (const auto& [a, b] : sskew) con_dirs.push_back(constraint_expand(Zc, skew_unit(two_ell, a, b), pc));
  for (std::size_t i = 0; i < con_dirs.size(); ++i) {
    const Matrix kmk = forms.KA.transpose() * con_dirs[i] * forms.KA;
    const int i3 = (i < rsym.size())
                       ? lay.m3_r_offset + static_cast<int>(i)
                       : lay.m3_s_offset + static_cast<int>(i - rsym.size());
    const int i4 = (i < rsym.size())
                       ? lay.m4_r_offset + static_cast<int>(i)
                       : lay.m4_s_offset + static_cast<int>(i - rsym.size());
    f1.vars.push_back(i3);
    f1.coef.push_back(-0.5 * (kmk + kmk.transpose()));
    f2.vars.push_back(i4);
    f2.coef.push_back(0.5 * (kmk + kmk.transpose()));
  }

  prob.blocks.push_back(std::move(f1));
  prob.blocks.push_back(std::move(f2));

  // PSD memberships of the constraint multiplier parameters.
  for (int which = 3; which <= 4; ++which) {
    SdfBlock blk;
    blk.name = (which == 3) ? "M3.R psd" : "M4.R psd";
    blk.C = Matrix::Zero(two_ell, two_ell);
    int idx = (which == 3) ? lay.m3_r_offset : lay.m4_r_offset;
    for (const auto& [a, b] : rsym) {
      blk.vars.push_back(idx);
      blk.coef.push_back(sym_unit(two_ell, a, b));
      ++idx;
    }
    prob.blocks.push_back(std::move(blk));
  }

  // Nonnegativity of the Laplacian edge weights.
  auto add_weight_blocks = [&prob](int offset, int count, const char* tag) {
    for (int i = 0; i < count; ++i) {
      SdfBlock blk;
      blk.name = std::string(tag) + "[" + std::to_string(i) + "]";
      blk.C = Matrix::Zero(1, 1);
      blk.vars.push_back(offset + i);
      blk.coef.push_back(Matrix::Identity(1, 1));
      prob.blocks.push_back(std::move(blk));
    }
  };
  add_weight_blocks(lay.m1_w_offset, lay.m1_w_count, "M1.w");
  add_weight_blocks(lay.m2_w_offset, lay.m2_w_count, "M2.w");
  return prob;
}

VerifyReport verify_certificate(const Certificate& cert) {
  const Config& cfg = cert.config;
  const StateSpace ss = build_lfr(cfg.params);
  const LiftedSystem lifted = lift_realization(ss, cfg.lifting);
  const ChannelSelectors sel = channel_selectors(cfg.lifting);
  const LmiForms forms = assemble_lmi(cert.rho, lifted, sel);

  const int ell = cfg.lifting.ell;
  const Matrix M1 = objective_expand(cert.M1.R, cert.M1.S, cfg.pc, ell);
  const Matrix M2 = objective_expand(cert.M2.R, cert.M2.S, cfg.pc, ell);
  const Matrix M3 = constraint_expand(cert.M3.R, cert.M3.S, cfg.pc);
  const Matrix M4 = constraint_expand(cert.M4.R, cert.M4.S, cfg.pc);

  const Matrix F1 = forms.F1(cert.P, M1, M3);
  const Matrix F2 = forms.F2(cert.P, M2, M4);

  VerifyReport rep;
  rep.scale = std::max({1.0, max_abs(F1), max_abs(F2)});
  const double tol = 1e-7 * rep.scale;
  Eigen::SelfAdjointEigenSolver<Matrix> e1(F1, Eigen::EigenvaluesOnly);
  Eigen::SelfAdjointEigenSolver<Matrix> e2(F2, Eigen::EigenvaluesOnly);
  rep.lmi1_max_eig = e1.eigenvalues().maxCoeff();
  rep.lmi2_min_eig = e2.eigenvalues().minCoeff();

  auto add = [&rep](const std::string& name, double value, double threshold) {
    rep.checks.push_back({name, value, threshold, value <= threshold});
  };
  add("lmi1 max eigenvalue", rep.lmi1_max_eig, tol);
  add("lmi2 eigenvalue deficit", -rep.lmi2_min_eig, tol);
  add("P symmetry", max_abs(cert.P - cert.P.transpose()),
      1e-9 * std::max(1.0, max_abs(cert.P)));

  auto add_membership = [&add](const std::string& name, const MembershipReport& m) {
    const double worst = std::max({m.symmetry, m.row_sum, m.off_diag_sign, m.psd, m.skewness,
                                   m.skew_row_sum});
    add(name, worst, 1e-9 * m.scale);
  };
  add_membership("M1 membership", mf_membership(cert.M1.R, cert.M1.S));
  add_membership("M2 membership", mf_membership(cert.M2.R, cert.M2.S));
  add_membership("M3 membership", ma_membership(cert.M3.R, cert.M3.S));
  add_membership("M4 membership", ma_membership(cert.M4.R, cert.M4.S));

  rep.pass = true;
  for (const auto& c : rep.checks) rep.pass = rep.pass && c.pass;
  return rep;
}

FeasibleResult feasible(double rho, const Config& cfg, const SdfBackend& backend) {
  if (!(rho > 0.0) || !(rho < 1.0)) {
    throw ValidationError("feasible: rho must lie in (0,1)");
  }
  const StateSpace ss = build_lfr(cfg.params);
  const LiftedSystem lifted = lift_realization(ss, cfg.lifting);
  const ChannelSelectors sel = channel_selectors(cfg.lifting);
  const SdfProblem prob = build_feasibility_problem(rho, lifted, sel, cfg.pc, cfg.lifting);
  const VariableLayout lay = VariableLayout::create(cfg.lifting);

  const SdfResult r = backend.solve(prob);
  FeasibleResult out;
  out.slack = r.slack;
  if (r.status == SdfStatus::infeasible) {
    out.status = FeasibleStatus::infeasible;
    out.message = r.message;
    return out;
  }
  if (r.status == SdfStatus::numerical_failure) {
    out.status = FeasibleStatus::backend_failure;
    out.message = r.message;
    return out;
  }
  Certificate cert;
  cert.rho = rho;
  cert.config = cfg;
  cert.P = lay.unpack_P(r.w);
  cert.M1 = lay.unpack_objective(r.w, 1);
  cert.M2 = lay.unpack_objective(r.w, 2);
  cert.M3 = lay.unpack_constraint(r.w, 3);
  cert.M4 = lay.unpack_constraint(r.w, 4);
  cert.solver = backend.name();
  cert.solver_slack = r.slack;
  cert.residuals = verify_certificate(cert);
  if (!cert.residuals.pass) {
    out.status = FeasibleStatus::backend_failure;
    out.message = "backend returned a point that failed certificate verification";
    return out;
  }
  out.status = FeasibleStatus::feasible;
  out.cert = std::move(cert);
  out.message = r.message;
  return out;
}

CertifiedRate bisect_rate(const Config& cfg, const SdfBackend& backend,
                          const BisectOptions& opts) {
  if (!(opts.tol > 0)) throw ValidationError("bisect_rate: tol must be positive");
  if (!(opts.rho_lo >= 0) || !(opts.rho_hi <= 1)) {
    throw ValidationError("bisect_rate: bracket must lie within [0,1]");
  }
  if (!(opts.rho_hi - opts.tol > opts.rho_lo)) {
    throw ValidationError("bisect_rate: degenerate bracket");
  }

  CertifiedRate out;
  auto probe = [&](double rho) -> FeasibleResult {
    FeasibleResult r = feasible(rho, cfg, backend);
    out.probes.push_back({rho, r.status, r.slack});
    return r;
  };

  double hi = opts.rho_hi - opts.tol;
  FeasibleResult top = probe(hi);
  if (top.status == FeasibleStatus::backend_failure) {
    out.status = CertifyStatus::backend_failure;
    out.message = "backend failure at the upper probe rho=" + std::to_string(hi) + ": " +
                  top.message;
    return out;
  }
  if (top.status == FeasibleStatus::infeasible) {
    out.status = CertifyStatus::not_certified;
    out.message = "infeasible at rho_hi - tol";
    return out;
  }
  std::optional<Certificate> best = std::move(top.cert);
  double lo = opts.rho_lo;
  while (hi - lo > opts.tol) {
    const double mid = 0.5 * (lo + hi);
    FeasibleResult r = probe(mid);
    if (r.status == FeasibleStatus::feasible) {
      hi = mid;
      best = std::move(r.cert);
    } else {
      // Numerical failures tighten from below like infeasibility: this can
      // only make the certified rate conservative, never unsound.
      lo = mid;
    }
  }
  out.status = CertifyStatus::certified;
  out.rho = hi;
  out.ell_used = cfg.lifting.ell;
  out.cert = std::move(best);
  out.message = "certified";
  return out;
}

CertifiedRate certify_over_ells(const Config& cfg, const std::vector<int>& ells,
                                const SdfBackend& backend, const BisectOptions& opts) {
  CertifiedRate best;
  best.status = CertifyStatus::not_certified;
  for (int ell : ells) {
    Config c = cfg;
    c.lifting.ell = ell;
    BisectOptions o = opts;
    if (best.status == CertifyStatus::certified) {
      o.rho_hi = std::min(opts.rho_hi, best.rho + 4 * opts.tol);
    }
    CertifiedRate r = bisect_rate(c, backend, o);
    if (r.status != CertifyStatus::certified && best.status == CertifyStatus::certified &&
        o.rho_hi < opts.rho_hi) {
      // Seeded bracket may have been too aggressive; retry with the original.
      r = bisect_rate(c, backend, opts);
    }
    for (const auto& p : r.probes) best.probes.push_back(p);
    if (r.status == CertifyStatus::certified &&
        (best.status != CertifyStatus::certified || r.rho < best.rho)) {
      best.status = CertifyStatus::certified;
      best.rho = r.rho;
      best.ell_used = ell;
      best.cert = std::move(r.cert);
      best.message = "certified at ell=" + std::to_string(ell);
    } else if (r.status == CertifyStatus::backend_failure &&
               best.status == CertifyStatus::not_certified) {
      best.status = CertifyStatus::backend_failure;
      best.message = r.message;
    }
  }
  return best;
}

nlohmann::json certificate_to_json(const Certificate& cert) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : cert.residuals.checks) {
    checks.push_back({{"name", c.name},
                      {"value", c.value},
                      {"threshold", c.threshold},
                      {"pass", c.pass}});
  }
  return nlohmann::json{
      {"rho", cert.rho},
      {"ell", cert.config.lifting.ell},
      {"config", config_to_json(cert.config)},
      {"P", matrix_to_json(cert.P)},
      {"M1", {{"R", matrix_to_json(cert.M1.R)}, {"S", matrix_to_json(cert.M1.S)}}},
      {"M2", {{"R", matrix_to_json(cert.M2.R)}, {"S", matrix_to_json(cert.M2.S)}}},
      {"M3", {{"R", matrix_to_json(cert.M3.R)}, {"S", matrix_to_json(cert.M3.S)}}},
      {"M4", {{"R", matrix_to_json(cert.M4.R)}, {"S", matrix_to_json(cert.M4.S)}}},
      {"residuals",
       {{"lmi1_max_eig", cert.residuals.lmi1_max_eig},
        {"lmi2_min_eig", cert.residuals.lmi2_min_eig},
        {"scale", cert.residuals.scale},
        {"pass", cert.residuals.pass},
        {"checks", checks}}},
      {"solver", cert.solver},
      {"solver_slack", cert.solver_slack}};
}

Certificate certificate_from_json(const nlohmann::json& j) {
  Certificate cert;
  cert.rho = j.at("rho").get<double>();
  if (!(cert.rho > 0) || !(cert.rho < 1)) {
    throw ValidationError("certificate: rho must lie in (0,1)");
  }
  cert.config = config_from_json(j.at("config"));
  if (j.contains("ell") && j.at("ell").get<int>() != cert.config.lifting.ell) {
    throw ValidationError("certificate: top-level ell disagrees with embedded config");
  }
  cert.P = matrix_from_json(j.at("P"));
  cert.M1.R = matrix_from_json(j.at("M1").at("R"));
  cert.M1.S = matrix_from_json(j.at("M1").at("S"));
  cert.M2.R = matrix_from_json(j.at("M2").at("R"));
  cert.M2.S = matrix_from_json(j.at("M2").at("S"));
  cert.M3.R = matrix_from_json(j.at("M3").at("R"));
  cert.M3.S = matrix_from_json(j.at("M3").at("S"));
  cert.M4.R = matrix_from_json(j.at("M4").at("R"));
  cert.M4.S = matrix_from_json(j.at("M4").at("S"));
  cert.solver = j.value("solver", std::string{});
  cert.solver_slack = j.value("solver_slack", 0.0);

  const VariableLayout lay = VariableLayout::create(cert.config.lifting);
  const int two_ell = 2 * lay.ell;
  if (cert.P.rows() != lay.n || cert.P.cols() != lay.n) {
    throw ValidationError("certificate: P dimensions do not match the lifted state");
  }
  for (const Matrix* m : {&cert.M1.R, &cert.M1.S, &cert.M2.R, &cert.M2.S}) {
    if (m->rows() != lay.ellp || m->cols() != lay.ellp) {
      throw ValidationError("certificate: objective multiplier dimensions mismatch");
    }
  }
  for (const Matrix* m : {&cert.M3.R, &cert.M3.S, &cert.M4.R, &cert.M4.S}) {
    if (m->rows() != two_ell || m->cols() != two_ell) {
      throw ValidationError("certificate: constraint multiplier dimensions mismatch");
    }
  }
  return cert;
}

}  // namespace pdcert
