// Command-line front end: certification, comparison sweeps, simulation
// soundness runs and certificate verification.
//
// Exit codes: 0 success, 1 malformed config/usage, 2 failure-to-certify or
// failed verification, 3 backend numerical failure. Failures also emit a
// machine-readable JSON object on stderr.

#include <atomic>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "pdcert/bounds.hpp"
#include "pdcert/certifier.hpp"
#include "pdcert/simulator.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNotCertified = 2;
constexpr int kExitBackendFailure = 3;

int fail(int code, const std::string& msg) {
  std::cerr << json{{"error", msg}, {"exit", code}}.dump() << "\n";
  return code;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw pdcert::ValidationError("cannot open file: " + path);
  json j;
  in >> j;
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << text;
}

struct SweepRow {
  double kappa_A = 1;
  double alpha_x = 0;
  double alpha_lambda = 0;
  double rho_literature = std::numeric_limits<double>::quiet_NaN();
  double rho_certified = std::numeric_limits<double>::quiet_NaN();
  int ell_used = 0;
  std::string status = "not_certified";
};

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << "kappaA,alpha_x,alpha_lambda,rho_literature,rho_certified,ell_used,status\n";
  for (const auto& r : rows) {
    os << pdcert::fmt_g12(r.kappa_A) << ',' << pdcert::fmt_g12(r.alpha_x) << ','
       << pdcert::fmt_g12(r.alpha_lambda) << ',' << pdcert::fmt_g12(r.rho_literature) << ','
       << pdcert::fmt_g12(r.rho_certified) << ',' << r.ell_used << ',' << r.status << '\n';
  }
  return os.str();
}

int run_certify(const std::string& config_path, const std::string& out_path,
                const std::string& solver, double tol) {
  pdcert::Config cfg = pdcert::config_from_json(load_json_file(config_path));
  auto backend = pdcert::make_backend(solver);
  pdcert::BisectOptions opts;
  opts.tol = tol;
  pdcert::CertifiedRate res = pdcert::bisect_rate(cfg, *backend, opts);
  if (res.status == pdcert::CertifyStatus::backend_failure) {
    return fail(kExitBackendFailure, "backend numerical failure: " + res.message);
  }
  if (res.status == pdcert::CertifyStatus::not_certified) {
    return fail(kExitNotCertified, "failure-to-certify: " + res.message);
  }
  const json j = pdcert::certificate_to_json(*res.cert);
  if (out_path.empty()) {
    std::cout << j.dump(2) << "\n";
  } else {
    write_text_file(out_path, j.dump(2) + "\n");
  }
  return kExitOk;
}

int run_sweep(const std::string& spec_path, const std::string& out_path,
              const std::string& plot_spec_path, const std::string& solver, int jobs) {
  const json spec = load_json_file(spec_path);
  if (!spec.contains("kappa_A") || !spec.contains("kappa_f") || !spec.contains("rule")) {
    throw pdcert::ValidationError("sweep spec needs keys kappa_A, kappa_f, rule");
  }
  const auto grid = spec.at("kappa_A").get<std::vector<double>>();
  const double kappa_f = spec.at("kappa_f").get<double>();
  const std::string rule = spec.at("rule").get<std::string>();
  if (kappa_f < 1.0) throw pdcert::ValidationError("sweep spec: kappa_f must be >= 1");
  for (double k : grid) {
    if (k < 1.0) throw pdcert::ValidationError("sweep spec: kappa_A grid values must be >= 1");
  }
  const auto ells = spec.value("ell", std::vector<int>{1, 2, 3});
  const bool include_fp = spec.value("include_fixed_point", true);
  const double tol = spec.value("rho_tol", 1e-4);

  std::vector<SweepRow> rows(grid.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    auto backend = pdcert::make_backend(solver);  // one isolated instance per worker
    for (std::size_t i = next.fetch_add(1); i < grid.size(); i = next.fetch_add(1)) {
      SweepRow& row = rows[i];
      row.kappa_A = grid[i];
      try {
        const pdcert::ProblemClass pc =
            pdcert::validate_problem_class(1.0, kappa_f, 1.0, grid[i]);
        pdcert::AlgorithmParams params;
        if (rule == "duhu") {
          const auto b = pdcert::duhu_bound(pc);
          params = {b.alpha_x, b.alpha_lambda, spec.value("mu", b.mu),
                    spec.value("gamma", b.gamma)};
          row.rho_literature = b.rho;
        } else if (rule == "alghunaim") {
          const auto b = pdcert::alghunaim_bound(pc);
          params = {b.alpha_x, b.alpha_lambda, spec.value("mu", b.mu),
                    spec.value("gamma", b.gamma)};
          row.rho_literature = b.rho;
        } else if (rule == "explicit") {
          params = {spec.at("alpha_x").get<double>(), spec.at("alpha_lambda").get<double>(),
                    spec.value("mu", 0.0), spec.value("gamma", 0.0)};
        } else {
          throw pdcert::ValidationError("sweep spec: unknown rule \"" + rule + "\"");
        }
        params = pdcert::validate_algorithm_params(params.alpha_x, params.alpha_lambda,
                                                   params.mu, params.gamma);
        row.alpha_x = params.alpha_x;
        row.alpha_lambda = params.alpha_lambda;
        pdcert::Config cfg{pc, params, {ells.empty() ? 1 : ells.front(), include_fp}};
        pdcert::BisectOptions opts;
        opts.tol = tol;
        const auto res = pdcert::certify_over_ells(cfg, ells, *backend, opts);
        if (res.status == pdcert::CertifyStatus::certified) {
          row.rho_certified = res.rho;
          row.ell_used = res.ell_used;
          row.status = "certified";
        } else if (res.status == pdcert::CertifyStatus::backend_failure) {
          row.status = "backend_failure";
        } else {
          row.status = "not_certified";
        }
      } catch (const std::exception& e) {
        row.status = std::string("error: ") + e.what();
      }
    }
  };
  const int nthreads = std::max(1, std::min<int>(jobs, static_cast<int>(grid.size()) + 1));
  std::vector<std::thread> pool;
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  const std::string csv = sweep_csv(rows);
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    write_text_file(out_path, csv);
  }
  if (!plot_spec_path.empty()) {
    const json plot = {
        {"x", {{"column", "kappaA"}, {"label", "matrix condition number kappa(A)"}}},
        {"y", {{"label", "convergence factor rho"}}},
        {"series",
         json::array({{{"column", "rho_literature"}, {"label", "literature bound"}},
                      {{"column", "rho_certified"}, {"label", "certified rate"}}})}};
    write_text_file(plot_spec_path, plot.dump(2) + "\n");
  }
  return kExitOk;
}

int run_simulate(const std::string& config_path, int n, int r,
                 const std::vector<std::uint64_t>& seeds, int steps,
                 const std::string& out_path, const std::string& solver) {
  if (steps < 1) throw pdcert::ValidationError("simulate: --steps must be >= 1");
  if (n < 1 || r < 1 || r > n) throw pdcert::ValidationError("simulate: need 1 <= r <= n");
  pdcert::Config cfg = pdcert::config_from_json(load_json_file(config_path));
  auto backend = pdcert::make_backend(solver);
  const pdcert::CertifiedRate res = pdcert::bisect_rate(cfg, *backend);
  if (res.status == pdcert::CertifyStatus::backend_failure) {
    return fail(kExitBackendFailure, "backend numerical failure: " + res.message);
  }
  if (res.status != pdcert::CertifyStatus::certified) {
    return fail(kExitNotCertified, "failure-to-certify: " + res.message);
  }

  std::ostringstream os;
  os << "seed,rho_emp,rho_certified,sound\n";
  for (std::uint64_t seed : seeds) {
    const pdcert::Instance inst = pdcert::generate_instance(cfg.pc, n, r, seed, false);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::normal_distribution<double> gauss(0.0, 1.0);
    pdcert::Vector x0(n), l0(r);
    for (int i = 0; i < n; ++i) x0[i] = gauss(rng);
    for (int i = 0; i < r; ++i) l0[i] = gauss(rng);
    double rho_emp = std::numeric_limits<double>::quiet_NaN();
    bool sound = false;
    try {
      const auto traj = pdcert::run_iterations(inst, cfg.params, x0, l0, steps);
      const auto [xs, ls] = pdcert::fixed_point(inst);
      const auto rate = pdcert::empirical_rate(traj, xs, ls);
      if (rate.has_value()) {
        rho_emp = *rate;
        sound = rho_emp <= res.rho + 5e-3;
      } else {
        sound = true;  // converged below the measurable floor
      }
    } catch (const pdcert::DivergenceError&) {
      sound = false;
    }
    os << seed << ',' << pdcert::fmt_g12(rho_emp) << ',' << pdcert::fmt_g12(res.rho) << ','
       << (sound ? "true" : "false") << '\n';
  }
  if (out_path.empty()) {
    std::cout << os.str();
  } else {
    write_text_file(out_path, os.str());
  }
  return kExitOk;
}

int run_verify(const std::string& cert_path) {
  const pdcert::Certificate cert = pdcert::certificate_from_json(load_json_file(cert_path));
  const pdcert::VerifyReport rep = pdcert::verify_certificate(cert);
  std::cout << "check                          value          threshold      result\n";
  for (const auto& c : rep.checks) {
    std::ostringstream line;
    line << c.name;
    std::string name = line.str();
    name.resize(30, ' ');
    std::cout << name << ' ' << pdcert::fmt_g12(c.value);
    std::cout << std::string(std::max<int>(1, 15 - static_cast<int>(
                                                      pdcert::fmt_g12(c.value).size())),
                             ' ');
    std::cout << pdcert::fmt_g12(c.threshold);
    std::cout << std::string(std::max<int>(1, 15 - static_cast<int>(
                                                      pdcert::fmt_g12(c.threshold).size())),
                             ' ');
    std::cout << (c.pass ? "pass" : "FAIL") << "\n";
  }
  if (!rep.pass) {
    std::string failing;
    for (const auto& c : rep.checks) {
      if (!c.pass) {
        failing = c.name;
        break;
      }
    }
    return fail(kExitNotCertified, "certificate verification failed: " + failing);
  }
  std::cout << "certificate OK (rho=" << pdcert::fmt_g12(cert.rho) << ")\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"worst-case convergence rate certification for primal-dual iterations"};
  app.require_subcommand(1);

  std::string config_path, out_path, cert_path, spec_path, plot_spec_path;
  std::string solver;  // empty -> PDCERT_SOLVER env -> default backend
  double tol = 1e-4;
  int jobs = 1, n = 6, r = 2, steps = 1000;
  std::vector<std::uint64_t> seeds{0};

  auto* certify = app.add_subcommand("certify", "bisect for the smallest certifiable rate");
  certify->add_option("--config", config_path, "JSON problem/algorithm config")->required();
  certify->add_option("--out", out_path, "output certificate JSON path (default stdout)");
  certify->add_option("--tol", tol, "bisection tolerance on rho");
  certify->add_option("--solver", solver, "semidefinite backend name");

  auto* sweep = app.add_subcommand("sweep", "certify over a kappa(A) grid and emit CSV");
  sweep->add_option("--spec", spec_path, "JSON sweep specification")->required();
  sweep->add_option("--out", out_path, "output CSV path (default stdout)");
  sweep->add_option("--jobs", jobs, "concurrent certifications");
  sweep->add_option("--plot-spec", plot_spec_path, "also emit a plot-spec JSON");
  sweep->add_option("--solver", solver, "semidefinite backend name");

  auto* simulate = app.add_subcommand("simulate", "empirical-rate soundness runs");
  simulate->add_option("--config", config_path, "JSON problem/algorithm config")->required();
  simulate->add_option("--n", n, "primal dimension");
  simulate->add_option("--r", r, "number of constraints");
  simulate->add_option("--seeds", seeds, "instance seeds")->delimiter(',');
  simulate->add_option("--steps", steps, "iteration count K");
  simulate->add_option("--out", out_path, "output CSV path (default stdout)");
  simulate->add_option("--solver", solver, "semidefinite backend name");

  auto* verify = app.add_subcommand("verify", "re-check a certificate's residuals");
  verify->add_option("--cert", cert_path, "certificate JSON path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::cerr << json{{"error", e.what()}, {"exit", kExitUsage}}.dump() << "\n";
    return kExitUsage;
  }

  try {
    if (certify->parsed()) return run_certify(config_path, out_path, solver, tol);
    if (sweep->parsed()) return run_sweep(spec_path, out_path, plot_spec_path, solver, jobs);
    if (simulate->parsed()) return run_simulate(config_path, n, r, seeds, steps, out_path, solver);
    if (verify->parsed()) return run_verify(cert_path);
  } catch (const pdcert::ValidationError& e) {
    return fail(kExitUsage, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(kExitUsage, std::string("malformed JSON: ") + e.what());
  } catch (const std::exception& e) {
    return fail(kExitBackendFailure, e.what());
  }
  return kExitUsage;
}
