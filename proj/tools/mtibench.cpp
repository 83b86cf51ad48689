// Benchmark CLI: convergence sweeps over (method, epsilon, tau) grids,
// trajectory dumps, reference management and the coefficient audit.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "mti/classical.hpp"
#include "mti/complexio.hpp"
#include "mti/coefficients.hpp"
#include "mti/nonlinearity.hpp"
#include "mti/sweep.hpp"

namespace {

struct ProblemFlags {
  double T = 4.0;
  double alpha = 2.0;
  std::string nonlinearity = "power:1:1";
  std::string phi1 = "1+0i";
  std::string phi2 = "1+0i";

  void attach(CLI::App* cmd) {
    cmd->add_option("--T", T, "horizon time (final comparison time)");
    cmd->add_option("--alpha", alpha, "linear coefficient alpha >= 0");
    cmd->add_option("--nonlinearity", nonlinearity, "'power:lambda:p' or 'sin2'");
    cmd->add_option("--phi1", phi1, "initial value y(0), complex literal a+bi");
    cmd->add_option("--phi2", phi2, "initial slope scale: y'(0) = phi2/eps^2");
  }

  mti::Problem build(double epsilon) const {
    auto spec = mti::parse_nonlinearity(nonlinearity);
    if (!spec) throw CLI::ValidationError("--nonlinearity", "unrecognized: " + nonlinearity);
    auto p1 = mti::parse_complex(phi1);
    auto p2 = mti::parse_complex(phi2);
    if (!p1) throw CLI::ValidationError("--phi1", "bad complex literal: " + phi1);
    if (!p2) throw CLI::ValidationError("--phi2", "bad complex literal: " + phi2);
    mti::Problem p;
    p.epsilon = epsilon;
    p.alpha = alpha;
    p.nonlinearity = *spec;
    p.phi1 = *p1;
    p.phi2 = *p2;
    p.horizon_T = T;
    p.validate();
    return p;
  }
};

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (tok.empty()) continue;
    out.push_back(std::stod(tok));
  }
  return out;
}

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"benchmark for uniformly accurate multiscale integrators of "
               "eps^2 y'' + (alpha + 1/eps^2) y + f(y) = 0"};
  app.require_subcommand(1);
  app.set_config("--config")->configurable(false);

  // ---- converge ------------------------------------------------------------
  auto* converge = app.add_subcommand("converge", "run an (method, eps, tau) error sweep");
  ProblemFlags cflags;
  cflags.attach(converge);
  std::vector<std::string> method_names{"mti-fa"};
  std::string eps_list, tau_list, output_format = "markdown", out_path, cache_dir;
  double ref_tau = 1e-6, richardson_tol = 1e-9;
  int jobs = 1;
  bool no_rates = false;
  converge->add_option("--method", method_names, "methods to sweep")->delimiter(',');
  converge->add_option("--epsilon-list", eps_list, "comma list; default 0.5*2^-j table grid");
  converge->add_option("--tau-list", tau_list, "comma list; default 0.2*4^-m, m=0..6");
  converge->add_option("--output", output_format, "csv or markdown")
      ->check(CLI::IsMember({"csv", "markdown"}));
  converge->add_option("--out", out_path, "write to file instead of stdout");
  converge->add_option("--ref-tau", ref_tau, "reference step target (snapped to tau0/2^K)");
  converge->add_option("--ref-richardson-tol", richardson_tol,
                       "required |y_ref(tau) - y_ref(tau/2)| at sample times");
  converge->add_option("--jobs", jobs, "worker threads for independent cells");
  converge->add_option("--cache-dir", cache_dir, "reference cache directory")
      ->envname("MTIBENCH_CACHE_DIR");
  converge->add_flag("--no-rates", no_rates, "skip rate rows (allows non-quartered tau lists)");

  // ---- trajectory ----------------------------------------------------------
  auto* traj = app.add_subcommand("trajectory", "dump (t, Re y, Im y) rows for one run");
  ProblemFlags tflags;
  tflags.attach(traj);
  std::string traj_method = "mti-fa";
  double traj_eps = 0.5, traj_tau = 1e-3;
  long traj_stride = 1;
  std::string traj_out;
  traj->add_option("--method", traj_method, "integrator");
  traj->add_option("--epsilon", traj_eps, "epsilon in (0,1]");
  traj->add_option("--tau", traj_tau, "time step");
  traj->add_option("--stride", traj_stride, "sample every n-th step");
  traj->add_option("--out", traj_out, "write to file instead of stdout");

  // ---- reference -----------------------------------------------------------
  auto* refc = app.add_subcommand("reference", "generate/inspect a cached reference solution");
  ProblemFlags rflags;
  rflags.attach(refc);
  double ref_eps = 0.5;
  std::string ref_times, ref_cache, ref_export;
  double ref_tau2 = 1e-6, ref_rich2 = 1e-9, ref_base = 0.2;
  bool ref_csv = false, ref_no_cross = false;
  refc->add_option("--epsilon", ref_eps, "epsilon in (0,1]");
  refc->add_option("--times", ref_times, "comma list of sample times, default T");
  refc->add_option("--ref-tau", ref_tau2, "reference step target");
  refc->add_option("--tau-base", ref_base, "dyadic base the step is snapped to");
  refc->add_option("--ref-richardson-tol", ref_rich2, "Richardson tolerance");
  refc->add_option("--cache-dir", ref_cache, "cache directory")->envname("MTIBENCH_CACHE_DIR");
  refc->add_option("--export", ref_export, "also write records to this .bin/.csv path");
  refc->add_flag("--csv", ref_csv, "cache as text instead of binary");
  refc->add_flag("--no-cross-check", ref_no_cross, "skip the independent-generator comparison");

  // ---- validate-coeffs -----------------------------------------------------
  auto* val = app.add_subcommand(
      "validate-coeffs", "compare every closed-form weight with quadrature of its defining integral");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*converge) {
      mti::SweepConfig config;
      config.problem = cflags.build(0.5);
      config.methods.clear();
      for (const std::string& name : method_names) {
        auto m = mti::parse_method(name);
        if (!m) throw CLI::ValidationError("--method", "unknown method: " + name);
        config.methods.push_back(*m);
      }
      if (!eps_list.empty()) config.epsilons = parse_list(eps_list);
      if (!tau_list.empty()) config.taus = parse_list(tau_list);
      config.jobs = jobs;
      config.compute_rates = !no_rates;
      config.ref.tau_ref = ref_tau;
      config.ref.richardson_tol = richardson_tol;
      config.ref.cache_dir = cache_dir;
      const mti::SweepResult result = mti::run_sweep(config);
      write_output(output_format == "csv" ? mti::emit_csv(result) : mti::emit_markdown(result),
                   out_path);
      return 0;
    }

    if (*traj) {
      auto m = mti::parse_method(traj_method);
      if (!m) throw CLI::ValidationError("--method", "unknown method: " + traj_method);
      const mti::Problem p = tflags.build(traj_eps);
      write_output(mti::dump_trajectory(p, *m, traj_tau, traj_stride), traj_out);
      return 0;
    }

    if (*refc) {
      const mti::Problem p = rflags.build(ref_eps);
      std::vector<double> times = ref_times.empty() ? std::vector<double>{p.horizon_T}
                                                    : parse_list(ref_times);
      mti::RefSettings settings;
      settings.tau_ref = ref_tau2;
      settings.tau_base = ref_base;
      settings.richardson_tol = ref_rich2;
      settings.cache_dir = ref_cache;
      settings.cache_as_csv = ref_csv;
      settings.run_cross_checks = !ref_no_cross;
      settings.verbose = true;
      const mti::ReferenceSolution ref = mti::generate_reference(p, times, settings);
      std::printf("fingerprint      %016llx\n", static_cast<unsigned long long>(ref.fingerprint));
      std::printf("tau_ref          %.17g\n", ref.tau_ref);
      std::printf("richardson_delta %.3e\n", ref.richardson_delta);
      std::printf("cross_path       %s\n", ref.cross_path.empty() ? "skipped" : ref.cross_path.c_str());
      std::printf("cross_deviation  %.3e\n", ref.cross_deviation);
      std::printf("from_cache       %s\n", ref.loaded_from_cache ? "yes" : "no");
      for (size_t i = 0; i < ref.times.size(); ++i)
        std::printf("t=%.12g  y=%s  ydot=%s\n", ref.times[i],
                    mti::format_complex(ref.y[i]).c_str(),
                    mti::format_complex(ref.ydot[i]).c_str());
      if (!ref_export.empty()) mti::write_reference_file(ref, ref_export);
      return 0;
    }

    if (*val) {
      const auto devs = mti::validate_coefficients();
      bool ok = true;
      std::printf("%-8s %-12s  worst point\n", "weight", "max rel dev");
      for (const auto& d : devs) {
        std::printf("%-8s %.3e   tau=%g eps=%g alpha=%g k=%d\n", d.name.c_str(), d.max_rel_dev,
                    d.worst_tau, d.worst_epsilon, d.worst_alpha, d.worst_k);
        ok = ok && d.max_rel_dev <= 1e-10;
      }
      const mti::Complex f1 = mti::beta1_printed_over_defining(0.05, 3.0);
      const mti::Complex f2 = mti::beta2_printed_over_defining(0.05, 3.0);
      std::printf("printed beta1 / defining integral = %s (expected i/2)\n",
                  mti::format_complex(f1).c_str());
      std::printf("printed beta2 / defining integral = %s (expected i/2)\n",
                  mti::format_complex(f2).c_str());
      return ok ? 0 : 1;
    }
  } catch (const mti::ReferenceError& e) {
    std::fprintf(stderr, "reference error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
