// Scratch probe: per-step throughput, first paper-table cells, and Richardson
// halving behavior of the fine-step reference runs. Not part of the shipped
// benchmark.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "mti/nonlinearity.hpp"
#include "mti/steppers.hpp"
#include "../src/ld_power.hpp"

using namespace mti;

static Problem power_problem(double eps) {
  Problem p;
  p.epsilon = eps;
  p.alpha = 2.0;
  p.nonlinearity = make_power(1.0, 1);
  p.phi1 = {1.0, 0.0};
  p.phi2 = {1.0, 0.0};
  p.horizon_T = 4.0;
  return p;
}

int main(int argc, char** argv) {
  const double tau0 = 0.2;

  if (argc > 1 && std::strcmp(argv[1], "speed") == 0) {
    // throughput of the fa-power stepper at reference step size
    const double eps = 0.5 / (1 << 10);
    Problem p = power_problem(eps);
    const double tau = tau0 / (1 << 18);
    const long n = 5'000'000;
    auto t0 = std::chrono::steady_clock::now();
    RunOutcome out = run_mti(p, Method::MtiFa, tau, n);
    auto t1 = std::chrono::steady_clock::now();
    double ns = std::chrono::duration<double, std::nano>(t1 - t0).count() / n;
    std::printf("fa-power: %.1f ns/step, y(final)=(%.17g, %.17g) unstable=%d\n", ns,
                out.final_state.y.real(), out.final_state.y.imag(), out.unstable);
    auto t2 = std::chrono::steady_clock::now();
    out = run_mti(p, Method::MtiF, tau, n);
    auto t3 = std::chrono::steady_clock::now();
    ns = std::chrono::duration<double, std::nano>(t3 - t2).count() / n;
    std::printf("f-power : %.1f ns/step, y(final)=(%.17g, %.17g)\n", ns, out.final_state.y.real(),
                out.final_state.y.imag());
    return 0;
  }

  if (argc > 1 && std::strcmp(argv[1], "table1") == 0) {
    // spot cells of the error tables at eps = 0.5 against a K=18 reference
    const double eps = 0.5;
    Problem p = power_problem(eps);
    const int K = 18;
    const long nref = 20L << K;
    const double tau_ref = tau0 / (1 << K);
    RunOutcome ref = run_mti(p, Method::MtiFa, tau_ref, nref);
    std::printf("ref y(T) = (%.17g, %.17g)\n", ref.final_state.y.real(), ref.final_state.y.imag());
    for (int m = 0; m <= 6; ++m) {
      const double tau = tau0 / (1L << (2 * m));
      const long n = 20L << (2 * m);
      RunOutcome fa = run_mti(p, Method::MtiFa, tau, n);
      RunOutcome f = run_mti(p, Method::MtiF, tau, n);
      std::printf("m=%d tau=%.3e  e(mti-fa)=%.3e  e(mti-f)=%.3e\n", m, tau,
                  std::abs(fa.final_state.y - ref.final_state.y),
                  std::abs(f.final_state.y - ref.final_state.y));
    }
    return 0;
  }

  if (argc > 1 && std::strcmp(argv[1], "richardson") == 0) {
    // Delta(eps, K) = |y_K(T) - y_{K+1}(T)| for the reference step tau0/2^K
    for (int j : {0, 2, 4, 5, 6, 8, 10, 12, 14}) {
      const double eps = 0.5 / (1 << j);
      Problem p = power_problem(eps);
      std::printf("j=%2d eps=%.3e :", j, eps);
      for (int K : {18, 19, 20, 21}) {
        const double tau = tau0 / (1L << K);
        const long n = 20L << K;
        RunOutcome a = run_mti(p, Method::MtiFa, tau, n);
        RunOutcome b = run_mti(p, Method::MtiFa, tau / 2, 2 * n);
        std::printf("  D(%d)=%.2e", K, std::abs(a.final_state.y - b.final_state.y));
        std::fflush(stdout);
      }
      std::printf("\n");
    }
    return 0;
  }

  if (argc > 1 && std::strcmp(argv[1], "kscan") == 0) {
    const double eps = argc > 2 ? std::atof(argv[2]) : 0.5;
    Problem p = power_problem(eps);
    for (int K = 8; K <= 21; ++K) {
      const double tau = tau0 / (1L << K);
      const long n = 20L << K;
      RunOutcome a = run_mti(p, Method::MtiFa, tau, n);
      RunOutcome b = run_mti(p, Method::MtiFa, tau / 2, 2 * n);
      RunOutcome f = run_mti(p, Method::MtiF, tau, n);
      std::printf("K=%2d tau=%.3e  D_fa=%.3e  |fa-f|=%.3e\n", K, tau,
                  std::abs(a.final_state.y - b.final_state.y),
                  std::abs(a.final_state.y - f.final_state.y));
      std::fflush(stdout);
    }
    return 0;
  }

  if (argc > 1 && std::strcmp(argv[1], "ldscan") == 0) {
    const double eps = argc > 2 ? std::atof(argv[2]) : 0.5;
    const int k_lo = argc > 3 ? std::atoi(argv[3]) : 14;
    const int k_hi = argc > 4 ? std::atoi(argv[4]) : 22;
    Problem p = power_problem(eps);
    for (int K = k_lo; K <= k_hi; ++K) {
      const double tau = tau0 / (1L << K);
      const long n = 20L << K;
      auto a = ldp::run_power_ld(p, true, tau, n, {});
      auto b = ldp::run_power_ld(p, true, tau / 2, 2 * n, {});
      auto f = ldp::run_power_ld(p, false, tau, n, {});
      std::printf("K=%2d tau=%.3e  D_fa=%.3e  |fa-f|=%.3e\n", K, tau,
                  std::abs(a.final_state.y - b.final_state.y),
                  std::abs(a.final_state.y - f.final_state.y));
      std::fflush(stdout);
    }
    return 0;
  }

  if (argc > 1 && std::strcmp(argv[1], "search") == 0) {
    // adaptive Richardson search per epsilon: first K meeting 1e-9
    for (int j = 0; j <= 14; ++j) {
      const double eps = 0.5 / (1 << j);
      Problem p = power_problem(eps);
      std::printf("j=%2d eps=%.4e :", j, eps);
      std::fflush(stdout);
      int K = 18;
      const int Kmax = 26;
      while (K <= Kmax) {
        const double tau = tau0 / (1L << K);
        const long n = 20L << K;
        auto a = ldp::run_power_ld(p, true, tau, n, {});
        auto b = ldp::run_power_ld(p, true, tau / 2, 2 * n, {});
        const double D = std::abs(a.final_state.y - b.final_state.y);
        std::printf(" D(%d)=%.2e", K, D);
        std::fflush(stdout);
        if (D <= 1e-9) {
          std::printf("  -> pass at K=%d\n", K);
          break;
        }
        int jump = std::max(1, (int)std::ceil(0.5 * std::log2(D / 5e-10)));
        K += std::min(jump, 4);
      }
      if (K > Kmax) std::printf("  -> NOT met by K=%d\n", Kmax);
      std::fflush(stdout);
    }
    return 0;
  }

  if (argc > 1 && std::strcmp(argv[1], "ldcheck") == 0) {
    // short-run equivalence of the double and long-double steppers
    for (double eps : {0.5, 0.03125, 0.5 / (1 << 10)}) {
      Problem p = power_problem(eps);
      const double tau = tau0 / (1 << 10);
      const long n = 20L << 10;
      RunOutcome da = run_mti(p, Method::MtiFa, tau, n);
      RunOutcome df = run_mti(p, Method::MtiF, tau, n);
      auto la = ldp::run_power_ld(p, true, tau, n, {});
      auto lf = ldp::run_power_ld(p, false, tau, n, {});
      std::printf("eps=%.4g  |fa_d-fa_ld|=%.3e  |f_d-f_ld|=%.3e\n", eps,
                  std::abs(da.final_state.y - la.final_state.y),
                  std::abs(df.final_state.y - lf.final_state.y));
    }
    return 0;
  }

  if (argc > 1 && std::strcmp(argv[1], "sens") == 0) {
    // sensitivity of the final state to a 1-ulp initial perturbation
    for (int j : {0, 10, 14}) {
      const double eps = 0.5 / (1 << j);
      Problem p = power_problem(eps);
      std::printf("j=%2d:", j);
      for (int K : {18, 20}) {
        const double tau = tau0 / (1L << K);
        const long n = 20L << K;
        RunOutcome a = run_mti(p, Method::MtiFa, tau, n);
        Problem q = p;
        q.phi2 = std::nextafter(1.0, 2.0);
        RunOutcome b = run_mti(q, Method::MtiFa, tau, n);
        std::printf("  S(%d)=%.2e", K, std::abs(a.final_state.y - b.final_state.y));
        std::fflush(stdout);
      }
      std::printf("\n");
    }
    return 0;
  }

  std::fprintf(stderr, "usage: probe {speed|table1|richardson|sens}\n");
  return 2;
}
