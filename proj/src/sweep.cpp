#include "mti/sweep.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mti/classical.hpp"

namespace mti {

namespace {

long steps_for(double T, double tau) {
  const long n = std::llround(T / tau);
  if (n <= 0 || std::abs(n * tau - T) > 1e-9 * T)
    throw std::invalid_argument("sweep: tau must divide the horizon T");
  return n;
}

void parallel_for(int jobs, long n, const std::function<void(long)>& body) {
  if (jobs <= 1 || n <= 1) {
    for (long i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<long> next{0};
  auto worker = [&] {
    for (long i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
  };
  std::vector<std::thread> pool;
  const int nthreads = std::min<long>(jobs, n);
  pool.reserve(nthreads);
  for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

std::string sci6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.5e", v);
  return buf;
}

std::string sci3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

}  // namespace

std::vector<double> default_epsilon_grid() {
  std::vector<double> eps;
  for (int j : {0, 1, 2, 3, 4, 5, 6, 8, 10, 12, 14}) eps.push_back(std::ldexp(0.5, -j));
  return eps;
}

std::vector<double> default_tau_grid() {
  std::vector<double> taus;
  for (int m = 0; m <= 6; ++m) taus.push_back(std::ldexp(0.2, -2 * m));
  return taus;
}

std::string to_string(CellStatus s) {
  switch (s) {
    case CellStatus::Ok: return "ok";
    case CellStatus::Unstable: return "unstable";
    default: return "solver-failed";
  }
}

SweepResult run_sweep(const SweepConfig& config) {
  config.problem.validate();
  if (config.taus.empty()) throw std::invalid_argument("sweep: empty tau list");
  for (size_t i = 1; i < config.taus.size(); ++i) {
    if (!(config.taus[i] < config.taus[i - 1]))
      throw std::invalid_argument("sweep: tau list must be strictly decreasing");
    if (config.compute_rates &&
        std::abs(config.taus[i - 1] / config.taus[i] - 4.0) > 1e-9)
      throw std::invalid_argument("sweep: rate computation requires tau quartering");
  }

  SweepResult res;
  res.methods = config.methods;
  res.epsilons = config.epsilons;
  res.taus = config.taus;
  if (config.methods.empty() || config.epsilons.empty()) return res;

  const double T = config.problem.horizon_T;
  std::vector<long> steps(config.taus.size());
  for (size_t ti = 0; ti < config.taus.size(); ++ti) steps[ti] = steps_for(T, config.taus[ti]);
  const double t_end = static_cast<double>(steps[0]) * config.taus[0];

  // references: one per epsilon, generated up front and shared read-only
  RefSettings ref_settings = config.ref;
  ref_settings.tau_base = config.taus[0];
  std::map<double, ReferenceSolution> refs;
  for (double eps : config.epsilons) {
    if (refs.count(eps)) continue;
    Problem p = config.problem;
    p.epsilon = eps;
    const double times[1] = {t_end};
    refs.emplace(eps, generate_reference(p, times, ref_settings));
  }

  const size_t n_eps = config.epsilons.size();
  const size_t n_tau = config.taus.size();
  res.cells.resize(config.methods.size() * n_eps * n_tau);

  parallel_for(config.jobs, static_cast<long>(res.cells.size()), [&](long idx) {
    const size_t ti = idx % n_tau;
    const size_t ei = (idx / n_tau) % n_eps;
    const size_t mi = idx / (n_tau * n_eps);
    CellResult& cell = res.cells[idx];
    cell.method = config.methods[mi];
    cell.epsilon = config.epsilons[ei];
    cell.tau = config.taus[ti];

    Problem p = config.problem;
    p.epsilon = cell.epsilon;
    const auto t0 = std::chrono::steady_clock::now();
    RunOutcome out = run_trajectory(p, cell.method, cell.tau, steps[ti]);
    cell.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (out.unstable) {
      cell.status = CellStatus::Unstable;
      cell.error_y = cell.error_dy_scaled = std::numeric_limits<double>::quiet_NaN();
      return;
    }
    if (out.solver_failed) {
      cell.status = CellStatus::SolverFailed;
      cell.error_y = cell.error_dy_scaled = std::numeric_limits<double>::quiet_NaN();
      return;
    }
    const ReferenceSolution& ref = refs.at(cell.epsilon);
    const State exact{t_end, ref.y.front(), ref.ydot.front()};
    const ErrorPair err = error_pair(exact, out.final_state, cell.epsilon);
    cell.error_y = err.e;
    cell.error_dy_scaled = err.edot_scaled;
  });

  // rate along each (method, epsilon) row, quarter-step pairs only
  for (size_t mi = 0; mi < config.methods.size(); ++mi)
    for (size_t ei = 0; ei < n_eps; ++ei)
      for (size_t ti = 1; ti < n_tau; ++ti) {
        CellResult& fine = res.cells[(mi * n_eps + ei) * n_tau + ti];
        const CellResult& coarse = res.cells[(mi * n_eps + ei) * n_tau + ti - 1];
        if (config.compute_rates && fine.status == CellStatus::Ok &&
            coarse.status == CellStatus::Ok)
          fine.rate = convergence_rate(coarse.error_y, fine.error_y);
      }

  for (size_t mi = 0; mi < config.methods.size(); ++mi) {
    MethodSummary sum;
    sum.method = config.methods[mi];
    for (size_t ti = 0; ti < n_tau; ++ti) {
      double worst = std::numeric_limits<double>::quiet_NaN();
      for (size_t ei = 0; ei < n_eps; ++ei) {
        const CellResult& c = res.cells[(mi * n_eps + ei) * n_tau + ti];
        if (c.status != CellStatus::Ok) continue;
        if (std::isnan(worst) || c.error_y > worst) worst = c.error_y;
      }
      sum.e_tau_inf.push_back(worst);
    }
    sum.e_inf_rates.resize(n_tau);
    for (size_t ti = 1; ti < n_tau; ++ti)
      if (config.compute_rates)
        sum.e_inf_rates[ti] = convergence_rate(sum.e_tau_inf[ti - 1], sum.e_tau_inf[ti]);
    res.summaries.push_back(std::move(sum));
  }
  return res;
}

std::string emit_csv(const SweepResult& result) {
  std::ostringstream out;
  out << "method,epsilon,tau,error_y,error_dy_scaled,rate,status,wall_time_s\n";
  for (const CellResult& c : result.cells) {
    out << to_string(c.method) << ',' << sci6(c.epsilon) << ',' << sci6(c.tau) << ',';
    if (c.status == CellStatus::Ok)
      out << sci6(c.error_y) << ',' << sci6(c.error_dy_scaled) << ',';
    else
      out << to_string(c.status) << ',' << to_string(c.status) << ',';
    if (c.rate) out << sci6(*c.rate);
    out << ',' << to_string(c.status) << ',' << sci6(c.wall_time_s) << '\n';
  }
  return out.str();
}

std::string emit_markdown(const SweepResult& result) {
  std::ostringstream out;
  const size_t n_tau = result.taus.size();
  const size_t n_eps = result.epsilons.size();
  for (size_t mi = 0; mi < result.methods.size(); ++mi) {
    out << "## " << to_string(result.methods[mi]) << "\n\n";
    out << "| e(eps,tau) |";
    for (double tau : result.taus) out << " tau=" << sci3(tau) << " |";
    out << "\n|---|";
    for (size_t ti = 0; ti < n_tau; ++ti) out << "---|";
    out << "\n";
    for (size_t ei = 0; ei < n_eps; ++ei) {
      out << "| eps=" << sci3(result.epsilons[ei]) << " |";
      for (size_t ti = 0; ti < n_tau; ++ti) {
        const CellResult& c = result.cell(mi, ei, ti);
        if (c.status == CellStatus::Ok)
          out << ' ' << sci3(c.error_y) << " |";
        else
          out << ' ' << to_string(c.status) << " |";
      }
      out << "\n| rate |";
      for (size_t ti = 0; ti < n_tau; ++ti) {
        const CellResult& c = result.cell(mi, ei, ti);
        if (c.rate) {
          char buf[16];
          std::snprintf(buf, sizeof buf, "%.2f", *c.rate);
          out << ' ' << buf << " |";
        } else {
          out << " --- |";
        }
      }
      out << "\n";
    }
    const MethodSummary& sum = result.summaries[mi];
    out << "| e_tau_inf |";
    for (size_t ti = 0; ti < n_tau; ++ti) out << ' ' << sci3(sum.e_tau_inf[ti]) << " |";
    out << "\n| rate |";
    for (size_t ti = 0; ti < n_tau; ++ti) {
      if (sum.e_inf_rates[ti]) {
        char buf[16];
        std::snprintf(buf, sizeof buf, "%.2f", *sum.e_inf_rates[ti]);
        out << ' ' << buf << " |";
      } else {
        out << " --- |";
      }
    }
    out << "\n\n";
  }
  return out.str();
}

std::string dump_trajectory(const Problem& problem, Method method, double tau, long stride) {
  problem.validate();
  if (stride < 1) throw std::invalid_argument("dump_trajectory: stride must be >= 1");
  const long n = std::llround(problem.horizon_T / tau);
  std::vector<long> indices;
  for (long i = 0; i <= n; i += stride) indices.push_back(i);
  if (indices.empty() || indices.back() != n) indices.push_back(n);
  RunOutcome out = run_trajectory(problem, method, tau, n, indices);

  std::ostringstream os;
  os << "t,re_y,im_y\n";
  os.precision(12);
  for (const State& s : out.samples)
    os << s.t << ',' << s.y.real() << ',' << s.y.imag() << '\n';
  return os.str();
}

}  // namespace mti
