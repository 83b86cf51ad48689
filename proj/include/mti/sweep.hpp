/// Convergence-sweep orchestration: (method, epsilon, tau) grids, per-cell
/// errors against the cached references, rate rows, e^tau_inf rows, and
/// CSV/Markdown emission. Cells are independent tasks over a bounded worker
/// pool; results land in a grid-ordered structure so parallel and serial runs
/// produce identical records.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mti/method.hpp"
#include "mti/model.hpp"
#include "mti/reference.hpp"

namespace mti {

/// epsilon = 0.5 * 2^-j for the j rows used by the benchmark tables.
std::vector<double> default_epsilon_grid();
/// tau = 0.2 * 4^-m, m = 0..6.
std::vector<double> default_tau_grid();

struct SweepConfig {
  std::vector<Method> methods{Method::MtiFa};
  std::vector<double> epsilons = default_epsilon_grid();
  std::vector<double> taus = default_tau_grid();
  Problem problem;  // epsilon is overridden per cell
  int jobs = 1;
  bool compute_rates = true;  // requires the tau list to decrease by factor 4
  RefSettings ref;
};

enum class CellStatus { Ok, Unstable, SolverFailed };
std::string to_string(CellStatus s);

struct CellResult {
  Method method{};
  double epsilon = 0.0;
  double tau = 0.0;
  double error_y = 0.0;
  double error_dy_scaled = 0.0;
  std::optional<double> rate;
  CellStatus status = CellStatus::Ok;
  double wall_time_s = 0.0;
};

struct MethodSummary {
  Method method{};
  std::vector<double> e_tau_inf;                    // max_eps error_y per tau (NaN if none ok)
  std::vector<std::optional<double>> e_inf_rates;   // rate row under e_tau_inf
};

struct SweepResult {
  std::vector<Method> methods;
  std::vector<double> epsilons;
  std::vector<double> taus;
  std::vector<CellResult> cells;  // method-major, then epsilon, then tau
  std::vector<MethodSummary> summaries;

  const CellResult& cell(size_t mi, size_t ei, size_t ti) const {
    return cells[(mi * epsilons.size() + ei) * taus.size() + ti];
  }
};

/// Runs the full grid. Per-cell failures are recorded in the cell status and
/// never abort the sweep; reference failures throw ReferenceError.
SweepResult run_sweep(const SweepConfig& config);

std::string emit_csv(const SweepResult& result);
std::string emit_markdown(const SweepResult& result);

/// Rows "t,re_y,im_y" every `stride` steps (plus the final step), for
/// external plotting of the eps-dependent oscillation.
std::string dump_trajectory(const Problem& problem, Method method, double tau, long stride);

}  // namespace mti
