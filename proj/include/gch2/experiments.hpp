#pragma once

/// @file experiments.hpp
/// @brief The three headline experiments (residual decay, approximate-vs-actual
/// difference growth, nonuniform dependence) and their reports.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "gch2/approx.hpp"
#include "gch2/integrator.hpp"
#include "gch2/model.hpp"

namespace gch2 {

struct ExperimentPlan {
  SystemParams params;
  double s = 3.0;
  double sigma = 1.75;
  std::vector<int> n_list{64, 128, 256};
  double T = 0.95;
  double cfl = 0.5;
  /// ω of the residual scan and of difference_growth when no ω is passed.
  int omega = 1;
  /// Spacing of recorded states; the time step is shrunk to divide it evenly.
  double record_interval = 0.05;
  double blowup_threshold = 1e6;
  /// Tolerance on fitted residual exponents.
  double slope_tolerance = 0.35;
  /// Concurrent per-n runs (results are merged in n-order regardless).
  int jobs = 1;

  /// Smallest power of two ≥ 16 · max(p, q, 2) · n.
  std::size_t grid_size(int n) const;
  /// Time step for a run at frequency n: the CFL rule
  /// cfl / (n · max(1, sup|v|^p, sup|u|^q)) rounded down to divide record_interval.
  double time_step(int n, const StatePair& initial) const;

  /// Throws std::invalid_argument on an unusable plan. `require_regular` adds s > 5/2.
  void validate(bool require_regular = true) const;
  nlohmann::json to_json() const;
};

/// Time-stamped norms produced by an experiment.
struct NormSeries {
  std::string label;
  std::vector<double> times;
  std::vector<double> values;
};

/// Ordinary least-squares slope of log(value) against log(n).
/// Requires at least two points with positive n and value.
double fit_slope(std::span<const double> n, std::span<const double> values);

/// Runs task(i) for i in [0, count) on up to `jobs` threads. Exceptions are
/// rethrown in index order after all tasks finish.
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& task);

// --- residual decay -------------------------------------------------------

struct ResidualRow {
  int n = 0;
  std::size_t grid = 0;
  double t = 0.0;
  double norm_E = 0.0;
  double norm_F = 0.0;
  double gap_E = 0.0;  ///< ‖E − E_leading‖_{H^σ}
  double gap_F = 0.0;
};

/// Relative gap below which the leading expansion is treated as exact; its
/// decay rate is then not measurable and the slope comparison is vacuous.
inline constexpr double kExactExpansionFloor = 1e-12;

struct SlopeCheck {
  double fitted = 0.0;
  double predicted = 0.0;
  int branch = 1;
  bool pass = false;
};

struct GapCheck {
  double relative_gap_at_max_n = 0.0;
  double fitted_slope = 0.0;
  bool exact = false;  ///< relative gap at round-off for every n
  bool pass = false;   ///< relative gap < 0.05 and (exact or slope below the residual's)
};

struct ResidualScanResult {
  ExperimentPlan plan;
  ExponentReport predicted;
  std::vector<ResidualRow> rows;  ///< t = 0 rows followed by the t = 0.5 spot check
  SlopeCheck E;
  SlopeCheck F;
  GapCheck gap_E;
  GapCheck gap_F;
  double spot_slope_E = 0.0;  ///< fitted slopes at t = 0.5 (informational)
  double spot_slope_F = 0.0;

  bool pass() const noexcept { return E.pass && F.pass; }
  nlohmann::json summary() const;
};

inline constexpr double kResidualSpotTime = 0.5;
inline constexpr double kGapTolerance = 0.05;

ResidualScanResult residual_decay_scan(const ExperimentPlan& plan);

// --- approximate vs actual -----------------------------------------------

struct DifferenceRun {
  int n = 0;
  std::size_t grid = 0;
  double dt = 0.0;
  NormSeries diff_sigma;  ///< ‖(w,y)‖_σ
  NormSeries diff_k;      ///< ‖(w,y)‖_k, k = ⌊s⌋+2
  NormSeries size_s;      ///< ‖(u,v)‖_s of the actual solution
  double sup_diff_sigma = 0.0;
  double ratio_to_beta = 0.0;  ///< sup_t ‖(w,y)‖_σ / n^β
  double sup_diff_k = 0.0;
  double ratio_to_k = 0.0;  ///< sup_t ‖(w,y)‖_k / n^{k−s}
  SizeCheckReport size;
};

struct DifferenceGrowthResult {
  ExperimentPlan plan;
  int omega = 1;
  ExponentReport predicted;
  std::vector<DifferenceRun> runs;
  /// ratio_to_beta(n_{i+1}) ≤ (1 + slack) · ratio_to_beta(n_i) for all i.
  bool non_increasing = false;
  double slack = 0.25;
  bool size_ok = false;

  bool pass() const noexcept { return non_increasing && size_ok; }
  nlohmann::json summary() const;
};

DifferenceGrowthResult difference_growth(const ExperimentPlan& plan, int omega);

// --- nonuniform dependence ------------------------------------------------

inline constexpr double kNudSampleTimes[] = {0.25, 0.5, 0.75, 0.95};

struct NudSample {
  double t = 0.0;
  double solution_diff = 0.0;     ///< ‖(u₁−u₂, v₁−v₂)(t)‖_s of actual solutions
  double approx_diff = 0.0;       ///< same for the approximate solutions
  double reference = 0.0;         ///< limiting value of approx_diff as n → ∞
  double lower_constant = 0.0;    ///< solution_diff / |sin t| (|sin(t/2)| on the even branch)
  double w_norm_s = 0.0;          ///< max over both runs of ‖(w,y)‖_s, measured directly
  double w_interp_bound = 0.0;    ///< same from ‖·‖_σ^θ ‖·‖_k^{1−θ} per component
  double n_alpha = 0.0;
  double triangle_slack = 0.0;    ///< solution_diff − (approx_diff − w terms); ≥ 0 by the triangle inequality
};

struct NudRun {
  int n = 0;
  std::size_t grid = 0;
  double dt = 0.0;
  double data_diff = 0.0;  ///< ‖(u₁−u₂, v₁−v₂)(0)‖_s
  double data_diff_formula = 0.0;
  std::vector<NudSample> samples;
  SizeCheckReport size_first;
  SizeCheckReport size_second;
};

struct NudResult {
  ExperimentPlan plan;
  int omega_first = 1;
  int omega_second = -1;
  bool even_branch = false;  ///< p, q both even: ω ∈ {1, 0} and |sin(t/2)|
  ExponentReport predicted;
  std::vector<NudRun> runs;
  double data_slope = 0.0;
  double data_slope_expected = 0.0;
  bool data_slope_ok = false;
  bool lower_bound_ok = false;  ///< solution_diff(0.5) ≥ 0.5 · reference(0.5) for every n
  double top_change = 0.0;      ///< relative change of solution_diff(0.5) between the top two n
  bool stable_ok = false;       ///< top_change < 0.2
  bool size_ok = false;

  bool pass() const noexcept { return data_slope_ok && lower_bound_ok && stable_ok && size_ok; }
  nlohmann::json summary() const;
};

inline constexpr double kNudCheckTime = 0.5;

/// Limiting H^s separation of the two approximate solutions as n → ∞.
double separation_reference(const SystemParams& params, double t);

NudResult nonuniform_dependence(const ExperimentPlan& plan);

// --- CSV tables -------------------------------------------------------------

/// CSV (header row, LF endings, 17 significant digits). A leading '#' line
/// carries the effective configuration when `config_echo` is non-empty.
std::string to_csv(const ResidualScanResult& r, const std::string& config_echo = {});
std::string to_csv(const DifferenceGrowthResult& r, const std::string& config_echo = {});
std::string to_csv(const NudResult& r, const std::string& config_echo = {});
std::string to_csv(const NormSeries& series, const std::string& config_echo = {});

}  // namespace gch2
