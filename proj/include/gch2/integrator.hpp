#pragma once

/// @file integrator.hpp
/// @brief Fixed-step RK4 time evolution of the nonlocal system.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "gch2/model.hpp"

namespace gch2 {

struct IntegratorConfig {
  double dt = 1e-3;
  double t_end = 0.95;
  /// Sup-norm guard: exceeding it (or any non-finite value) aborts the run.
  double blowup_threshold = 1e6;
  int record_every = 1;

  void validate() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<StatePair> states;

  bool empty() const noexcept { return times.empty(); }
  std::size_t size() const noexcept { return times.size(); }
};

/// Raised when the solution leaves the guarded regime. Carries the trajectory
/// recorded up to (and including) the last finite state.
class BlowUp : public std::runtime_error {
 public:
  BlowUp(double time, double sup, Trajectory partial);
  double time() const noexcept { return time_; }
  double sup() const noexcept { return sup_; }
  const Trajectory& partial() const noexcept { return partial_; }

 private:
  double time_;
  double sup_;
  Trajectory partial_;
};

/// One classical Runge–Kutta step of size dt.
StatePair step_rk4(const StatePair& state, const SystemParams& params, double dt);

/// Integrates from t = 0 to cfg.t_end with uniform steps dt' = t_end / ⌈t_end/dt⌉ ≤ dt.
/// Records t = 0, every `record_every` steps, and the final time.
Trajectory integrate(const SpectralField& u0, const SpectralField& v0, const SystemParams& params,
                     const IntegratorConfig& cfg);

/// dt = cfl / (max_frequency · max(1, sup|v|^p, sup|u|^q)).
double cfl_time_step(const StatePair& state, const SystemParams& params, std::size_t max_frequency, double cfl = 0.5);

struct SizeCheckReport {
  bool ok = true;
  double initial_norm = 0.0;
  double max_norm = 0.0;
  /// max_t ‖(u,v)(t)‖_s / ‖(u,v)(0)‖_s (0 when the initial norm vanishes).
  double max_ratio = 0.0;
  std::vector<double> violating_times;
};

/// Checks ‖(u,v)(t)‖_s ≤ 2(1 + slack)‖(u,v)(0)‖_s at every recorded time.
SizeCheckReport size_check(const Trajectory& traj, double s, double slack = 0.05);

}  // namespace gch2
