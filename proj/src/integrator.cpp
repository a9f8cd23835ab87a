#include "gch2/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

namespace gch2 {

void IntegratorConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("IntegratorConfig: dt must be positive");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) throw std::invalid_argument("IntegratorConfig: t_end must be positive");
  if (!(blowup_threshold > 0.0)) throw std::invalid_argument("IntegratorConfig: blowup_threshold must be positive");
  if (record_every < 1) throw std::invalid_argument("IntegratorConfig: record_every must be >= 1");
}

namespace {

std::string blowup_message(double time, double sup) {
  std::ostringstream os;
  os << "blow-up at t=" << time << " (sup norm " << sup << ")";
  return os.str();
}

double state_sup(const StatePair& s) { return std::max(s.u.sup_norm(), s.v.sup_norm()); }

}  // namespace

BlowUp::BlowUp(double time, double sup, Trajectory partial)
    : std::runtime_error(blowup_message(time, sup)), time_(time), sup_(sup), partial_(std::move(partial)) {}

StatePair step_rk4(const StatePair& state, const SystemParams& params, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("step_rk4: dt must be positive");
  const StatePair k1 = rhs(state, params);
  const StatePair k2 = rhs(state + (0.5 * dt) * k1, params);
  const StatePair k3 = rhs(state + (0.5 * dt) * k2, params);
  const StatePair k4 = rhs(state + dt * k3, params);

  StatePair next = state;
  next += (dt / 6.0) * k1;
  next += (dt / 3.0) * k2;
  next += (dt / 3.0) * k3;
  next += (dt / 6.0) * k4;
  return next;
}

Trajectory integrate(const SpectralField& u0, const SpectralField& v0, const SystemParams& params,
                     const IntegratorConfig& cfg) {
  cfg.validate();
  params.validate();

  const auto steps = static_cast<long>(std::ceil(cfg.t_end / cfg.dt - 1e-9));
  const double dt = cfg.t_end / static_cast<double>(steps);

  Trajectory traj;
  StatePair state(u0, v0);
  traj.times.push_back(0.0);
  traj.states.push_back(state);

  for (long i = 1; i <= steps; ++i) {
    state = step_rk4(state, params, dt);
    const double t = (i == steps) ? cfg.t_end : static_cast<double>(i) * dt;
    const double sup = state_sup(state);
    if (!std::isfinite(sup) || sup > cfg.blowup_threshold) throw BlowUp(t, sup, std::move(traj));
    if (i % cfg.record_every == 0 || i == steps) {
      traj.times.push_back(t);
      traj.states.push_back(state);
    }
  }
  return traj;
}

double cfl_time_step(const StatePair& state, const SystemParams& params, std::size_t max_frequency, double cfl) {
  if (!(cfl > 0.0)) throw std::invalid_argument("cfl_time_step: cfl must be positive");
  const double freq = static_cast<double>(std::max<std::size_t>(max_frequency, 1));
  const double speed = std::max({1.0, std::pow(state.v.sup_norm(), params.p), std::pow(state.u.sup_norm(), params.q)});
  return cfl / (freq * speed);
}

SizeCheckReport size_check(const Trajectory& traj, double s, double slack) {
  if (traj.empty()) throw std::invalid_argument("size_check: empty trajectory");
  SizeCheckReport report;
  report.initial_norm = pair_norm(traj.states.front().u, traj.states.front().v, s);
  const double bound = 2.0 * (1.0 + slack) * report.initial_norm;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double norm = pair_norm(traj.states[i].u, traj.states[i].v, s);
    report.max_norm = std::max(report.max_norm, norm);
    if (norm > bound) {
      report.ok = false;
      report.violating_times.push_back(traj.times[i]);
    }
  }
  report.max_ratio = report.initial_norm > 0.0 ? report.max_norm / report.initial_norm : 0.0;
  return report;
}

}  // namespace gch2
