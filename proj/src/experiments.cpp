#include "gch2/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace gch2 {

std::size_t ExperimentPlan::grid_size(int n) const {
  const auto target = static_cast<std::size_t>(16 * std::max({params.p, params.q, 2})) * static_cast<std::size_t>(n);
  std::size_t size = 8;
  while (size < target) size *= 2;
  return size;
}

double ExperimentPlan::time_step(int n, const StatePair& initial) const {
  const double dt_cfl = cfl_time_step(initial, params, static_cast<std::size_t>(n), cfl);
  const double per_record = std::ceil(record_interval / dt_cfl - 1e-9);
  return record_interval / per_record;
}

void ExperimentPlan::validate(bool require_regular) const {
  params.validate();
  std::ostringstream err;
  if (require_regular && !(s > 2.5)) err << "s must exceed 5/2 (got " << s << "); ";
  if (!std::isfinite(sigma)) err << "sigma must be finite; ";
  if (n_list.empty()) err << "n_list is empty; ";
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 1) err << "n values must be positive; ";
    if (i > 0 && n_list[i] <= n_list[i - 1]) err << "n_list must be strictly increasing; ";
  }
  if (!(T > 0.0)) err << "T must be positive; ";
  if (!(cfl > 0.0)) err << "cfl must be positive; ";
  if (omega < -1 || omega > 1) err << "omega must be -1, 0 or 1; ";
  if (!(record_interval > 0.0)) err << "record_interval must be positive; ";
  if (!(blowup_threshold > 0.0)) err << "blowup_threshold must be positive; ";
  if (!(slope_tolerance > 0.0)) err << "slope_tolerance must be positive; ";
  if (jobs < 1) err << "jobs must be >= 1; ";
  const std::string msg = err.str();
  if (!msg.empty()) throw std::invalid_argument("ExperimentPlan: " + msg.substr(0, msg.size() - 2));
}

nlohmann::json ExperimentPlan::to_json() const {
  nlohmann::json grids = nlohmann::json::object();
  for (int n : n_list) grids[std::to_string(n)] = grid_size(n);
  return {
      {"p", params.p},
      {"q", params.q},
      {"a", params.a},
      {"b", params.b},
      {"s", s},
      {"sigma", sigma},
      {"n", n_list},
      {"T", T},
      {"cfl", cfl},
      {"omega", omega},
      {"record_interval", record_interval},
      {"blowup_threshold", blowup_threshold},
      {"slope_tolerance", slope_tolerance},
      {"grid_rule", "N(n) = smallest power of two >= 16*max(p,q,2)*n"},
      {"grid", grids},
      {"dt_rule", "dt = record_interval / ceil(record_interval * n * max(1, sup|v|^p, sup|u|^q) / cfl)"},
  };
}

double fit_slope(std::span<const double> n, std::span<const double> values) {
  if (n.size() != values.size()) throw std::invalid_argument("fit_slope: size mismatch");
  if (n.size() < 2) throw std::invalid_argument("fit_slope: need at least two points");
  const auto m = static_cast<double>(n.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!(n[i] > 0.0) || !(values[i] > 0.0)) throw std::invalid_argument("fit_slope: points must be positive");
    mx += std::log(n[i]);
    my += std::log(values[i]);
  }
  mx /= m;
  my /= m;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < n.size(); ++i) {
    const double dx = std::log(n[i]) - mx;
    sxy += dx * (std::log(values[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_slope: n values must not all coincide");
  return sxy / sxx;
}

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& task) {
  std::vector<std::exception_ptr> errors(count);
  const auto workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(jobs, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            task(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

namespace {

std::vector<double> as_doubles(const std::vector<int>& xs) { return {xs.begin(), xs.end()}; }

GapCheck check_gap(const std::vector<double>& ns, const std::vector<double>& norms, const std::vector<double>& gaps,
                   double residual_slope) {
  GapCheck g;
  g.exact = true;
  for (std::size_t i = 0; i < norms.size(); ++i) {
    if (!(gaps[i] <= kExactExpansionFloor * norms[i])) g.exact = false;
  }
  g.relative_gap_at_max_n = gaps.back() / norms.back();
  const bool all_positive = std::all_of(gaps.begin(), gaps.end(), [](double x) { return x > 0.0; });
  g.fitted_slope = all_positive ? fit_slope(ns, gaps) : -std::numeric_limits<double>::infinity();
  g.pass = g.relative_gap_at_max_n < kGapTolerance && (g.exact || g.fitted_slope < residual_slope);
  return g;
}

}  // namespace

ResidualScanResult residual_decay_scan(const ExperimentPlan& plan) {
  plan.validate();
  if (plan.n_list.size() < 2) throw std::invalid_argument("residual_decay_scan: need at least two n values");

  ResidualScanResult out;
  out.plan = plan;
  out.predicted = predict_exponents(plan.s, plan.sigma, plan.params);

  const std::size_t count = plan.n_list.size();
  std::vector<ResidualRow> at_zero(count);
  std::vector<ResidualRow> at_spot(count);
  parallel_for(count, plan.jobs, [&](std::size_t i) {
    const int n = plan.n_list[i];
    const PeriodicGrid grid(plan.grid_size(n));
    const ApproxConfig cfg{plan.omega, n, plan.s};
    for (const double t : {0.0, kResidualSpotTime}) {
      const StatePair e = residual(cfg, plan.params, t, grid);
      const StatePair lead = leading_error_expansion(cfg, plan.params, t, grid);
      ResidualRow row;
      row.n = n;
      row.grid = grid.size();
      row.t = t;
      row.norm_E = sobolev_norm(e.u, plan.sigma);
      row.norm_F = sobolev_norm(e.v, plan.sigma);
      row.gap_E = sobolev_norm(e.u - lead.u, plan.sigma);
      row.gap_F = sobolev_norm(e.v - lead.v, plan.sigma);
      (t == 0.0 ? at_zero : at_spot)[i] = row;
    }
  });
  out.rows = at_zero;
  out.rows.insert(out.rows.end(), at_spot.begin(), at_spot.end());

  const std::vector<double> ns = as_doubles(plan.n_list);
  const auto column = [](const std::vector<ResidualRow>& rows, double ResidualRow::*field) {
    std::vector<double> col;
    for (const auto& r : rows) col.push_back(r.*field);
    return col;
  };
  const auto E0 = column(at_zero, &ResidualRow::norm_E);
  const auto F0 = column(at_zero, &ResidualRow::norm_F);

  out.E = {fit_slope(ns, E0), out.predicted.r, out.predicted.r_branch, false};
  out.F = {fit_slope(ns, F0), out.predicted.j, out.predicted.j_branch, false};
  out.E.pass = std::abs(out.E.fitted - out.E.predicted) <= plan.slope_tolerance;
  out.F.pass = std::abs(out.F.fitted - out.F.predicted) <= plan.slope_tolerance;

  out.gap_E = check_gap(ns, E0, column(at_zero, &ResidualRow::gap_E), out.E.fitted);
  out.gap_F = check_gap(ns, F0, column(at_zero, &ResidualRow::gap_F), out.F.fitted);

  out.spot_slope_E = fit_slope(ns, column(at_spot, &ResidualRow::norm_E));
  out.spot_slope_F = fit_slope(ns, column(at_spot, &ResidualRow::norm_F));
  return out;
}

namespace {

struct ActualRun {
  std::size_t grid = 0;
  double dt = 0.0;
  Trajectory traj;
};

ActualRun run_actual(const ExperimentPlan& plan, int omega, int n) {
  const PeriodicGrid grid(plan.grid_size(n));
  const ApproxConfig cfg{omega, n, plan.s};
  const StatePair init = initial_data(cfg, plan.params, grid);
  const double dt = plan.time_step(n, init);
  IntegratorConfig icfg;
  icfg.dt = dt;
  icfg.t_end = plan.T;
  icfg.blowup_threshold = plan.blowup_threshold;
  icfg.record_every = static_cast<int>(std::lround(plan.record_interval / dt));
  return {grid.size(), dt, integrate(init.u, init.v, plan.params, icfg)};
}

}  // namespace

DifferenceGrowthResult difference_growth(const ExperimentPlan& plan, int omega) {
  plan.validate();
  DifferenceGrowthResult out;
  out.plan = plan;
  out.omega = omega;
  out.predicted = predict_exponents(plan.s, plan.sigma, plan.params);
  out.runs.resize(plan.n_list.size());
  const int k = out.predicted.k;

  parallel_for(plan.n_list.size(), plan.jobs, [&](std::size_t i) {
    const int n = plan.n_list[i];
    const ActualRun actual = run_actual(plan, omega, n);
    const PeriodicGrid grid(actual.grid);
    const ApproxConfig cfg{omega, n, plan.s};

    DifferenceRun run;
    run.n = n;
    run.grid = actual.grid;
    run.dt = actual.dt;
    run.diff_sigma.label = "diff_sigma";
    run.diff_k.label = "diff_k";
    run.size_s.label = "size_s";
    for (std::size_t j = 0; j < actual.traj.size(); ++j) {
      const double t = actual.traj.times[j];
      const StatePair& sol = actual.traj.states[j];
      const StatePair diff = approximate_solution(cfg, plan.params, t, grid) - sol;
      run.diff_sigma.times.push_back(t);
      run.diff_sigma.values.push_back(pair_norm(diff.u, diff.v, plan.sigma));
      run.diff_k.times.push_back(t);
      run.diff_k.values.push_back(pair_norm(diff.u, diff.v, k));
      run.size_s.times.push_back(t);
      run.size_s.values.push_back(pair_norm(sol.u, sol.v, plan.s));
    }
    run.sup_diff_sigma = *std::max_element(run.diff_sigma.values.begin(), run.diff_sigma.values.end());
    run.sup_diff_k = *std::max_element(run.diff_k.values.begin(), run.diff_k.values.end());
    run.ratio_to_beta = run.sup_diff_sigma / std::pow(n, out.predicted.beta);
    run.ratio_to_k = run.sup_diff_k / std::pow(n, k - plan.s);
    run.size = size_check(actual.traj, plan.s);
    out.runs[i] = std::move(run);
  });

  out.non_increasing = true;
  out.size_ok = true;
  for (std::size_t i = 0; i < out.runs.size(); ++i) {
    if (i > 0 && out.runs[i].ratio_to_beta > (1.0 + out.slack) * out.runs[i - 1].ratio_to_beta) {
      out.non_increasing = false;
    }
    out.size_ok = out.size_ok && out.runs[i].size.ok;
  }
  return out;
}

double separation_reference(const SystemParams& params, double t) {
  const double two_sqrt_pi = 2.0 * std::sqrt(std::numbers::pi);
  if (params.p % 2 == 0 && params.q % 2 == 0) return 2.0 * two_sqrt_pi * std::abs(std::sin(t / 2.0));
  const int odd = (params.p % 2) + (params.q % 2);
  return odd * two_sqrt_pi * std::abs(std::sin(t));
}

NudResult nonuniform_dependence(const ExperimentPlan& plan) {
  plan.validate();
  if (plan.n_list.size() < 2) throw std::invalid_argument("nonuniform_dependence: need at least two n values");

  NudResult out;
  out.plan = plan;
  out.even_branch = plan.params.p % 2 == 0 && plan.params.q % 2 == 0;
  out.omega_first = 1;
  out.omega_second = out.even_branch ? 0 : -1;
  out.predicted = predict_exponents(plan.s, plan.sigma, plan.params);
  out.runs.resize(plan.n_list.size());
  const int k = out.predicted.k;

  parallel_for(plan.n_list.size(), plan.jobs, [&](std::size_t i) {
    const int n = plan.n_list[i];
    const ActualRun first = run_actual(plan, out.omega_first, n);
    const ActualRun second = run_actual(plan, out.omega_second, n);
    const PeriodicGrid grid(first.grid);
    const ApproxConfig cfg1{out.omega_first, n, plan.s};
    const ApproxConfig cfg2{out.omega_second, n, plan.s};

    NudRun run;
    run.n = n;
    run.grid = first.grid;
    run.dt = first.dt;
    const StatePair data = first.traj.states.front() - second.traj.states.front();
    run.data_diff = pair_norm(data.u, data.v, plan.s);
    const double nn = n;
    const double carrier_gap = (out.omega_first - out.omega_second) * std::sqrt(2.0 * std::numbers::pi);
    run.data_diff_formula = carrier_gap * (std::pow(nn, -1.0 / plan.params.q) + std::pow(nn, -1.0 / plan.params.p));
    run.size_first = size_check(first.traj, plan.s);
    run.size_second = size_check(second.traj, plan.s);

    const double n_alpha = std::pow(nn, out.predicted.alpha);
    for (const double target : kNudSampleTimes) {
      if (target > plan.T + 1e-12) continue;
      // First/second runs share the grid and time step, so indices coincide.
      std::size_t j = 0;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t idx = 0; idx < first.traj.size(); ++idx) {
        const double d = std::abs(first.traj.times[idx] - target);
        if (d < best) {
          best = d;
          j = idx;
        }
      }
      NudSample sample;
      sample.t = first.traj.times[j];
      const StatePair& s1 = first.traj.states[j];
      const StatePair& s2 = second.traj.states[j];
      const StatePair sol_diff = s1 - s2;
      sample.solution_diff = pair_norm(sol_diff.u, sol_diff.v, plan.s);
      const StatePair a1 = approximate_solution(cfg1, plan.params, sample.t, grid);
      const StatePair a2 = approximate_solution(cfg2, plan.params, sample.t, grid);
      const StatePair approx_diff = a1 - a2;
      sample.approx_diff = pair_norm(approx_diff.u, approx_diff.v, plan.s);
      sample.reference = separation_reference(plan.params, sample.t);
      const double weight = out.even_branch ? std::abs(std::sin(sample.t / 2.0)) : std::abs(std::sin(sample.t));
      sample.lower_constant = weight > 0.0 ? sample.solution_diff / weight : 0.0;

      const StatePair w1 = a1 - s1;
      const StatePair w2 = a2 - s2;
      const auto interp = [&](const SpectralField& f) { return interpolation_bound(f, plan.sigma, plan.s, k).rhs; };
      const double w1_s = pair_norm(w1.u, w1.v, plan.s);
      const double w2_s = pair_norm(w2.u, w2.v, plan.s);
      sample.w_norm_s = std::max(w1_s, w2_s);
      sample.w_interp_bound = std::max(interp(w1.u) + interp(w1.v), interp(w2.u) + interp(w2.v));
      sample.n_alpha = n_alpha;
      sample.triangle_slack = sample.solution_diff - (sample.approx_diff - w1_s - w2_s);
      run.samples.push_back(sample);
    }
    out.runs[i] = std::move(run);
  });

  std::vector<double> ns;
  std::vector<double> data;
  for (const auto& r : out.runs) {
    ns.push_back(r.n);
    data.push_back(r.data_diff);
  }
  out.data_slope = fit_slope(ns, data);
  out.data_slope_expected = -std::min(1.0 / plan.params.p, 1.0 / plan.params.q);
  out.data_slope_ok = std::abs(out.data_slope - out.data_slope_expected) <= 0.1;

  const auto at_check = [](const NudRun& r) -> const NudSample* {
    for (const auto& s : r.samples) {
      if (std::abs(s.t - kNudCheckTime) < 1e-9) return &s;
    }
    return nullptr;
  };
  out.lower_bound_ok = true;
  out.size_ok = true;
  for (const auto& r : out.runs) {
    const NudSample* s = at_check(r);
    if (s == nullptr || s->solution_diff < 0.5 * s->reference) out.lower_bound_ok = false;
    out.size_ok = out.size_ok && r.size_first.ok && r.size_second.ok;
  }
  const NudSample* top = at_check(out.runs.back());
  const NudSample* below = at_check(out.runs[out.runs.size() - 2]);
  if (top != nullptr && below != nullptr && below->solution_diff > 0.0) {
    out.top_change = std::abs(top->solution_diff - below->solution_diff) / below->solution_diff;
    out.stable_ok = out.top_change < 0.2;
  }
  return out;
}

}  // namespace gch2
