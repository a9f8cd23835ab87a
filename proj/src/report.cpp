#include <cstdio>
#include <sstream>
#include <string>

#include "gch2/experiments.hpp"

namespace gch2 {
namespace {

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::string& config_echo, std::initializer_list<const char*> header) {
    if (!config_echo.empty()) os_ << "# " << config_echo << '\n';
    bool first = true;
    for (const char* h : header) {
      os_ << (first ? "" : ",") << h;
      first = false;
    }
    os_ << '\n';
  }

  template <typename... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((os_ << (first ? "" : ",") << cell(cells), first = false), ...);
    os_ << '\n';
  }

  std::string str() const { return os_.str(); }

 private:
  static std::string cell(double x) { return num(x); }
  static std::string cell(int x) { return std::to_string(x); }
  static std::string cell(std::size_t x) { return std::to_string(x); }

  std::ostringstream os_;
};

nlohmann::json exponents_json(const ExponentReport& e) {
  nlohmann::json j = {{"r", e.r},         {"j", e.j},         {"beta", e.beta},
                      {"alpha", e.alpha}, {"r_branch", e.r_branch}, {"j_branch", e.j_branch},
                      {"k", e.k},         {"beta_in_window", e.beta_in_window}};
  if (!e.warning.empty()) j["warning"] = e.warning;
  return j;
}

nlohmann::json size_json(const SizeCheckReport& s) {
  return {{"ok", s.ok},
          {"initial_norm", s.initial_norm},
          {"max_norm", s.max_norm},
          {"max_ratio", s.max_ratio},
          {"violating_times", s.violating_times}};
}

nlohmann::json slope_json(const SlopeCheck& s) {
  return {{"fitted", s.fitted}, {"predicted", s.predicted}, {"branch", s.branch}, {"pass", s.pass}};
}

nlohmann::json gap_json(const GapCheck& g) {
  return {{"relative_gap_at_max_n", g.relative_gap_at_max_n},
          {"fitted_slope", g.fitted_slope},
          {"exact", g.exact},
          {"pass", g.pass}};
}

}  // namespace

nlohmann::json ResidualScanResult::summary() const {
  return {{"experiment", "residual-scan"},
          {"plan", plan.to_json()},
          {"predicted", exponents_json(predicted)},
          {"slope_E", slope_json(E)},
          {"slope_F", slope_json(F)},
          {"gap_E", gap_json(gap_E)},
          {"gap_F", gap_json(gap_F)},
          {"spot_time", kResidualSpotTime},
          {"spot_slope_E", spot_slope_E},
          {"spot_slope_F", spot_slope_F},
          {"pass", pass()}};
}

nlohmann::json DifferenceGrowthResult::summary() const {
  nlohmann::json runs_json = nlohmann::json::array();
  for (const auto& r : runs) {
    runs_json.push_back({{"n", r.n},
                         {"grid", r.grid},
                         {"dt", r.dt},
                         {"sup_diff_sigma", r.sup_diff_sigma},
                         {"ratio_to_beta", r.ratio_to_beta},
                         {"sup_diff_k", r.sup_diff_k},
                         {"ratio_to_k", r.ratio_to_k},
                         {"size", size_json(r.size)}});
  }
  return {{"experiment", "diff-growth"},
          {"plan", plan.to_json()},
          {"omega", omega},
          {"predicted", exponents_json(predicted)},
          {"runs", runs_json},
          {"slack", slack},
          {"non_increasing", non_increasing},
          {"size_ok", size_ok},
          {"pass", pass()}};
}

nlohmann::json NudResult::summary() const {
  nlohmann::json runs_json = nlohmann::json::array();
  for (const auto& r : runs) {
    nlohmann::json samples = nlohmann::json::array();
    for (const auto& s : r.samples) {
      samples.push_back({{"t", s.t},
                         {"solution_diff", s.solution_diff},
                         {"approx_diff", s.approx_diff},
                         {"reference", s.reference},
                         {"lower_constant", s.lower_constant},
                         {"w_norm_s", s.w_norm_s},
                         {"w_interp_bound", s.w_interp_bound},
                         {"n_alpha", s.n_alpha},
                         {"triangle_slack", s.triangle_slack}});
    }
    runs_json.push_back({{"n", r.n},
                         {"grid", r.grid},
                         {"dt", r.dt},
                         {"data_diff", r.data_diff},
                         {"data_diff_formula", r.data_diff_formula},
                         {"samples", samples},
                         {"size_first", size_json(r.size_first)},
                         {"size_second", size_json(r.size_second)}});
  }
  return {{"experiment", "nud"},
          {"plan", plan.to_json()},
          {"omega_pair", {omega_first, omega_second}},
          {"even_branch", even_branch},
          {"reference", even_branch ? "|sin(t/2)|" : "|sin t|"},
          {"predicted", exponents_json(predicted)},
          {"runs", runs_json},
          {"data_slope", data_slope},
          {"data_slope_expected", data_slope_expected},
          {"data_slope_ok", data_slope_ok},
          {"check_time", kNudCheckTime},
          {"lower_bound_ok", lower_bound_ok},
          {"top_change", top_change},
          {"stable_ok", stable_ok},
          {"size_ok", size_ok},
          {"pass", pass()}};
}

std::string to_csv(const ResidualScanResult& r, const std::string& config_echo) {
  CsvWriter csv(config_echo, {"n", "grid", "t", "norm_E", "norm_F", "gap_E", "gap_F"});
  for (const auto& row : r.rows) csv.row(row.n, row.grid, row.t, row.norm_E, row.norm_F, row.gap_E, row.gap_F);
  return csv.str();
}

std::string to_csv(const DifferenceGrowthResult& r, const std::string& config_echo) {
  CsvWriter csv(config_echo, {"n", "grid", "dt", "t", "diff_sigma", "diff_k", "size_s"});
  for (const auto& run : r.runs) {
    for (std::size_t i = 0; i < run.diff_sigma.times.size(); ++i) {
      csv.row(run.n, run.grid, run.dt, run.diff_sigma.times[i], run.diff_sigma.values[i], run.diff_k.values[i],
              run.size_s.values[i]);
    }
  }
  return csv.str();
}

std::string to_csv(const NudResult& r, const std::string& config_echo) {
  CsvWriter csv(config_echo, {"n", "grid", "dt", "t", "data_diff", "solution_diff", "approx_diff", "reference",
                              "lower_constant", "w_norm_s", "w_interp_bound", "n_alpha", "triangle_slack"});
  for (const auto& run : r.runs) {
    for (const auto& s : run.samples) {
      csv.row(run.n, run.grid, run.dt, s.t, run.data_diff, s.solution_diff, s.approx_diff, s.reference,
              s.lower_constant, s.w_norm_s, s.w_interp_bound, s.n_alpha, s.triangle_slack);
    }
  }
  return csv.str();
}

std::string to_csv(const NormSeries& series, const std::string& config_echo) {
  CsvWriter csv(config_echo, {"t", series.label.empty() ? "value" : series.label.c_str()});
  for (std::size_t i = 0; i < series.times.size(); ++i) csv.row(series.times[i], series.values[i]);
  return csv.str();
}

}  // namespace gch2
