#include "gch2/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gch2/experiments.hpp"

namespace gch2 {
namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  SystemParams params{0, 0, 0.0, 0.0};
  ExperimentPlan plan;
  std::string n_text;
  std::string out;
  std::string summary;
  std::string format = "csv";
  std::string config;
  int jobs = 0;
  // check-interp
  double s1 = 0.5;
  double s2 = 5.0;
  int trials = 1000;
  int max_mode = 32;
  std::uint64_t seed = 20240611;
};

std::vector<int> parse_n_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int value = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(value);
    } catch (const std::exception&) {
      throw UsageError("--n: '" + item + "' is not an integer");
    }
  }
  if (out.empty()) throw UsageError("--n: empty list");
  return out;
}

/// One flag that may also come from the config file.
struct Binding {
  CLI::Option* option;
  std::function<void(const json&)> from_config;
  std::function<json()> effective;
};

class Command {
 public:
  Command(CLI::App& app, std::string name, std::string description, Options& o)
      : sub_(app.add_subcommand(std::move(name), std::move(description))), o_(o) {}

  CLI::App* app() const { return sub_; }

  template <typename T>
  void flag(const std::string& key, T& target, const std::string& help, bool required = false) {
    CLI::Option* opt = sub_->add_option("--" + key, target, help);
    if (required) {
      opt->description(help + " (required)");
      required_.push_back(key);
    }
    bindings_[key] = {opt, [&target, key](const json& j) {
                        try {
                          target = j.get<T>();
                        } catch (const json::exception&) {
                          throw UsageError("config key '" + key + "' has the wrong type");
                        }
                      },
                      [&target] { return json(target); }};
  }

  void plan_flags(bool with_sigma, bool with_omega) {
    flag("p", o_.params.p, "exponent p of the first equation", true);
    flag("q", o_.params.q, "exponent q of the second equation", true);
    flag("a", o_.params.a, "coefficient a", true);
    flag("b", o_.params.b, "coefficient b", true);
    flag("s", o_.plan.s, "Sobolev index s of the data");
    if (with_sigma) flag("sigma", o_.plan.sigma, "Sobolev index sigma used for residual/difference norms");
    n_flag();
    flag("T", o_.plan.T, "final time");
    flag("cfl", o_.plan.cfl, "CFL number of the time step rule");
    flag("blowup-threshold", o_.plan.blowup_threshold, "sup-norm guard that aborts a run");
    if (with_omega) flag("omega", o_.plan.omega, "carrier sign omega in {-1,0,1}");
    flag("jobs", o_.jobs, "concurrent per-n runs (falls back to GCH2_JOBS)");
  }

  void n_flag() {
    CLI::Option* opt = sub_->add_option("--n", o_.n_text, "comma-separated frequencies, e.g. 64,128,256");
    bindings_["n"] = {opt,
                      [this](const json& j) {
                        if (j.is_string()) {
                          o_.n_text = j.get<std::string>();
                        } else if (j.is_array()) {
                          std::string text;
                          for (const auto& v : j) {
                            if (!v.is_number_integer()) throw UsageError("config key 'n' must hold integers");
                            text += (text.empty() ? "" : ",") + std::to_string(v.get<int>());
                          }
                          o_.n_text = text;
                        } else if (j.is_number_integer()) {
                          o_.n_text = std::to_string(j.get<int>());
                        } else {
                          throw UsageError("config key 'n' has the wrong type");
                        }
                      },
                      [this] { return json(o_.n_text.empty() ? o_.plan.n_list : parse_n_list(o_.n_text)); }};
  }

  void output_flags() {
    flag("out", o_.out, "output path (stdout when omitted)");
    flag("summary", o_.summary, "also write the JSON summary to this path");
    CLI::Option* fmt = sub_->add_option("--format", o_.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    bindings_["format"] = {fmt,
                           [this](const json& j) {
                             if (!j.is_string() || (j != "csv" && j != "json")) {
                               throw UsageError("config key 'format' must be \"csv\" or \"json\"");
                             }
                             o_.format = j.get<std::string>();
                           },
                           [this] { return json(o_.format); }};
    sub_->add_option("--config", o_.config, "flat JSON file with flag values; flags take precedence");
  }

  /// Applies the config file, checks required flags and returns the effective configuration.
  json finalize() {
    if (!o_.config.empty()) {
      std::ifstream in(o_.config);
      if (!in) throw UsageError("cannot read config file '" + o_.config + "'");
      json cfg;
      try {
        cfg = json::parse(in);
      } catch (const json::parse_error& e) {
        throw UsageError("config file '" + o_.config + "': " + e.what());
      }
      if (!cfg.is_object()) throw UsageError("config file must hold a flat JSON object");
      for (const auto& [key, value] : cfg.items()) {
        const auto it = bindings_.find(key);
        if (it == bindings_.end()) throw UsageError("unknown config key '" + key + "' for " + sub_->get_name());
        if (it->second.option->count() == 0) {
          it->second.from_config(value);
          given_from_config_.push_back(key);
        }
      }
    }
    for (const auto& key : required_) {
      const bool given = bindings_.at(key).option->count() > 0 ||
                         std::find(given_from_config_.begin(), given_from_config_.end(), key) != given_from_config_.end();
      if (!given) throw UsageError("--" + key + " is required");
    }
    json effective = {{"command", sub_->get_name()}};
    for (const auto& [key, b] : bindings_) effective[key] = b.effective();
    return effective;
  }

 private:
  CLI::App* sub_;
  Options& o_;
  std::map<std::string, Binding> bindings_;
  std::vector<std::string> required_;
  std::vector<std::string> given_from_config_;
};

int resolve_jobs(int flag) {
  if (flag > 0) return flag;
  if (const char* env = std::getenv("GCH2_JOBS")) {
    try {
      const int v = std::stoi(env);
      if (v > 0) return v;
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("GCH2_JOBS must be a positive integer, got '") + env + "'");
  }
  return 1;
}

ExperimentPlan finish_plan(Options& o) {
  ExperimentPlan plan = o.plan;
  plan.params = o.params;
  if (!o.n_text.empty()) plan.n_list = parse_n_list(o.n_text);
  plan.jobs = resolve_jobs(o.jobs);
  return plan;
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open output path '" + path + "'");
  f << text;
  if (!f) throw UsageError("failed writing '" + path + "'");
}

void check_writable(const std::string& path) {
  if (path.empty() || path == "-") return;
  std::ofstream f(path, std::ios::binary | std::ios::app);
  if (!f) throw UsageError("cannot open output path '" + path + "'");
}

/// Writes the table and summary according to --out/--summary/--format.
template <typename Result>
void emit(const Result& result, const json& config, const Options& o, std::ostream& out) {
  json summary = result.summary();
  summary["config"] = config;
  const std::string summary_text = summary.dump(2) + "\n";
  if (o.format == "json") {
    write_text(o.out, summary_text, out);
  } else {
    write_text(o.out, to_csv(result, config.dump()), out);
    if (!o.out.empty() && o.summary.empty()) out << summary_text;
  }
  if (!o.summary.empty()) write_text(o.summary, summary_text, out);
}

int run_solve(const Options& o, const ExperimentPlan& plan, const json& config, std::ostream& out) {
  const int n = plan.n_list.front();
  const PeriodicGrid grid(plan.grid_size(n));
  const ApproxConfig cfg{plan.omega, n, plan.s};
  const StatePair init = initial_data(cfg, plan.params, grid);
  IntegratorConfig icfg;
  icfg.dt = plan.time_step(n, init);
  icfg.t_end = plan.T;
  icfg.blowup_threshold = plan.blowup_threshold;
  icfg.record_every = static_cast<int>(std::lround(plan.record_interval / icfg.dt));
  const Trajectory traj = integrate(init.u, init.v, plan.params, icfg);

  NormSeries series{"pair_norm_s", traj.times, {}};
  for (const auto& state : traj.states) series.values.push_back(pair_norm(state.u, state.v, plan.s));
  const SizeCheckReport size = size_check(traj, plan.s);

  json summary = {{"experiment", "solve"},
                  {"plan", plan.to_json()},
                  {"config", config},
                  {"n", n},
                  {"grid", grid.size()},
                  {"dt", icfg.dt},
                  {"size_ok", size.ok},
                  {"initial_norm", size.initial_norm},
                  {"max_ratio", size.max_ratio},
                  {"violating_times", size.violating_times},
                  {"pass", size.ok}};
  const std::string summary_text = summary.dump(2) + "\n";
  if (o.format == "json") {
    write_text(o.out, summary_text, out);
  } else {
    write_text(o.out, to_csv(series, config.dump()), out);
    if (!o.out.empty() && o.summary.empty()) out << summary_text;
  }
  if (!o.summary.empty()) write_text(o.summary, summary_text, out);
  return size.ok ? kExitOk : kExitVerdictFailed;
}

SpectralField random_trig_polynomial(const PeriodicGrid& grid, std::mt19937_64& rng, int max_mode) {
  std::normal_distribution<double> gauss;
  std::uniform_int_distribution<int> modes(1, max_mode);
  std::vector<std::complex<double>> coeffs(grid.num_modes());
  const int top = modes(rng);
  for (int k = 0; k <= top && static_cast<std::size_t>(k) < grid.nyquist(); ++k) {
    coeffs[k] = {gauss(rng), k == 0 ? 0.0 : gauss(rng)};
  }
  return SpectralField(grid, coeffs);
}

int run_check_interp(const Options& o, const json& config, std::ostream& out) {
  if (!(o.s1 < o.plan.s && o.plan.s < o.s2)) throw UsageError("check-interp needs s1 < s < s2");
  if (o.trials < 1) throw UsageError("--trials must be positive");
  if (o.max_mode < 1) throw UsageError("--max-mode must be positive");
  std::size_t size = 8;
  while (size <= 2 * static_cast<std::size_t>(o.max_mode)) size *= 2;
  const PeriodicGrid grid(size);
  std::mt19937_64 rng(o.seed);

  std::ostringstream csv;
  csv << "# " << config.dump() << "\ntrial,lhs,rhs,ratio\n";
  double worst = 0.0;
  int violations = 0;
  for (int i = 0; i < o.trials; ++i) {
    const SpectralField f = random_trig_polynomial(grid, rng, o.max_mode);
    const InterpolationBound b = interpolation_bound(f, o.s1, o.plan.s, o.s2);
    const double ratio = b.lhs / b.rhs;
    worst = std::max(worst, ratio);
    if (b.lhs > b.rhs * (1.0 + 1e-12)) ++violations;
    char line[128];
    std::snprintf(line, sizeof line, "%d,%.17g,%.17g,%.17g\n", i, b.lhs, b.rhs, ratio);
    csv << line;
  }
  json summary = {{"experiment", "check-interp"}, {"config", config}, {"trials", o.trials},
                  {"max_ratio", worst},          {"violations", violations}, {"pass", violations == 0}};
  const std::string summary_text = summary.dump(2) + "\n";
  if (o.format == "json") {
    write_text(o.out, summary_text, out);
  } else {
    write_text(o.out, csv.str(), out);
    if (!o.out.empty() && o.summary.empty()) out << summary_text;
  }
  if (!o.summary.empty()) write_text(o.summary, summary_text, out);
  return violations == 0 ? kExitOk : kExitVerdictFailed;
}

std::string slug(const SystemParams& p) {
  std::ostringstream os;
  os << p.p << "-" << p.q << "-" << p.a << "-" << p.b;
  return os.str();
}

std::string index_slug(double x) {
  std::string text = std::to_string(x);
  text.erase(text.find_last_not_of('0') + 1);
  if (!text.empty() && text.back() == '.') text.pop_back();
  for (char& c : text) {
    if (c == '.') c = 'p';
  }
  return text;
}

int run_make_acceptance(const std::string& dir, int jobs, std::ostream& out) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw UsageError("cannot create output directory '" + dir + "': " + ec.message());

  const std::vector<SystemParams> grid = {{1, 1, 2, 2}, {2, 2, 3, 3}, {1, 2, 2, 3}};
  json index = json::array();
  bool all_pass = true;
  const auto record = [&](const std::string& name, const json& summary, const std::string& csv) {
    write_text((fs::path(dir) / (name + ".csv")).string(), csv, out);
    write_text((fs::path(dir) / (name + ".json")).string(), summary.dump(2) + "\n", out);
    const bool pass = summary.at("pass").get<bool>();
    all_pass = all_pass && pass;
    index.push_back({{"name", name}, {"pass", pass}});
    out << (pass ? "PASS " : "FAIL ") << name << "\n" << std::flush;
  };

  for (const auto& params : grid) {
    for (const double s : {3.0, 6.0}) {
      for (const double sigma : {0.5, 1.75}) {
        ExperimentPlan plan;
        plan.params = params;
        plan.s = s;
        plan.sigma = sigma;
        plan.n_list = {64, 128, 256, 512};
        plan.jobs = jobs;
        const ResidualScanResult r = residual_decay_scan(plan);
        const std::string name = "residual_" + slug(params) + "_s" + index_slug(s) + "_sigma" + index_slug(sigma);
        json summary = r.summary();
        summary["config"] = plan.to_json();
        record(name, summary, to_csv(r, plan.to_json().dump()));
      }
    }
  }
  for (const auto& params : grid) {
    ExperimentPlan plan;
    plan.params = params;
    plan.s = 3.0;
    plan.sigma = 1.75;
    plan.n_list = {64, 128, 256};
    plan.jobs = jobs;
    const DifferenceGrowthResult r = difference_growth(plan, 1);
    json summary = r.summary();
    summary["config"] = plan.to_json();
    record("diff_growth_" + slug(params), summary, to_csv(r, plan.to_json().dump()));
  }
  for (const SystemParams& params : {SystemParams{1, 1, 2, 2}, SystemParams{2, 2, 3, 3}}) {
    ExperimentPlan plan;
    plan.params = params;
    plan.s = 3.0;
    plan.sigma = 1.75;
    plan.n_list = {64, 128, 256, 512};
    plan.jobs = jobs;
    const NudResult r = nonuniform_dependence(plan);
    json summary = r.summary();
    summary["config"] = plan.to_json();
    record("nud_" + slug(params), summary, to_csv(r, plan.to_json().dump()));
  }
  write_text((fs::path(dir) / "index.json").string(), json{{"runs", index}, {"pass", all_pass}}.dump(2) + "\n", out);
  return all_pass ? kExitOk : kExitVerdictFailed;
}

}  // namespace

int parse_and_dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical experiments for the generalized two-component Camassa-Holm system", "gch2"};
  app.require_subcommand(1);
  Options o;

  Command residual(app, "residual-scan", "residual norms of the approximate solutions versus n", o);
  residual.plan_flags(true, true);
  residual.output_flags();

  Command diff(app, "diff-growth", "approximate minus actual solution growth versus n", o);
  diff.plan_flags(true, true);
  diff.output_flags();

  Command nud(app, "nud", "nonuniform dependence: data and solution differences of the omega pair", o);
  nud.plan_flags(true, false);
  nud.output_flags();

  Command solve(app, "solve", "integrate one actual solution and report its H^s pair norm", o);
  solve.plan_flags(false, true);
  solve.output_flags();

  Command interp(app, "check-interp", "Sobolev interpolation inequality on random trigonometric polynomials", o);
  interp.flag("s1", o.s1, "lower index");
  interp.flag("s", o.plan.s, "middle index");
  interp.flag("s2", o.s2, "upper index");
  interp.flag("trials", o.trials, "number of random fields");
  interp.flag("max-mode", o.max_mode, "highest Fourier mode of a random field");
  interp.flag("seed", o.seed, "random seed");
  interp.output_flags();

  std::string acceptance_dir = "acceptance";
  int acceptance_jobs = 0;
  CLI::App* accept = app.add_subcommand("make-acceptance", "run the full acceptance grid and write every table");
  accept->add_option("--out", acceptance_dir, "output directory");
  accept->add_option("--jobs", acceptance_jobs, "concurrent per-n runs (falls back to GCH2_JOBS)");

  const std::vector<Command*> commands = {&residual, &diff, &nud, &solve, &interp};
  const auto usage = [&](const std::string& message, const CLI::App* which) {
    err << "error: " << message << "\n\n" << (which ? which->help() : app.help());
    return kExitUsage;
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    const auto subs = app.get_subcommands();
    return usage(e.what(), subs.empty() ? nullptr : subs.front());
  }

  try {
    if (accept->parsed()) return run_make_acceptance(acceptance_dir, resolve_jobs(acceptance_jobs), out);

    Command* active = nullptr;
    for (Command* c : commands) {
      if (c->app()->parsed()) active = c;
    }
    if (active == nullptr) return usage("no subcommand given", nullptr);

    json config;
    try {
      config = active->finalize();
    } catch (const UsageError& e) {
      return usage(e.what(), active->app());
    }
    check_writable(o.out);
    check_writable(o.summary);

    if (active == &interp) return run_check_interp(o, config, out);

    const ExperimentPlan plan = finish_plan(o);
    if (active == &solve) {
      plan.validate(false);
      return run_solve(o, plan, config, out);
    }
    plan.validate();
    if (active == &residual) {
      const ResidualScanResult r = residual_decay_scan(plan);
      emit(r, config, o, out);
      return r.pass() ? kExitOk : kExitVerdictFailed;
    }
    if (active == &diff) {
      const DifferenceGrowthResult r = difference_growth(plan, plan.omega);
      emit(r, config, o, out);
      return r.pass() ? kExitOk : kExitVerdictFailed;
    }
    const NudResult r = nonuniform_dependence(plan);
    emit(r, config, o, out);
    return r.pass() ? kExitOk : kExitVerdictFailed;
  } catch (const BlowUp& e) {
    err << "error: " << e.what() << " after " << e.partial().size() << " recorded states\n";
    return kExitBlowUp;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace gch2
