#include "gch2/approx.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gch2 {
namespace {

int int_pow(int base, int exponent) {
  int out = 1;
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

double real_pow(double base, int exponent) {
  double out = 1.0;
  for (int i = 0; i < exponent; ++i) out *= base;
  return out;
}

double binomial(int n, int k) {
  double out = 1.0;
  for (int i = 1; i <= k; ++i) out = out * static_cast<double>(n - k + i) / static_cast<double>(i);
  return out;
}

struct Ansatz {
  double carrier_u;  // ω n^{−1/q}
  double carrier_v;  // ω n^{−1/p}
  double amplitude;  // n^{−s}
  double phase_u;    // ω^p t
  double phase_v;    // ω^q t
};

Ansatz make_ansatz(const ApproxConfig& cfg, const SystemParams& params, double t) {
  const double n = cfg.n;
  return {
      cfg.omega * std::pow(n, -1.0 / params.q),
      cfg.omega * std::pow(n, -1.0 / params.p),
      std::pow(n, -cfg.s),
      int_pow(cfg.omega, params.p) * t,
      int_pow(cfg.omega, params.q) * t,
  };
}

// Residual of the first equation; the second follows by exchanging components.
SpectralField component_residual(const ApproxConfig& cfg, const SystemParams& params, double t,
                                 const PeriodicGrid& grid) {
  const Ansatz a = make_ansatz(cfg, params, t);
  const auto n = static_cast<std::size_t>(cfg.n);
  const int omega_p = int_pow(cfg.omega, params.p);

  const StatePair state = approximate_solution(cfg, params, t, grid);
  const SpectralField wave_v = SpectralField::cosine(grid, n, a.amplitude, a.phase_v);
  const SpectralField u_x = derivative(state.u, 1);

  // ∂_t u + (carrier_v)^p ∂_x u with (carrier_v)^p = ω^p / n.
  SpectralField out = SpectralField::sine(grid, n, omega_p * a.amplitude, a.phase_u);
  out += (static_cast<double>(omega_p) / cfg.n) * u_x;

  // [(carrier_v + wave_v)^p − (carrier_v)^p] ∂_x u
  SpectralField wave_power = wave_v;
  SpectralField excess(grid);
  for (int k = 1; k <= params.p; ++k) {
    if (k > 1) wave_power = pointwise_product(wave_power, wave_v);
    excess += (binomial(params.p, k) * real_pow(a.carrier_v, params.p - k)) * wave_power;
  }
  out += pointwise_product(excess, u_x);

  out += nonlocal_I1(state, params);
  return out;
}

SpectralField component_leading(const ApproxConfig& cfg, const SystemParams& params, double t,
                                const PeriodicGrid& grid) {
  const Ansatz a = make_ansatz(cfg, params, t);
  const double n = cfg.n;
  const auto two_n = static_cast<std::size_t>(2 * cfg.n);
  const double p = params.p;
  const double w1 = int_pow(cfg.omega, params.p - 1);
  const double wp = int_pow(cfg.omega, params.p);
  const double e1 = 1.0 / p - 2.0 * cfg.s;

  // θ_u = nx − φ_u, θ_v = nx − φ_v.
  const double sum_phase = a.phase_u + a.phase_v;
  const SpectralField sin_sum = SpectralField::sine(grid, two_n, 1.0, sum_phase);   // sin(θ_u + θ_v)
  const SpectralField cos_sum = SpectralField::cosine(grid, two_n, 1.0, sum_phase); // cos(θ_u + θ_v)
  const double sin_u_minus_v = std::sin(a.phase_v - a.phase_u);                      // sin(θ_u − θ_v)
  const double cos_u_minus_v = std::cos(a.phase_v - a.phase_u);                      // cos(θ_u − θ_v)

  // cos θ_v sin θ_u = ½[sin(θ_u+θ_v) + sin(θ_u−θ_v)]
  const SpectralField cos_v_sin_u = 0.5 * (sin_sum + SpectralField::constant(grid, sin_u_minus_v));
  // cos θ_u sin θ_v = ½[sin(θ_v+θ_u) + sin(θ_v−θ_u)]
  const SpectralField cos_u_sin_v = 0.5 * (sin_sum - SpectralField::constant(grid, sin_u_minus_v));
  // sin θ_u sin θ_v = ½[cos(θ_u−θ_v) − cos(θ_u+θ_v)]
  const SpectralField sin_u_sin_v = 0.5 * (SpectralField::constant(grid, cos_u_minus_v) - cos_sum);

  SpectralField transport = (-p * w1 * std::pow(n, e1)) * cos_v_sin_u;

  SpectralField inner1 = SpectralField::sine(grid, static_cast<std::size_t>(cfg.n),
                                             -params.a * wp * std::pow(n, 1.0 / p - 1.0 / params.q - cfg.s),
                                             a.phase_v);
  inner1 += (w1 * (-params.a * std::pow(n, e1) + (p - params.a) * std::pow(n, e1 + 2.0))) * cos_u_sin_v;

  const SpectralField inner2 = (p * w1 * std::pow(n, e1 + 1.0)) * sin_u_sin_v;

  SpectralField out = transport;
  out += helmholtz_inverse(inner1);
  out += derivative(helmholtz_inverse(inner2), 1);
  return out;
}

}  // namespace

void ApproxConfig::validate(const SystemParams& params) const {
  params.validate();
  if (omega < -1 || omega > 1) throw std::invalid_argument("ApproxConfig: omega must be -1, 0 or 1");
  if (omega == 0 && (params.p % 2 != 0 || params.q % 2 != 0)) {
    throw std::invalid_argument("ApproxConfig: omega = 0 is reserved for even p and even q");
  }
  if (n < 1) throw std::invalid_argument("ApproxConfig: n must be positive");
  if (!std::isfinite(s)) throw std::invalid_argument("ApproxConfig: s must be finite");
}

void require_resolvable(int n, const SystemParams& params, const PeriodicGrid& grid) {
  const auto needed = static_cast<std::size_t>(4 * params.max_degree()) * static_cast<std::size_t>(n);
  if (needed > grid.size()) {
    std::ostringstream os;
    os << "frequency n=" << n << " needs N >= " << needed << " for degree " << params.max_degree()
       << " nonlinearities, grid has N=" << grid.size();
    throw FrequencyTooHigh(os.str());
  }
}

StatePair approximate_solution(const ApproxConfig& cfg, const SystemParams& params, double t,
                               const PeriodicGrid& grid) {
  cfg.validate(params);
  require_resolvable(cfg.n, params, grid);
  const Ansatz a = make_ansatz(cfg, params, t);
  const auto n = static_cast<std::size_t>(cfg.n);
  return {SpectralField::constant(grid, a.carrier_u) + SpectralField::cosine(grid, n, a.amplitude, a.phase_u),
          SpectralField::constant(grid, a.carrier_v) + SpectralField::cosine(grid, n, a.amplitude, a.phase_v)};
}

StatePair initial_data(const ApproxConfig& cfg, const SystemParams& params, const PeriodicGrid& grid) {
  return approximate_solution(cfg, params, 0.0, grid);
}

StatePair residual(const ApproxConfig& cfg, const SystemParams& params, double t, const PeriodicGrid& grid) {
  cfg.validate(params);
  require_resolvable(cfg.n, params, grid);
  return {component_residual(cfg, params, t, grid), component_residual(cfg, params.swapped(), t, grid)};
}

StatePair leading_error_expansion(const ApproxConfig& cfg, const SystemParams& params, double t,
                                  const PeriodicGrid& grid) {
  cfg.validate(params);
  require_resolvable(cfg.n, params, grid);
  return {component_leading(cfg, params, t, grid), component_leading(cfg, params.swapped(), t, grid)};
}

ResidualExponents predicted_r_j(double s, double sigma, const SystemParams& params) {
  params.validate();
  const double ip = 1.0 / params.p;
  const double iq = 1.0 / params.q;
  ResidualExponents e;
  if (s < iq - sigma + 4.0) {
    e.r = ip - 2.0 * s + 2.0;
    e.r_branch = 1;
  } else {
    e.r = ip - iq - s + sigma - 2.0;
    e.r_branch = 2;
  }
  if (s < ip - sigma + 4.0) {
    e.j = iq - 2.0 * s + 2.0;
    e.j_branch = 1;
  } else {
    e.j = iq - ip - s + sigma - 2.0;
    e.j_branch = 2;
  }
  return e;
}

BetaPrediction predicted_beta(double s, double sigma, const SystemParams& params) {
  const ResidualExponents e = predicted_r_j(s, sigma, params);
  BetaPrediction out;
  out.beta = params.p > params.q ? e.j : e.r;
  out.in_window = (2.5 < sigma + 1.0) && (sigma + 1.0 < s) && (sigma < 2.0);
  if (!out.in_window) {
    std::ostringstream os;
    os << "sigma=" << sigma << ", s=" << s << " outside the difference-estimate window 5/2 < sigma+1 < s, sigma < 2";
    out.warning = os.str();
  }
  return out;
}

AlphaPrediction predicted_alpha(double s, double sigma, double beta) {
  if (!(sigma < s)) throw std::invalid_argument("predicted_alpha: requires sigma < s");
  AlphaPrediction out;
  out.k = static_cast<int>(std::floor(s)) + 2;
  const double k = out.k;
  out.alpha = ((k - s) / (k - sigma)) * (beta + s - sigma);
  return out;
}

ExponentReport predict_exponents(double s, double sigma, const SystemParams& params) {
  const ResidualExponents e = predicted_r_j(s, sigma, params);
  const BetaPrediction b = predicted_beta(s, sigma, params);
  const AlphaPrediction a = predicted_alpha(s, sigma, b.beta);
  return {e.r, e.j, b.beta, a.alpha, e.r_branch, e.j_branch, a.k, b.in_window, b.warning};
}

StatePair explicit_difference(int n, const SystemParams& params, double s, double t, const PeriodicGrid& grid) {
  params.validate();
  if (params.p % 2 == 0 && params.q % 2 == 0) {
    throw std::invalid_argument("explicit_difference: p and q both even; use the omega in {1, 0} pair");
  }
  require_resolvable(n, params, grid);
  const double nn = n;
  const double amp = std::pow(nn, -s);
  const auto component = [&](int power, int carrier_power) {
    const double sign = (power % 2 == 0) ? 1.0 : -1.0;  // (−1)^power
    // 2n^{−1/c} − 2n^{−s} sin((2nx − t(1+(−1)^k))/2) sin(((−1)^k − 1)t/2)
    const double factor = -2.0 * amp * std::sin((sign - 1.0) * t / 2.0);
    return SpectralField::constant(grid, 2.0 * std::pow(nn, -1.0 / carrier_power)) +
           SpectralField::sine(grid, static_cast<std::size_t>(n), factor, t * (1.0 + sign) / 2.0);
  };
  return {component(params.p, params.q), component(params.q, params.p)};
}

InterpolationBound interpolation_bound(const SpectralField& f, double s1, double s, double s2) {
  if (!(s1 < s && s < s2)) throw std::invalid_argument("interpolation_bound: requires s1 < s < s2");
  const double theta = (s2 - s) / (s2 - s1);
  InterpolationBound out;
  out.lhs = sobolev_norm(f, s);
  out.rhs = std::pow(sobolev_norm(f, s1), theta) * std::pow(sobolev_norm(f, s2), 1.0 - theta);
  return out;
}

}  // namespace gch2
