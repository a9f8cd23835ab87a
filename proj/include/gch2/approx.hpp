#pragma once

/// @file approx.hpp
/// @brief High-frequency approximate solutions, their residuals, and the
/// exponent predictions that accompany them.
///
/// The family is
///   u^{ω,n} = ω n^{−1/q} + n^{−s} cos(nx − ω^p t),
///   v^{ω,n} = ω n^{−1/p} + n^{−s} cos(nx − ω^q t),
/// a small constant carrier plus one fast wave riding on it.

#include <string>

#include "gch2/model.hpp"
#include "gch2/spectral.hpp"

namespace gch2 {

class FrequencyTooHigh : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ApproxConfig {
  int omega = 1;  ///< −1, 0 or +1; 0 only when p and q are both even
  int n = 64;     ///< wave frequency
  double s = 3.0;

  void validate(const SystemParams& params) const;
};

/// Throws FrequencyTooHigh unless 4 · (max(p,q)+1) · n ≤ N, which keeps every
/// nonlinear product of the ansatz below the 2/3 cutoff.
void require_resolvable(int n, const SystemParams& params, const PeriodicGrid& grid);

StatePair approximate_solution(const ApproxConfig& cfg, const SystemParams& params, double t,
                               const PeriodicGrid& grid);

/// Initial data of the actual solutions: the approximate solution at t = 0.
StatePair initial_data(const ApproxConfig& cfg, const SystemParams& params, const PeriodicGrid& grid);

/// Residuals (E, F) obtained by substituting the ansatz into the nonlocal system.
///
/// ∂_t is taken analytically. The transport term is split with the binomial
/// theorem: the carrier power (ω n^{−1/p})^p = ω^p/n cancels ∂_t u^{ω,n}
/// identically, and only the remaining sum Σ_{k≥1} C(p,k)(ω n^{−1/p})^{p−k} δ^k ∂_x u
/// is evaluated spectrally (δ the oscillatory part of v^{ω,n}). The cancelling
/// pair is still formed in coefficient space, so any floating mismatch shows up.
StatePair residual(const ApproxConfig& cfg, const SystemParams& params, double t, const PeriodicGrid& grid);

/// Closed-form leading part of (E, F): the k = 1 transport term, the three
/// leading sinusoids of the first nonlocal piece and the product-to-sum pair of
/// the second, each with its Helmholtz multiplier applied per mode.
StatePair leading_error_expansion(const ApproxConfig& cfg, const SystemParams& params, double t,
                                  const PeriodicGrid& grid);

struct ResidualExponents {
  double r = 0.0;
  double j = 0.0;
  int r_branch = 1;  ///< 1: s below the threshold 1/q − σ + 4, 2 otherwise
  int j_branch = 1;  ///< 1: s below the threshold 1/p − σ + 4, 2 otherwise
};

/// Predicted decay exponents of ‖E‖_{H^σ} and ‖F‖_{H^σ}. At the threshold both
/// branches agree; it is reported as branch 2.
ResidualExponents predicted_r_j(double s, double sigma, const SystemParams& params);

struct BetaPrediction {
  double beta = 0.0;
  /// false when (s, σ) lies outside 5/2 < σ+1 < s, σ < 2. Not an error.
  bool in_window = true;
  std::string warning;
};

/// β = r if p < q, j if p > q, and r (= j) if p = q.
BetaPrediction predicted_beta(double s, double sigma, const SystemParams& params);

struct AlphaPrediction {
  double alpha = 0.0;
  int k = 0;  ///< ⌊s⌋ + 2
};

/// α = ((k−s)/(k−σ))(β + s − σ) with k = ⌊s⌋ + 2. Requires σ < s.
AlphaPrediction predicted_alpha(double s, double sigma, double beta);

struct ExponentReport {
  double r = 0.0;
  double j = 0.0;
  double beta = 0.0;
  double alpha = 0.0;
  int r_branch = 1;
  int j_branch = 1;
  int k = 0;
  bool beta_in_window = true;
  std::string warning;
};

ExponentReport predict_exponents(double s, double sigma, const SystemParams& params);

/// Closed form of (u^{1,n} − u^{−1,n}, v^{1,n} − v^{−1,n}) from the cos α − cos β
/// identity. Throws std::invalid_argument when p and q are both even.
StatePair explicit_difference(int n, const SystemParams& params, double s, double t, const PeriodicGrid& grid);

struct InterpolationBound {
  double lhs = 0.0;  ///< ‖f‖_{H^s}
  double rhs = 0.0;  ///< ‖f‖_{H^{s1}}^{(s2−s)/(s2−s1)} ‖f‖_{H^{s2}}^{(s−s1)/(s2−s1)}
};

/// Both sides of the Sobolev interpolation inequality. Requires s1 < s < s2.
InterpolationBound interpolation_bound(const SpectralField& f, double s1, double s, double s2);

}  // namespace gch2
