#pragma once

/// @file spectral.hpp
/// @brief Periodic Fourier substrate: grids, spectral fields, multipliers and
/// Sobolev norms on the torus [0, 2π).
///
/// Coefficients follow ĉ(k) = (1/2π) ∫₀^{2π} f(x) e^{−ikx} dx, so a field is
/// f(x) = Σ_k ĉ(k) e^{ikx} with k = −N/2+1 .. N/2. Only real fields are
/// represented: the half spectrum k = 0 .. N/2 is stored and negative modes
/// follow from Hermitian symmetry.

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace gch2 {

using Complex = std::complex<double>;

class GridMismatch : public std::invalid_argument {
 public:
  GridMismatch(std::size_t lhs, std::size_t rhs);
};

/// Uniform collocation grid x_j = 2πj/N on [0, 2π).
class PeriodicGrid {
 public:
  /// Throws std::invalid_argument unless N is even and at least 8.
  explicit PeriodicGrid(std::size_t size);

  std::size_t size() const noexcept { return size_; }
  /// Number of stored modes, k = 0 .. N/2.
  std::size_t num_modes() const noexcept { return size_ / 2 + 1; }
  std::size_t nyquist() const noexcept { return size_ / 2; }
  /// Largest wavenumber kept by the 2/3 rule.
  std::size_t dealias_cutoff() const noexcept { return size_ / 3; }
  double spacing() const noexcept;
  double point(std::size_t j) const noexcept;
  std::vector<double> points() const;

  friend bool operator==(const PeriodicGrid&, const PeriodicGrid&) = default;

 private:
  std::size_t size_;
};

/// Real periodic function held by its Fourier coefficients.
class SpectralField {
 public:
  explicit SpectralField(PeriodicGrid grid);
  /// `half` holds ĉ(0) .. ĉ(N/2). Imaginary parts of ĉ(0) and ĉ(N/2) are
  /// discarded so the field stays real.
  SpectralField(PeriodicGrid grid, std::vector<Complex> half);

  static SpectralField from_values(PeriodicGrid grid, std::span<const double> values);
  static SpectralField sample(PeriodicGrid grid, const std::function<double(double)>& f);
  static SpectralField constant(PeriodicGrid grid, double c);
  /// amplitude · cos(k x − phase), built directly in coefficient space.
  static SpectralField cosine(PeriodicGrid grid, std::size_t k, double amplitude, double phase = 0.0);
  /// amplitude · sin(k x − phase), built directly in coefficient space.
  static SpectralField sine(PeriodicGrid grid, std::size_t k, double amplitude, double phase = 0.0);

  const PeriodicGrid& grid() const noexcept { return grid_; }
  std::span<const Complex> half_spectrum() const noexcept { return coeffs_; }
  std::span<Complex> half_spectrum() noexcept { return coeffs_; }

  /// ĉ(k) for any k in (−N/2, N/2].
  Complex coeff(long k) const;
  double mean() const noexcept { return coeffs_.front().real(); }

  /// Collocation values f(x_j).
  std::vector<double> values() const;
  /// max_j |f(x_j)|.
  double sup_norm() const;
  /// Highest wavenumber whose coefficient exceeds `tol` times the largest one.
  std::size_t max_active_mode(double tol = 1e-14) const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double c) noexcept;

  friend SpectralField operator+(SpectralField lhs, const SpectralField& rhs) { return lhs += rhs; }
  friend SpectralField operator-(SpectralField lhs, const SpectralField& rhs) { return lhs -= rhs; }
  friend SpectralField operator*(double c, SpectralField f) { return f *= c; }
  friend SpectralField operator*(SpectralField f, double c) { return f *= c; }
  friend SpectralField operator-(SpectralField f) { return f *= -1.0; }

 private:
  void enforce_reality() noexcept;

  PeriodicGrid grid_;
  std::vector<Complex> coeffs_;
};

void require_same_grid(const SpectralField& f, const SpectralField& g);

/// Applies ĉ(k) ↦ m(k) ĉ(k) for a real, even multiplier m.
SpectralField apply_multiplier(const SpectralField& f, const std::function<double(double)>& m);

/// ∂_x^order. Odd orders zero the Nyquist mode, whose derivative is not real.
SpectralField derivative(const SpectralField& f, int order = 1);

/// (1 − ∂_x²)^{−1}, the multiplier 1/(1+k²).
SpectralField helmholtz_inverse(const SpectralField& f);

/// (1 − ∂_x²)^{s/2}, the multiplier (1+k²)^{s/2}.
SpectralField lambda_power(const SpectralField& f, double s);

/// ‖f‖_{H^s} = (2π Σ_k (1+k²)^s |ĉ(k)|²)^{1/2}.
double sobolev_norm(const SpectralField& f, double s);

/// ‖(u,v)‖_s = ‖u‖_{H^s} + ‖v‖_{H^s}.
double pair_norm(const SpectralField& u, const SpectralField& v, double s);

/// Zeroes every mode with |k| > N/3.
SpectralField dealias(const SpectralField& f);

/// Dealiased product f·g. The means are split off and multiplied exactly; only
/// the mean-free parts go through the collocation grid, so round-off scales
/// with the oscillatory amplitudes rather than with large constant carriers.
SpectralField pointwise_product(const SpectralField& f, const SpectralField& g);

/// f^power by repeated pointwise_product (power >= 1).
SpectralField integer_power(const SpectralField& f, int power);

}  // namespace gch2
