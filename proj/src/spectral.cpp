#include "gch2/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "fft.hpp"

namespace gch2 {

GridMismatch::GridMismatch(std::size_t lhs, std::size_t rhs)
    : std::invalid_argument("grid mismatch: N=" + std::to_string(lhs) + " vs N=" + std::to_string(rhs)) {}

PeriodicGrid::PeriodicGrid(std::size_t size) : size_(size) {
  if (size < 8 || size % 2 != 0) {
    throw std::invalid_argument("PeriodicGrid: N must be even and >= 8, got " + std::to_string(size));
  }
}

double PeriodicGrid::spacing() const noexcept { return 2.0 * std::numbers::pi / static_cast<double>(size_); }

double PeriodicGrid::point(std::size_t j) const noexcept {
  return 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(size_);
}

std::vector<double> PeriodicGrid::points() const {
  std::vector<double> x(size_);
  for (std::size_t j = 0; j < size_; ++j) x[j] = point(j);
  return x;
}

SpectralField::SpectralField(PeriodicGrid grid) : grid_(grid), coeffs_(grid.num_modes()) {}

SpectralField::SpectralField(PeriodicGrid grid, std::vector<Complex> half) : grid_(grid), coeffs_(std::move(half)) {
  if (coeffs_.size() != grid_.num_modes()) {
    throw std::invalid_argument("SpectralField: expected " + std::to_string(grid_.num_modes()) +
                                " coefficients, got " + std::to_string(coeffs_.size()));
  }
  enforce_reality();
}

void SpectralField::enforce_reality() noexcept {
  coeffs_.front() = Complex(coeffs_.front().real(), 0.0);
  coeffs_.back() = Complex(coeffs_.back().real(), 0.0);
}

SpectralField SpectralField::from_values(PeriodicGrid grid, std::span<const double> values) {
  if (values.size() != grid.size()) throw GridMismatch(values.size(), grid.size());
  std::vector<Complex> half(grid.num_modes());
  detail::forward_r2c(values, half);
  const double scale = 1.0 / static_cast<double>(grid.size());
  for (auto& c : half) c *= scale;
  return SpectralField(grid, std::move(half));
}

SpectralField SpectralField::sample(PeriodicGrid grid, const std::function<double(double)>& f) {
  std::vector<double> values(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) values[j] = f(grid.point(j));
  return from_values(grid, values);
}

SpectralField SpectralField::constant(PeriodicGrid grid, double c) {
  SpectralField f(grid);
  f.coeffs_.front() = c;
  return f;
}

namespace {

void check_mode(const PeriodicGrid& grid, std::size_t k) {
  if (k >= grid.nyquist()) {
    throw std::invalid_argument("mode k=" + std::to_string(k) + " not representable on N=" +
                                std::to_string(grid.size()) + " (need k < N/2)");
  }
}

}  // namespace

SpectralField SpectralField::cosine(PeriodicGrid grid, std::size_t k, double amplitude, double phase) {
  check_mode(grid, k);
  SpectralField f(grid);
  if (k == 0) {
    f.coeffs_[0] = amplitude * std::cos(phase);
  } else {
    // cos(kx − φ) = (e^{i(kx−φ)} + e^{−i(kx−φ)})/2
    f.coeffs_[k] = 0.5 * amplitude * std::polar(1.0, -phase);
  }
  return f;
}

SpectralField SpectralField::sine(PeriodicGrid grid, std::size_t k, double amplitude, double phase) {
  check_mode(grid, k);
  SpectralField f(grid);
  if (k == 0) {
    f.coeffs_[0] = -amplitude * std::sin(phase);
  } else {
    // sin(kx − φ) = (e^{i(kx−φ)} − e^{−i(kx−φ)})/(2i)
    f.coeffs_[k] = Complex(0.0, -0.5 * amplitude) * std::polar(1.0, -phase);
  }
  return f;
}

Complex SpectralField::coeff(long k) const {
  const long half = static_cast<long>(grid_.nyquist());
  if (k <= -half || k > half) {
    throw std::out_of_range("coefficient index " + std::to_string(k) + " outside (-N/2, N/2]");
  }
  return k >= 0 ? coeffs_[static_cast<std::size_t>(k)] : std::conj(coeffs_[static_cast<std::size_t>(-k)]);
}

std::vector<double> SpectralField::values() const {
  std::vector<double> out(grid_.size());
  detail::backward_c2r(coeffs_, out);
  return out;
}

double SpectralField::sup_norm() const {
  double sup = 0.0;
  for (double x : values()) {
    if (!std::isfinite(x)) return std::numeric_limits<double>::infinity();
    sup = std::max(sup, std::abs(x));
  }
  return sup;
}

std::size_t SpectralField::max_active_mode(double tol) const {
  double largest = 0.0;
  for (const auto& c : coeffs_) largest = std::max(largest, std::abs(c));
  if (largest == 0.0) return 0;
  for (std::size_t k = coeffs_.size(); k-- > 0;) {
    if (std::abs(coeffs_[k]) > tol * largest) return k;
  }
  return 0;
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  require_same_grid(*this, other);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] += other.coeffs_[k];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  require_same_grid(*this, other);
  for (std::size_t k = 0; k < coeffs_.size(); ++k) coeffs_[k] -= other.coeffs_[k];
  return *this;
}

SpectralField& SpectralField::operator*=(double c) noexcept {
  for (auto& x : coeffs_) x *= c;
  return *this;
}

void require_same_grid(const SpectralField& f, const SpectralField& g) {
  if (f.grid() != g.grid()) throw GridMismatch(f.grid().size(), g.grid().size());
}

SpectralField apply_multiplier(const SpectralField& f, const std::function<double(double)>& m) {
  SpectralField out = f;
  auto coeffs = out.half_spectrum();
  for (std::size_t k = 0; k < coeffs.size(); ++k) coeffs[k] *= m(static_cast<double>(k));
  return out;
}

SpectralField derivative(const SpectralField& f, int order) {
  if (order < 1) throw std::invalid_argument("derivative: order must be positive");
  SpectralField out = f;
  auto coeffs = out.half_spectrum();
  // (ik)^order = k^order · i^order
  static constexpr Complex kUnitPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const Complex unit = kUnitPowers[order % 4];
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    coeffs[k] *= unit * std::pow(static_cast<double>(k), order);
  }
  if (order % 2 == 1) coeffs.back() = 0.0;
  return out;
}

SpectralField helmholtz_inverse(const SpectralField& f) {
  return apply_multiplier(f, [](double k) { return 1.0 / (1.0 + k * k); });
}

SpectralField lambda_power(const SpectralField& f, double s) {
  if (s == 0.0) return f;
  return apply_multiplier(f, [s](double k) { return std::pow(1.0 + k * k, 0.5 * s); });
}

double sobolev_norm(const SpectralField& f, double s) {
  const auto coeffs = f.half_spectrum();
  const std::size_t nyq = coeffs.size() - 1;
  double sum = 0.0;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const double kk = static_cast<double>(k);
    const double weight = (k == 0 || k == nyq) ? 1.0 : 2.0;
    const double mag2 = std::norm(coeffs[k]);
    if (mag2 == 0.0) continue;
    sum += weight * std::pow(1.0 + kk * kk, s) * mag2;
  }
  return std::sqrt(2.0 * std::numbers::pi * sum);
}

double pair_norm(const SpectralField& u, const SpectralField& v, double s) {
  require_same_grid(u, v);
  return sobolev_norm(u, s) + sobolev_norm(v, s);
}

SpectralField dealias(const SpectralField& f) {
  SpectralField out = f;
  auto coeffs = out.half_spectrum();
  const std::size_t cutoff = f.grid().dealias_cutoff();
  for (std::size_t k = cutoff + 1; k < coeffs.size(); ++k) coeffs[k] = 0.0;
  return out;
}

SpectralField pointwise_product(const SpectralField& f, const SpectralField& g) {
  require_same_grid(f, g);
  const double f0 = f.mean();
  const double g0 = g.mean();

  SpectralField f_osc = f;
  SpectralField g_osc = g;
  f_osc.half_spectrum()[0] = 0.0;
  g_osc.half_spectrum()[0] = 0.0;

  SpectralField out(f.grid());
  const bool f_flat = f.max_active_mode(0.0) == 0;
  const bool g_flat = g.max_active_mode(0.0) == 0;
  if (!f_flat && !g_flat) {
    std::vector<double> fv = f_osc.values();
    const std::vector<double> gv = g_osc.values();
    for (std::size_t j = 0; j < fv.size(); ++j) fv[j] *= gv[j];
    out = SpectralField::from_values(f.grid(), fv);
  }
  // (f0 + f~)(g0 + g~) = f0 g0 + f0 g~ + g0 f~ + f~ g~
  auto oc = out.half_spectrum();
  const auto fc = f_osc.half_spectrum();
  const auto gc = g_osc.half_spectrum();
  for (std::size_t k = 1; k < oc.size(); ++k) oc[k] += f0 * gc[k] + g0 * fc[k];
  oc[0] += f0 * g0;
  return dealias(out);
}

SpectralField integer_power(const SpectralField& f, int power) {
  if (power < 1) throw std::invalid_argument("integer_power: power must be >= 1");
  SpectralField out = dealias(f);
  for (int i = 1; i < power; ++i) out = pointwise_product(out, f);
  return out;
}

}  // namespace gch2
