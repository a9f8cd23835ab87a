#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "gch2/model.hpp"
#include "oracles.hpp"

using namespace gch2;
using oracle::max_coeff_diff;

namespace {

/// c + Σ amp·cos(k x − phase) with analytic derivatives.
struct Trig {
  double c = 0.0;
  struct Wave {
    double amp;
    int k;
    double phase;
  };
  std::vector<Wave> waves;

  double d(double x, int order) const {
    double out = order == 0 ? c : 0.0;
    for (const auto& w : waves) {
      // d^m/dx^m cos(θ) = k^m cos(θ + mπ/2)
      out += w.amp * std::pow(w.k, order) * std::cos(w.k * x - w.phase + order * oracle::kPi / 2);
    }
    return out;
  }

  SpectralField field(const PeriodicGrid& grid) const {
    SpectralField f = SpectralField::constant(grid, c);
    for (const auto& w : waves) f += SpectralField::cosine(grid, w.k, w.amp, w.phase);
    return f;
  }
};

/// I₁ at x by quadrature convolution of the analytic integrand with the Green's function.
double I1_oracle(const Trig& u, const Trig& v, int p, double a, double x) {
  const auto integrand = [&](double y) {
    const double v0 = v.d(y, 0), v1 = v.d(y, 1), v2 = v.d(y, 2);
    const double u0 = u.d(y, 0), u1 = u.d(y, 1), u2 = u.d(y, 2);
    const double pw1 = p >= 1 ? std::pow(v0, p - 1) : 0.0;
    const double pw2 = p >= 2 ? (p - 1) * std::pow(v0, p - 2) : 0.0;
    const double vp_x = p * pw1 * v1;
    const double vp_xx = p * (pw2 * v1 * v1 + pw1 * v2);
    return (a / p) * vp_x * u0 + ((p - a) / p) * vp_x * u2 + (vp_xx * u1 + vp_x * u2);
  };
  return oracle::helmholtz_convolution(integrand, x);
}

SpectralField shift(const SpectralField& f, double x0) {
  std::vector<Complex> c(f.half_spectrum().begin(), f.half_spectrum().end());
  for (std::size_t k = 0; k < c.size(); ++k) c[k] *= std::exp(Complex(0.0, -static_cast<double>(k) * x0));
  return SpectralField(f.grid(), c);
}

}  // namespace

TEST_CASE("system parameters") {
  CHECK_NOTHROW(SystemParams{1, 2, 0.5, -3.0}.validate());
  CHECK_THROWS_AS((SystemParams{0, 1, 1.0, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((SystemParams{1, -1, 1.0, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((SystemParams{1, 1, NAN, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((SystemParams{1, 1, 1.0, INFINITY}.validate()), std::invalid_argument);
  const SystemParams p{1, 3, 2.0, 5.0};
  CHECK(p.swapped() == SystemParams{3, 1, 5.0, 2.0});
  CHECK(p.max_degree() == 4);
}

TEST_CASE("state pair requires one grid") {
  CHECK_THROWS_AS(StatePair(SpectralField(PeriodicGrid(16)), SpectralField(PeriodicGrid(32))), GridMismatch);
}

TEST_CASE("nonlocal terms vanish when the transported power is flat") {
  const PeriodicGrid grid(32);
  const auto wave = SpectralField::cosine(grid, 2, 0.4) + SpectralField::sine(grid, 5, 0.1);
  const auto c1 = SpectralField::constant(grid, 0.7);
  const auto c2 = SpectralField::constant(grid, -1.3);
  const SystemParams params{2, 3, 1.5, -0.5};
  CHECK(nonlocal_I1({c1, c2}, params).sup_norm() == 0.0);
  CHECK(nonlocal_I2({c1, c2}, params).sup_norm() == 0.0);
  CHECK(nonlocal_I1({wave, SpectralField(grid)}, params).sup_norm() == 0.0);
  CHECK(nonlocal_I2({SpectralField(grid), wave}, params).sup_norm() == 0.0);
}

TEST_CASE("I1 for u = v = cos x, p = 1, a = 2 is -sin(2x)/10") {
  const PeriodicGrid grid(32);
  const auto c = SpectralField::cosine(grid, 1, 1.0);
  const auto i1 = nonlocal_I1({c, c}, {1, 1, 2.0, 2.0});
  CHECK(max_coeff_diff(i1, SpectralField::sine(grid, 2, -0.1)) < 1e-16);

  const Trig cx{0.0, {{1.0, 1, 0.0}}};
  const auto vals = i1.values();
  double err = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) err = std::max(err, std::abs(vals[j] - I1_oracle(cx, cx, 1, 2.0, grid.point(j))));
  CHECK(err < 1e-8);
}

TEST_CASE("I1 matches quadrature convolution for mixed waves") {
  const PeriodicGrid grid(64);
  const Trig u{0.3, {{0.2, 2, 0.4}, {0.05, 3, -1.0}}};
  const Trig v{-0.25, {{0.3, 1, 0.9}, {0.1, 4, 0.2}}};
  for (const auto& [p, a] : {std::pair{1, 2.0}, std::pair{2, 3.0}, std::pair{3, -0.7}}) {
    CAPTURE(p);
    const auto i1 = nonlocal_I1({u.field(grid), v.field(grid)}, {p, 1, a, 1.0});
    const auto vals = i1.values();
    double err = 0.0;
    for (std::size_t j = 0; j < grid.size(); j += 4) {
      err = std::max(err, std::abs(vals[j] - I1_oracle(u, v, p, a, grid.point(j))));
    }
    CHECK(err < 1e-8);
  }
}

TEST_CASE("I2 is I1 with the components exchanged") {
  const PeriodicGrid grid(64);
  const auto u = SpectralField::constant(grid, 0.2) + SpectralField::cosine(grid, 3, 0.3, 0.1);
  const auto v = SpectralField::constant(grid, -0.4) + SpectralField::sine(grid, 2, 0.2);
  const SystemParams params{2, 3, 1.5, -0.5};
  CHECK(max_coeff_diff(nonlocal_I2({u, v}, params), nonlocal_I1({v, u}, params.swapped())) == 0.0);
}

TEST_CASE("rhs steady states") {
  const PeriodicGrid grid(32);
  const SystemParams params{2, 1, 3.0, 0.5};
  const StatePair constants{SpectralField::constant(grid, 0.7), SpectralField::constant(grid, -1.1)};
  const StatePair out = rhs(constants, params);
  CHECK(out.u.sup_norm() == 0.0);
  CHECK(out.v.sup_norm() == 0.0);
  const StatePair cos_zero{SpectralField::cosine(grid, 1, 1.0), SpectralField(grid)};
  const StatePair out2 = rhs(cos_zero, params);
  CHECK(out2.u.sup_norm() == 0.0);
  CHECK(out2.v.sup_norm() == 0.0);
}

TEST_CASE("rhs matches a finite-difference oracle on an 8x finer grid") {
  const PeriodicGrid coarse(32);
  const PeriodicGrid fine(256);
  const Trig u{0.3, {{0.2, 2, 0.0}, {0.1, 3, 0.5}}};
  const Trig v{-0.2, {{0.25, 1, -0.3}}};
  for (const SystemParams& params : {SystemParams{1, 1, 2.0, 2.0}, SystemParams{2, 3, 1.5, -0.7},
                                     SystemParams{3, 2, -1.0, 4.0}}) {
    CAPTURE(params.p);
    CAPTURE(params.q);
    const StatePair spectral = rhs({u.field(coarse), v.field(coarse)}, params);
    std::vector<double> uf(fine.size());
    std::vector<double> vf(fine.size());
    for (std::size_t j = 0; j < fine.size(); ++j) {
      uf[j] = u.d(fine.point(j), 0);
      vf[j] = v.d(fine.point(j), 0);
    }
    const auto fd = oracle::fd_rhs(uf, vf, params.p, params.q, params.a, params.b);
    const auto su = spectral.u.values();
    const auto sv = spectral.v.values();
    double err = 0.0;
    for (std::size_t j = 0; j < coarse.size(); ++j) {
      err = std::max(err, std::abs(su[j] - fd.ut[8 * j]));
      err = std::max(err, std::abs(sv[j] - fd.vt[8 * j]));
    }
    CHECK(err < 1e-6);
  }
}

TEST_CASE("rhs component swap symmetry") {
  const PeriodicGrid grid(64);
  const auto u = SpectralField::constant(grid, 0.1) + SpectralField::cosine(grid, 2, 0.3, 0.4);
  const auto v = SpectralField::constant(grid, 0.5) + SpectralField::sine(grid, 3, 0.2, 1.0);
  const SystemParams params{1, 3, 2.5, -1.0};
  const StatePair direct = rhs({u, v}, params);
  const StatePair mirrored = rhs({v, u}, params.swapped());
  CHECK(max_coeff_diff(direct.u, mirrored.v) < 1e-15);
  CHECK(max_coeff_diff(direct.v, mirrored.u) < 1e-15);
}

TEST_CASE("rhs is translation equivariant") {
  const PeriodicGrid grid(64);
  const auto u = SpectralField::constant(grid, 0.1) + SpectralField::cosine(grid, 2, 0.3, 0.4) +
                 SpectralField::sine(grid, 5, 0.05);
  const auto v = SpectralField::constant(grid, -0.3) + SpectralField::sine(grid, 3, 0.2, 1.0);
  const SystemParams params{2, 2, 3.0, 1.0};
  const double x0 = 0.813;
  const StatePair a = rhs({shift(u, x0), shift(v, x0)}, params);
  const StatePair b = rhs({u, v}, params);
  CHECK(max_coeff_diff(a.u, shift(b.u, x0)) < 1e-12);
  CHECK(max_coeff_diff(a.v, shift(b.v, x0)) < 1e-12);
}

TEST_CASE("rhs output is real") {
  const PeriodicGrid grid(32);
  const auto u = SpectralField::constant(grid, 0.1) + SpectralField::cosine(grid, 3, 0.3, 0.4);
  const auto v = SpectralField::sine(grid, 2, 0.2, 1.0);
  const StatePair out = rhs({u, v}, {3, 2, 1.0, 2.0});
  for (const SpectralField* f : {&out.u, &out.v}) {
    CHECK(f->coeff(0).imag() == 0.0);
    CHECK(f->coeff(16).imag() == 0.0);
    for (long k = 1; k < 16; ++k) CHECK(f->coeff(-k) == std::conj(f->coeff(k)));
  }
}

TEST_CASE("Camassa-Holm specialization") {
  // u_t = −u u_x − ∂(1−∂²)⁻¹(u² + u_x²/2), evaluated with collocation products on a large grid.
  const PeriodicGrid grid(128);
  const auto u = SpectralField::constant(grid, 0.4) + SpectralField::cosine(grid, 1, 0.6, 0.2) +
                 SpectralField::sine(grid, 4, 0.1);
  const auto uv = u.values();
  const auto uxv = derivative(u, 1).values();
  std::vector<double> transport(grid.size());
  std::vector<double> source(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    transport[j] = -uv[j] * uxv[j];
    source[j] = uv[j] * uv[j] + 0.5 * uxv[j] * uxv[j];
  }
  const auto ch = SpectralField::from_values(grid, transport) -
                  derivative(helmholtz_inverse(SpectralField::from_values(grid, source)), 1);
  const StatePair out = rhs({u, u}, {1, 1, 2.0, 2.0});
  CHECK(max_coeff_diff(out.u, ch) < 1e-10);
  CHECK(max_coeff_diff(out.v, ch) < 1e-10);
}

TEST_CASE("momentum") {
  const PeriodicGrid grid(32);
  const auto [m, n] = momentum({SpectralField::cosine(grid, 2, 1.0), SpectralField::constant(grid, 3.0)});
  CHECK(max_coeff_diff(m, SpectralField::cosine(grid, 2, 5.0)) < 1e-15);
  CHECK(max_coeff_diff(n, SpectralField::constant(grid, 3.0)) == 0.0);
  const auto u = SpectralField::sine(grid, 7, 0.3) + SpectralField::constant(grid, 1.0);
  const auto [m2, n2] = momentum({u, u});
  CHECK(max_coeff_diff(helmholtz_inverse(m2), u) < 1e-15);
}
