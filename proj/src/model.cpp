#include "gch2/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gch2 {

void SystemParams::validate() const {
  if (p < 1 || q < 1) {
    throw std::invalid_argument("SystemParams: p and q must be positive integers (p=" + std::to_string(p) +
                                ", q=" + std::to_string(q) + ")");
  }
  if (!std::isfinite(a) || !std::isfinite(b)) throw std::invalid_argument("SystemParams: a and b must be finite");
}

StatePair::StatePair(SpectralField u_, SpectralField v_) : u(std::move(u_)), v(std::move(v_)) {
  require_same_grid(u, v);
}

StatePair& StatePair::operator+=(const StatePair& other) {
  u += other.u;
  v += other.v;
  return *this;
}

StatePair& StatePair::operator-=(const StatePair& other) {
  u -= other.u;
  v -= other.v;
  return *this;
}

StatePair& StatePair::operator*=(double c) {
  u *= c;
  v *= c;
  return *this;
}

namespace {

// Nonlocal term for the component `self` driven by `other`:
//   H[(c/k)(other^k)_x self + ((k−c)/k)(other^k)_x self_xx] + H ∂((other^k)_x self_x)
// given the precomputed (other^k)_x.
SpectralField nonlocal_term(const SpectralField& self, const SpectralField& other_power_x, int k, double c) {
  const double kk = static_cast<double>(k);
  const SpectralField self_x = derivative(self, 1);
  const SpectralField self_xx = derivative(self, 2);

  SpectralField bracket = (c / kk) * pointwise_product(other_power_x, self);
  bracket += ((kk - c) / kk) * pointwise_product(other_power_x, self_xx);
  SpectralField out = helmholtz_inverse(bracket);
  out += helmholtz_inverse(derivative(pointwise_product(other_power_x, self_x), 1));
  return out;
}

}  // namespace

SpectralField nonlocal_I1(const StatePair& state, const SystemParams& params) {
  params.validate();
  const SpectralField vp_x = derivative(integer_power(state.v, params.p), 1);
  return nonlocal_term(state.u, vp_x, params.p, params.a);
}

SpectralField nonlocal_I2(const StatePair& state, const SystemParams& params) {
  return nonlocal_I1(state.swapped(), params.swapped());
}

StatePair rhs(const StatePair& state, const SystemParams& params) {
  params.validate();
  const SpectralField vp = integer_power(state.v, params.p);
  const SpectralField uq = integer_power(state.u, params.q);

  SpectralField du = -pointwise_product(vp, derivative(state.u, 1));
  du -= nonlocal_term(state.u, derivative(vp, 1), params.p, params.a);

  SpectralField dv = -pointwise_product(uq, derivative(state.v, 1));
  dv -= nonlocal_term(state.v, derivative(uq, 1), params.q, params.b);

  return {std::move(du), std::move(dv)};
}

std::pair<SpectralField, SpectralField> momentum(const StatePair& state) {
  const auto m = [](const SpectralField& f) { return apply_multiplier(f, [](double k) { return 1.0 + k * k; }); };
  return {m(state.u), m(state.v)};
}

}  // namespace gch2
