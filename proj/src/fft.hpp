#pragma once

// Thin FFTW wrapper. Plans are cached per size and shared between threads;
// execution uses the new-array interface, which FFTW allows concurrently.

#include <complex>
#include <cstddef>
#include <span>

namespace gch2::detail {

/// out[k] = Σ_j in[j] e^{−2πijk/N}, k = 0 .. N/2 (unnormalized).
void forward_r2c(std::span<const double> in, std::span<std::complex<double>> out);

/// out[j] = Σ_k in[k] e^{2πijk/N} over the Hermitian-completed spectrum.
void backward_c2r(std::span<const std::complex<double>> in, std::span<double> out);

}  // namespace gch2::detail
