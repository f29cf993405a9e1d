#pragma once

#include <complex>
#include <span>
#include <vector>

namespace shiftmean::fft {

using cplx = std::complex<double>;

// Unnormalized DFTs backed by FFTW. Plans are cached per size; execution is
// thread safe.

/// out[k] = sum_n in[n] exp(-2 pi i k n / size)
std::vector<cplx> forward(std::span<const cplx> in);

/// out[n] = sum_k in[k] exp(+2 pi i k n / size)
std::vector<cplx> backward(std::span<const cplx> in);

/// Forward transform of real input, full complex output of the same length.
std::vector<cplx> forward_real(std::span<const double> in);

bool is_power_of_two(std::size_t n);

}  // namespace shiftmean::fft
