#pragma once

#include <vector>

#include "shiftmean/fourier.hpp"

namespace shiftmean {

/// Levels of a periodized Meyer basis. window_degree selects the auxiliary
/// polynomial of the Meyer window (0..4, 3 is the usual choice).
struct WaveletBasisSpec {
  int j0 = 3;
  int j1 = 7;
  int window_degree = 3;

  bool operator==(const WaveletBasisSpec&) const = default;
};

/// Integer frequencies where the level-j functions have nonzero Fourier coefficients.
struct FrequencySet {
  int level = 0;
  std::vector<int> indices;  ///< ascending
};

/// c_{j0,k} for k < 2^j0 and beta_{j,k} for j0 <= j <= j1, k < 2^j.
struct WaveletCoeffs {
  int j0 = 0;
  std::vector<double> coarse;
  std::vector<std::vector<double>> details;  ///< details[j - j0]

  static WaveletCoeffs zeros(int j0, int j1);
  int j1() const { return j0 + static_cast<int>(details.size()) - 1; }
  std::vector<double>& level(int j) { return details[static_cast<std::size_t>(j - j0)]; }
  const std::vector<double>& level(int j) const { return details[static_cast<std::size_t>(j - j0)]; }
  double squared_norm() const;
};

/// Auxiliary polynomial nu(t): 0 at t <= 0, 1 at t >= 1.
double meyer_polynomial(double t, int degree);

/// Fourier transform of the Meyer mother wavelet at frequency xi (cycles),
/// centred at x = 1/2: exp(-i pi xi) b(xi).
cplx meyer_wavelet_window(double xi, int degree = 3);
/// Fourier transform of the Meyer scaling function at frequency xi.
double meyer_scaling_window(double xi, int degree = 3);

/// psi^{j,k}_l = int_0^1 psi_{j,k}(x) exp(-2 pi i l x) dx of the periodized wavelet.
cplx psi_fourier(int j, int k, int ell, int degree = 3);
/// phi^{j0,k}_l of the periodized scaling function.
cplx phi_fourier(int j0, int k, int ell, int degree = 3);

FrequencySet omega(int j);
/// Frequencies carried by the level-j0 scaling functions.
FrequencySet omega_scaling(int j0);

/// Largest frequency touched by a basis with finest level j1.
int max_basis_frequency(int j1);
/// Largest level whose frequencies fit below N/2.
int max_level_for_grid(std::size_t grid_size);

/// Returns spec with j1 lowered to the grid ceiling (logging a warning) when needed.
WaveletBasisSpec clamp_to_grid(WaveletBasisSpec spec, std::size_t grid_size);

enum class TransformPath { Direct, Fast };

/// Plancherel sums beta_{j,k} = sum_l theta_l conj(psi^{j,k}_l), real for real signals.
/// Fast folds each level modulo 2^j and applies one FFT of length 2^j.
WaveletCoeffs analyze(const FourierCoeffs& theta, const WaveletBasisSpec& spec,
                      TransformPath path = TransformPath::Fast);

/// Spectrum of sum c phi + sum beta psi on frequencies -L..L.
FourierCoeffs synthesize(const WaveletCoeffs& w, const WaveletBasisSpec& spec, int max_freq,
                         TransformPath path = TransformPath::Fast);

}  // namespace shiftmean
