#pragma once

#include <string>
#include <vector>

namespace cellscape {

struct SpectralConfig {
  int nw = 4;            // time-bandwidth product
  int k = 0;             // taper count, 0 = default 2*nw - 1
  bool adaptive = true;  // Percival-Walden adaptive weighting
  bool detrend = true;   // remove the series mean first

  int tapers() const { return k > 0 ? k : 2 * nw - 1; }
};

struct DpssTapers {
  int n = 0;
  int k = 0;
  std::vector<double> tapers;  // [taper * n + t], unit norm
  std::vector<double> lambda;  // in-band concentrations, descending

  const double* taper(int j) const { return tapers.data() + size_t(j) * size_t(n); }
};

// Discrete prolate spheroidal sequences: top-k eigenvectors of the symmetric
// tridiagonal Slepian matrix, sign-fixed (positive sum for even orders,
// positive leading half-sum for odd orders). Concentrations come from the
// quadratic form with the sinc kernel.
DpssTapers dpss_tapers(int n, int nw, int k);

struct Spectrum {
  std::vector<double> freqs;  // cycles per sample, 0 .. 0.5
  std::vector<double> psd;    // one-sided density
  std::vector<double> dof;    // effective degrees of freedom per frequency
  bool converged = true;
  int iterations = 0;
  std::vector<double> residual_trace;  // adaptive fixed-point residual per sweep
};

Spectrum multitaper_psd(const std::vector<double>& x, const SpectralConfig& cfg);

struct CrossSpectrum {
  std::vector<double> freqs;
  std::vector<double> coherency;  // magnitude-squared coherence
  std::vector<double> phase;      // radians in (-pi, pi], positive = y lags x
};

// Eigenvalue-weighted cross spectrum of x against y; needs k >= 2.
CrossSpectrum multitaper_cross(const std::vector<double>& x, const std::vector<double>& y,
                               const SpectralConfig& cfg);

void write_spectrum_csv(const std::string& path, const Spectrum& s);
void write_cross_csv(const std::string& path, const CrossSpectrum& c);

// Index of the local PSD maximum nearest the target frequency, searching
// peaks that exceed both neighbors; -1 if none within max_dist_bins.
int nearest_peak_bin(const std::vector<double>& psd, double target_freq, double df,
                     int max_dist_bins);

}  // namespace cellscape
