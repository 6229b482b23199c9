#include "spectral.hpp"

#include <fftw3.h>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>

#include "csvio.hpp"
#include "error.hpp"

namespace cellscape {

namespace {

// FFTW planning is not thread-safe; execution of independent plans is.
std::mutex g_fftw_mutex;

struct RealFft {
  int n;
  double* in;
  fftw_complex* out;
  fftw_plan plan;

  explicit RealFft(int n_) : n(n_) {
    std::lock_guard<std::mutex> lk(g_fftw_mutex);
    in = fftw_alloc_real(size_t(n));
    out = fftw_alloc_complex(size_t(n / 2 + 1));
    plan = fftw_plan_dft_r2c_1d(n, in, out, FFTW_ESTIMATE);
    require_internal(plan != nullptr, "fftw plan creation failed");
  }
  ~RealFft() {
    std::lock_guard<std::mutex> lk(g_fftw_mutex);
    fftw_destroy_plan(plan);
    fftw_free(in);
    fftw_free(out);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  void run() { fftw_execute(plan); }
};

// y = T v for the symmetric Toeplitz sinc kernel, via circulant embedding.
std::vector<double> toeplitz_sinc_matvec(const std::vector<double>& kernel,
                                         const std::vector<std::vector<double>>& vecs) {
  const int n = int(kernel.size());
  const int m = 2 * n;
  std::vector<double> col(size_t(m), 0.0);
  for (int i = 0; i < n; ++i) col[size_t(i)] = kernel[size_t(i)];
  for (int i = 1; i < n; ++i) col[size_t(m - i)] = kernel[size_t(i)];

  std::vector<std::complex<double>> kf(size_t(m / 2 + 1));
  {
    RealFft fft(m);
    std::copy(col.begin(), col.end(), fft.in);
    fft.run();
    for (int i = 0; i <= m / 2; ++i) kf[size_t(i)] = {fft.out[size_t(i)][0], fft.out[size_t(i)][1]};
  }

  std::vector<double> lambdas;
  lambdas.reserve(vecs.size());
  RealFft fwd(m);
  fftw_complex* spec = fftw_alloc_complex(size_t(m / 2 + 1));
  double* back = fftw_alloc_real(size_t(m));
  fftw_plan inv;
  {
    std::lock_guard<std::mutex> lk(g_fftw_mutex);
    inv = fftw_plan_dft_c2r_1d(m, spec, back, FFTW_ESTIMATE);
  }
  for (const auto& v : vecs) {
    std::fill(fwd.in, fwd.in + m, 0.0);
    std::copy(v.begin(), v.end(), fwd.in);
    fwd.run();
    for (int i = 0; i <= m / 2; ++i) {
      const std::complex<double> p =
          kf[size_t(i)] * std::complex<double>{fwd.out[size_t(i)][0], fwd.out[size_t(i)][1]};
      spec[size_t(i)][0] = p.real();
      spec[size_t(i)][1] = p.imag();
    }
    fftw_execute(inv);
    double lam = 0.0;
    for (int i = 0; i < n; ++i) lam += v[size_t(i)] * back[size_t(i)] / double(m);
    lambdas.push_back(lam);
  }
  {
    std::lock_guard<std::mutex> lk(g_fftw_mutex);
    fftw_destroy_plan(inv);
    fftw_free(spec);
    fftw_free(back);
  }
  return lambdas;
}

}  // namespace

DpssTapers dpss_tapers(int n, int nw, int k) {
  require_input(n >= 8, "dpss needs series length >= 8");
  require_input(nw >= 1, "time-bandwidth product must be >= 1");
  require_input(k >= 1, "taper count must be >= 1");
  require_input(k <= 2 * nw - 1, "taper count exceeds 2*nw - 1");
  require_input(double(nw) / double(n) < 0.5, "bandwidth nw/n must be below 0.5");

  const double W = double(nw) / double(n);
  const double costw = std::cos(2.0 * M_PI * W);

  // Tridiagonal Slepian commuting matrix.
  std::vector<double> diag(static_cast<size_t>(n)), off(static_cast<size_t>(n - 1));
  for (int t = 0; t < n; ++t) {
    const double h = 0.5 * double(n - 1) - double(t);
    diag[size_t(t)] = h * h * costw;
  }
  for (int t = 1; t < n; ++t) off[size_t(t - 1)] = 0.5 * double(t) * double(n - t);

  std::vector<double> evals(static_cast<size_t>(n));
  std::vector<double> evecs(size_t(n) * size_t(k));
  std::vector<lapack_int> isuppz(size_t(2 * k));
  lapack_int m_found = 0;
  const lapack_int info = LAPACKE_dstevr(
      LAPACK_COL_MAJOR, 'V', 'I', n, diag.data(), off.data(), 0.0, 0.0, n - k + 1, n, 0.0,
      &m_found, evals.data(), evecs.data(), n, isuppz.data());
  require_internal(info == 0 && m_found == k,
                   "tridiagonal eigensolver failed (info=" + std::to_string(info) + ")");

  DpssTapers out;
  out.n = n;
  out.k = k;
  out.tapers.assign(size_t(k) * size_t(n), 0.0);
  std::vector<std::vector<double>> vecs(static_cast<size_t>(k));
  for (int j = 0; j < k; ++j) {
    // Column k-1-j holds the j-th largest eigenvalue's vector.
    const double* src = evecs.data() + size_t(k - 1 - j) * size_t(n);
    std::vector<double> v(src, src + n);
    // Eigenvectors of the persymmetric tridiagonal are symmetric (even j) or
    // antisymmetric (odd j) about the midpoint; project out rounding noise.
    for (int t = 0; t < n / 2; ++t) {
      const double a = v[size_t(t)], b = v[size_t(n - 1 - t)];
      if (j % 2 == 0) {
        const double m = 0.5 * (a + b);
        v[size_t(t)] = m;
        v[size_t(n - 1 - t)] = m;
      } else {
        const double m = 0.5 * (a - b);
        v[size_t(t)] = m;
        v[size_t(n - 1 - t)] = -m;
      }
    }
    if (j % 2 == 1 && n % 2 == 1) v[size_t(n / 2)] = 0.0;
    double norm = 0.0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    require_internal(norm > 0.0, "degenerate dpss eigenvector");

    double pick = 0.0;
    if (j % 2 == 0) {
      for (double x : v) pick += x;
    } else {
      for (int t = 0; t < n / 2; ++t) pick += v[size_t(t)];
    }
    const double sign = pick < 0.0 ? -1.0 : 1.0;
    for (double& x : v) x *= sign / norm;
    std::copy(v.begin(), v.end(), out.tapers.begin() + size_t(j) * size_t(n));
    vecs[size_t(j)] = std::move(v);
  }

  // In-band concentrations via the sinc-kernel quadratic form.
  std::vector<double> kernel(static_cast<size_t>(n));
  kernel[0] = 2.0 * W;
  for (int i = 1; i < n; ++i) kernel[size_t(i)] = std::sin(2.0 * M_PI * W * i) / (M_PI * i);
  out.lambda = toeplitz_sinc_matvec(kernel, vecs);
  // The top concentrations of wide-band tapers differ by less than double
  // rounding; only require non-increasing order up to that slack.
  for (int j = 1; j < k; ++j)
    require_internal(out.lambda[size_t(j)] <= out.lambda[size_t(j - 1)] + 1e-9,
                     "dpss concentrations out of order");
  return out;
}

namespace {

struct EigenSpectra {
  int n = 0;
  int n_freq = 0;
  std::vector<std::vector<std::complex<double>>> coeff;  // [taper][freq]
  std::vector<double> lambda;
  double variance = 0.0;
};

EigenSpectra eigencoefficients(const std::vector<double>& x, const SpectralConfig& cfg) {
  const int n = int(x.size());
  require_input(n >= 16, "spectral estimation needs at least 16 samples");
  for (double v : x) require_input(std::isfinite(v), "non-finite sample in input series");

  const int k = cfg.tapers();
  require_input(cfg.k == 0 || cfg.k <= 2 * cfg.nw - 1, "taper count exceeds 2*nw - 1");
  const DpssTapers tapers = dpss_tapers(n, cfg.nw, k);

  std::vector<double> xd(x);
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= double(n);
  if (cfg.detrend)
    for (double& v : xd) v -= mean;
  double var = 0.0;
  {
    double m2 = 0.0;
    for (double v : xd) m2 += v;
    m2 /= double(n);
    for (double v : xd) var += (v - m2) * (v - m2);
    var /= double(n);
  }

  EigenSpectra es;
  es.n = n;
  es.n_freq = n / 2 + 1;
  es.lambda = tapers.lambda;
  es.variance = var;
  es.coeff.resize(size_t(k));
  RealFft fft(n);
  for (int j = 0; j < k; ++j) {
    const double* tp = tapers.taper(j);
    for (int t = 0; t < n; ++t) fft.in[t] = tp[t] * xd[size_t(t)];
    fft.run();
    auto& c = es.coeff[size_t(j)];
    c.resize(size_t(es.n_freq));
    for (int f = 0; f < es.n_freq; ++f) c[size_t(f)] = {fft.out[f][0], fft.out[f][1]};
  }
  return es;
}

}  // namespace

Spectrum multitaper_psd(const std::vector<double>& x, const SpectralConfig& cfg) {
  const EigenSpectra es = eigencoefficients(x, cfg);
  const int n = es.n, nf = es.n_freq, k = int(es.coeff.size());

  // Two-sided eigenspectra.
  std::vector<std::vector<double>> sk(static_cast<size_t>(k),
                                      std::vector<double>(static_cast<size_t>(nf), 0.0));
  for (int j = 0; j < k; ++j)
    for (int f = 0; f < nf; ++f) sk[size_t(j)][size_t(f)] = std::norm(es.coeff[size_t(j)][size_t(f)]);

  Spectrum sp;
  sp.freqs.resize(size_t(nf));
  for (int f = 0; f < nf; ++f) sp.freqs[size_t(f)] = double(f) / double(n);
  std::vector<double> s(size_t(nf), 0.0);
  sp.dof.assign(size_t(nf), 2.0 * double(k));

  if (!cfg.adaptive || k < 2) {
    double lsum = 0.0;
    for (int j = 0; j < k; ++j) lsum += es.lambda[size_t(j)];
    for (int f = 0; f < nf; ++f) {
      double acc = 0.0;
      for (int j = 0; j < k; ++j) acc += es.lambda[size_t(j)] * sk[size_t(j)][size_t(f)];
      s[size_t(f)] = acc / lsum;
    }
    double l2 = 0.0;
    for (int j = 0; j < k; ++j) l2 += es.lambda[size_t(j)] * es.lambda[size_t(j)];
    sp.dof.assign(size_t(nf), 2.0 * lsum * lsum / l2);
  } else {
    // Percival & Walden adaptive weights, iterated to a fixed point.
    const double var = std::max(es.variance, 1e-300);
    for (int f = 0; f < nf; ++f) s[size_t(f)] = 0.5 * (sk[0][size_t(f)] + sk[1][size_t(f)]);
    const int max_iter = 100;
    const double tol = 1e-8;
    std::vector<double> b(static_cast<size_t>(k));
    bool all_converged = false;
    for (int it = 0; it < max_iter && !all_converged; ++it) {
      all_converged = true;
      double worst_residual = 0.0;
      for (int f = 0; f < nf; ++f) {
        const double sf = s[size_t(f)];
        double num = 0.0, den = 0.0;
        for (int j = 0; j < k; ++j) {
          const double lam = es.lambda[size_t(j)];
          const double bj = sf / (lam * sf + (1.0 - lam) * var);
          b[size_t(j)] = bj;
          const double w = lam * bj * bj;
          num += w * sk[size_t(j)][size_t(f)];
          den += w;
        }
        const double s_new = den > 0.0 ? num / den : sf;
        const double rel = std::abs(s_new - sf) / std::max(s_new, 1e-300);
        worst_residual = std::max(worst_residual, rel);
        if (rel > tol) all_converged = false;
        s[size_t(f)] = s_new;
        double dof_num = 0.0, dof_den = 0.0;
        for (int j = 0; j < k; ++j) {
          const double lam = es.lambda[size_t(j)];
          const double w = lam * b[size_t(j)] * b[size_t(j)];
          dof_num += w;
          dof_den += w * w;
        }
        sp.dof[size_t(f)] = dof_den > 0.0 ? 2.0 * dof_num * dof_num / dof_den : 2.0;
      }
      // Fixed-point residual per sweep: the convergence diagnostic of the
      // adaptive-weight iteration.
      sp.residual_trace.push_back(worst_residual);
      sp.iterations = it + 1;
    }
    sp.converged = all_converged;
  }

  // Fold to one-sided.
  sp.psd.resize(size_t(nf));
  for (int f = 0; f < nf; ++f) {
    const bool edge = f == 0 || (n % 2 == 0 && f == nf - 1);
    sp.psd[size_t(f)] = (edge ? 1.0 : 2.0) * s[size_t(f)];
  }
  return sp;
}

CrossSpectrum multitaper_cross(const std::vector<double>& x, const std::vector<double>& y,
                               const SpectralConfig& cfg) {
  require_input(x.size() == y.size(), "cross spectrum needs equal-length series");
  require_input(cfg.tapers() >= 2, "cross spectrum needs at least 2 tapers");
  const EigenSpectra ex = eigencoefficients(x, cfg);
  const EigenSpectra ey = eigencoefficients(y, cfg);
  const int nf = ex.n_freq, k = int(ex.coeff.size());

  CrossSpectrum cs;
  cs.freqs.resize(size_t(nf));
  cs.coherency.resize(size_t(nf));
  cs.phase.resize(size_t(nf));
  for (int f = 0; f < nf; ++f) {
    cs.freqs[size_t(f)] = double(f) / double(ex.n);
    std::complex<double> sxy{0.0, 0.0};
    double sxx = 0.0, syy = 0.0;
    for (int j = 0; j < k; ++j) {
      const double lam = ex.lambda[size_t(j)];
      const std::complex<double> xa = ex.coeff[size_t(j)][size_t(f)];
      const std::complex<double> ya = ey.coeff[size_t(j)][size_t(f)];
      sxy += lam * xa * std::conj(ya);
      sxx += lam * std::norm(xa);
      syy += lam * std::norm(ya);
    }
    double msc = 0.0;
    if (sxx > 0.0 && syy > 0.0) {
      msc = std::norm(sxy) / (sxx * syy);
      // Cauchy-Schwarz bounds msc by 1; allow only rounding slack.
      require_internal(msc <= 1.0 + 1e-12, "coherency above 1 beyond rounding");
      msc = std::min(msc, 1.0);
    }
    cs.coherency[size_t(f)] = msc;
    cs.phase[size_t(f)] = std::atan2(sxy.imag(), sxy.real());
  }
  return cs;
}

void write_spectrum_csv(const std::string& path, const Spectrum& s) {
  AtomicWriter w(path);
  w.append("freq_cph,period_h,psd\n");
  for (size_t i = 0; i < s.freqs.size(); ++i) {
    const double f = s.freqs[i];
    w.appendf("%.10g,%.10g,%.10g\n", f, f > 0.0 ? 1.0 / f : 0.0, s.psd[i]);
  }
  w.commit();
}

void write_cross_csv(const std::string& path, const CrossSpectrum& c) {
  AtomicWriter w(path);
  w.append("freq_cph,period_h,coherency,phase\n");
  for (size_t i = 0; i < c.freqs.size(); ++i) {
    const double f = c.freqs[i];
    w.appendf("%.10g,%.10g,%.10g,%.10g\n", f, f > 0.0 ? 1.0 / f : 0.0, c.coherency[i],
              c.phase[i]);
  }
  w.commit();
}

int nearest_peak_bin(const std::vector<double>& psd, double target_freq, double df,
                     int max_dist_bins) {
  const int nf = int(psd.size());
  const int target = int(std::lround(target_freq / df));
  int best = -1;
  for (int f = 1; f + 1 < nf; ++f) {
    if (psd[size_t(f)] > psd[size_t(f - 1)] && psd[size_t(f)] >= psd[size_t(f + 1)]) {
      if (best < 0 || std::abs(f - target) < std::abs(best - target)) best = f;
    }
  }
  if (best < 0 || std::abs(best - target) > max_dist_bins) return -1;
  return best;
}

}  // namespace cellscape
