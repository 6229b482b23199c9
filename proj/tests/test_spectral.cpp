#include <doctest.h>

#include <cmath>

#include "error.hpp"
#include "oracles.hpp"
#include "spectral.hpp"

using namespace cellscape;

TEST_CASE("dpss tapers are orthonormal to 1e-10") {
  for (const auto [n, nw, k] : {std::tuple{64, 4, 7}, {128, 2, 3}, {513, 8, 15}}) {
    const DpssTapers d = dpss_tapers(n, nw, k);
    for (int i = 0; i < k; ++i)
      for (int j = i; j < k; ++j) {
        double dotp = 0.0;
        for (int t = 0; t < n; ++t) dotp += d.taper(i)[t] * d.taper(j)[t];
        CHECK(std::abs(dotp - (i == j ? 1.0 : 0.0)) < 1e-10);
      }
  }
}

TEST_CASE("dpss symmetry classes about the midpoint") {
  const int n = 65, nw = 4, k = 7;
  const DpssTapers d = dpss_tapers(n, nw, k);
  for (int j = 0; j < k; ++j) {
    const double sign = j % 2 == 0 ? 1.0 : -1.0;
    for (int t = 0; t < n; ++t)
      CHECK(std::abs(d.taper(j)[t] - sign * d.taper(j)[n - 1 - t]) < 1e-10);
  }
}

TEST_CASE("dpss sign conventions") {
  const int n = 64;
  const DpssTapers d = dpss_tapers(n, 4, 7);
  for (int j = 0; j < d.k; ++j) {
    double pick = 0.0;
    if (j % 2 == 0)
      for (int t = 0; t < n; ++t) pick += d.taper(j)[t];
    else
      for (int t = 0; t < n / 2; ++t) pick += d.taper(j)[t];
    CHECK(pick > 0.0);
  }
}

TEST_CASE("dpss concentrations match the dense sinc-kernel eigenproblem to 1e-8") {
  const int n = 64, nw = 4, k = 7;
  const DpssTapers d = dpss_tapers(n, nw, k);
  const auto dense = oracles::sinc_kernel_matrix(n, double(nw) / double(n));
  const auto ev = oracles::jacobi_eigenvalues(dense, n);
  REQUIRE(int(ev.size()) == n);
  for (int j = 0; j < k; ++j) CHECK(std::abs(d.lambda[size_t(j)] - ev[size_t(j)]) < 1e-8);
  CHECK(d.lambda[0] > 0.9999);
  for (int j = 1; j < k; ++j) CHECK(d.lambda[size_t(j)] < d.lambda[size_t(j - 1)]);
}

TEST_CASE("dpss validation") {
  CHECK_THROWS_AS(dpss_tapers(64, 4, 8), input_error);   // k > 2nw-1
  CHECK_THROWS_AS(dpss_tapers(4, 1, 1), input_error);    // n too short
  CHECK_THROWS_AS(dpss_tapers(64, 40, 7), input_error);  // nw/n >= 0.5
}

TEST_CASE("white noise psd integrates to the variance") {
  oracles::TestRng rng(2024);
  const int n = 4096;
  std::vector<double> x(n);
  for (double& v : x) v = rng.normal();
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : x) var += (v - mean) * (v - mean);
  var /= n;

  SpectralConfig cfg;
  cfg.nw = 4;
  const Spectrum sp = multitaper_psd(x, cfg);
  double total = 0.0;
  for (double p : sp.psd) total += p / double(n);
  CHECK(total == doctest::Approx(var).epsilon(0.05));
  CHECK(sp.converged);
}

TEST_CASE("single tone peaks at its frequency bin") {
  const int n = 2048;
  std::vector<double> x(n);
  for (int t = 0; t < n; ++t) x[size_t(t)] = std::sin(2.0 * M_PI * double(t) / 24.0);
  SpectralConfig cfg;
  cfg.nw = 4;
  const Spectrum sp = multitaper_psd(x, cfg);
  size_t argmax = 0;
  for (size_t f = 1; f < sp.psd.size(); ++f)
    if (sp.psd[f] > sp.psd[argmax]) argmax = f;
  const int expect = int(std::lround(double(n) / 24.0));
  CHECK(std::abs(int(argmax) - expect) <= 1);
}

TEST_CASE("psd scaling by a power of two is exact") {
  oracles::TestRng rng(7);
  std::vector<double> x(512), x4(512);
  for (size_t i = 0; i < x.size(); ++i) {
    x[i] = rng.uniform(0, 10);
    x4[i] = 4.0 * x[i];
  }
  SpectralConfig cfg;
  const Spectrum a = multitaper_psd(x, cfg);
  const Spectrum b = multitaper_psd(x4, cfg);
  for (size_t f = 0; f < a.psd.size(); ++f) CHECK(b.psd[f] == 16.0 * a.psd[f]);
}

TEST_CASE("psd with detrend ignores an added constant") {
  oracles::TestRng rng(8);
  std::vector<double> x(600), xc(600);
  for (size_t i = 0; i < x.size(); ++i) {
    x[i] = rng.normal();
    xc[i] = x[i] + 1000.0;
  }
  SpectralConfig cfg;
  const Spectrum a = multitaper_psd(x, cfg);
  const Spectrum b = multitaper_psd(xc, cfg);
  for (size_t f = 0; f < a.psd.size(); ++f)
    CHECK(b.psd[f] == doctest::Approx(a.psd[f]).epsilon(1e-6).scale(1e-12));
}

TEST_CASE("adaptive weighting converges with monotone residuals") {
  // Strongly colored signal: the adaptive scheme has real work to do.
  oracles::TestRng rng(99);
  const int n = 1024;
  std::vector<double> x(n);
  double prev = 0.0;
  for (int t = 0; t < n; ++t) {
    prev = 0.95 * prev + rng.normal();
    x[size_t(t)] = prev + 20.0 * std::sin(2.0 * M_PI * t / 50.0);
  }
  SpectralConfig cfg;
  cfg.nw = 4;
  const Spectrum sp = multitaper_psd(x, cfg);
  CHECK(sp.converged);
  CHECK(sp.iterations >= 2);
  REQUIRE(sp.residual_trace.size() >= 2);
  CHECK(sp.residual_trace.back() <= 1e-8);
  for (size_t i = 1; i < sp.residual_trace.size(); ++i)
    CHECK(sp.residual_trace[i] <= sp.residual_trace[i - 1] * (1.0 + 1e-9));
}

TEST_CASE("affine dependence gives unit coherency") {
  oracles::TestRng rng(4);
  const int n = 512;
  std::vector<double> x(n), y(n);
  for (int i = 0; i < n; ++i) {
    x[size_t(i)] = rng.normal();
    y[size_t(i)] = 2.0 * x[size_t(i)] + 1.0;
  }
  SpectralConfig cfg;
  cfg.nw = 4;
  const CrossSpectrum cs = multitaper_cross(x, y, cfg);
  for (size_t f = 1; f + 1 < cs.coherency.size(); ++f)
    CHECK(cs.coherency[f] == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("pure-tone delay shows up in the cross phase") {
  const int n = 2048, delay = 5;
  const double f0 = 1.0 / 32.0;
  std::vector<double> x(n), y(n);
  for (int t = 0; t < n; ++t) {
    x[size_t(t)] = std::cos(2.0 * M_PI * f0 * t);
    y[size_t(t)] = std::cos(2.0 * M_PI * f0 * (t - delay));
  }
  SpectralConfig cfg;
  cfg.nw = 4;
  const CrossSpectrum cs = multitaper_cross(x, y, cfg);
  const size_t bin = size_t(std::lround(f0 * n));
  const double want = std::fmod(2.0 * M_PI * f0 * delay, 2.0 * M_PI);
  const double got = cs.phase[bin] < 0 ? cs.phase[bin] + 2.0 * M_PI : cs.phase[bin];
  // One bin of frequency error moves the phase by 2*pi*delay/n.
  CHECK(std::abs(got - want) < 2.0 * M_PI * double(delay) / double(n) + 1e-6);
}

TEST_CASE("independent white noises have mean coherency near 1/k") {
  const int n = 256, k = 7;
  SpectralConfig cfg;
  cfg.nw = 4;
  cfg.k = k;
  double acc = 0.0;
  int count = 0;
  for (int trial = 0; trial < 200; ++trial) {
    oracles::TestRng rng(1000 + uint64_t(trial));
    std::vector<double> x(n), y(n);
    for (int i = 0; i < n; ++i) {
      x[size_t(i)] = rng.normal();
      y[size_t(i)] = rng.normal();
    }
    const CrossSpectrum cs = multitaper_cross(x, y, cfg);
    for (size_t f = 1; f + 1 < cs.coherency.size(); ++f) {
      acc += cs.coherency[f];
      ++count;
    }
  }
  CHECK(acc / double(count) == doctest::Approx(1.0 / double(k)).epsilon(0.1));
}

TEST_CASE("coherency stays in [0,1] on rough inputs") {
  oracles::TestRng rng(31337);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 128 + int(rng.uniform() * 256);
    std::vector<double> x(size_t(n), 0.0), y(size_t(n), 0.0);
    for (int i = 0; i < n; ++i) {
      x[size_t(i)] = std::floor(rng.uniform(0, 5));
      y[size_t(i)] = std::floor(rng.uniform(0, 5));
    }
    const SpectralConfig cfg;
    const CrossSpectrum cs = multitaper_cross(x, y, cfg);
    for (double c : cs.coherency) {
      CHECK(c >= 0.0);
      CHECK(c <= 1.0);
    }
  }
}

TEST_CASE("cross spectrum needs two tapers") {
  std::vector<double> x(64, 1.0), y(64, 2.0);
  SpectralConfig cfg;
  cfg.nw = 1;
  cfg.k = 1;
  CHECK_THROWS_AS(multitaper_cross(x, y, cfg), input_error);
}

TEST_CASE("non-finite samples are rejected") {
  std::vector<double> x(64, 0.0);
  x[10] = std::nan("");
  CHECK_THROWS_AS(multitaper_psd(x, SpectralConfig{}), input_error);
}
