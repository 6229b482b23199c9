#include "rng.hpp"

namespace cellscape {

namespace {

// Inversion by sequential search; exact and fast for small rates.
int64_t poisson_small(KeyedRng& rng, double lambda) {
  const double p0 = std::exp(-lambda);
  double u = rng.next_unit();
  double p = p0, cum = p0;
  int64_t k = 0;
  while (u > cum && k < 400) {
    ++k;
    p *= lambda / double(k);
    cum += p;
  }
  return k;
}

// Hoermann's PTRS transformed-rejection sampler for lambda >= 10.
int64_t poisson_ptrs(KeyedRng& rng, double lambda) {
  const double slam = std::sqrt(lambda);
  const double loglam = std::log(lambda);
  const double b = 0.931 + 2.53 * slam;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  for (int guard = 0; guard < 10000; ++guard) {
    const double u = rng.next_unit() - 0.5;
    const double v = rng.next_unit_pos();
    const double us = 0.5 - std::abs(u);
    const double kf = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
    if (us >= 0.07 && v <= vr) return int64_t(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        kf * loglam - lambda - std::lgamma(kf + 1.0))
      return int64_t(kf);
  }
  return int64_t(lambda + 0.5);  // unreachable in practice
}

}  // namespace

int64_t KeyedRng::next_poisson(double lambda) {
  if (!(lambda > 0.0)) return 0;
  if (lambda < 10.0) return poisson_small(*this, lambda);
  return poisson_ptrs(*this, lambda);
}

}  // namespace cellscape
